#include <cmath>
#include <functional>
#include <memory>
#include <utility>

#include "bdkit/errors.hpp"
#include "bdkit/rates.hpp"
#include "rate_rule.hpp"

namespace bdkit {

namespace {

class FamilyRule final : public detail::RateRule {
 public:
  using Rule = std::function<double(std::size_t)>;

  FamilyRule(FamilySpec spec, Rule lambda, Rule mu)
      : spec_(std::move(spec)), lambda_(std::move(lambda)), mu_(std::move(mu)) {}

  double lambda(std::size_t n) const override { return lambda_(n); }
  double mu(std::size_t n) const override { return mu_(n); }
  RateSetKind kind() const noexcept override { return RateSetKind::Family; }
  const FamilySpec* family() const noexcept override { return &spec_; }

 private:
  FamilySpec spec_;
  Rule lambda_;
  Rule mu_;
};

double require_positive(const FamilyParams& params, const std::string& key,
                        std::string_view family) {
  const auto it = params.find(key);
  if (it == params.end()) {
    throw InvalidArgument(std::string(family) + ": missing parameter '" + key + "'");
  }
  if (!(it->second > 0.0) || !std::isfinite(it->second)) {
    throw InvalidArgument(std::string(family) + ": parameter '" + key +
                          "' must be positive");
  }
  return it->second;
}

void reject_unknown(const FamilyParams& params, std::string_view family,
                    std::initializer_list<std::string_view> allowed) {
  for (const auto& [key, value] : params) {
    bool known = key == "mu0";
    for (auto a : allowed) known = known || key == a;
    if (!known) {
      throw InvalidArgument(std::string(family) + ": unknown parameter '" + key + "'");
    }
  }
}

double mu0_of(const FamilyParams& params) {
  const auto it = params.find("mu0");
  if (it == params.end()) return 0.0;
  if (!(it->second >= 0.0) || !std::isfinite(it->second)) {
    throw InvalidArgument("mu0 must be a finite nonnegative rate");
  }
  return it->second;
}

RateSet make(FamilySpec spec, double mu0, FamilyRule::Rule lambda,
             FamilyRule::Rule mu) {
  spec.params.erase("mu0");
  return RateSet(
      std::make_shared<FamilyRule>(std::move(spec), std::move(lambda), std::move(mu)),
      mu0);
}

}  // namespace

const std::vector<FamilyInfo>& family_catalog() {
  static const std::vector<FamilyInfo> catalog = {
      {"mm1", {"lambda", "mu", "mu0"}, "lambda_n = lambda, mu_n = mu (n >= 1)"},
      {"mminf", {"lambda", "mu", "mu0"}, "lambda_n = lambda, mu_n = n mu"},
      {"linear", {"alpha", "beta", "mu0"}, "lambda_n = alpha (n+1), mu_n = beta n"},
      {"quartic",
       {"mu0"},
       "lambda_n = (4n+1)(4n+2)^2(4n+3), mu_n = (4n-1)(4n)^2(4n+1)"},
      {"table",
       {"lambda[]", "mu[]", "tail", "mu0"},
       "explicit prefix with repeat-last or affine tail"},
  };
  return catalog;
}

RateSet builtin_family(std::string_view name, const FamilyParams& params) {
  const double mu0 = mu0_of(params);
  FamilySpec spec{std::string(name), params};
  if (name == "mm1") {
    reject_unknown(params, name, {"lambda", "mu"});
    const double l = require_positive(params, "lambda", name);
    const double m = require_positive(params, "mu", name);
    return make(std::move(spec), mu0, [l](std::size_t) { return l; },
                [m](std::size_t) { return m; });
  }
  if (name == "mminf") {
    reject_unknown(params, name, {"lambda", "mu"});
    const double l = require_positive(params, "lambda", name);
    const double m = require_positive(params, "mu", name);
    return make(std::move(spec), mu0, [l](std::size_t) { return l; },
                [m](std::size_t n) { return static_cast<double>(n) * m; });
  }
  if (name == "linear") {
    reject_unknown(params, name, {"alpha", "beta"});
    const double a = require_positive(params, "alpha", name);
    const double b = require_positive(params, "beta", name);
    return make(std::move(spec), mu0,
                [a](std::size_t n) { return a * static_cast<double>(n + 1); },
                [b](std::size_t n) { return b * static_cast<double>(n); });
  }
  if (name == "quartic") {
    reject_unknown(params, name, {});
    return make(
        std::move(spec), mu0,
        [](std::size_t n) {
          const double k = 4.0 * static_cast<double>(n);
          return (k + 1.0) * (k + 2.0) * (k + 2.0) * (k + 3.0);
        },
        [](std::size_t n) {
          const double k = 4.0 * static_cast<double>(n);
          return (k - 1.0) * k * k * (k + 1.0);
        });
  }
  if (name == "table") {
    throw InvalidArgument("table rate sets are built with RateSet::from_table");
  }
  throw InvalidArgument("unknown rate family '" + std::string(name) + "'");
}

RateSet mm1(double lambda, double mu, double mu0) {
  return builtin_family("mm1", {{"lambda", lambda}, {"mu", mu}, {"mu0", mu0}});
}

RateSet mminf(double lambda, double mu, double mu0) {
  return builtin_family("mminf", {{"lambda", lambda}, {"mu", mu}, {"mu0", mu0}});
}

RateSet linear(double alpha, double beta, double mu0) {
  return builtin_family("linear", {{"alpha", alpha}, {"beta", beta}, {"mu0", mu0}});
}

RateSet quartic(double mu0) { return builtin_family("quartic", {{"mu0", mu0}}); }

}  // namespace bdkit
