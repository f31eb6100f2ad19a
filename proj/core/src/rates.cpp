#include "bdkit/rates.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <limits>
#include <utility>

#include "bdkit/errors.hpp"
#include "rate_rule.hpp"

namespace bdkit {

namespace {

constexpr double kDirectLow = 1e-300;
constexpr double kDirectHigh = 1e300;

class TableRule final : public detail::RateRule {
 public:
  TableRule(RateTable table, double mu0) : table_(std::move(table)), mu0_(mu0) {
    const std::size_t len = table_.lambda.size();
    if (len < 2 || table_.mu.size() != len) {
      throw InvalidArgument(
          "rate table needs equal-length lambda and mu lists with at least 2 "
          "entries");
    }
    for (std::size_t n = 0; n < len; ++n) {
      if (!(table_.lambda[n] > 0.0) || !std::isfinite(table_.lambda[n])) {
        throw InvalidArgument("rate table: lambda_" + std::to_string(n) +
                              " must be positive");
      }
      if (n > 0 && (!(table_.mu[n] > 0.0) || !std::isfinite(table_.mu[n]))) {
        throw InvalidArgument("rate table: mu_" + std::to_string(n) +
                              " must be positive");
      }
    }
    if (table_.tail == TailRule::AffineExtrapolate) {
      lambda_slope_ = table_.lambda[len - 1] - table_.lambda[len - 2];
      const double mu_prev = len - 2 == 0 ? mu0_ : table_.mu[len - 2];
      mu_slope_ = table_.mu[len - 1] - mu_prev;
      if (lambda_slope_ < 0.0 || mu_slope_ < 0.0) {
        throw InvalidArgument(
            "affine tail with negative slope would produce nonpositive rates");
      }
    }
    // mu[0] is superseded by mu0.
    table_.mu[0] = mu0_;
  }

  double lambda(std::size_t n) const override {
    const std::size_t len = table_.lambda.size();
    if (n < len) return table_.lambda[n];
    if (table_.tail == TailRule::RepeatLast) return table_.lambda[len - 1];
    return table_.lambda[len - 1] + static_cast<double>(n - (len - 1)) * lambda_slope_;
  }

  double mu(std::size_t n) const override {
    const std::size_t len = table_.mu.size();
    if (n < len) return table_.mu[n];
    if (table_.tail == TailRule::RepeatLast) return table_.mu[len - 1];
    return table_.mu[len - 1] + static_cast<double>(n - (len - 1)) * mu_slope_;
  }

  RateSetKind kind() const noexcept override { return RateSetKind::Table; }
  const RateTable* table() const noexcept override { return &table_; }

 private:
  RateTable table_;
  double mu0_;
  double lambda_slope_ = 0.0;
  double mu_slope_ = 0.0;
};

// Index-shifted view of another rate set. `killing` selects the direction:
// base with mu0 > 0 maps to a set with mu0 = 0 and vice versa.
class DualRule final : public detail::RateRule {
 public:
  explicit DualRule(RateSet base) : base_(std::move(base)), killing_(base_.mu0() > 0.0) {}

  double lambda(std::size_t n) const override {
    // lambda^d_n = mu_n, or for the inverse map lambda_n = mu^d_{n+1}.
    return killing_ ? base_.mu(n) : base_.mu(n + 1);
  }
  double mu(std::size_t n) const override {
    // mu^d_{n} = lambda_{n-1}, or for the inverse map mu_n = lambda^d_n.
    return killing_ ? base_.lambda(n - 1) : base_.lambda(n);
  }

  RateSetKind kind() const noexcept override { return RateSetKind::Dual; }
  const RateSet* dual_of() const noexcept override { return &base_; }

 private:
  RateSet base_;
  bool killing_;
};

bool is_normal_positive(double x) {
  return std::isfinite(x) && x >= DBL_MIN;
}

}  // namespace

// --- RateSet --------------------------------------------------------------

RateSet::RateSet(std::shared_ptr<const detail::RateRule> rule, double mu0)
    : rule_(std::move(rule)), mu0_(mu0) {
  if (!(mu0_ >= 0.0) || !std::isfinite(mu0_)) {
    throw InvalidArgument("mu0 must be a finite nonnegative rate");
  }
}

RateSet RateSet::from_table(RateTable table, double mu0) {
  if (!(mu0 >= 0.0) || !std::isfinite(mu0)) {
    throw InvalidArgument("mu0 must be a finite nonnegative rate");
  }
  return RateSet(std::make_shared<TableRule>(std::move(table), mu0), mu0);
}

double RateSet::lambda(std::size_t n) const { return rule_->lambda(n); }

double RateSet::mu(std::size_t n) const { return n == 0 ? mu0_ : rule_->mu(n); }

std::vector<double> RateSet::lambda_prefix(std::size_t count) const {
  std::vector<double> out(count);
  for (std::size_t n = 0; n < count; ++n) out[n] = lambda(n);
  return out;
}

std::vector<double> RateSet::mu_prefix(std::size_t count) const {
  std::vector<double> out(count);
  for (std::size_t n = 0; n < count; ++n) out[n] = mu(n);
  return out;
}

RateSetKind RateSet::kind() const noexcept { return rule_->kind(); }
const FamilySpec* RateSet::family() const noexcept { return rule_->family(); }
const RateTable* RateSet::table() const noexcept { return rule_->table(); }
const RateSet* RateSet::dual_of() const noexcept { return rule_->dual_of(); }

// --- RecurrenceCoefficients -----------------------------------------------

RecurrenceCoefficients::RecurrenceCoefficients(std::vector<double> c,
                                               std::vector<double> d)
    : c_(std::move(c)), d_(std::move(d)) {
  for (std::size_t k = 0; k < c_.size(); ++k) {
    if (!(c_[k] > 0.0) || !std::isfinite(c_[k])) {
      throw InvalidArgument("c_" + std::to_string(k + 1) + " must be positive");
    }
  }
  for (std::size_t k = 0; k < d_.size(); ++k) {
    if (!(d_[k] > 0.0) || !std::isfinite(d_[k])) {
      throw InvalidArgument("d_" + std::to_string(k + 2) + " must be positive");
    }
  }
}

double RecurrenceCoefficients::c(std::size_t n) const {
  if (n < 1 || n > c_.size()) {
    throw InsufficientCoefficients("c_" + std::to_string(n) + " not available");
  }
  return c_[n - 1];
}

double RecurrenceCoefficients::d(std::size_t n) const {
  if (n < 2 || n - 2 >= d_.size()) {
    throw InsufficientCoefficients("d_" + std::to_string(n) + " not available");
  }
  return d_[n - 2];
}

RecurrenceCoefficients RecurrenceCoefficients::prefix(std::size_t n_c,
                                                      std::size_t n_d_last) const {
  if (n_c > c_.size() || (n_d_last >= 2 && n_d_last - 1 > d_.size())) {
    throw InsufficientCoefficients("prefix longer than available coefficients");
  }
  const std::size_t n_d = n_d_last >= 2 ? n_d_last - 1 : 0;
  return RecurrenceCoefficients(
      std::vector<double>(c_.begin(), c_.begin() + static_cast<std::ptrdiff_t>(n_c)),
      std::vector<double>(d_.begin(), d_.begin() + static_cast<std::ptrdiff_t>(n_d)));
}

// --- operations -----------------------------------------------------------

PiSequence pi_coefficients(const RateSet& rates, std::size_t n) {
  PiSequence out;
  out.values.reserve(n + 1);
  out.values.push_back(1.0);
  double direct = 1.0;
  bool log_mode = false;
  double log_value = 0.0;
  for (std::size_t k = 1; k <= n; ++k) {
    const double ratio = rates.lambda(k - 1) / rates.mu(k);
    if (!log_mode) {
      const double next = direct * ratio;
      if (next >= kDirectLow && next <= kDirectHigh) {
        direct = next;
        out.values.push_back(direct);
        continue;
      }
      log_mode = true;
      log_value = std::log(direct);
    }
    log_value += std::log(rates.lambda(k - 1)) - std::log(rates.mu(k));
    const double value = std::exp(log_value);
    if (!is_normal_positive(value)) {
      throw RangeError("pi_" + std::to_string(k) +
                       " outside double range (log value " +
                       std::to_string(log_value) + ")");
    }
    out.values.push_back(value);
  }
  return out;
}

std::vector<double> log_pi_coefficients(const RateSet& rates, std::size_t n) {
  std::vector<double> out(n + 1);
  out[0] = 0.0;
  for (std::size_t k = 1; k <= n; ++k) {
    out[k] = out[k - 1] + std::log(rates.lambda(k - 1)) - std::log(rates.mu(k));
  }
  return out;
}

RecurrenceCoefficients recurrence_from_rates(const RateSet& rates, std::size_t n) {
  if (n < 1) throw InvalidArgument("recurrence_from_rates needs N >= 1");
  std::vector<double> c(n);
  std::vector<double> d(n - 1);
  for (std::size_t k = 1; k <= n; ++k) {
    c[k - 1] = rates.lambda(k - 1) + rates.mu(k - 1);
  }
  for (std::size_t k = 1; k + 1 <= n; ++k) {
    d[k - 1] = rates.lambda(k - 1) * rates.mu(k);
  }
  return RecurrenceCoefficients(std::move(c), std::move(d));
}

RateSet rates_from_recurrence(const RecurrenceCoefficients& coeffs, double mu0) {
  if (!(mu0 >= 0.0) || !std::isfinite(mu0)) {
    throw InvalidArgument("mu0 must be a finite nonnegative rate");
  }
  const std::size_t n = coeffs.size();
  if (n < 2 || coeffs.d_last() < n) {
    throw InsufficientCoefficients(
        "rates_from_recurrence needs c_1..c_N and d_2..d_N with N >= 2");
  }
  RateTable table;
  table.lambda.resize(n);
  table.mu.resize(n);
  table.mu[0] = mu0;
  table.lambda[0] = coeffs.c(1) - mu0;
  if (!(table.lambda[0] > 0.0)) {
    throw PositivityViolation(0, "lambda_0 = c_1 - mu0 <= 0");
  }
  for (std::size_t k = 1; k < n; ++k) {
    table.mu[k] = coeffs.d(k + 1) / table.lambda[k - 1];
    if (!(table.mu[k] > 0.0)) throw PositivityViolation(k, "mu_n <= 0");
    table.lambda[k] = coeffs.c(k + 1) - table.mu[k];
    if (!(table.lambda[k] > 0.0)) throw PositivityViolation(k, "lambda_n <= 0");
  }
  table.tail = TailRule::RepeatLast;
  return RateSet::from_table(std::move(table), mu0);
}

RateSet coefficient_family_member(const RateSet& rates, double mu0,
                                  std::size_t depth) {
  return rates_from_recurrence(recurrence_from_rates(rates, std::max<std::size_t>(depth, 2)),
                               mu0);
}

RateSet dual_rates(const RateSet& rates) {
  if (const RateSet* base = rates.dual_of()) return *base;
  const double mu0 = rates.mu0() > 0.0 ? 0.0 : rates.lambda(0);
  return RateSet(std::make_shared<DualRule>(rates), mu0);
}

RecurrenceCoefficients shell_coefficients(const RateSet& rates, std::size_t n) {
  if (!(rates.mu0() > 0.0)) {
    throw InvalidArgument("shell coefficients require mu0 > 0");
  }
  if (n < 1) throw InvalidArgument("shell_coefficients needs N >= 1");
  std::vector<double> c(n);
  std::vector<double> d(n - 1);
  c[0] = rates.mu0();
  for (std::size_t k = 2; k <= n; ++k) {
    c[k - 1] = rates.mu(k - 1) + rates.lambda(k - 2);
  }
  for (std::size_t k = 1; k + 1 <= n; ++k) {
    d[k - 1] = rates.lambda(k - 1) * rates.mu(k - 1);
  }
  return RecurrenceCoefficients(std::move(c), std::move(d));
}

namespace {

std::vector<double> log_inverse_terms(const RateSet& rates, std::size_t count) {
  std::vector<double> lp = log_pi_coefficients(rates, count == 0 ? 0 : count - 1);
  for (std::size_t n = 0; n < count; ++n) {
    lp[n] = -std::log(rates.lambda(n)) - lp[n];
  }
  lp.resize(count);
  return lp;
}

}  // namespace

SeriesReport m_minus_one(const RateSet& rates, std::size_t terms, double tol,
                         const SeriesOptions& options) {
  if (rates.mu0() != 0.0) {
    throw InvalidArgument("m_minus_one series requires mu0 = 0");
  }
  const LogTermSource source = [&rates](std::size_t count) {
    return log_inverse_terms(rates, count);
  };
  return sum_series(source, terms + 1, tol, options);
}

double mu0_from_a(double a, double m_minus_one) {
  if (!(m_minus_one > 0.0) || !std::isfinite(m_minus_one)) {
    throw InvalidArgument("m_{-1} must be positive and finite");
  }
  if (!(a >= 0.0)) throw InvalidArgument("a must be nonnegative");
  if (std::isinf(a)) return 0.0;
  return 1.0 / ((a + 1.0) * m_minus_one);
}

double a_from_mu0(double mu0, double m_minus_one) {
  if (!(m_minus_one > 0.0) || !std::isfinite(m_minus_one)) {
    throw InvalidArgument("m_{-1} must be positive and finite");
  }
  if (!(mu0 >= 0.0)) throw InvalidArgument("mu0 must be nonnegative");
  if (mu0 == 0.0) throw AtomParameterInfinite();
  const double product = mu0 * m_minus_one;
  if (product > 1.0 + 1e-12) {
    throw Mu0ExceedsBound("mu0 exceeds 1/m_{-1}: mu0*m_{-1} = " +
                          std::to_string(product));
  }
  return std::max(0.0, 1.0 / product - 1.0);
}

namespace {

struct SeriesPair {
  SeriesReport pi;
  SeriesReport inverse;
};

SeriesPair analyze_pair(const RateSet& rates, std::size_t n,
                        const SeriesOptions& options) {
  std::vector<double> lp = log_pi_coefficients(rates, n);
  std::vector<double> inv(n + 1);
  for (std::size_t k = 0; k <= n; ++k) inv[k] = -std::log(rates.lambda(k)) - lp[k];
  return {analyze_series(lp, options), analyze_series(inv, options)};
}

Determinacy determinacy_of(const SeriesPair& pair) {
  if (pair.pi.status == SeriesStatus::Diverges ||
      pair.inverse.status == SeriesStatus::Diverges) {
    return Determinacy::DetS;
  }
  if (pair.pi.status == SeriesStatus::Converges &&
      pair.inverse.status == SeriesStatus::Converges) {
    return Determinacy::IndetS;
  }
  return Determinacy::Inconclusive;
}

}  // namespace

Verdict classify(const RateSet& rates, std::size_t n, double tol,
                 const ClassifyOptions& options) {
  if (n < 1) throw InvalidArgument("classify needs N >= 1");
  Verdict verdict;
  verdict.depth = n;

  const SeriesPair own = analyze_pair(rates, n, options.series);
  verdict.pi_series = own.pi;
  verdict.inverse_series = own.inverse;

  const bool diverges = own.pi.status == SeriesStatus::Diverges ||
                        own.inverse.status == SeriesStatus::Diverges;
  const bool converges = own.pi.status == SeriesStatus::Converges &&
                         own.inverse.status == SeriesStatus::Converges;

  if (rates.mu0() == 0.0) {
    verdict.determinacy = determinacy_of(own);
    if (own.inverse.status == SeriesStatus::Converges) {
      verdict.m_minus_one =
          m_minus_one(rates, n, tol, options.series).value;
    }
  } else {
    // psi is shared by the whole coefficient family, so its Stieltjes status
    // is read off the mu0 = 0 member.
    const RateSet representative = coefficient_family_member(rates, 0.0, n + 1);
    const SeriesPair rep = analyze_pair(representative, n, options.series);
    verdict.determinacy =
        converges ? Determinacy::IndetS : determinacy_of(rep);
    if (rep.inverse.status == SeriesStatus::Converges) {
      const LogTermSource source = [&rates](std::size_t count) {
        const RateSet member = coefficient_family_member(rates, 0.0, count);
        return log_inverse_terms(member, count);
      };
      verdict.representative_series = sum_series(source, n + 1, tol, options.series);
      verdict.m_minus_one = verdict.representative_series->value;
    } else {
      verdict.representative_series = rep.inverse;
    }
  }

  if (diverges) {
    verdict.uniqueness = Uniqueness::Unique;
    verdict.reason = UniqueReason::SeriesDiverges;
  } else if (converges) {
    if (rates.mu0() > 0.0) {
      if (!verdict.m_minus_one) {
        verdict.uniqueness = Uniqueness::Inconclusive;
      } else if (std::abs(rates.mu0() * *verdict.m_minus_one - 1.0) <= tol) {
        verdict.uniqueness = Uniqueness::Unique;
        verdict.reason = UniqueReason::Mu0Saturates;
      } else {
        verdict.uniqueness = Uniqueness::NonUnique;
      }
    } else {
      verdict.uniqueness = Uniqueness::NonUnique;
    }
  } else {
    verdict.uniqueness = Uniqueness::Inconclusive;
  }
  if (verdict.uniqueness == Uniqueness::NonUnique) {
    verdict.determinacy = Determinacy::IndetS;
  }
  return verdict;
}

// --- names ----------------------------------------------------------------

std::string_view to_string(TailRule tail) {
  return tail == TailRule::RepeatLast ? "repeat-last" : "affine";
}

std::string_view to_string(RateSetKind kind) {
  switch (kind) {
    case RateSetKind::Family: return "family";
    case RateSetKind::Table: return "table";
    case RateSetKind::Dual: return "dual";
  }
  return "unknown";
}

std::string_view to_string(Uniqueness u) {
  switch (u) {
    case Uniqueness::Unique: return "Unique";
    case Uniqueness::NonUnique: return "NonUnique";
    case Uniqueness::Inconclusive: return "Inconclusive";
  }
  return "unknown";
}

std::string_view to_string(UniqueReason r) {
  switch (r) {
    case UniqueReason::None: return "None";
    case UniqueReason::SeriesDiverges: return "SeriesDiverges";
    case UniqueReason::Mu0Saturates: return "Mu0Saturates";
  }
  return "unknown";
}

std::string_view to_string(Determinacy d) {
  switch (d) {
    case Determinacy::DetS: return "DetS";
    case Determinacy::IndetS: return "IndetS";
    case Determinacy::Inconclusive: return "Inconclusive";
  }
  return "unknown";
}

}  // namespace bdkit
