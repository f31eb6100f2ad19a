#include "bdkit/chains.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>

#include "bdkit/errors.hpp"

namespace bdkit {

std::string_view to_string(ParameterKind kind) {
  switch (kind) {
    case ParameterKind::Minimal: return "minimal";
    case ParameterKind::Maximal: return "maximal";
    case ParameterKind::RateInduced: return "rate-induced";
  }
  return "unknown";
}

ChainSequence chain_from_coeffs(const RecurrenceCoefficients& coeffs, std::size_t n) {
  if (coeffs.size() < n + 1 || coeffs.d_last() < n + 1) {
    throw InsufficientCoefficients("chain of length " + std::to_string(n) +
                                   " needs c_1..c_" + std::to_string(n + 1) +
                                   " and d_2..d_" + std::to_string(n + 1));
  }
  ChainSequence chain;
  chain.a.reserve(n);
  for (std::size_t k = 1; k <= n; ++k) {
    chain.a.push_back(coeffs.d(k + 1) / (coeffs.c(k) * coeffs.c(k + 1)));
  }
  return chain;
}

ChainSource chain_source(const RateSet& rates) {
  return [rates](std::size_t n) {
    const double c_n = rates.lambda(n - 1) + rates.mu(n - 1);
    const double c_next = rates.lambda(n) + rates.mu(n);
    return rates.lambda(n - 1) * rates.mu(n) / (c_n * c_next);
  };
}

ChainSource chain_source(const ChainSequence& chain) {
  auto shared = std::make_shared<const ChainSequence>(chain);
  return [shared](std::size_t n) {
    if (n == 0 || n > shared->size()) {
      throw InsufficientCoefficients("chain sequence has no a_" + std::to_string(n));
    }
    return (*shared)(n);
  };
}

double chain_defect(const std::vector<double>& g, const ChainSequence& chain) {
  double defect = 0.0;
  const std::size_t last = std::min(g.empty() ? 0 : g.size() - 1, chain.size());
  for (std::size_t n = 1; n <= last; ++n) {
    const double a = chain(n);
    defect = std::max(defect, std::abs((1.0 - g[n - 1]) * g[n] - a) / a);
  }
  return defect;
}

ParameterSequence params_from_rates(const RateSet& rates, std::size_t n) {
  ParameterSequence out;
  out.kind = ParameterKind::RateInduced;
  out.g.reserve(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    const double mu = rates.mu(k);
    out.g.push_back(mu / (rates.lambda(k) + mu));
  }
  if (n >= 1) {
    out.defect = chain_defect(out.g, chain_from_coeffs(recurrence_from_rates(rates, n + 1), n));
  }
  return out;
}

ParameterSequence minimal_params(const ChainSequence& chain) {
  if (chain.size() == 0) throw InvalidArgument("minimal_params needs a nonempty chain");
  ParameterSequence out;
  out.kind = ParameterKind::Minimal;
  out.g.reserve(chain.size() + 1);
  out.g.push_back(0.0);
  for (std::size_t n = 1; n <= chain.size(); ++n) {
    const double g = chain(n) / (1.0 - out.g.back());
    if (!(g > 0.0 && g < 1.0)) throw NotAChainSequencePrefix(n);
    out.g.push_back(g);
  }
  out.defect = chain_defect(out.g, chain);
  return out;
}

namespace {

// Backward recursion from M_top = 1 down to M_0; keeps M_0..M_n (top > n).
std::vector<double> backward(const ChainSource& source, std::size_t n, std::size_t top) {
  std::vector<double> m(n + 1);
  double current = 1.0;
  for (std::size_t k = top; k >= 1; --k) {
    const double next = 1.0 - source(k) / current;
    if (!(next > 0.0)) throw NotAChainSequencePrefix(k);
    current = next;
    if (k - 1 <= n) m[k - 1] = current;
  }
  return m;
}

ParameterSequence maximal_impl(const ChainSource& source, std::size_t n, double tol,
                               std::size_t initial, std::size_t cap) {
  std::size_t burn_in = std::max<std::size_t>(1, std::min(initial, cap));
  std::vector<double> previous = backward(source, n, n + burn_in);
  while (true) {
    if (burn_in >= cap) {
      throw MaximalParamsNonconvergence(previous[0], previous[0]);
    }
    burn_in = std::min(burn_in * 2, cap);
    std::vector<double> current = backward(source, n, n + burn_in);
    if (std::abs(current[0] - previous[0]) < tol) {
      ParameterSequence out;
      out.kind = ParameterKind::Maximal;
      out.g = std::move(current);
      return out;
    }
    if (burn_in >= cap) throw MaximalParamsNonconvergence(previous[0], current[0]);
    previous = std::move(current);
  }
}

}  // namespace

ParameterSequence maximal_params(const ChainSource& source, std::size_t n, double tol,
                                 const MaximalOptions& options) {
  ParameterSequence out =
      maximal_impl(source, n, tol, options.initial_burn_in, options.max_burn_in);
  if (n >= 1) {
    ChainSequence prefix;
    for (std::size_t k = 1; k <= n; ++k) prefix.a.push_back(source(k));
    out.defect = chain_defect(out.g, prefix);
  }
  return out;
}

ParameterSequence maximal_params(const ChainSequence& chain, std::size_t n, double tol,
                                 const MaximalOptions& options) {
  if (chain.size() <= n) {
    throw InsufficientCoefficients("maximal_params needs a chain longer than " +
                                   std::to_string(n));
  }
  const std::size_t cap = std::min(options.max_burn_in, chain.size() - n);
  ParameterSequence out =
      maximal_impl(chain_source(chain), n, tol, options.initial_burn_in, cap);
  out.defect = chain_defect(out.g, chain);
  return out;
}

double m0_formula_check(const RecurrenceCoefficients& coeffs, double m_minus_one) {
  if (!(m_minus_one > 0.0) || !std::isfinite(m_minus_one)) {
    throw InvalidArgument("m_{-1} must be finite and positive");
  }
  return 1.0 / (coeffs.c(1) * m_minus_one);
}

}  // namespace bdkit
