#pragma once

#include <cstddef>
#include <functional>
#include <string_view>
#include <vector>

#include "bdkit/rates.hpp"

namespace bdkit {

/// a_1..a_N; a[k] holds a_{k+1}.
struct ChainSequence {
  std::vector<double> a;

  /// 1-based access.
  double operator()(std::size_t n) const { return a.at(n - 1); }
  std::size_t size() const noexcept { return a.size(); }
};

enum class ParameterKind { Minimal, Maximal, RateInduced };

std::string_view to_string(ParameterKind kind);

/// g_0..g_N.
struct ParameterSequence {
  std::vector<double> g;
  ParameterKind kind = ParameterKind::RateInduced;
  /// max_n |(1 - g_{n-1}) g_n - a_n| / a_n against the generating chain.
  double defect = 0.0;
};

/// a_n for n >= 1, produced on demand.
using ChainSource = std::function<double(std::size_t n)>;

/// a_n = d_{n+1}/(c_n c_{n+1}) for 1 <= n <= N; needs c through N+1.
ChainSequence chain_from_coeffs(const RecurrenceCoefficients& coeffs, std::size_t n);

/// a_n computed lazily from the rates, without a depth limit.
ChainSource chain_source(const RateSet& rates);

ChainSource chain_source(const ChainSequence& chain);

/// max relative defect of g as a parameter sequence of `chain`, over the
/// indices both cover.
double chain_defect(const std::vector<double>& g, const ChainSequence& chain);

/// g_n = mu_n/(lambda_n + mu_n), n = 0..N, with the defect measured against
/// the chain of the same rates.
ParameterSequence params_from_rates(const RateSet& rates, std::size_t n);

/// g_0 = 0, g_n = a_n/(1 - g_{n-1}). Throws NotAChainSequencePrefix(n) when
/// g_n leaves (0, 1).
ParameterSequence minimal_params(const ChainSequence& chain);

struct MaximalOptions {
  std::size_t initial_burn_in = 64;
  std::size_t max_burn_in = std::size_t{1} << 22;
};

/// M_0..M_N by the backward recursion M_{n-1} = 1 - a_n/M_n seeded with
/// M_{N+K} = 1. K doubles until M_0 moves by less than tol; throws
/// MaximalParamsNonconvergence once K would exceed max_burn_in.
ParameterSequence maximal_params(const ChainSource& source, std::size_t n,
                                 double tol, const MaximalOptions& options = {});

/// Finite-chain form: the burn-in is capped by the available length.
ParameterSequence maximal_params(const ChainSequence& chain, std::size_t n,
                                 double tol, const MaximalOptions& options = {});

/// 1/(c_1 m_{-1}).
double m0_formula_check(const RecurrenceCoefficients& coeffs, double m_minus_one);

}  // namespace bdkit
