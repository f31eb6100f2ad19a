#pragma once

#include <cstddef>
#include <vector>

#include "bdkit/rates.hpp"

namespace bdkit {

// Birth-death polynomials by forward three-term recurrence. Accuracy is
// adequate for degrees up to roughly 50 at moderate |x|; beyond that the
// monic values grow past what cancellation-sensitive identities tolerate.

enum class PolynomialScale { Monic, Orthonormal };

struct PolynomialEvaluation {
  std::size_t degree = 0;
  double x = 0.0;
  double value = 0.0;
  PolynomialScale scale = PolynomialScale::Monic;
};

struct RhoTruncation {
  double x = 0.0;
  std::size_t depth = 0;
  double value = 0.0;
};

/// P_0(x)..P_n(x). Needs c_1..c_n and d_2..d_n.
std::vector<double> eval_monic_all(const RecurrenceCoefficients& coeffs,
                                   std::size_t n, double x);

/// P_n(x) with P_0 = 1, P_1 = x - c_1, P_k = (x - c_k) P_{k-1} - d_k P_{k-2}.
double eval_monic(const RecurrenceCoefficients& coeffs, std::size_t n, double x);

/// S_n(x) for the shell coefficients of `rates` (mu0 > 0).
double eval_shell(const RateSet& rates, std::size_t n, double x);

/// p_0(x)..p_n(x) with p_k = P_k / sqrt(d_2 ... d_{k+1}); needs d up to
/// d_{n+1}. The scaling is applied step by step so that neither P_k nor the
/// product of d's has to be representable.
std::vector<double> orthonormal_all(const RecurrenceCoefficients& coeffs,
                                    std::size_t n, double x);

double orthonormal_eval(const RecurrenceCoefficients& coeffs, std::size_t n,
                        double x);

/// rho_N(x) = 1 / sum_{n=0}^{N} p_n(x)^2.
RhoTruncation rho_truncated(const RecurrenceCoefficients& coeffs, double x,
                            std::size_t n);

/// |S_{n+1}(x) - (S_{n+1}(0)/S_n(0)) S_n(x) - x P_n(x)|. Throws
/// DegenerateKernel when S_n(0) = 0.
double kernel_residual(const RecurrenceCoefficients& primal,
                       const RecurrenceCoefficients& shell, std::size_t n, double x);

}  // namespace bdkit
