#include "bdkit/polynomials.hpp"

#include <cmath>
#include <string>

#include "bdkit/errors.hpp"

namespace bdkit {

namespace {

void require(const RecurrenceCoefficients& coeffs, std::size_t c_last,
             std::size_t d_last) {
  if (coeffs.size() < c_last || (d_last >= 2 && coeffs.d_last() < d_last)) {
    throw InsufficientCoefficients("evaluation needs c_1..c_" + std::to_string(c_last) +
                                   " and d_2..d_" + std::to_string(d_last));
  }
}

}  // namespace

std::vector<double> eval_monic_all(const RecurrenceCoefficients& coeffs,
                                   std::size_t n, double x) {
  require(coeffs, n, n);
  std::vector<double> p(n + 1);
  p[0] = 1.0;
  if (n == 0) return p;
  p[1] = x - coeffs.c(1);
  for (std::size_t k = 2; k <= n; ++k) {
    p[k] = (x - coeffs.c(k)) * p[k - 1] - coeffs.d(k) * p[k - 2];
  }
  return p;
}

double eval_monic(const RecurrenceCoefficients& coeffs, std::size_t n, double x) {
  return eval_monic_all(coeffs, n, x)[n];
}

double eval_shell(const RateSet& rates, std::size_t n, double x) {
  if (n == 0) return 1.0;
  return eval_monic(shell_coefficients(rates, n), n, x);
}

std::vector<double> orthonormal_all(const RecurrenceCoefficients& coeffs,
                                    std::size_t n, double x) {
  require(coeffs, n, n + 1);
  std::vector<double> p(n + 1);
  p[0] = 1.0;
  if (n == 0) return p;
  // sqrt(d_{k+1}) p_k = (x - c_k) p_{k-1} - sqrt(d_k) p_{k-2}
  double root_prev = 0.0;
  for (std::size_t k = 1; k <= n; ++k) {
    const double root_next = std::sqrt(coeffs.d(k + 1));
    const double back = k >= 2 ? root_prev * p[k - 2] : 0.0;
    p[k] = ((x - coeffs.c(k)) * p[k - 1] - back) / root_next;
    root_prev = root_next;
  }
  return p;
}

double orthonormal_eval(const RecurrenceCoefficients& coeffs, std::size_t n,
                        double x) {
  return orthonormal_all(coeffs, n, x)[n];
}

RhoTruncation rho_truncated(const RecurrenceCoefficients& coeffs, double x,
                            std::size_t n) {
  const std::vector<double> p = orthonormal_all(coeffs, n, x);
  double sum = 0.0;
  for (double v : p) sum += v * v;
  return {x, n, 1.0 / sum};
}

double kernel_residual(const RecurrenceCoefficients& primal,
                       const RecurrenceCoefficients& shell, std::size_t n,
                       double x) {
  const std::vector<double> s_at_zero = eval_monic_all(shell, n + 1, 0.0);
  if (s_at_zero[n] == 0.0) {
    throw DegenerateKernel("S_" + std::to_string(n) + "(0) = 0");
  }
  const std::vector<double> s_at_x = eval_monic_all(shell, n + 1, x);
  const double p_n = eval_monic(primal, n, x);
  const double ratio = s_at_zero[n + 1] / s_at_zero[n];
  return std::abs(s_at_x[n + 1] - ratio * s_at_x[n] - x * p_n);
}

}  // namespace bdkit
