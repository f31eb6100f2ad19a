#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "bdkit/measures.hpp"
#include "bdkit/rates.hpp"

namespace bdkit {

enum class Boundary { AbsorbingTop, ReflectingTop };

std::string_view to_string(Boundary boundary);

/// Generator restricted to states 0..N. Row N keeps lambda_N on the
/// diagonal for AbsorbingTop (mass leaks upward) and drops it for
/// ReflectingTop.
struct TruncatedGenerator {
  std::size_t size = 0;  ///< N
  Boundary boundary = Boundary::AbsorbingTop;
  std::vector<double> lower;  ///< lower[n] = mu_n (n >= 1), lower[0] = 0
  std::vector<double> diag;
  std::vector<double> upper;  ///< upper[n] = lambda_n (n < N), upper[N] = 0
  double kill = 0.0;          ///< mu_0, rate into state -1
  double leak = 0.0;          ///< lambda_N when AbsorbingTop, else 0

  /// Dense entry (i, j) for i, j <= N.
  double entry(std::size_t i, std::size_t j) const;
};

TruncatedGenerator build_generator(const RateSet& rates, std::size_t n, Boundary boundary);

/// Selected rows of the truncated transition matrix for one boundary.
struct PropagatedRows {
  std::vector<std::size_t> rows;
  std::vector<std::vector<double>> p;  ///< p[r][j] for initial state rows[r]
  std::vector<double> killed;          ///< mass in state -1
  std::vector<double> leaked;          ///< mass that left through the top
  std::size_t poisson_terms = 0;
  double rate = 0.0;                   ///< uniformization rate
};

/// exp(tQ) rows by uniformization, with the Poisson series cut once its
/// remaining mass is at most tol.
PropagatedRows propagate(const TruncatedGenerator& generator, double t,
                         const std::vector<std::size_t>& rows, double tol);

struct TransitionResult {
  double t = 0.0;
  std::size_t size = 0;                     ///< N
  std::vector<std::size_t> rows;            ///< initial states reported
  std::vector<std::vector<double>> matrix;  ///< absorbing-top p_ij(t)
  std::vector<double> killed;
  std::vector<double> leaked;
  /// max |p^abs - p^refl| over the rows checked (i <= N/2 unless rows were
  /// given explicitly).
  double error_estimate = 0.0;
  std::size_t poisson_terms = 0;
  double rate = 0.0;

  /// p_ij for an initial state i that was computed.
  double p(std::size_t i, std::size_t j) const;
};

/// Full matrix i, j <= N. Throws TruncationTooSmall when the bracket over
/// rows i <= N/2 exceeds 100 tol.
TransitionResult transition(const RateSet& rates, double t, std::size_t n, double tol);

/// Only the given initial states; the bracket covers exactly those rows.
TransitionResult transition_rows(const RateSet& rates, double t, std::size_t n,
                                 const std::vector<std::size_t>& rows, double tol);

/// p_ij(t) = (-1)^{i+j} / (lambda_0..lambda_{i-1} mu_1..mu_j)
///           * sum_m exp(-x_m t) P_i(x_m) P_j(x_m) w_m.
double km_transition(const DiscreteMeasure& measure, const RateSet& rates, std::size_t i,
                     std::size_t j, double t);

struct DualityResidual {
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
  double bracket = 0.0;  ///< largest absorbing/reflecting gap of either side
};

/// sum_{j>=k} p^d_ij(t) + top leak of the dual, against the primal mass below
/// i started from k-1 (absorbed mass included; 1 when k = 0). Requires
/// mu0 > 0. Throws TruncationTooSmall when the bracket exceeds 100 tol.
DualityResidual duality_residual(const RateSet& rates, std::size_t i, std::size_t k,
                                 double t, std::size_t n, double tol);

double duality_check(const RateSet& rates, std::size_t i, std::size_t k, double t,
                     std::size_t n, double tol);

/// Throws NotSimilar(n) at the first n <= depth where lambda + mu or
/// lambda_n mu_{n+1} differ by more than 1e-10 relative.
void require_similar(const RateSet& a, const RateSet& b, std::size_t depth);

/// sqrt(pi_i pi~_j / (pi~_i pi_j)) with pi from `a` and pi~ from `b`.
double similarity_factor(const RateSet& a, const RateSet& b, std::size_t i, std::size_t j);

/// max over i, j <= N/2 of |p~_ij(t) - c_ij p_ij(t)|.
double similarity_check(const RateSet& a, const RateSet& b, double t, std::size_t n,
                        double tol);

}  // namespace bdkit
