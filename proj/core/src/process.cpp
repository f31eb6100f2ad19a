#include "bdkit/process.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "bdkit/errors.hpp"
#include "bdkit/polynomials.hpp"

namespace bdkit {

std::string_view to_string(Boundary boundary) {
  switch (boundary) {
    case Boundary::AbsorbingTop: return "absorbing-top";
    case Boundary::ReflectingTop: return "reflecting-top";
  }
  return "unknown";
}

double TruncatedGenerator::entry(std::size_t i, std::size_t j) const {
  if (i > size || j > size) throw InvalidArgument("generator index out of range");
  if (i == j) return diag[i];
  if (j == i + 1) return upper[i];
  if (i == j + 1) return lower[i];
  return 0.0;
}

TruncatedGenerator build_generator(const RateSet& rates, std::size_t n,
                                   Boundary boundary) {
  if (n == 0) throw InvalidArgument("truncation needs N >= 1");
  TruncatedGenerator g;
  g.size = n;
  g.boundary = boundary;
  g.lower.assign(n + 1, 0.0);
  g.diag.assign(n + 1, 0.0);
  g.upper.assign(n + 1, 0.0);
  for (std::size_t k = 0; k <= n; ++k) {
    const double lambda = rates.lambda(k);
    const double mu = rates.mu(k);
    if (k >= 1) g.lower[k] = mu;
    if (k < n) g.upper[k] = lambda;
    const bool keep_lambda = k < n || boundary == Boundary::AbsorbingTop;
    g.diag[k] = -(mu + (keep_lambda ? lambda : 0.0));
  }
  g.kill = rates.mu0();
  g.leak = boundary == Boundary::AbsorbingTop ? rates.lambda(n) : 0.0;
  return g;
}

namespace {

// Poisson(lam) weights up to the first index whose remaining tail is at most
// tol, rescaled to sum to 1 so that conservative chains stay conservative.
std::vector<double> poisson_weights(double lam, double tol) {
  if (lam == 0.0) return {1.0};
  if (lam > 1e7) throw RangeError("uniformization needs too many steps; reduce t or N");
  const double log_lam = std::log(lam);
  std::vector<double> w;
  for (std::size_t m = 0;; ++m) {
    const double md = static_cast<double>(m);
    w.push_back(std::exp(-lam + md * log_lam - std::lgamma(md + 1.0)));
    if (md + 2.0 > lam) {
      const double next = std::exp(-lam + (md + 1.0) * log_lam - std::lgamma(md + 2.0));
      const double tail = next / (1.0 - lam / (md + 2.0));
      if (tail <= tol) break;
    }
  }
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  for (double& x : w) x /= total;
  return w;
}

}  // namespace

PropagatedRows propagate(const TruncatedGenerator& g, double t,
                         const std::vector<std::size_t>& rows, double tol) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw InvalidArgument("t must be finite and >= 0");
  if (!(tol > 0.0)) throw InvalidArgument("tol must be positive");
  const std::size_t size = g.size + 1;
  double rate = 0.0;
  for (double d : g.diag) rate = std::max(rate, -d);

  PropagatedRows out;
  out.rows = rows;
  out.rate = rate;
  const std::vector<double> w = poisson_weights(rate * t, tol);
  out.poisson_terms = w.size();

  std::vector<double> stay(size), up(size), down(size);
  for (std::size_t k = 0; k < size; ++k) {
    stay[k] = rate > 0.0 ? 1.0 + g.diag[k] / rate : 1.0;
    up[k] = rate > 0.0 ? g.upper[k] / rate : 0.0;
    down[k] = rate > 0.0 ? g.lower[k] / rate : 0.0;
  }
  const double kill_step = rate > 0.0 ? g.kill / rate : 0.0;
  const double leak_step = rate > 0.0 ? g.leak / rate : 0.0;

  std::vector<double> v(size), next(size);
  for (std::size_t row : rows) {
    if (row > g.size) throw InvalidArgument("initial state beyond truncation");
    std::fill(v.begin(), v.end(), 0.0);
    v[row] = 1.0;
    double killed = 0.0;
    double leaked = 0.0;
    std::vector<double> acc(size, 0.0);
    double acc_killed = 0.0;
    double acc_leaked = 0.0;
    for (std::size_t m = 0; m < w.size(); ++m) {
      const double weight = w[m];
      if (weight > 0.0) {
        for (std::size_t j = 0; j < size; ++j) acc[j] += weight * v[j];
        acc_killed += weight * killed;
        acc_leaked += weight * leaked;
      }
      if (m + 1 == w.size()) break;
      killed += v[0] * kill_step;
      leaked += v[size - 1] * leak_step;
      for (std::size_t j = 0; j < size; ++j) {
        double x = v[j] * stay[j];
        if (j > 0) x += v[j - 1] * up[j - 1];
        if (j + 1 < size) x += v[j + 1] * down[j + 1];
        next[j] = x;
      }
      v.swap(next);
    }
    out.p.push_back(std::move(acc));
    out.killed.push_back(acc_killed);
    out.leaked.push_back(acc_leaked);
  }
  return out;
}

double TransitionResult::p(std::size_t i, std::size_t j) const {
  const auto it = std::find(rows.begin(), rows.end(), i);
  if (it == rows.end()) throw InvalidArgument("row " + std::to_string(i) + " not computed");
  return matrix[static_cast<std::size_t>(it - rows.begin())].at(j);
}

namespace {

TransitionResult bracketed(const RateSet& rates, double t, std::size_t n,
                           const std::vector<std::size_t>& rows,
                           const std::vector<std::size_t>& checked, double tol) {
  const PropagatedRows abs =
      propagate(build_generator(rates, n, Boundary::AbsorbingTop), t, rows, tol);
  const PropagatedRows refl =
      propagate(build_generator(rates, n, Boundary::ReflectingTop), t, rows, tol);
  TransitionResult out;
  out.t = t;
  out.size = n;
  out.rows = rows;
  out.killed = abs.killed;
  out.leaked = abs.leaked;
  out.poisson_terms = abs.poisson_terms;
  out.rate = abs.rate;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (std::find(checked.begin(), checked.end(), rows[r]) == checked.end()) continue;
    for (std::size_t j = 0; j <= n; ++j) {
      out.error_estimate = std::max(out.error_estimate, std::abs(abs.p[r][j] - refl.p[r][j]));
    }
  }
  out.matrix = abs.p;
  if (out.error_estimate > 100.0 * tol) {
    throw TruncationTooSmall(out.error_estimate, 100.0 * tol);
  }
  return out;
}

std::vector<std::size_t> range(std::size_t last) {
  std::vector<std::size_t> r(last + 1);
  std::iota(r.begin(), r.end(), std::size_t{0});
  return r;
}

}  // namespace

TransitionResult transition(const RateSet& rates, double t, std::size_t n, double tol) {
  return bracketed(rates, t, n, range(n), range(n / 2), tol);
}

TransitionResult transition_rows(const RateSet& rates, double t, std::size_t n,
                                 const std::vector<std::size_t>& rows, double tol) {
  return bracketed(rates, t, n, rows, rows, tol);
}

double km_transition(const DiscreteMeasure& measure, const RateSet& rates, std::size_t i,
                     std::size_t j, double t) {
  const std::size_t top = std::max<std::size_t>({i, j, 1});
  const RecurrenceCoefficients coeffs = recurrence_from_rates(rates, top);
  double log_scale = 0.0;
  for (std::size_t k = 0; k < i; ++k) log_scale -= std::log(rates.lambda(k));
  for (std::size_t k = 1; k <= j; ++k) log_scale -= std::log(rates.mu(k));
  double sum = 0.0;
  for (const Atom& a : measure.atoms()) {
    const std::vector<double> p = eval_monic_all(coeffs, top, a.x);
    sum += std::exp(-a.x * t) * p[i] * p[j] * a.w;
  }
  const double sign = (i + j) % 2 == 0 ? 1.0 : -1.0;
  return sign * std::exp(log_scale) * sum;
}

DualityResidual duality_residual(const RateSet& rates, std::size_t i, std::size_t k,
                                 double t, std::size_t n, double tol) {
  if (!(rates.mu0() > 0.0)) throw InvalidArgument("duality check needs mu0 > 0");
  if (i >= n || k >= n) throw InvalidArgument("i and k must lie below the truncation");
  const RateSet dual = dual_rates(rates);
  const std::vector<std::size_t> dual_row{i};

  auto lhs = [&](Boundary boundary) {
    const PropagatedRows r = propagate(build_generator(dual, n, boundary), t, dual_row, tol);
    double s = r.leaked[0];
    for (std::size_t j = k; j <= n; ++j) s += r.p[0][j];
    return s;
  };
  auto rhs = [&](Boundary boundary) {
    if (k == 0) return 1.0;
    const PropagatedRows r =
        propagate(build_generator(rates, n, boundary), t, {k - 1}, tol);
    double s = r.killed[0];
    for (std::size_t j = 0; j < i; ++j) s += r.p[0][j];
    return s;
  };

  DualityResidual out;
  out.lhs = lhs(Boundary::AbsorbingTop);
  out.rhs = rhs(Boundary::AbsorbingTop);
  out.residual = std::abs(out.lhs - out.rhs);
  out.bracket = std::max(std::abs(out.lhs - lhs(Boundary::ReflectingTop)),
                         std::abs(out.rhs - rhs(Boundary::ReflectingTop)));
  if (out.bracket > 100.0 * tol) throw TruncationTooSmall(out.bracket, 100.0 * tol);
  return out;
}

double duality_check(const RateSet& rates, std::size_t i, std::size_t k, double t,
                     std::size_t n, double tol) {
  return duality_residual(rates, i, k, t, n, tol).residual;
}

void require_similar(const RateSet& a, const RateSet& b, std::size_t depth) {
  auto close = [](double x, double y) {
    return std::abs(x - y) <= 1e-10 * std::max(std::abs(x), std::abs(y));
  };
  for (std::size_t n = 0; n <= depth; ++n) {
    if (!close(a.lambda(n) + a.mu(n), b.lambda(n) + b.mu(n))) {
      throw NotSimilar(n, "lambda_n + mu_n differ");
    }
    if (!close(a.lambda(n) * a.mu(n + 1), b.lambda(n) * b.mu(n + 1))) {
      throw NotSimilar(n, "lambda_n mu_{n+1} differ");
    }
  }
}

double similarity_factor(const RateSet& a, const RateSet& b, std::size_t i, std::size_t j) {
  const std::size_t top = std::max(i, j);
  require_similar(a, b, top);
  const std::vector<double> la = log_pi_coefficients(a, top);
  const std::vector<double> lb = log_pi_coefficients(b, top);
  return std::exp(0.5 * (la[i] + lb[j] - lb[i] - la[j]));
}

double similarity_check(const RateSet& a, const RateSet& b, double t, std::size_t n,
                        double tol) {
  require_similar(a, b, n);
  const std::size_t half = n / 2;
  const std::vector<std::size_t> rows = range(half);
  const TransitionResult pa = transition_rows(a, t, n, rows, tol);
  const TransitionResult pb = transition_rows(b, t, n, rows, tol);
  const std::vector<double> la = log_pi_coefficients(a, half);
  const std::vector<double> lb = log_pi_coefficients(b, half);
  double worst = 0.0;
  for (std::size_t i = 0; i <= half; ++i) {
    for (std::size_t j = 0; j <= half; ++j) {
      const double c = std::exp(0.5 * (la[i] + lb[j] - lb[i] - la[j]));
      worst = std::max(worst, std::abs(pb.matrix[i][j] - c * pa.matrix[i][j]));
    }
  }
  return worst;
}

}  // namespace bdkit
