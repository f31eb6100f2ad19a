#include "bdkit/series.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace bdkit {

std::string_view to_string(SeriesStatus status) {
  switch (status) {
    case SeriesStatus::Converges: return "converges";
    case SeriesStatus::Diverges: return "diverges";
    case SeriesStatus::Inconclusive: return "inconclusive";
  }
  return "unknown";
}

std::string_view to_string(TailModel model) {
  switch (model) {
    case TailModel::None: return "none";
    case TailModel::Geometric: return "geometric";
    case TailModel::Power: return "power";
  }
  return "unknown";
}

namespace {

// Neumaier-compensated running sums; prefix[k] = t_0 + ... + t_{k-1}.
std::vector<double> prefix_sums(std::span<const double> log_terms) {
  std::vector<double> prefix(log_terms.size() + 1, 0.0);
  double sum = 0.0;
  double comp = 0.0;
  for (std::size_t k = 0; k < log_terms.size(); ++k) {
    const double t = std::exp(log_terms[k]);
    const double s = sum + t;
    comp += std::abs(sum) >= std::abs(t) ? (sum - s) + t : (t - s) + sum;
    sum = s;
    prefix[k + 1] = sum + comp;
  }
  return prefix;
}

double raabe(std::span<const double> log_terms, std::size_t k) {
  const double log_ratio = log_terms[k] - log_terms[k - 1];
  return static_cast<double>(k) * -std::expm1(log_ratio);
}

// Exponent and index shift of t_k ~ C (k + s)^{-p} through the terms at
// k - 2h, k - h, k. Returns false when no such fit exists.
bool fit_power(std::span<const double> log_terms, std::size_t k, double& p, double& s) {
  const std::size_t h = std::max<std::size_t>(1, k / 8);
  if (k < 2 * h) return false;
  const double x0 = static_cast<double>(k - 2 * h);
  const double x1 = static_cast<double>(k - h);
  const double x2 = static_cast<double>(k);
  const double drop_a = log_terms[k - 2 * h] - log_terms[k - h];
  const double drop_b = log_terms[k - h] - log_terms[k];
  if (!(drop_a > 0.0 && drop_b > 0.0)) return false;
  const double target = drop_a / drop_b;
  // ratio(s) falls from +inf (s -> -x0) towards 1 (s -> inf).
  auto ratio = [&](double shift) {
    return std::log((x1 + shift) / (x0 + shift)) / std::log((x2 + shift) / (x1 + shift));
  };
  double lo = -x0 + 1e-9 * std::max(1.0, x0);
  double hi = 1e6 * std::max(1.0, x2);
  if (!(target < ratio(lo) && target > ratio(hi))) return false;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (ratio(mid) > target ? lo : hi) = mid;
  }
  s = 0.5 * (lo + hi);
  p = drop_b / std::log((x2 + s) / (x1 + s));
  return p > 1.0 && std::isfinite(p);
}

// Tail beyond the first m terms extrapolated from term m-1.
double tail_after(std::span<const double> log_terms, std::size_t m, TailModel model) {
  const std::size_t last = m - 1;
  const double log_ratio = log_terms[last] - log_terms[last - 1];
  if (model == TailModel::Geometric) {
    const double one_minus_r = -std::expm1(log_ratio);
    return std::exp(log_terms[last] + log_ratio) / one_minus_r;
  }
  // t_n ~ C (n + s)^{-p}: sum_{n > K} t_n ~ integral from K + 1/2.
  const double k = static_cast<double>(last);
  double p = 0.0;
  double s = 0.0;
  if (!fit_power(log_terms, last, p, s)) {
    p = raabe(log_terms, last);
    s = 0.0;
  }
  return std::exp(log_terms[last] + p * std::log(k + s) + (1.0 - p) * std::log(k + 0.5 + s) -
                  std::log(p - 1.0));
}

}  // namespace

SeriesReport analyze_series(std::span<const double> log_terms,
                            const SeriesOptions& options) {
  SeriesReport report;
  const std::size_t n = log_terms.size();
  report.terms = n;
  if (n == 0) return report;

  const std::vector<double> prefix = prefix_sums(log_terms);
  report.partial_sum = prefix[n];
  report.value = report.partial_sum;
  if (!std::isfinite(report.partial_sum) ||
      report.partial_sum > options.divergence_bound) {
    report.status = SeriesStatus::Diverges;
    report.bound_exceeded = true;
    return report;
  }

  const std::size_t window = std::min(options.window, n - 1);
  if (window < 2) return report;

  double min_lr = std::numeric_limits<double>::infinity();
  double max_lr = -std::numeric_limits<double>::infinity();
  report.raabe_min = std::numeric_limits<double>::infinity();
  report.raabe_max = -std::numeric_limits<double>::infinity();
  double gap_min = std::numeric_limits<double>::infinity();
  double gap_max = 0.0;
  double gap_sum = 0.0;
  double raabe_sum = 0.0;
  bool nondecreasing = true;
  for (std::size_t k = n - window; k < n; ++k) {
    const double lr = log_terms[k] - log_terms[k - 1];
    nondecreasing = nondecreasing && lr >= 0.0;
    min_lr = std::min(min_lr, lr);
    max_lr = std::max(max_lr, lr);
    const double r = raabe(log_terms, k);
    report.raabe_min = std::min(report.raabe_min, r);
    report.raabe_max = std::max(report.raabe_max, r);
    raabe_sum += r;
    const double gap = -std::expm1(lr);
    gap_min = std::min(gap_min, gap);
    gap_max = std::max(gap_max, gap);
    gap_sum += gap;
  }
  report.min_ratio = std::exp(min_lr);
  report.max_ratio = std::exp(max_lr);
  report.nondecreasing = nondecreasing;

  if (nondecreasing) {
    report.status = SeriesStatus::Diverges;
    return report;
  }
  const bool ratio_ok = report.max_ratio < 1.0 - options.ratio_margin;
  const bool raabe_ok = report.raabe_min > 1.0 + options.raabe_margin;
  if (!(ratio_ok && raabe_ok)) return report;

  report.status = SeriesStatus::Converges;
  // Geometric tails keep the ratio gap flat; power tails keep Raabe flat.
  const double w = static_cast<double>(window);
  const double cv_geo = (gap_max - gap_min) / (gap_sum / w);
  const double cv_pow = (report.raabe_max - report.raabe_min) / (raabe_sum / w);
  report.tail_model = cv_geo <= cv_pow ? TailModel::Geometric : TailModel::Power;
  report.tail_estimate = tail_after(log_terms, n, report.tail_model);
  report.value = report.partial_sum + report.tail_estimate;

  const std::size_t half = std::max(window + 1, n / 2);
  double error = 0.0;
  if (half < n) {
    const double earlier = prefix[half] + tail_after(log_terms, half, report.tail_model);
    error = std::isfinite(earlier) ? std::abs(report.value - earlier)
                                   : report.tail_estimate;
  }
  const double rounding =
      4.0 * std::numeric_limits<double>::epsilon() * report.value *
      std::sqrt(static_cast<double>(n));
  report.error_estimate = std::max(error, rounding);
  return report;
}

SeriesReport sum_series(const LogTermSource& source, std::size_t terms,
                        double tol, const SeriesOptions& options) {
  SeriesReport report = analyze_series(source(terms), options);
  if (report.status != SeriesStatus::Converges) return report;

  // Refinement keeps the tail model honest through Raabe alone; the ratio
  // margin only gates the initial verdict.
  SeriesOptions refine = options;
  refine.ratio_margin = 0.0;
  while (report.error_estimate > tol && terms < options.max_terms) {
    terms = std::min(terms * 2, options.max_terms);
    SeriesReport next = analyze_series(source(terms), refine);
    if (next.status != SeriesStatus::Converges) break;
    report = next;
  }
  return report;
}

}  // namespace bdkit
