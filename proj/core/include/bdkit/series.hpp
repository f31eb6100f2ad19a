#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

namespace bdkit {

// Numeric convergence diagnostics for series of positive terms. Convergence
// is undecidable from finitely many terms, so every verdict is three-way.

enum class SeriesStatus { Converges, Diverges, Inconclusive };

enum class TailModel { None, Geometric, Power };

std::string_view to_string(SeriesStatus status);
std::string_view to_string(TailModel model);

struct SeriesOptions {
  /// Number of trailing term ratios inspected.
  std::size_t window = 20;
  /// Ratios must stay below 1 - ratio_margin for a convergent verdict.
  double ratio_margin = 1e-3;
  /// Raabe statistic n(1 - t_n/t_{n-1}) must exceed 1 + raabe_margin.
  double raabe_margin = 0.1;
  /// Partial sums beyond this are reported as divergent.
  double divergence_bound = 1e12;
  /// Upper limit on terms used while refining a convergent value.
  std::size_t max_terms = std::size_t{1} << 20;
};

struct SeriesReport {
  SeriesStatus status = SeriesStatus::Inconclusive;
  TailModel tail_model = TailModel::None;
  std::size_t terms = 0;  ///< terms t_0..t_{terms-1} were summed
  double partial_sum = 0.0;
  double tail_estimate = 0.0;
  double value = 0.0;  ///< partial_sum + tail_estimate when convergent
  double error_estimate = 0.0;
  double min_ratio = 0.0;
  double max_ratio = 0.0;
  double raabe_min = 0.0;
  double raabe_max = 0.0;
  bool bound_exceeded = false;
  bool nondecreasing = false;
};

/// Produces log t_0, ..., log t_{count-1}. Log-domain keeps factorial-type
/// terms representable.
using LogTermSource = std::function<std::vector<double>(std::size_t count)>;

/// Verdict from exactly `terms` terms.
SeriesReport analyze_series(std::span<const double> log_terms,
                            const SeriesOptions& options = {});

/// Verdict at `terms` terms; a convergent value is refined by doubling the
/// term count until error_estimate <= tol or options.max_terms is reached.
SeriesReport sum_series(const LogTermSource& source, std::size_t terms,
                        double tol, const SeriesOptions& options = {});

}  // namespace bdkit
