#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "bdkit/bdkit.hpp"

namespace bdkit::cli {

using Json = nlohmann::ordered_json;

/// Non-finite doubles become the strings "inf", "-inf" or "nan".
Json number(double x);
Json numbers(const std::vector<double>& xs);

/// Inline JSON when the text starts with '{' or '[', otherwise a file path.
Json load_json_argument(const std::string& text);

/// Accepts either the bare object or a bdkit report carrying it under
/// results[key], so one command's output can feed the next.
Json payload(Json j, const char* key);

/// {"mu0", "kind", "family": {"name", "params"}} or {"mu0", "kind",
/// "table": {"lambda", "mu", "tail"}}. Dual rate sets are written as a
/// table prefix of length `prefix`.
Json rates_to_json(const RateSet& rates, std::size_t prefix);
RateSet rates_from_json(const Json& j);

/// {"lambda": [lambda_0..], "mu": [mu_0..], "prefix_length": n}
Json rate_prefix_json(const RateSet& rates, std::size_t n);

/// {"c": [c_1..], "d": [d_2..], "prefix_length": n}
Json coefficients_to_json(const RecurrenceCoefficients& coeffs);
RecurrenceCoefficients coefficients_from_json(const Json& j);

/// {"atoms": [[x, w], ...]}
Json measure_to_json(const DiscreteMeasure& m);
DiscreteMeasure measure_from_json(const Json& j);

Json series_to_json(const SeriesReport& report);
Json verdict_to_json(const Verdict& verdict);
Json params_to_json(const ParameterSequence& params);
Json spectral_to_json(const SpectralEstimate& estimate);
Json transition_to_json(const TransitionResult& result);

/// 17 significant digits, which read back to the same double.
std::string format_double(double x);

struct TransitionCsvRow {
  double t = 0.0;
  std::size_t i = 0;
  std::size_t j = 0;
  double p = 0.0;
};

/// Header "t,i,j,p" followed by one line per matrix entry.
std::string transition_csv(const std::vector<TransitionResult>& results);
std::vector<TransitionCsvRow> read_transition_csv(std::istream& in);

}  // namespace bdkit::cli
