#include "bdkit/cli/serialize.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>
#include <system_error>

namespace bdkit::cli {

Json number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

Json numbers(const std::vector<double>& xs) {
  Json out = Json::array();
  for (double x : xs) out.push_back(number(x));
  return out;
}

Json load_json_argument(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && (text[first] == '{' || text[first] == '[')) {
    return Json::parse(text);
  }
  std::ifstream in(text);
  if (!in) throw InvalidArgument("cannot open '" + text + "'");
  return Json::parse(in);
}

Json payload(Json j, const char* key) {
  if (j.is_object() && j.contains("results") && j["results"].is_object() &&
      j["results"].contains(key)) {
    return j["results"][key];
  }
  return j;
}

namespace {

std::vector<double> doubles(const Json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_array()) {
    throw InvalidArgument(std::string("expected an array '") + key + "'");
  }
  std::vector<double> out;
  for (const Json& v : j.at(key)) {
    if (!v.is_number()) throw InvalidArgument(std::string("'") + key + "' must hold numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

TailRule tail_from(const std::string& s) {
  if (s == "repeat-last") return TailRule::RepeatLast;
  if (s == "affine") return TailRule::AffineExtrapolate;
  throw InvalidArgument("tail must be 'repeat-last' or 'affine'");
}

}  // namespace

Json rates_to_json(const RateSet& rates, std::size_t prefix) {
  Json out;
  out["mu0"] = rates.mu0();
  if (const FamilySpec* f = rates.family()) {
    out["kind"] = "family";
    Json params = Json::object();
    for (const auto& [k, v] : f->params) params[k] = v;
    out["family"] = {{"name", f->name}, {"params", params}};
    return out;
  }
  out["kind"] = "table";
  if (const RateTable* t = rates.table()) {
    std::vector<double> mu = t->mu;
    if (!mu.empty()) mu[0] = rates.mu0();
    out["table"] = {{"lambda", numbers(t->lambda)},
                    {"mu", numbers(mu)},
                    {"tail", std::string(to_string(t->tail))}};
    return out;
  }
  out["table"] = {{"lambda", numbers(rates.lambda_prefix(prefix))},
                  {"mu", numbers(rates.mu_prefix(prefix))},
                  {"tail", "repeat-last"}};
  out["prefix_length"] = prefix;
  return out;
}

RateSet rates_from_json(const Json& j) {
  if (!j.is_object()) throw InvalidArgument("rate set must be a JSON object");
  const double mu0 = j.value("mu0", 0.0);
  const std::string kind = j.value("kind", j.contains("table") ? "table" : "family");
  if (kind == "family") {
    if (!j.contains("family")) throw InvalidArgument("missing 'family'");
    const Json& f = j.at("family");
    FamilyParams params;
    if (f.contains("params")) {
      for (const auto& [k, v] : f.at("params").items()) params[k] = v.get<double>();
    }
    params["mu0"] = mu0;
    return builtin_family(f.at("name").get<std::string>(), params);
  }
  if (kind == "table") {
    if (!j.contains("table")) throw InvalidArgument("missing 'table'");
    const Json& t = j.at("table");
    RateTable table;
    table.lambda = doubles(t, "lambda");
    table.mu = doubles(t, "mu");
    table.tail = tail_from(t.value("tail", std::string("repeat-last")));
    return RateSet::from_table(std::move(table), mu0);
  }
  throw InvalidArgument("rate set kind must be 'family' or 'table'");
}

Json rate_prefix_json(const RateSet& rates, std::size_t n) {
  return {{"lambda", numbers(rates.lambda_prefix(n))},
          {"mu", numbers(rates.mu_prefix(n))},
          {"prefix_length", n}};
}

Json coefficients_to_json(const RecurrenceCoefficients& coeffs) {
  return {{"c", numbers(coeffs.c_values())},
          {"d", numbers(coeffs.d_values())},
          {"prefix_length", coeffs.size()}};
}

RecurrenceCoefficients coefficients_from_json(const Json& j) {
  if (!j.is_object()) throw InvalidArgument("coefficients must be a JSON object");
  return RecurrenceCoefficients(doubles(j, "c"), doubles(j, "d"));
}

Json measure_to_json(const DiscreteMeasure& m) {
  Json atoms = Json::array();
  for (const Atom& a : m.atoms()) atoms.push_back({a.x, a.w});
  return {{"atoms", atoms}};
}

DiscreteMeasure measure_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("atoms") || !j.at("atoms").is_array()) {
    throw InvalidArgument("measure must be {\"atoms\": [[x, w], ...]}");
  }
  std::vector<Atom> atoms;
  for (const Json& a : j.at("atoms")) {
    if (!a.is_array() || a.size() != 2 || !a[0].is_number() || !a[1].is_number()) {
      throw InvalidArgument("each atom must be [x, w]");
    }
    atoms.push_back({a[0].get<double>(), a[1].get<double>()});
  }
  return DiscreteMeasure::normalized(std::move(atoms));
}

Json series_to_json(const SeriesReport& r) {
  return {{"status", std::string(to_string(r.status))},
          {"terms", r.terms},
          {"partial_sum", number(r.partial_sum)},
          {"value", number(r.value)},
          {"tail_model", std::string(to_string(r.tail_model))},
          {"tail_estimate", number(r.tail_estimate)},
          {"error_estimate", number(r.error_estimate)},
          {"ratio_range", {number(r.min_ratio), number(r.max_ratio)}},
          {"raabe_range", {number(r.raabe_min), number(r.raabe_max)}},
          {"bound_exceeded", r.bound_exceeded},
          {"nondecreasing", r.nondecreasing}};
}

Json verdict_to_json(const Verdict& v) {
  Json out{{"uniqueness", std::string(to_string(v.uniqueness))},
           {"reason", std::string(to_string(v.reason))},
           {"determinacy", std::string(to_string(v.determinacy))},
           {"depth", v.depth},
           {"pi_series", series_to_json(v.pi_series)},
           {"inverse_series", series_to_json(v.inverse_series)}};
  if (v.representative_series) {
    out["representative_series"] = series_to_json(*v.representative_series);
  }
  out["m_minus_one"] = v.m_minus_one ? number(*v.m_minus_one) : Json(nullptr);
  return out;
}

Json params_to_json(const ParameterSequence& p) {
  return {{"kind", std::string(to_string(p.kind))},
          {"g", numbers(p.g)},
          {"prefix_length", p.g.size()},
          {"defect", number(p.defect)}};
}

Json spectral_to_json(const SpectralEstimate& e) {
  Json converged = Json::array();
  for (bool c : e.converged) converged.push_back(c);
  return {{"xi", numbers(e.xi)},
          {"xi_at_depth_n", numbers(e.coarse)},
          {"converged", converged},
          {"sigma_flag", std::string(to_string(e.flag))},
          {"depth", e.depth}};
}

Json transition_to_json(const TransitionResult& r) {
  Json rows = Json::array();
  for (std::size_t k = 0; k < r.rows.size(); ++k) {
    rows.push_back({{"i", r.rows[k]},
                    {"p", numbers(r.matrix[k])},
                    {"killed", number(r.killed[k])},
                    {"leaked", number(r.leaked[k])}});
  }
  return {{"t", number(r.t)},
          {"error_estimate", number(r.error_estimate)},
          {"poisson_terms", r.poisson_terms},
          {"uniformization_rate", number(r.rate)},
          {"rows", rows}};
}

std::string format_double(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

std::string transition_csv(const std::vector<TransitionResult>& results) {
  std::ostringstream out;
  out << "t,i,j,p\n";
  for (const TransitionResult& r : results) {
    for (std::size_t k = 0; k < r.rows.size(); ++k) {
      for (std::size_t j = 0; j < r.matrix[k].size(); ++j) {
        out << format_double(r.t) << ',' << r.rows[k] << ',' << j << ','
            << format_double(r.matrix[k][j]) << '\n';
      }
    }
  }
  return out.str();
}

std::vector<TransitionCsvRow> read_transition_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "t,i,j,p") {
    throw InvalidArgument("transition CSV must start with the header t,i,j,p");
  }
  std::vector<TransitionCsvRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string t, i, j, p;
    if (!std::getline(fields, t, ',') || !std::getline(fields, i, ',') ||
        !std::getline(fields, j, ',') || !std::getline(fields, p)) {
      throw InvalidArgument("malformed CSV line: " + line);
    }
    TransitionCsvRow row;
    auto parse = [&line](const std::string& s, auto& value) {
      const auto res = std::from_chars(s.data(), s.data() + s.size(), value);
      if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
        throw InvalidArgument("malformed CSV field in: " + line);
      }
    };
    parse(t, row.t);
    parse(i, row.i);
    parse(j, row.j);
    parse(p, row.p);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace bdkit::cli
