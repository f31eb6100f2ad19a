#include "bdkit/cli/app.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <functional>
#include <optional>

#include "CLI11.hpp"
#include "bdkit/cli/serialize.hpp"

namespace bdkit::cli {

namespace {

struct Options {
  // rate-set input
  std::string rates_json;
  std::string family;
  std::optional<double> lambda, mu, alpha, beta, mu0;
  // other inputs
  std::string coeffs_json;
  std::string measure_json;
  std::string against_json;
  std::optional<double> against_mu0;
  // knobs
  std::size_t trunc = 100;
  double tol = 1e-10;
  std::vector<double> times;
  std::vector<double> xs;
  std::vector<int> orders;
  std::size_t i = 0, j = 0, k = 0;
  std::vector<std::size_t> rows;
  std::size_t degree = 20;
  std::optional<double> a;
  bool strict = false;
  std::string out;
  std::string format = "json";
};

/// Marks an Inconclusive outcome so --strict can fail the run after the
/// report is written.
struct Outcome {
  Outcome(Json r, bool inc = false, std::string text = {})
      : report(std::move(r)), inconclusive(inc), csv(std::move(text)) {}

  Json report;
  bool inconclusive = false;
  std::string csv;  ///< set by commands that support --format csv
};

const std::vector<double> kDefaultTimes{0.1, 1.0, 5.0};

std::vector<double> times_or_default(const Options& o) {
  return o.times.empty() ? kDefaultTimes : o.times;
}

RateSet input_rates(const Options& o) {
  if (!o.rates_json.empty()) {
    if (!o.family.empty()) throw InvalidArgument("give either --rates or --family");
    RateSet r = rates_from_json(payload(load_json_argument(o.rates_json), "rates"));
    if (o.mu0) {
      if (const FamilySpec* f = r.family()) {
        FamilyParams p = f->params;
        p["mu0"] = *o.mu0;
        return builtin_family(f->name, p);
      }
      return RateSet::from_table(*r.table(), *o.mu0);
    }
    return r;
  }
  if (o.family.empty()) throw InvalidArgument("a rate set is required (--family or --rates)");
  FamilyParams p;
  if (o.lambda) p["lambda"] = *o.lambda;
  if (o.mu) p["mu"] = *o.mu;
  if (o.alpha) p["alpha"] = *o.alpha;
  if (o.beta) p["beta"] = *o.beta;
  if (o.mu0) p["mu0"] = *o.mu0;
  return builtin_family(o.family, p);
}

bool has_rates(const Options& o) { return !o.rates_json.empty() || !o.family.empty(); }

DiscreteMeasure input_measure(const Options& o) {
  if (o.measure_json.empty()) throw InvalidArgument("--measure is required");
  return measure_from_json(payload(load_json_argument(o.measure_json), "measure"));
}

RecurrenceCoefficients input_coefficients(const Options& o, std::size_t n) {
  if (!o.coeffs_json.empty()) {
    if (has_rates(o)) throw InvalidArgument("give either --coeffs or a rate set");
    RecurrenceCoefficients c = coefficients_from_json(payload(load_json_argument(o.coeffs_json), "coefficients"));
    return c.size() > n ? c.prefix(n, n) : c;
  }
  return recurrence_from_rates(input_rates(o), n);
}

Json base_report(const std::string& command, const Options& o, Json inputs) {
  Json r;
  r["command"] = command;
  r["inputs"] = std::move(inputs);
  r["truncation"] = {{"N", o.trunc}, {"tol", o.tol}};
  r["results"] = Json::object();
  r["diagnostics"] = Json::object();
  return r;
}

Json rate_inputs(const Options& o, const RateSet& rates) {
  return {{"rates", rates_to_json(rates, o.trunc)}};
}

// --- commands --------------------------------------------------------------

Outcome cmd_coeffs(const Options& o) {
  const RateSet rates = input_rates(o);
  Json r = base_report("coeffs", o, rate_inputs(o, rates));
  r["results"]["coefficients"] = coefficients_to_json(recurrence_from_rates(rates, o.trunc));
  return {r};
}

Outcome cmd_rates(const Options& o) {
  if (o.coeffs_json.empty()) throw InvalidArgument("--coeffs is required");
  const RecurrenceCoefficients c = coefficients_from_json(payload(load_json_argument(o.coeffs_json), "coefficients"));
  const double mu0 = o.mu0.value_or(0.0);
  Json r = base_report("rates", o, {{"coefficients", coefficients_to_json(c)}, {"mu0", mu0}});
  const RateSet rates = rates_from_recurrence(c, mu0);
  r["results"]["rates"] = rates_to_json(rates, o.trunc);
  r["results"]["prefix_length"] = rates.table()->lambda.size();
  return {r};
}

Outcome cmd_dual(const Options& o) {
  const RateSet rates = input_rates(o);
  Json r = base_report("dual", o, rate_inputs(o, rates));
  const RateSet dual = dual_rates(rates);
  r["results"]["dual"] = rate_prefix_json(dual, o.trunc);
  r["results"]["dual"]["mu0"] = dual.mu0();
  return {r};
}

Outcome cmd_shell(const Options& o) {
  const RateSet rates = input_rates(o);
  Json r = base_report("shell", o, rate_inputs(o, rates));
  const RecurrenceCoefficients shell = shell_coefficients(rates, o.trunc);
  r["results"]["shell_coefficients"] = coefficients_to_json(shell);
  const std::size_t degree = std::min(o.degree, o.trunc);
  const std::vector<double> xs = o.xs.empty() ? std::vector<double>{0.0, 1.0} : o.xs;
  Json evals = Json::array();
  for (double x : xs) {
    evals.push_back({{"x", x}, {"values", numbers(eval_monic_all(shell, degree, x))}});
  }
  r["results"]["evaluations"] = evals;
  r["results"]["degree"] = degree;
  return {r};
}

Outcome cmd_chain(const Options& o) {
  const std::size_t n = o.trunc;
  Json inputs = Json::object();
  std::optional<RateSet> rates;
  if (o.coeffs_json.empty()) {
    rates = input_rates(o);
    inputs = rate_inputs(o, *rates);
  }
  const RecurrenceCoefficients coeffs = input_coefficients(o, n + 1);
  if (!rates) inputs["coefficients"] = coefficients_to_json(coeffs);
  Json r = base_report("chain", o, inputs);
  const ChainSequence chain = chain_from_coeffs(coeffs, n);
  r["results"]["a"] = {{"values", numbers(chain.a)}, {"prefix_length", chain.size()}};
  r["results"]["minimal"] = params_to_json(minimal_params(chain));
  // With a rate set the chain continues past N; otherwise only the given
  // prefix is available for burn-in.
  const ParameterSequence maximal =
      rates ? maximal_params(chain_source(*rates), n, o.tol)
            : maximal_params(chain_from_coeffs(coeffs, coeffs.size() - 1), n / 2, o.tol);
  r["results"]["maximal"] = params_to_json(maximal);
  if (rates) {
    r["results"]["rate_induced"] = params_to_json(params_from_rates(*rates, n));
    if (rates->mu0() == 0.0) {
      const SeriesReport m = m_minus_one(*rates, n, o.tol);
      r["diagnostics"]["m_minus_one_series"] = series_to_json(m);
      if (m.status == SeriesStatus::Converges) {
        const double formula = m0_formula_check(coeffs, m.value);
        r["results"]["m0_formula"] = formula;
        r["results"]["m0_difference"] = std::abs(formula - maximal.g[0]);
      }
    }
  }
  return {r};
}

Outcome cmd_measure_approx(const Options& o) {
  Json inputs = o.coeffs_json.empty() ? rate_inputs(o, input_rates(o)) : Json::object();
  const RecurrenceCoefficients coeffs = input_coefficients(o, o.trunc);
  if (!o.coeffs_json.empty()) inputs["coefficients"] = coefficients_to_json(coeffs);
  Json r = base_report("measure approx", o, inputs);
  const DiscreteMeasure m = spectral_approx(coeffs, o.trunc);
  r["results"]["measure"] = measure_to_json(m);
  r["results"]["depth"] = o.trunc;
  if (!m.has_atom_at_zero()) r["diagnostics"]["m_minus_one"] = moment(m, -1);
  return {r};
}

Outcome cmd_measure_phia(const Options& o) {
  if (!o.a) throw InvalidArgument("--a is required");
  const DiscreteMeasure psi = input_measure(o);
  Json r = base_report("measure phia", o, {{"measure", measure_to_json(psi)}, {"a", *o.a}});
  r["results"]["measure"] = measure_to_json(transform_phia(psi, *o.a));
  return {r};
}

Outcome cmd_measure_dual(const Options& o) {
  if (!o.mu0) throw InvalidArgument("--mu0 is required");
  const DiscreteMeasure psi = input_measure(o);
  Json r = base_report("measure dual", o, {{"measure", measure_to_json(psi)}, {"mu0", *o.mu0}});
  r["results"]["measure"] = measure_to_json(dual_measure(psi, *o.mu0));
  r["diagnostics"]["m_minus_one"] = moment(psi, -1);
  return {r};
}

Outcome cmd_measure_invert(const Options& o) {
  const DiscreteMeasure phi = input_measure(o);
  Json r = base_report("measure invert", o, {{"measure", measure_to_json(phi)}});
  const InverseTransform inv = inverse_transform(phi);
  r["results"]["psi"] = measure_to_json(inv.psi);
  r["results"]["a"] = number(inv.a);
  return {r};
}

Outcome cmd_measure_moments(const Options& o) {
  const DiscreteMeasure m = input_measure(o);
  const std::vector<int> orders = o.orders.empty() ? std::vector<int>{-1, 0, 1, 2} : o.orders;
  Json r = base_report("measure moments", o, {{"measure", measure_to_json(m)}});
  Json list = Json::array();
  for (int k : orders) list.push_back({{"order", k}, {"value", number(moment(m, k))}});
  r["results"]["moments"] = list;
  return {r};
}

Outcome cmd_classify(const Options& o) {
  const RateSet rates = input_rates(o);
  Json r = base_report("classify", o, rate_inputs(o, rates));
  const Verdict v = classify(rates, o.trunc, o.tol);
  r["results"]["verdict"] = verdict_to_json(v);
  return {r, v.uniqueness == Uniqueness::Inconclusive ||
                 v.determinacy == Determinacy::Inconclusive};
}

std::vector<TransitionResult> transitions(const Options& o, const RateSet& rates) {
  std::vector<TransitionResult> out;
  for (double t : times_or_default(o)) {
    out.push_back(o.rows.empty() ? transition(rates, t, o.trunc, o.tol)
                                 : transition_rows(rates, t, o.trunc, o.rows, o.tol));
  }
  return out;
}

Outcome cmd_transition(const Options& o) {
  const RateSet rates = input_rates(o);
  Json r = base_report("transition", o, rate_inputs(o, rates));
  r["inputs"]["t"] = times_or_default(o);
  const std::vector<TransitionResult> results = transitions(o, rates);
  Json list = Json::array();
  for (const TransitionResult& t : results) list.push_back(transition_to_json(t));
  r["results"]["transitions"] = list;
  return {r, false, o.format == "csv" ? transition_csv(results) : std::string()};
}

Outcome cmd_km(const Options& o) {
  const RateSet rates = input_rates(o);
  Json r = base_report("km", o, rate_inputs(o, rates));
  r["inputs"]["i"] = o.i;
  r["inputs"]["j"] = o.j;
  r["inputs"]["t"] = times_or_default(o);
  const std::size_t depth = 2 * o.trunc;
  r["truncation"]["quadrature_depth"] = depth;
  const DiscreteMeasure psi = spectral_approx(recurrence_from_rates(rates, depth), depth);
  Json list = Json::array();
  double worst = 0.0;
  for (double t : times_or_default(o)) {
    const double km = km_transition(psi, rates, o.i, o.j, t);
    const TransitionResult u = transition_rows(rates, t, o.trunc, {o.i}, o.tol);
    const double diff = std::abs(km - u.p(o.i, o.j));
    worst = std::max(worst, diff);
    list.push_back({{"t", t},
                    {"km", number(km)},
                    {"uniformization", number(u.p(o.i, o.j))},
                    {"difference", number(diff)},
                    {"truncation_error_estimate", number(u.error_estimate)}});
  }
  r["results"]["values"] = list;
  r["results"]["max_difference"] = number(worst);
  return {r};
}

Outcome cmd_verify_dualp(const Options& o) {
  const RateSet rates = input_rates(o);
  Json r = base_report("verify dualp", o, rate_inputs(o, rates));
  r["inputs"]["i"] = o.i;
  r["inputs"]["k"] = o.k;
  r["inputs"]["t"] = times_or_default(o);
  Json list = Json::array();
  double worst = 0.0;
  for (double t : times_or_default(o)) {
    const DualityResidual d = duality_residual(rates, o.i, o.k, t, o.trunc, o.tol);
    worst = std::max(worst, d.residual);
    list.push_back({{"t", t},
                    {"lhs", number(d.lhs)},
                    {"rhs", number(d.rhs)},
                    {"residual", number(d.residual)},
                    {"truncation_bracket", number(d.bracket)}});
  }
  r["results"]["checks"] = list;
  r["results"]["residual"] = number(worst);
  return {r};
}

Outcome cmd_verify_similarity(const Options& o) {
  const RateSet rates = input_rates(o);
  std::optional<RateSet> other;
  if (!o.against_json.empty()) {
    other = rates_from_json(load_json_argument(o.against_json));
  } else if (o.against_mu0) {
    other = coefficient_family_member(rates, *o.against_mu0, 2 * o.trunc + 2);
  } else {
    throw InvalidArgument("--against or --against-mu0 is required");
  }
  Json inputs = rate_inputs(o, rates);
  inputs["against"] = rates_to_json(*other, o.trunc);
  inputs["t"] = times_or_default(o);
  Json r = base_report("verify similarity", o, inputs);
  Json list = Json::array();
  double worst = 0.0;
  for (double t : times_or_default(o)) {
    const double res = similarity_check(rates, *other, t, o.trunc, o.tol);
    worst = std::max(worst, res);
    list.push_back({{"t", t}, {"residual", number(res)}});
  }
  r["results"]["checks"] = list;
  r["results"]["factor_0_1"] = number(similarity_factor(rates, *other, 0, 1));
  r["results"]["residual"] = number(worst);
  return {r};
}

Outcome cmd_verify_kernel(const Options& o) {
  const RateSet rates = input_rates(o);
  Json r = base_report("verify kernel", o, rate_inputs(o, rates));
  const std::size_t degree = o.degree;
  const std::vector<double> xs = o.xs.empty() ? std::vector<double>{0.5, 1.0, 5.0} : o.xs;
  r["inputs"]["degree"] = degree;
  r["inputs"]["x"] = xs;
  const RecurrenceCoefficients primal = recurrence_from_rates(rates, degree + 1);
  const RecurrenceCoefficients shell = shell_coefficients(rates, degree + 1);
  double worst = 0.0;
  for (double x : xs) {
    const std::vector<double> p = eval_monic_all(primal, degree, x);
    for (std::size_t n = 0; n <= degree; ++n) {
      const double scale = std::max(1.0, std::abs(x * p[n]));
      worst = std::max(worst, kernel_residual(primal, shell, n, x) / scale);
    }
  }
  r["results"]["residual"] = number(worst);
  return {r};
}

Outcome cmd_verify_mu0a(const Options& o) {
  if (!o.a) throw InvalidArgument("--a is required");
  const RateSet rates = input_rates(o);
  if (rates.mu0() != 0.0) throw InvalidArgument("verify mu0a takes the mu0 = 0 rate set");
  Json r = base_report("verify mu0a", o, rate_inputs(o, rates));
  r["inputs"]["a"] = number(*o.a);
  const SeriesReport m = m_minus_one(rates, o.trunc, o.tol);
  r["diagnostics"]["m_minus_one_series"] = series_to_json(m);
  if (m.status != SeriesStatus::Converges) {
    r["results"]["m_minus_one"] = nullptr;
    r["diagnostics"]["note"] = "series for m_{-1} did not converge";
    return {r, true};
  }
  const double mu0 = mu0_from_a(*o.a, m.value);
  r["results"]["m_minus_one"] = number(m.value);
  r["results"]["mu0"] = number(mu0);
  const DiscreteMeasure psi = spectral_approx(recurrence_from_rates(rates, o.trunc), o.trunc);
  if (!psi.has_atom_at_zero()) {
    r["results"]["m_minus_one_quadrature"] = number(moment(psi, -1));
  }
  if (mu0 > 0.0) r["results"]["a_roundtrip"] = number(a_from_mu0(mu0, m.value));
  return {r};
}

Outcome cmd_verify_roundtrip(const Options& o) {
  const RateSet rates = input_rates(o);
  Json r = base_report("verify roundtrip", o, rate_inputs(o, rates));
  const std::size_t n = std::max<std::size_t>(o.trunc, 2);
  const RateSet back = rates_from_recurrence(recurrence_from_rates(rates, n), rates.mu0());
  double worst = 0.0;
  auto rel = [](double x, double y) { return std::abs(x - y) / std::abs(x); };
  for (std::size_t k = 0; k < n; ++k) {
    worst = std::max(worst, rel(rates.lambda(k), back.lambda(k)));
    if (k >= 1) worst = std::max(worst, rel(rates.mu(k), back.mu(k)));
  }
  r["results"]["max_relative_error"] = number(worst);
  r["results"]["prefix_length"] = n;
  return {r};
}

Outcome cmd_family_list(const Options& o) {
  Json r = base_report("family list", o, Json::object());
  Json list = Json::array();
  for (const FamilyInfo& f : family_catalog()) {
    list.push_back({{"name", f.name}, {"params", f.params}, {"rule", f.rule}});
  }
  r["results"]["families"] = list;
  return {r};
}

// --- option wiring ---------------------------------------------------------

void add_rate_options(CLI::App* app, Options& o) {
  app->add_option("--rates", o.rates_json, "rate set as inline JSON or a file path");
  app->add_option("--family", o.family, "builtin family name (see `family list`)");
  app->add_option("--lambda", o.lambda, "family parameter lambda");
  app->add_option("--mu", o.mu, "family parameter mu");
  app->add_option("--alpha", o.alpha, "family parameter alpha");
  app->add_option("--beta", o.beta, "family parameter beta");
  app->add_option("--mu0", o.mu0, "killing rate mu_0");
}

void add_knobs(CLI::App* app, Options& o) {
  app->add_option("--trunc", o.trunc, "truncation depth N")->capture_default_str();
  app->add_option("--tol", o.tol, "tolerance")->capture_default_str();
  app->add_flag("--strict", o.strict, "exit 2 on Inconclusive verdicts");
  app->add_option("--out", o.out, "write the report to this path");
  app->add_option("--format", o.format, "json or csv (csv: transition only)")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
}

void add_times(CLI::App* app, Options& o) {
  app->add_option("--t", o.times, "time point (repeatable; default 0.1 1 5)");
}

void add_measure(CLI::App* app, Options& o) {
  app->add_option("--measure", o.measure_json, "measure as inline JSON or a file path");
}

int exit_code_for(const Error& e) {
  if (dynamic_cast<const InvalidArgument*>(&e) ||
      dynamic_cast<const InsufficientCoefficients*>(&e) ||
      dynamic_cast<const AtomAtZero*>(&e) ||
      dynamic_cast<const NegativeMomentWithAtomAtZero*>(&e) ||
      dynamic_cast<const AllMassAtZero*>(&e) ||
      dynamic_cast<const AtomParameterInfinite*>(&e) ||
      dynamic_cast<const Mu0ExceedsBound*>(&e) || dynamic_cast<const NotSimilar*>(&e)) {
    return kMalformedInput;
  }
  return kNumericFailure;
}

std::string error_type(const Error& e) {
  if (dynamic_cast<const InvalidArgument*>(&e)) return "InvalidArgument";
  if (dynamic_cast<const RangeError*>(&e)) return "RangeError";
  if (dynamic_cast<const PositivityViolation*>(&e)) return "PositivityViolation";
  if (dynamic_cast<const InsufficientCoefficients*>(&e)) return "InsufficientCoefficients";
  if (dynamic_cast<const DegenerateKernel*>(&e)) return "DegenerateKernel";
  if (dynamic_cast<const NotAChainSequencePrefix*>(&e)) return "NotAChainSequencePrefix";
  if (dynamic_cast<const MaximalParamsNonconvergence*>(&e)) {
    return "MaximalParamsNonconvergence";
  }
  if (dynamic_cast<const NegativeMomentWithAtomAtZero*>(&e)) {
    return "NegativeMomentWithAtomAtZero";
  }
  if (dynamic_cast<const AtomAtZero*>(&e)) return "AtomAtZero";
  if (dynamic_cast<const AllMassAtZero*>(&e)) return "AllMassAtZero";
  if (dynamic_cast<const Mu0ExceedsBound*>(&e)) return "Mu0ExceedsBound";
  if (dynamic_cast<const AtomParameterInfinite*>(&e)) return "AtomParameterInfinite";
  if (dynamic_cast<const EigenNonconvergence*>(&e)) return "EigenNonconvergence";
  if (dynamic_cast<const TruncationTooSmall*>(&e)) return "TruncationTooSmall";
  if (dynamic_cast<const NotSimilar*>(&e)) return "NotSimilar";
  return "Error";
}

int emit(const Options& o, const std::string& text, std::ostream& out, std::ostream& err) {
  if (o.out.empty()) {
    out << text;
    return kSuccess;
  }
  std::ofstream file(o.out, std::ios::binary);
  if (!file) {
    err << "bdkit: cannot write '" << o.out << "'\n";
    return kMalformedInput;
  }
  file << text;
  return kSuccess;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Birth-death process toolkit", "bdkit"};
  app.require_subcommand(1);
  std::function<Outcome(const Options&)> action;
  std::string command;

  auto leaf = [&](CLI::App* parent, const std::string& name, const std::string& help,
                  Outcome (*fn)(const Options&)) {
    CLI::App* sub = parent->add_subcommand(name, help);
    add_knobs(sub, o);
    sub->callback([&action, &command, fn, sub, parent] {
      action = fn;
      command = parent->get_parent() ? parent->get_name() + " " + sub->get_name()
                                     : sub->get_name();
    });
    return sub;
  };

  {
    auto* s = leaf(&app, "coeffs", "recurrence coefficients of a rate set", cmd_coeffs);
    add_rate_options(s, o);
  }
  {
    auto* s = leaf(&app, "rates", "rate set from recurrence coefficients and mu0", cmd_rates);
    s->add_option("--coeffs", o.coeffs_json, "{\"c\": [...], \"d\": [...]}")->required();
    s->add_option("--mu0", o.mu0, "killing rate mu_0");
  }
  {
    auto* s = leaf(&app, "dual", "dual rate set", cmd_dual);
    add_rate_options(s, o);
  }
  {
    auto* s = leaf(&app, "shell", "shell coefficients and shell polynomial values", cmd_shell);
    add_rate_options(s, o);
    s->add_option("--x", o.xs, "evaluation point (repeatable)");
    s->add_option("--degree", o.degree, "highest degree evaluated")->capture_default_str();
  }
  {
    auto* s = leaf(&app, "chain", "chain sequence and parameter sequences", cmd_chain);
    add_rate_options(s, o);
    s->add_option("--coeffs", o.coeffs_json, "coefficients instead of a rate set");
  }
  {
    CLI::App* m = app.add_subcommand("measure", "discrete measure operations");
    m->require_subcommand(1);
    auto* ap = leaf(m, "approx", "Gauss quadrature measure of depth N", cmd_measure_approx);
    add_rate_options(ap, o);
    ap->add_option("--coeffs", o.coeffs_json, "coefficients instead of a rate set");
    auto* ph = leaf(m, "phia", "(a delta_0 + phi0)/(a + 1)", cmd_measure_phia);
    add_measure(ph, o);
    ph->add_option("--a", o.a, "atom parameter a >= 0");
    auto* du = leaf(m, "dual", "dual measure for killing rate mu0", cmd_measure_dual);
    add_measure(du, o);
    du->add_option("--mu0", o.mu0, "killing rate mu_0 > 0");
    auto* in = leaf(m, "invert", "recover (psi, a) from a transformed measure",
                    cmd_measure_invert);
    add_measure(in, o);
    auto* mo = leaf(m, "moments", "moments of a measure", cmd_measure_moments);
    add_measure(mo, o);
    mo->add_option("--order", o.orders, "moment order (repeatable; default -1 0 1 2)");
  }
  {
    auto* s = leaf(&app, "classify", "uniqueness and determinacy verdict", cmd_classify);
    add_rate_options(s, o);
  }
  {
    auto* s = leaf(&app, "transition", "transition matrix by uniformization", cmd_transition);
    add_rate_options(s, o);
    add_times(s, o);
    s->add_option("--i", o.rows, "initial state (repeatable; default all)");
  }
  {
    auto* s = leaf(&app, "km", "spectral transition probability", cmd_km);
    add_rate_options(s, o);
    add_times(s, o);
    s->add_option("--i", o.i, "initial state")->capture_default_str();
    s->add_option("--j", o.j, "final state")->capture_default_str();
  }
  {
    CLI::App* v = app.add_subcommand("verify", "numerical identity checks");
    v->require_subcommand(1);
    auto* dp = leaf(v, "dualp", "duality identity between a process and its dual",
                    cmd_verify_dualp);
    add_rate_options(dp, o);
    add_times(dp, o);
    dp->add_option("--i", o.i, "state index i")->capture_default_str();
    dp->add_option("--k", o.k, "state index k")->capture_default_str();
    auto* si = leaf(v, "similarity", "transition functions of similar processes",
                    cmd_verify_similarity);
    add_rate_options(si, o);
    add_times(si, o);
    si->add_option("--against", o.against_json, "second rate set (JSON or path)");
    si->add_option("--against-mu0", o.against_mu0,
                   "second rate set: same coefficients with this mu0");
    auto* ke = leaf(v, "kernel", "shell/kernel polynomial identity", cmd_verify_kernel);
    add_rate_options(ke, o);
    ke->add_option("--x", o.xs, "evaluation point (repeatable; default 0.5 1 5)");
    ke->add_option("--degree", o.degree, "highest degree checked")->capture_default_str();
    auto* ma = leaf(v, "mu0a", "killing rate for atom parameter a", cmd_verify_mu0a);
    add_rate_options(ma, o);
    ma->add_option("--a", o.a, "atom parameter a >= 0 (inf allowed)");
    auto* rt = leaf(v, "roundtrip", "rates -> coefficients -> rates", cmd_verify_roundtrip);
    add_rate_options(rt, o);
  }
  {
    CLI::App* f = app.add_subcommand("family", "builtin rate families");
    f->require_subcommand(1);
    leaf(f, "list", "list builtin families", cmd_family_list);
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kMalformedInput;
  }
  if (!action) {
    err << "bdkit: no command given\n";
    return kMalformedInput;
  }

  try {
    if (o.format == "csv" && command != "transition") {
      throw InvalidArgument("--format csv is only available for transition");
    }
    if (!(o.tol > 0.0)) throw InvalidArgument("--tol must be positive");
    Outcome outcome = action(o);
    const std::string text =
        o.format == "csv" ? outcome.csv : outcome.report.dump(2) + "\n";
    const int code = emit(o, text, out, err);
    if (code != kSuccess) return code;
    if (o.strict && outcome.inconclusive) {
      err << "bdkit: inconclusive result under --strict\n";
      return kNumericFailure;
    }
    return kSuccess;
  } catch (const Error& e) {
    const int code = exit_code_for(e);
    Json report{{"command", command},
                {"error", {{"type", error_type(e)}, {"message", e.what()}}},
                {"exit_code", code}};
    emit(o, report.dump(2) + "\n", out, err);
    err << "bdkit: " << e.what() << "\n";
    return code;
  } catch (const Json::exception& e) {
    err << "bdkit: malformed JSON input: " << e.what() << "\n";
    return kMalformedInput;
  }
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace bdkit::cli
