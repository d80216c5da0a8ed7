#include "sublevel/commands.hpp"

#include <cmath>
#include <set>
#include <sstream>

#include "sublevel/parser.hpp"
#include "sublevel/roots.hpp"

namespace sublevel {

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::uint64_t uint_from_json(const Json& j) {
  const Rational q = rational_from_json(j);
  if (q < 0 || q.get_den() != 1 || !q.get_num().fits_ulong_p())
    throw InputError("expected a non-negative integer, got " + j.dump());
  return q.get_num().get_ui();
}

std::string string_from_json(const Json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number()) return j.dump();
  throw InputError("expected a string, got " + j.dump());
}

Json size_json(std::size_t v) { return json_number(static_cast<std::uint64_t>(v)); }

}  // namespace

Json config_to_json(const AnalysisConfig& c) {
  Json j;
  j["poly"] = c.poly;
  j["domain"] = c.domain;
  j["seed"] = json_number(c.seed);
  j["method"] = c.method;
  j["samples"] = size_json(c.samples);
  j["grid"] = size_json(c.grid);
  j["workers"] = size_json(c.workers);
  j["format"] = c.format;
  j["out"] = c.out ? Json(*c.out) : Json(nullptr);
  j["t_min"] = json_number(c.t_min);
  j["t_max"] = json_number(c.t_max);
  j["n_points"] = size_json(c.n_points);
  j["fit_window"] = c.fit_window ? Json::array({json_number(c.fit_window->first), json_number(c.fit_window->second)})
                                 : Json(nullptr);
  j["d_prime"] = c.d_prime ? size_json(*c.d_prime) : Json(nullptr);
  j["k_prime"] = c.k_prime ? size_json(*c.k_prime) : Json(nullptr);
  j["witnesses"] = c.witnesses;
  j["eps0"] = c.eps0;
  j["star_samples"] = size_json(c.star_samples);
  j["margin"] = json_number(c.margin);
  j["lambda_min"] = json_number(c.lambda_min);
  j["lambda_max"] = json_number(c.lambda_max);
  j["lambda_points"] = size_json(c.lambda_points);
  j["amplitude"] = c.amplitude;
  j["panels_per_wavelength"] = json_number(c.panels_per_wavelength);
  j["min_panels"] = size_json(c.min_panels);
  j["nodes_per_panel"] = size_json(c.nodes_per_panel);
  Json g = Json::array();
  for (double v : c.gammas) g.push_back(json_number(v));
  j["gammas"] = g;
  j["singular_t_min"] = json_number(c.singular_t_min);
  j["direct_samples"] = size_json(c.direct_samples);
  j["lemma_d"] = size_json(c.lemma_d);
  j["lemma_m"] = c.lemma_m;
  j["lemma_R"] = c.lemma_R;
  j["trials"] = size_json(c.trials);
  j["vdc_lo"] = c.vdc_lo;
  j["vdc_hi"] = c.vdc_hi;
  j["vdc_t"] = c.vdc_t;
  j["per_decade"] = size_json(c.per_decade);
  return j;
}

AnalysisConfig config_from_json(const Json& j) {
  if (!j.is_object()) throw InputError("config must be a JSON object");
  AnalysisConfig c;
  const Json ref = config_to_json(c);
  for (const auto& [key, value] : j.items())
    if (!ref.contains(key)) throw InputError("unknown config key '" + key + "'");
  auto has = [&](const char* k) { return j.contains(k) && !j.at(k).is_null(); };
  try {
    if (has("poly")) c.poly = string_from_json(j["poly"]);
    if (has("domain")) c.domain = j["domain"];
    if (has("seed")) c.seed = uint_from_json(j["seed"]);
    if (has("method")) c.method = string_from_json(j["method"]);
    if (has("samples")) c.samples = uint_from_json(j["samples"]);
    if (has("grid")) c.grid = uint_from_json(j["grid"]);
    if (has("workers")) c.workers = static_cast<unsigned>(uint_from_json(j["workers"]));
    if (has("format")) c.format = string_from_json(j["format"]);
    if (has("out")) c.out = string_from_json(j["out"]);
    if (has("t_min")) c.t_min = double_from_json(j["t_min"]);
    if (has("t_max")) c.t_max = double_from_json(j["t_max"]);
    if (has("n_points")) c.n_points = uint_from_json(j["n_points"]);
    if (has("fit_window")) {
      const Json& w = j["fit_window"];
      if (!w.is_array() || w.size() != 2) throw InputError("fit_window must be [lo, hi]");
      c.fit_window = std::pair{double_from_json(w[0]), double_from_json(w[1])};
    }
    if (has("d_prime")) c.d_prime = static_cast<unsigned>(uint_from_json(j["d_prime"]));
    if (has("k_prime")) c.k_prime = static_cast<unsigned>(uint_from_json(j["k_prime"]));
    if (has("witnesses")) {
      if (!j["witnesses"].is_array()) throw InputError("witnesses must be an array of points");
      for (const auto& w : j["witnesses"]) {
        if (!w.is_array()) throw InputError("each witness must be an array of numbers");
        std::vector<std::string> pt;
        for (const auto& v : w) pt.push_back(string_from_json(v));
        c.witnesses.push_back(pt);
      }
    }
    if (has("eps0")) c.eps0 = string_from_json(j["eps0"]);
    if (has("star_samples")) c.star_samples = uint_from_json(j["star_samples"]);
    if (has("margin")) c.margin = double_from_json(j["margin"]);
    if (has("lambda_min")) c.lambda_min = double_from_json(j["lambda_min"]);
    if (has("lambda_max")) c.lambda_max = double_from_json(j["lambda_max"]);
    if (has("lambda_points")) c.lambda_points = uint_from_json(j["lambda_points"]);
    if (has("amplitude")) c.amplitude = j["amplitude"];
    if (has("panels_per_wavelength")) c.panels_per_wavelength = double_from_json(j["panels_per_wavelength"]);
    if (has("min_panels")) c.min_panels = uint_from_json(j["min_panels"]);
    if (has("nodes_per_panel")) c.nodes_per_panel = uint_from_json(j["nodes_per_panel"]);
    if (has("gammas")) {
      if (!j["gammas"].is_array()) throw InputError("gammas must be an array");
      c.gammas.clear();
      for (const auto& g : j["gammas"]) c.gammas.push_back(double_from_json(g));
    }
    if (has("singular_t_min")) c.singular_t_min = double_from_json(j["singular_t_min"]);
    if (has("direct_samples")) c.direct_samples = uint_from_json(j["direct_samples"]);
    if (has("lemma_d")) c.lemma_d = static_cast<unsigned>(uint_from_json(j["lemma_d"]));
    if (has("lemma_m")) c.lemma_m = string_from_json(j["lemma_m"]);
    if (has("lemma_R")) c.lemma_R = string_from_json(j["lemma_R"]);
    if (has("trials")) c.trials = uint_from_json(j["trials"]);
    if (has("vdc_lo")) c.vdc_lo = string_from_json(j["vdc_lo"]);
    if (has("vdc_hi")) c.vdc_hi = string_from_json(j["vdc_hi"]);
    if (has("vdc_t")) c.vdc_t = string_from_json(j["vdc_t"]);
    if (has("per_decade")) c.per_decade = uint_from_json(j["per_decade"]);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("invalid config: ") + e.what());
  }
  return c;
}

namespace {

Polynomial require_poly(const AnalysisConfig& c) {
  if (c.poly.empty()) throw UsageError("--poly is required");
  return parse_poly(c.poly);
}

Domain require_domain(const AnalysisConfig& c, const Polynomial& p) {
  if (c.domain.is_object() && c.domain.empty()) throw UsageError("--domain is required");
  Domain dom = domain_from_json(c.domain);
  if (p.n_vars() > dom.dim())
    throw InputError("polynomial uses " + std::to_string(p.n_vars()) + " variables but the domain has dimension " +
                     std::to_string(dom.dim()));
  return dom;
}

VolumeMethod method_of(const AnalysisConfig& c) {
  if (c.method == "montecarlo") return MonteCarloMethod{c.seed, c.samples};
  if (c.method == "grid") return GridMethod{c.grid};
  throw InputError("method must be \"montecarlo\" or \"grid\"");
}

Rational rational_arg(const std::string& s, const char* what) {
  try {
    return parse_rational(s);
  } catch (const std::exception& e) {
    throw InputError(std::string("invalid ") + what + " '" + s + "': " + e.what());
  }
}

void check_format(const AnalysisConfig& c, bool csv_allowed) {
  if (c.format != "json" && c.format != "csv") throw UsageError("--format must be csv or json");
  if (c.format == "csv" && !csv_allowed) throw UsageError("this command only writes JSON");
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

bool origin_interior(const Domain& dom) {
  if (dom.is_box()) {
    for (const auto& iv : dom.as_box().intervals)
      if (!(iv.lo < 0 && iv.hi > 0)) return false;
    return true;
  }
  const auto& b = dom.as_ball();
  Rational r2(0);
  for (const auto& v : b.center) r2 += v * v;
  return r2 < b.radius * b.radius;
}

// Star check in the configured variables; the upper exponent n/d applies when
// it passes non-vacuously and the origin is interior to the domain.
struct StarInfo {
  StarVerdict verdict;
  bool certified = false;
};

StarInfo star_info(const Polynomial& p, const Domain& dom, const AnalysisConfig& c) {
  StarInfo s;
  s.verdict = star_shape_check(extend_variables(p, dom.dim()), rational_arg(c.eps0, "eps0"), derive_seed(c.seed, 0x57A2),
                               c.star_samples);
  s.certified = s.verdict.kind == StarVerdictKind::PassesSampled && !s.verdict.vacuous && origin_interior(dom);
  return s;
}

bool strictly_interior(const Domain& dom, const RationalPoint& x) {
  if (x.size() != dom.dim()) return false;
  if (dom.is_box()) {
    const auto& iv = dom.as_box().intervals;
    for (std::size_t i = 0; i < x.size(); ++i)
      if (!(iv[i].lo < x[i] && x[i] < iv[i].hi)) return false;
    return true;
  }
  const auto& b = dom.as_ball();
  Rational r2(0);
  for (std::size_t i = 0; i < x.size(); ++i) r2 += (x[i] - b.center[i]) * (x[i] - b.center[i]);
  return r2 < b.radius * b.radius;
}

std::vector<RationalPoint> witness_points(const AnalysisConfig& c) {
  std::vector<RationalPoint> out;
  for (const auto& w : c.witnesses) {
    RationalPoint pt;
    for (const auto& s : w) pt.push_back(rational_arg(s, "witness coordinate"));
    out.push_back(std::move(pt));
  }
  return out;
}

// Without explicit d' and k', any interior zero of order d' is a
// 0-dimensional piece of Z_{d'}, which gives the lower exponent n/d'. The
// witnesses and the origin are the candidates; the largest order wins.
std::optional<ExponentBracket> bracket_of(const Polynomial& p, const Domain& dom, const AnalysisConfig& c,
                                          bool star_certified) {
  if (c.d_prime || c.k_prime) {
    if (!c.d_prime || !c.k_prime) throw UsageError("--d-prime and --k-prime must be given together");
    return exponent_bracket(p, dom, *c.d_prime, *c.k_prime, star_certified);
  }
  if (p.is_zero() || p.degree().value() < 1) return std::nullopt;
  std::vector<RationalPoint> candidates = witness_points(c);
  candidates.emplace_back(dom.dim(), Rational(0));
  const Polynomial pe = extend_variables(p, dom.dim());
  std::optional<std::pair<unsigned, RationalPoint>> best;
  for (const auto& x : candidates) {
    if (!strictly_interior(dom, x)) continue;
    const VanishingOrder o = order_at(pe, x);
    if (o.infinite || o.value == 0) continue;
    if (!best || o.value > best->first) best = std::pair{o.value, x};
  }
  if (!best) return std::nullopt;
  ExponentBracket b = exponent_bracket(p, dom, best->first, 0, star_certified);
  std::ostringstream where;
  for (std::size_t i = 0; i < best->second.size(); ++i) where << (i ? "," : "") << to_string(best->second[i]);
  b.alpha_prime_source += "; inferred from the interior zero (" + where.str() + ")";
  return b;
}

Json bracket_json(const std::optional<ExponentBracket>& b) { return b ? to_json(*b) : Json(nullptr); }

}  // namespace

CommandOutput cmd_analyze(const AnalysisConfig& c) {
  check_format(c, false);
  const Polynomial p = require_poly(c);
  const Domain dom = require_domain(c, p);
  Json j;
  j["polynomial"] = to_string(p);
  j["n_vars"] = size_json(p.n_vars());
  j["degree"] = p.is_zero() ? Json("-infinity") : size_json(p.degree().value());
  j["homogeneous"] = p.is_homogeneous();
  Json degs = Json::array();
  for (const auto& [d, _] : homogeneous_components(p)) degs.push_back(size_json(d));
  j["homogeneous_degrees"] = degs;
  j["domain"] = domain_to_json(dom);
  j["domain_volume"] = json_number(domain_volume(dom));
  const Polynomial pe = extend_variables(p, dom.dim());
  if (!p.is_zero() && p.degree().value() >= 1)
    j["good_direction"] = to_json(find_good_direction(pe, c.seed));
  else
    j["good_direction"] = nullptr;
  const StarInfo star = star_info(p, dom, c);
  j["star"] = to_json(star.verdict);
  j["origin_interior"] = origin_interior(dom);
  j["star_certified"] = star.certified;
  if (p.is_homogeneous() && !p.is_zero()) j["euler_identity"] = euler_identity_check(p);
  Json ws = Json::array();
  for (const auto& pt : witness_points(c)) ws.push_back(to_json(check_witness(p, dom, pt)));
  j["witnesses"] = ws;
  j["bracket"] = bracket_json(bracket_of(p, dom, c, star.certified));
  return {dump(j), {}};
}

CommandOutput cmd_volume(const AnalysisConfig& c) {
  check_format(c, true);
  const Polynomial p = require_poly(c);
  const Domain dom = require_domain(c, p);
  const VolumeCurve curve = volume_sweep(p, dom, c.t_min, c.t_max, c.n_points, method_of(c), c.workers);
  Json summary;
  std::optional<PowerLawFit> fit;
  try {
    fit = fit_power_law(curve, c.fit_window);
    summary["fit"] = to_json(*fit);
  } catch (const std::invalid_argument& e) {
    summary["fit"] = nullptr;
    summary["fit_error"] = e.what();
  }
  const std::optional<ExponentBracket> bracket = bracket_of(p, dom, c, star_info(p, dom, c).certified);
  summary["bracket"] = bracket_json(bracket);
  summary["bracket_report"] = fit && bracket ? to_json(verify_bracket(curve, *fit, *bracket, c.margin)) : Json(nullptr);

  if (c.format == "csv") {
    CommandOutput out{volume_curve_csv(curve), {}};
    if (c.out) out.extra_files.emplace_back(*c.out + ".fit.json", dump(summary));
    return out;
  }
  Json j;
  j["curve"] = to_json(curve);
  for (const auto& [k, v] : summary.items()) j[k] = v;
  return {dump(j), {}};
}

CommandOutput cmd_oscillatory(const AnalysisConfig& c) {
  check_format(c, true);
  const Polynomial p = require_poly(c);
  const Domain dom = require_domain(c, p);
  const AmplitudeSpec g = amplitude_from_json(c.amplitude);
  const QuadratureBudget budget{c.panels_per_wavelength, c.min_panels, c.nodes_per_panel};
  const DecayCurve curve = decay_sweep(p, g, dom, c.lambda_min, c.lambda_max, c.lambda_points, budget, c.workers);
  Json summary;
  try {
    summary["fit"] = to_json(fit_decay(curve, c.fit_window));
  } catch (const std::invalid_argument& e) {
    summary["fit"] = nullptr;
    summary["fit_error"] = e.what();
  }
  if (!p.is_zero() && p.degree().value() >= 1)
    summary["bound"] = to_json(decay_bound_check(curve, p.degree().value(), dom));
  std::size_t unconverged = 0;
  for (bool ok : curve.converged) unconverged += !ok;
  summary["unconverged_points"] = size_json(unconverged);
  if (c.format == "csv") {
    CommandOutput out{decay_curve_csv(curve), {}};
    if (c.out) out.extra_files.emplace_back(*c.out + ".fit.json", dump(summary));
    return out;
  }
  Json j;
  j["curve"] = to_json(curve);
  for (const auto& [k, v] : summary.items()) j[k] = v;
  return {dump(j), {}};
}

CommandOutput cmd_singular(const AnalysisConfig& c) {
  check_format(c, true);
  const Polynomial p = require_poly(c);
  const Domain dom = require_domain(c, p);
  const double T = sup_abs_on_domain(p, dom, 256);
  if (!(T > 0)) throw std::runtime_error("polynomial vanishes on the sampling grid; nothing to integrate");
  if (!(c.singular_t_min < T)) throw std::invalid_argument("singular_t_min must be below sup |p| = " + format_double(T));
  const auto grid = log_grid(c.singular_t_min, T * (1 + 1e-6), c.n_points);
  const VolumeCurve curve = volume_curve(p, dom, grid, method_of(c), c.workers);
  std::optional<PowerLawFit> fit;
  Json header;
  header["t_min"] = json_number(grid.front());
  header["t_max"] = json_number(grid.back());
  try {
    fit = fit_power_law(curve, c.fit_window);
    header["fit"] = to_json(*fit);
  } catch (const std::invalid_argument& e) {
    header["fit"] = nullptr;
    header["fit_error"] = e.what();
  }
  const std::optional<ExponentBracket> bracket = bracket_of(p, dom, c, star_info(p, dom, c).certified);
  header["index"] = bracket ? to_json(integration_index(*bracket, fit)) : Json(nullptr);

  const SingularOptions opts{c.direct_samples, c.seed, c.workers};
  Json reports = Json::array();
  std::ostringstream csv;
  csv << "gamma,verdict,value,error,theorem\n";
  for (double gamma : c.gammas) {
    const SingularReport r = singular_integral(p, dom, gamma, curve, fit, bracket, opts);
    reports.push_back(to_json(r, bracket));
    const bool conv = r.verdict == SingularVerdict::Convergent;
    csv << format_double(gamma) << ',' << to_string(r.verdict) << ',' << (conv ? format_double(r.value) : "") << ','
        << (conv ? format_double(r.error) : "") << ',' << (r.theorem ? to_string(*r.theorem) : "") << '\n';
  }
  if (c.format == "csv") {
    CommandOutput out{csv.str(), {}};
    if (c.out) {
      header["reports"] = reports;
      out.extra_files.emplace_back(*c.out + ".json", dump(header));
    }
    return out;
  }
  header["reports"] = reports;
  return {dump(header), {}};
}

CommandOutput cmd_dichotomy(const AnalysisConfig& c) {
  check_format(c, true);
  const EpsilonFamily fam =
      build_epsilon_family(c.lemma_d, rational_arg(c.lemma_m, "m"), rational_arg(c.lemma_R, "R"));
  const DichotomyTally t = run_dichotomy_trials(fam, c.trials, c.seed, c.workers);
  if (c.format == "csv") {
    std::ostringstream os;
    os << "p,eps,lambda\n";
    for (unsigned p = 0; p <= fam.d; ++p) os << p << ',' << to_string(fam.eps[p]) << ',' << to_string(fam.lambdas[p]) << '\n';
    return {os.str(), {}};
  }
  Json tally;
  tally["trials"] = size_json(t.trials);
  tally["derivative_case"] = size_json(t.derivative_case);
  tally["constant_case"] = size_json(t.constant_case);
  tally["violations"] = size_json(t.violations);
  Json by = Json::array();
  for (auto n : t.by_order) by.push_back(size_json(n));
  tally["derivative_case_by_order"] = by;
  tally["violation_details"] = t.violation_details;
  Json j;
  j["family"] = to_json(fam);
  j["tally"] = tally;
  return {dump(j), {}};
}

CommandOutput cmd_star_check(const AnalysisConfig& c) {
  check_format(c, false);
  const Polynomial p = require_poly(c);
  Json j;
  j["polynomial"] = to_string(p);
  j["eps0"] = json_number(rational_arg(c.eps0, "eps0"));
  j["star"] = to_json(star_shape_check(p, rational_arg(c.eps0, "eps0"), derive_seed(c.seed, 0x57A2), c.star_samples));
  if (p.is_homogeneous() && !p.is_zero()) j["euler_identity"] = euler_identity_check(p);
  return {dump(j), {}};
}

CommandOutput cmd_vdc_check(const AnalysisConfig& c) {
  check_format(c, true);
  if (c.poly.empty()) throw UsageError("--poly is required");
  Polynomial p(1);
  try {
    p = parse_poly(c.poly);
  } catch (const ParseError&) {
    p = parse_poly(c.poly, std::vector<std::string>{"s"});
  }
  if (p.n_vars() > 1) throw InputError("vdc-check needs a univariate polynomial");
  std::vector<Rational> coeffs(p.is_zero() ? 1 : p.degree().value() + 1, Rational(0));
  for (const auto& [e, v] : p.terms()) coeffs[e.empty() ? 0 : e[0]] = v;
  const Interval I(rational_arg(c.vdc_lo, "interval end"), rational_arg(c.vdc_hi, "interval end"));
  const Rational t = rational_arg(c.vdc_t, "t");
  if (!(c.lambda_min > 0) || !(c.lambda_max > c.lambda_min) || c.per_decade < 1)
    throw std::invalid_argument("vdc-check needs 0 < lambda_min < lambda_max and per_decade >= 1");
  const auto n = static_cast<std::size_t>(std::llround(c.per_decade * std::log10(c.lambda_max / c.lambda_min))) + 1;
  const auto grid = log_grid(c.lambda_min, c.lambda_max, std::max<std::size_t>(n, 2));
  const QuadratureBudget budget{c.panels_per_wavelength, c.min_panels, c.nodes_per_panel};
  const VdcReport r = van_der_corput_check(UPoly(coeffs), I, t, grid, budget);
  if (c.format == "csv") {
    std::ostringstream os;
    os << "lambda,magnitude,bound,holds\n";
    for (const auto& pt : r.points)
      os << format_double(pt.lambda) << ',' << format_double(pt.magnitude) << ',' << format_double(pt.bound) << ','
         << (pt.holds ? "true" : "false") << '\n';
    return {os.str(), {}};
  }
  Json j = to_json(r);
  j["polynomial"] = to_string(p);
  j["interval"] = Json::array({json_number(I.lo), json_number(I.hi)});
  j["t"] = json_number(t);
  return {dump(j), {}};
}

CommandOutput run_command(const std::string& name, const AnalysisConfig& c) {
  if (name == "analyze") return cmd_analyze(c);
  if (name == "volume") return cmd_volume(c);
  if (name == "oscillatory") return cmd_oscillatory(c);
  if (name == "singular") return cmd_singular(c);
  if (name == "lemma2") return cmd_dichotomy(c);
  if (name == "star-check") return cmd_star_check(c);
  if (name == "vdc-check") return cmd_vdc_check(c);
  throw UsageError("unknown command '" + name + "'");
}

int exit_code_for_current_exception() {
  try {
    throw;
  } catch (const UsageError&) {
    return kExitUsage;
  } catch (const ParseError&) {
    return kExitParse;
  } catch (const InputError&) {
    return kExitParse;
  } catch (const nlohmann::json::exception&) {
    return kExitParse;
  } catch (...) {
    return kExitNumeric;
  }
}

}  // namespace sublevel
