#include "sublevel/io.hpp"

#include <fstream>
#include <sstream>

namespace sublevel {

Rational rational_from_json(const Json& j) {
  std::string text;
  if (j.is_string())
    text = j.get<std::string>();
  else if (j.is_number())
    text = j.dump();
  else
    throw InputError("expected a number or decimal string, got " + j.dump());
  try {
    return parse_rational(text);
  } catch (const std::exception& e) {
    throw InputError("invalid number '" + text + "': " + e.what());
  }
}

double double_from_json(const Json& j) { return to_double(rational_from_json(j)); }

Json json_number(std::uint64_t x) { return std::to_string(x); }

Json json_point(const RationalPoint& x) {
  Json a = Json::array();
  for (const auto& v : x) a.push_back(json_number(v));
  return a;
}

Json json_point(std::span<const double> x) {
  Json a = Json::array();
  for (double v : x) a.push_back(json_number(v));
  return a;
}

namespace {

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw InputError(std::string("missing field '") + key + "'");
  return j.at(key);
}

RationalPoint point_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw InputError("expected a non-empty array of numbers");
  RationalPoint p;
  for (const auto& v : j) p.push_back(rational_from_json(v));
  return p;
}

}  // namespace

Domain domain_from_json(const Json& j) {
  const std::string kind = field(j, "kind").is_string() ? field(j, "kind").get<std::string>() : "";
  try {
    if (kind == "box") {
      const Json& ivs = field(j, "intervals");
      if (!ivs.is_array() || ivs.empty()) throw InputError("box needs a non-empty 'intervals' array");
      std::vector<Interval> out;
      for (const auto& iv : ivs) {
        if (!iv.is_array() || iv.size() != 2) throw InputError("each interval must be [lo, hi]");
        out.emplace_back(rational_from_json(iv[0]), rational_from_json(iv[1]));
      }
      return Domain::box(std::move(out));
    }
    if (kind == "ball") return Domain::ball(point_from_json(field(j, "center")), rational_from_json(field(j, "radius")));
  } catch (const std::invalid_argument& e) {
    throw InputError(std::string("invalid domain: ") + e.what());
  }
  throw InputError("domain 'kind' must be \"box\" or \"ball\"");
}

Json domain_to_json(const Domain& dom) {
  Json j;
  if (dom.is_box()) {
    j["kind"] = "box";
    Json ivs = Json::array();
    for (const auto& iv : dom.as_box().intervals) ivs.push_back(Json::array({json_number(iv.lo), json_number(iv.hi)}));
    j["intervals"] = ivs;
  } else {
    j["kind"] = "ball";
    j["center"] = json_point(dom.as_ball().center);
    j["radius"] = json_number(dom.as_ball().radius);
  }
  return j;
}

Json read_json_arg(const std::string& text) {
  std::string body = text;
  if (!text.empty() && text[0] == '@') {
    std::ifstream in(text.substr(1));
    if (!in) throw InputError("cannot read file " + text.substr(1));
    std::stringstream ss;
    ss << in.rdbuf();
    body = ss.str();
  }
  try {
    return Json::parse(body);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(std::string("invalid JSON: ") + e.what());
  }
}

Domain parse_domain_arg(const std::string& text) { return domain_from_json(read_json_arg(text)); }

AmplitudeSpec amplitude_from_json(const Json& j) {
  const std::string kind = field(j, "kind").is_string() ? field(j, "kind").get<std::string>() : "";
  if (kind == "indicator") return AmplitudeSpec::indicator();
  if (kind == "smooth_bump") {
    try {
      return AmplitudeSpec::smooth_bump(to_double_point(point_from_json(field(j, "center"))),
                                        double_from_json(field(j, "inner")), double_from_json(field(j, "outer")));
    } catch (const std::invalid_argument& e) {
      throw InputError(std::string("invalid amplitude: ") + e.what());
    }
  }
  throw InputError("amplitude 'kind' must be \"indicator\" or \"smooth_bump\"");
}

Json amplitude_to_json(const AmplitudeSpec& g) {
  Json j;
  if (g.kind() == AmplitudeSpec::Kind::Indicator) {
    j["kind"] = "indicator";
    return j;
  }
  j["kind"] = "smooth_bump";
  j["center"] = json_point(std::span<const double>(g.center()));
  j["inner"] = json_number(g.inner_radius());
  j["outer"] = json_number(g.outer_radius());
  return j;
}

std::string volume_curve_csv(const VolumeCurve& c) {
  std::ostringstream os;
  os << "t,volume,ci_half_width,method,seed\n";
  const std::string m = method_name(c.method);
  const std::uint64_t seed = method_seed(c.method);
  for (std::size_t i = 0; i < c.size(); ++i)
    os << format_double(c.t_values[i]) << ',' << format_double(c.estimates[i]) << ','
       << format_double(c.ci_half_widths[i]) << ',' << m << ',' << seed << '\n';
  return os.str();
}

std::string decay_curve_csv(const DecayCurve& c) {
  std::ostringstream os;
  os << "lambda,magnitude,envelope,converged\n";
  for (std::size_t i = 0; i < c.lambda_values.size(); ++i)
    os << format_double(c.lambda_values[i]) << ',' << format_double(c.magnitudes[i]) << ','
       << format_double(c.envelope[i]) << ',' << (c.converged[i] ? "true" : "false") << '\n';
  return os.str();
}

Json to_json(const VolumeCurve& c) {
  Json j;
  j["method"] = method_name(c.method);
  if (const auto* mc = std::get_if<MonteCarloMethod>(&c.method)) {
    j["seed"] = json_number(mc->seed);
    j["n_samples"] = json_number(static_cast<std::uint64_t>(mc->n_samples));
  } else {
    j["resolution"] = json_number(static_cast<std::uint64_t>(std::get<GridMethod>(c.method).resolution));
  }
  j["domain_volume"] = json_number(c.domain_volume);
  Json rows = Json::array();
  for (std::size_t i = 0; i < c.size(); ++i)
    rows.push_back({{"t", json_number(c.t_values[i])},
                    {"volume", json_number(c.estimates[i])},
                    {"ci_half_width", json_number(c.ci_half_widths[i])}});
  j["points"] = rows;
  return j;
}

Json to_json(const PowerLawFit& f) {
  return {{"alpha_hat", json_number(f.alpha_hat)},
          {"log_c_hat", json_number(f.log_c_hat)},
          {"r_squared", json_number(f.r_squared)},
          {"stderr_alpha", json_number(f.stderr_alpha)},
          {"window", Json::array({json_number(f.window.first), json_number(f.window.second)})},
          {"n_points", json_number(static_cast<std::uint64_t>(f.n_points))},
          {"n_excluded_zero", json_number(static_cast<std::uint64_t>(f.n_excluded_zero))}};
}

Json to_json(const ExponentBracket& b) {
  return {{"bracket", Json::array({json_number(b.alpha), json_number(b.alpha_prime)})},
          {"alpha_source", b.alpha_source},
          {"alpha_prime_source", b.alpha_prime_source}};
}

Json to_json(const BracketReport& r) {
  return {{"passes", r.passes},
          {"alpha_hat", json_number(r.alpha_hat)},
          {"allowed", Json::array({json_number(r.lower_limit), json_number(r.upper_limit)})},
          {"max_upper_ratio", json_number(r.max_upper_ratio)},
          {"min_lower_ratio", json_number(r.min_lower_ratio)},
          {"upper_ratio_slope", json_number(r.upper_ratio_slope)},
          {"lower_ratio_slope", json_number(r.lower_ratio_slope)},
          {"message", r.message}};
}

Json to_json(const WitnessCheck& w) {
  return {{"point", json_point(w.point)},
          {"in_domain", w.in_domain},
          {"is_zero", w.is_zero},
          {"order", w.order.infinite ? Json("infinity") : json_number(static_cast<std::uint64_t>(w.order.value))}};
}

Json to_json(const GoodDirection& g) {
  return {{"direction", json_point(g.rational_direction)},
          {"unit", json_point(std::span<const double>(g.unit))},
          {"top_form_value", json_number(g.top_form_value)},
          {"candidates_tried", json_number(static_cast<std::uint64_t>(g.candidates_tried))}};
}

Json to_json(const StarVerdict& v) {
  Json j{{"verdict", to_string(v.kind)},
         {"vacuous", v.vacuous},
         {"samples_checked", json_number(static_cast<std::uint64_t>(v.samples_checked))}};
  if (v.kind == StarVerdictKind::PassesSampled) {
    j["sign"] = v.sign > 0 ? "positive" : "negative";
  } else {
    j["witness"] = json_point(std::span<const double>(v.witness));
    j["radial_value"] = json_number(v.radial_value);
  }
  return j;
}

Json to_json(const EpsilonFamily& f) {
  Json eps = Json::array(), lam = Json::array();
  for (const auto& e : f.eps) eps.push_back(json_number(e));
  for (const auto& l : f.lambdas) lam.push_back(json_number(l));
  return {{"d", json_number(static_cast<std::uint64_t>(f.d))},
          {"m", json_number(f.m)},
          {"R", json_number(f.R)},
          {"eps", eps},
          {"lambdas", lam},
          {"lambda", json_number(f.lambda)},
          {"smallness", satisfies_smallness(f)},
          {"dominance", satisfies_dominance(f)}};
}

Json to_json(const DecayCurve& c) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < c.lambda_values.size(); ++i)
    rows.push_back({{"lambda", json_number(c.lambda_values[i])},
                    {"magnitude", json_number(c.magnitudes[i])},
                    {"envelope", json_number(c.envelope[i])},
                    {"converged", static_cast<bool>(c.converged[i])}});
  return {{"amplitude", amplitude_to_json(c.amplitude)},
          {"panels_per_wavelength", json_number(c.budget.panels_per_wavelength)},
          {"points", rows}};
}

Json to_json(const DecayFit& f) {
  Json j = to_json(f.loglog);
  j["beta_hat"] = json_number(f.beta_hat);
  return j;
}

Json to_json(const DecayBoundReport& r) {
  return {{"max_scaled_envelope", json_number(r.max_scaled)},
          {"min_scaled_envelope", json_number(r.min_scaled)},
          {"spread", json_number(r.spread)},
          {"amplitude_norm_sum", json_number(r.norm_sum)},
          {"normalized_constant", json_number(r.normalized_constant)}};
}

Json to_json(const VdcReport& r) {
  Json pts = Json::array();
  for (const auto& p : r.points)
    pts.push_back({{"lambda", json_number(p.lambda)},
                   {"magnitude", json_number(p.magnitude)},
                   {"bound", json_number(p.bound)},
                   {"holds", p.holds}});
  return {{"all_hold", r.all_hold}, {"max_ratio", json_number(r.max_ratio)}, {"points", pts}};
}

Json to_json(const GradientSplit& s) {
  Json j{{"vol_At", json_number(s.vol_At)},
         {"vol_Bt", json_number(s.vol_Bt)},
         {"ci_half_width", json_number(s.ci_half_width)},
         {"hits_At", json_number(s.hits_At)},
         {"hits_Bt", json_number(s.hits_Bt)},
         {"total", json_number(s.total)}};
  if (s.bound_ratio) j["bound_ratio"] = json_number(*s.bound_ratio);
  return j;
}

Json to_json(const IndexBracket& b) {
  Json j{{"bracket", Json::array({json_number(b.lower), json_number(b.upper)})}, {"determined", b.determined()}};
  if (b.determined()) j["index"] = json_number(b.lower);
  if (b.fitted) j["fitted"] = json_number(*b.fitted);
  if (b.fitted_stderr) j["fitted_stderr"] = json_number(*b.fitted_stderr);
  return j;
}

Json to_json(const SingularReport& r, const std::optional<ExponentBracket>& bracket) {
  Json j;
  j["gamma"] = json_number(r.gamma);
  j["verdict"] = to_string(r.verdict);
  j["value"] = r.verdict == SingularVerdict::Convergent ? json_number(r.value) : Json(nullptr);
  j["error"] = r.verdict == SingularVerdict::Convergent ? json_number(r.error) : Json(nullptr);
  j["alpha_hat"] = r.alpha_hat ? json_number(*r.alpha_hat) : Json(nullptr);
  j["bracket"] = bracket ? Json::array({json_number(bracket->alpha), json_number(bracket->alpha_prime)}) : Json(nullptr);
  Json m;
  m["reason"] = r.reason;
  if (r.theorem) m["theorem"] = to_string(*r.theorem);
  m["t_min"] = json_number(r.t_min);
  m["t_max"] = json_number(r.t_max);
  m["body"] = json_number(r.body);
  m["top_mass_term"] = json_number(r.top_mass_term);
  m["tail"] = json_number(r.tail);
  m["mc_error"] = json_number(r.mc_error);
  m["discretization_error"] = json_number(r.discretization_error);
  m["tail_error"] = json_number(r.tail_error);
  if (r.stderr_alpha) m["stderr_alpha"] = json_number(*r.stderr_alpha);
  if (r.by_parts_value) m["by_parts_value"] = json_number(*r.by_parts_value);
  if (r.direct_value) {
    m["direct_value"] = json_number(*r.direct_value);
    m["direct_error"] = json_number(*r.direct_error);
    m["direct_agrees"] = *r.direct_agrees;
  }
  j["method"] = m;
  return j;
}

}  // namespace sublevel
