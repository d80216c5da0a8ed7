// Python bindings. Domains and amplitudes are plain dicts in the JSON schema
// the CLI accepts; exact rationals come back as fractions.Fraction.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sublevel/commands.hpp"
#include "sublevel/parser.hpp"
#include "sublevel/roots.hpp"

namespace py = pybind11;
using namespace sublevel;

namespace {

Json to_cpp_json(const py::object& obj) {
  const std::string text = py::module_::import("json").attr("dumps")(obj).cast<std::string>();
  return Json::parse(text);
}

py::object to_py_json(const Json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

py::object fraction(const Rational& q) { return py::module_::import("fractions").attr("Fraction")(to_string(q)); }

// Accepts int, str ("3/4", "0.25") or Fraction; floats are taken at their exact binary value.
Rational rational_arg(const py::handle& h) {
  if (py::isinstance<py::float_>(h)) return exact_rational(h.cast<double>());
  return parse_rational(py::str(h).cast<std::string>());
}

Domain domain_arg(const py::object& obj) { return domain_from_json(to_cpp_json(obj)); }

VolumeMethod method_arg(const std::string& method, std::uint64_t seed, std::size_t samples, std::size_t grid) {
  if (method == "montecarlo") return MonteCarloMethod{seed, samples};
  if (method == "grid") return GridMethod{grid};
  throw std::invalid_argument("method must be \"montecarlo\" or \"grid\"");
}

AmplitudeSpec amplitude_arg(const py::object& obj) {
  if (obj.is_none()) return AmplitudeSpec::indicator();
  return amplitude_from_json(to_cpp_json(obj));
}

std::optional<std::pair<double, double>> window_arg(const py::object& obj) {
  if (obj.is_none()) return std::nullopt;
  const auto w = obj.cast<std::pair<double, double>>();
  return w;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Sub-level set volumes, oscillatory integrals and singular integrals of real polynomials";

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<HypothesisViolation>(m, "HypothesisViolation", PyExc_ArithmeticError);

  py::class_<Polynomial>(m, "Polynomial")
      .def_property_readonly("n_vars", &Polynomial::n_vars)
      .def_property_readonly("degree",
                             [](const Polynomial& p) -> py::object {
                               if (p.is_zero()) return py::none();
                               return py::int_(p.degree().value());
                             })
      .def("evaluate",
           [](const Polynomial& p, const std::vector<double>& x) {
             if (x.size() != p.n_vars()) throw std::invalid_argument("point has the wrong dimension");
             return evaluate(p, std::span<const double>(x));
           })
      .def("evaluate_exact",
           [](const Polynomial& p, const py::list& x) {
             RationalPoint q;
             for (const auto& v : x) q.push_back(rational_arg(v));
             if (q.size() != p.n_vars()) throw std::invalid_argument("point has the wrong dimension");
             return fraction(evaluate(p, std::span<const Rational>(q)));
           })
      .def("derivative", [](const Polynomial& p, std::size_t var) { return derivative(p, var); })
      .def("is_homogeneous", &Polynomial::is_homogeneous)
      .def("__str__", [](const Polynomial& p) { return to_string(p); })
      .def("__repr__", [](const Polynomial& p) { return "Polynomial('" + to_string(p) + "')"; });

  m.def("parse", [](const std::string& text) { return parse_poly(text); }, py::arg("text"));

  m.def("domain_volume", [](const py::object& dom) { return domain_volume(domain_arg(dom)); }, py::arg("domain"));

  py::class_<VolumeCurve>(m, "VolumeCurve")
      .def_readonly("t_values", &VolumeCurve::t_values)
      .def_readonly("estimates", &VolumeCurve::estimates)
      .def_readonly("ci_half_widths", &VolumeCurve::ci_half_widths)
      .def_readonly("hits", &VolumeCurve::hits)
      .def_readonly("total", &VolumeCurve::total)
      .def_readonly("domain_volume", &VolumeCurve::domain_volume)
      .def_property_readonly("method", [](const VolumeCurve& c) { return method_name(c.method); })
      .def("to_csv", [](const VolumeCurve& c) { return volume_curve_csv(c); })
      .def("__len__", &VolumeCurve::size);

  py::class_<PowerLawFit>(m, "PowerLawFit")
      .def_readonly("alpha_hat", &PowerLawFit::alpha_hat)
      .def_readonly("log_c_hat", &PowerLawFit::log_c_hat)
      .def_readonly("r_squared", &PowerLawFit::r_squared)
      .def_readonly("stderr_alpha", &PowerLawFit::stderr_alpha)
      .def_readonly("window", &PowerLawFit::window)
      .def_readonly("n_points", &PowerLawFit::n_points);

  py::class_<ExponentBracket>(m, "ExponentBracket")
      .def_property_readonly("alpha", [](const ExponentBracket& b) { return fraction(b.alpha); })
      .def_property_readonly("alpha_prime", [](const ExponentBracket& b) { return fraction(b.alpha_prime); })
      .def_readonly("alpha_source", &ExponentBracket::alpha_source)
      .def_readonly("alpha_prime_source", &ExponentBracket::alpha_prime_source);

  m.def(
      "estimate_volume",
      [](const Polynomial& p, const py::object& dom, double t, const std::string& method, std::uint64_t seed,
         std::size_t samples, std::size_t grid, unsigned workers) {
        const VolumeEstimate e = estimate_volume(p, domain_arg(dom), t, method_arg(method, seed, samples, grid), workers);
        py::dict d;
        d["estimate"] = e.estimate;
        d["ci_half_width"] = e.ci_half_width;
        d["hits"] = e.hits;
        d["total"] = e.total;
        return d;
      },
      py::arg("poly"), py::arg("domain"), py::arg("t"), py::arg("method") = "montecarlo", py::arg("seed") = 0,
      py::arg("samples") = 1'000'000, py::arg("grid") = 256, py::arg("workers") = 1);

  m.def(
      "volume_sweep",
      [](const Polynomial& p, const py::object& dom, double t_min, double t_max, std::size_t n_points,
         const std::string& method, std::uint64_t seed, std::size_t samples, std::size_t grid, unsigned workers) {
        return volume_sweep(p, domain_arg(dom), t_min, t_max, n_points, method_arg(method, seed, samples, grid),
                            workers);
      },
      py::arg("poly"), py::arg("domain"), py::arg("t_min"), py::arg("t_max"), py::arg("n_points") = 40,
      py::arg("method") = "montecarlo", py::arg("seed") = 0, py::arg("samples") = 1'000'000, py::arg("grid") = 256,
      py::arg("workers") = 1);

  m.def(
      "volume_curve",
      [](const Polynomial& p, const py::object& dom, const std::vector<double>& t_grid, const std::string& method,
         std::uint64_t seed, std::size_t samples, std::size_t grid, unsigned workers) {
        return volume_curve(p, domain_arg(dom), t_grid, method_arg(method, seed, samples, grid), workers);
      },
      py::arg("poly"), py::arg("domain"), py::arg("t_grid"), py::arg("method") = "montecarlo", py::arg("seed") = 0,
      py::arg("samples") = 1'000'000, py::arg("grid") = 256, py::arg("workers") = 1);

  m.def(
      "fit_power_law",
      [](const VolumeCurve& c, const py::object& window) { return fit_power_law(c, window_arg(window)); },
      py::arg("curve"), py::arg("window") = py::none());

  m.def(
      "exponent_bracket",
      [](const Polynomial& p, const py::object& dom, unsigned d_prime, unsigned k_prime, bool star_certified) {
        return exponent_bracket(p, domain_arg(dom), d_prime, k_prime, star_certified);
      },
      py::arg("poly"), py::arg("domain"), py::arg("d_prime"), py::arg("k_prime"), py::arg("star_certified") = false);

  m.def(
      "verify_bracket",
      [](const VolumeCurve& c, const PowerLawFit& fit, const ExponentBracket& b, double margin) {
        const BracketReport r = verify_bracket(c, fit, b, margin);
        py::dict d;
        d["alpha_hat"] = r.alpha_hat;
        d["lower_limit"] = r.lower_limit;
        d["upper_limit"] = r.upper_limit;
        d["exponent_in_range"] = r.exponent_in_range;
        d["max_upper_ratio"] = r.max_upper_ratio;
        d["min_lower_ratio"] = r.min_lower_ratio;
        d["passes"] = r.passes;
        d["message"] = r.message;
        return d;
      },
      py::arg("curve"), py::arg("fit"), py::arg("bracket"), py::arg("margin") = 0.02);

  m.def(
      "oscillatory_integral",
      [](const Polynomial& p, const py::object& dom, double lambda, const py::object& amplitude,
         double panels_per_wavelength, std::size_t min_panels, std::size_t nodes_per_panel) {
        const OscillatoryResult r = oscillatory_integral(p, amplitude_arg(amplitude), domain_arg(dom), lambda,
                                                         {panels_per_wavelength, min_panels, nodes_per_panel});
        py::dict d;
        d["magnitude"] = r.magnitude;
        d["real"] = r.real;
        d["imag"] = r.imag;
        d["error_estimate"] = r.error_estimate;
        d["converged"] = r.converged;
        return d;
      },
      py::arg("poly"), py::arg("domain"), py::arg("lam"), py::arg("amplitude") = py::none(),
      py::arg("panels_per_wavelength") = 1.0, py::arg("min_panels") = 4, py::arg("nodes_per_panel") = 10);

  m.def(
      "decay_sweep",
      [](const Polynomial& p, const py::object& dom, double lambda_min, double lambda_max, std::size_t n_points,
         const py::object& amplitude, unsigned workers) {
        const DecayCurve c =
            decay_sweep(p, amplitude_arg(amplitude), domain_arg(dom), lambda_min, lambda_max, n_points, {}, workers);
        py::dict d;
        d["lambda"] = c.lambda_values;
        d["magnitude"] = c.magnitudes;
        d["envelope"] = c.envelope;
        py::list conv;
        for (bool b : c.converged) conv.append(py::bool_(b));
        d["converged"] = conv;
        try {
          d["beta_hat"] = fit_decay(c).beta_hat;
        } catch (const std::invalid_argument&) {
          d["beta_hat"] = py::none();
        }
        return d;
      },
      py::arg("poly"), py::arg("domain"), py::arg("lambda_min"), py::arg("lambda_max"), py::arg("n_points") = 49,
      py::arg("amplitude") = py::none(), py::arg("workers") = 1);

  m.def(
      "singular_integral",
      [](const Polynomial& p, const py::object& dom, double gamma, const VolumeCurve& curve,
         std::optional<PowerLawFit> fit, std::optional<ExponentBracket> bracket, std::size_t direct_samples,
         std::uint64_t seed, unsigned workers) {
        const SingularReport r =
            singular_integral(p, domain_arg(dom), gamma, curve, fit, bracket, {direct_samples, seed, workers});
        py::dict d;
        d["gamma"] = r.gamma;
        d["verdict"] = to_string(r.verdict);
        d["value"] = r.verdict == SingularVerdict::Convergent ? py::object(py::float_(r.value)) : py::none();
        d["error"] = r.verdict == SingularVerdict::Convergent ? py::object(py::float_(r.error)) : py::none();
        d["reason"] = r.reason;
        d["theorem"] = r.theorem ? py::object(py::str(to_string(*r.theorem))) : py::none();
        d["direct_agrees"] = r.direct_agrees;
        return d;
      },
      py::arg("poly"), py::arg("domain"), py::arg("gamma"), py::arg("curve"), py::arg("fit") = py::none(),
      py::arg("bracket") = py::none(), py::arg("direct_samples") = 1'000'000, py::arg("seed") = 0,
      py::arg("workers") = 1);

  m.def(
      "epsilon_family",
      [](unsigned d, const py::object& m_, const py::object& R) {
        const EpsilonFamily f = build_epsilon_family(d, rational_arg(m_), rational_arg(R));
        py::list eps, lambdas;
        for (const auto& e : f.eps) eps.append(fraction(e));
        for (const auto& l : f.lambdas) lambdas.append(fraction(l));
        py::dict out;
        out["eps"] = eps;
        out["lambdas"] = lambdas;
        out["lambda"] = fraction(f.lambda);
        out["smallness"] = satisfies_smallness(f);
        out["dominance"] = satisfies_dominance(f);
        return out;
      },
      py::arg("d"), py::arg("m"), py::arg("R"));

  m.def(
      "star_check",
      [](const Polynomial& p, const py::object& eps0, std::uint64_t seed, std::size_t samples) {
        const StarVerdict v = star_shape_check(p, rational_arg(eps0), seed, samples);
        py::dict d;
        d["verdict"] = to_string(v.kind);
        d["witness"] = v.witness;
        d["vacuous"] = v.vacuous;
        d["sign"] = v.sign;
        return d;
      },
      py::arg("poly"), py::arg("eps0") = 1, py::arg("seed") = 0, py::arg("samples") = 10000);

  m.def(
      "sublevel_measure_1d",
      [](const py::list& coeffs, const py::object& lo, const py::object& hi, const py::object& t,
         const py::object& tol) {
        std::vector<Rational> c;
        for (const auto& v : coeffs) c.push_back(rational_arg(v));
        return sublevel_measure_1d(UPoly(c), Interval(rational_arg(lo), rational_arg(hi)), rational_arg(t),
                                   rational_arg(tol));
      },
      py::arg("coeffs"), py::arg("lo"), py::arg("hi"), py::arg("t"), py::arg("tol") = "1e-12",
      "Measure of {s in [lo, hi] : |P(s)| <= t}; coeffs are in increasing degree.");

  m.def("default_config", [] { return to_py_json(config_to_json(AnalysisConfig{})); });

  m.def(
      "run_command",
      [](const std::string& name, const py::object& config) {
        Json j = config_to_json(AnalysisConfig{});
        const Json patch = to_cpp_json(config);
        for (const auto& [k, v] : patch.items()) j[k] = v;
        AnalysisConfig c = config_from_json(j);
        c.out.reset();
        return run_command(name, c).text;
      },
      py::arg("name"), py::arg("config"),
      "Runs a CLI subcommand in-process and returns what it would print.");
}
