#pragma once

#include <stdexcept>
#include <string>

#include "json.hpp"

#include "sublevel/domain.hpp"
#include "sublevel/epsilon.hpp"
#include "sublevel/geometry.hpp"
#include "sublevel/oscillatory.hpp"
#include "sublevel/singular.hpp"
#include "sublevel/volume.hpp"

namespace sublevel {

/// Key order is preserved so serialized output is byte-stable.
using Json = nlohmann::ordered_json;

/// Malformed user input (JSON, numbers, domain specs).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Accepts a decimal/rational string or a JSON number (read from its
/// shortest decimal form, so 0.1 means 1/10).
Rational rational_from_json(const Json& j);
double double_from_json(const Json& j);

/// All numbers are written as decimal strings: exact "p/q" for rationals,
/// 17 significant digits for doubles.
inline Json json_number(const Rational& q) { return to_string(q); }
inline Json json_number(double x) { return format_double(x); }
Json json_number(std::uint64_t x);
Json json_point(const RationalPoint& x);
Json json_point(std::span<const double> x);

/// {"kind":"box","intervals":[[lo,hi],...]} or {"kind":"ball","center":[...],"radius":r}
Domain domain_from_json(const Json& j);
Json domain_to_json(const Domain& dom);
/// Inline JSON text, or @path to a file containing it.
Json read_json_arg(const std::string& text);
Domain parse_domain_arg(const std::string& text);

/// {"kind":"indicator"} or {"kind":"smooth_bump","center":[...],"inner":r0,"outer":r1}
AmplitudeSpec amplitude_from_json(const Json& j);
Json amplitude_to_json(const AmplitudeSpec& g);

/// Header t,volume,ci_half_width,method,seed.
std::string volume_curve_csv(const VolumeCurve& c);
/// Header lambda,magnitude,envelope,converged.
std::string decay_curve_csv(const DecayCurve& c);

Json to_json(const VolumeCurve& c);
Json to_json(const PowerLawFit& f);
Json to_json(const ExponentBracket& b);
Json to_json(const BracketReport& r);
Json to_json(const WitnessCheck& w);
Json to_json(const GoodDirection& g);
Json to_json(const StarVerdict& v);
Json to_json(const EpsilonFamily& f);
Json to_json(const DecayCurve& c);
Json to_json(const DecayFit& f);
Json to_json(const DecayBoundReport& r);
Json to_json(const VdcReport& r);
Json to_json(const GradientSplit& s);
Json to_json(const IndexBracket& b);
/// {"gamma","verdict","value","error","alpha_hat","bracket","method":{...}}
Json to_json(const SingularReport& r, const std::optional<ExponentBracket>& bracket);

}  // namespace sublevel
