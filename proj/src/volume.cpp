#include "sublevel/volume.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace sublevel {

std::string method_name(const VolumeMethod& m) {
  return std::holds_alternative<MonteCarloMethod>(m) ? "montecarlo" : "grid";
}

std::uint64_t method_seed(const VolumeMethod& m) {
  if (auto mc = std::get_if<MonteCarloMethod>(&m)) return mc->seed;
  return 0;
}

double ci_half_width(std::uint64_t hits, std::uint64_t total, double volume) {
  if (total == 0) return volume;
  const double k = static_cast<double>(total);
  const double p = static_cast<double>(hits) / k;
  const std::uint64_t misses = total - hits;
  if (std::min(hits, misses) >= 30) return kZ99 * std::sqrt(p * (1 - p) / k) * volume;
  const double z2 = kZ99 * kZ99;
  const double denom = 1 + z2 / k;
  const double center = (p + z2 / (2 * k)) / denom;
  const double half = kZ99 / denom * std::sqrt(p * (1 - p) / k + z2 / (4 * k * k));
  return std::max(center + half - p, p - (center - half)) * volume;
}

std::vector<double> log_grid(double lo, double hi, std::size_t n) {
  if (!(lo > 0) || !(hi > lo)) throw std::invalid_argument("log_grid: need 0 < lo < hi");
  if (n < 2) throw std::invalid_argument("log_grid: need at least 2 points");
  std::vector<double> out(n);
  const double a = std::log(lo), b = std::log(hi);
  for (std::size_t i = 0; i < n; ++i) out[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
  out.front() = lo;
  out.back() = hi;
  return out;
}

namespace {

void check_method(const VolumeMethod& m) {
  if (auto mc = std::get_if<MonteCarloMethod>(&m)) {
    if (mc->n_samples < 10000) throw std::invalid_argument("Monte Carlo needs n_samples >= 10^4");
  } else if (std::get<GridMethod>(m).resolution < 64) {
    throw std::invalid_argument("grid method needs resolution >= 64 per axis");
  }
}

// Adds sample value v to the histogram: bin i counts values in (t_{i-1}, t_i].
inline void bin(std::span<const double> t, double v, std::vector<std::uint64_t>& hist) {
  auto it = std::lower_bound(t.begin(), t.end(), v);
  if (it != t.end()) ++hist[static_cast<std::size_t>(it - t.begin())];
}

struct Counts {
  std::vector<std::uint64_t> hist;
  std::uint64_t total = 0;
};

Counts count_monte_carlo(const CompiledPolynomial& f, const Domain& dom, std::span<const double> t,
                         const MonteCarloMethod& mc, unsigned workers) {
  const std::size_t n_blocks = (mc.n_samples + kSampleBlockSize - 1) / kSampleBlockSize;
  std::vector<std::vector<std::uint64_t>> per_block(n_blocks);
  const std::size_t dim = dom.dim();
  for_each_sample_block(dom, mc.seed, mc.n_samples, workers, [&](std::size_t b, const double* pts, std::size_t count) {
    std::vector<std::uint64_t> hist(t.size(), 0);
    for (std::size_t i = 0; i < count; ++i) bin(t, std::fabs(f(pts + i * dim)), hist);
    per_block[b] = std::move(hist);
  });
  Counts c{std::vector<std::uint64_t>(t.size(), 0), mc.n_samples};
  for (const auto& h : per_block)
    for (std::size_t i = 0; i < h.size(); ++i) c.hist[i] += h[i];
  return c;
}

Counts count_grid(const CompiledPolynomial& f, const Domain& dom, std::span<const double> t, const GridMethod& g,
                  unsigned workers) {
  const auto bb = dom.bounding_box();
  const std::size_t n = bb.size();
  const std::size_t res = g.resolution;
  std::size_t slab_cells = 1;
  for (std::size_t j = 1; j < n; ++j) slab_cells *= res;
  std::vector<Counts> per_slab(res);
  parallel_for(res, workers, [&](std::size_t i0) {
    Counts c{std::vector<std::uint64_t>(t.size(), 0), 0};
    std::vector<double> x(n);
    std::vector<std::size_t> idx(n, 0);
    idx[0] = i0;
    for (std::size_t cell = 0; cell < slab_cells; ++cell) {
      std::size_t rem = cell;
      for (std::size_t j = n; j-- > 1;) {
        idx[j] = rem % res;
        rem /= res;
      }
      for (std::size_t j = 0; j < n; ++j)
        x[j] = to_double(bb[j].lo) + bb[j].length() * (static_cast<double>(idx[j]) + 0.5) / static_cast<double>(res);
      if (!dom.contains(x.data())) continue;
      ++c.total;
      bin(t, std::fabs(f(x.data())), c.hist);
    }
    per_slab[i0] = std::move(c);
  });
  Counts c{std::vector<std::uint64_t>(t.size(), 0), 0};
  for (const auto& s : per_slab) {
    c.total += s.total;
    for (std::size_t i = 0; i < t.size(); ++i) c.hist[i] += s.hist[i];
  }
  return c;
}

}  // namespace

VolumeCurve volume_curve(const Polynomial& p, const Domain& dom, std::span<const double> t_grid,
                         const VolumeMethod& method, unsigned workers) {
  if (p.n_vars() > dom.dim()) throw std::invalid_argument("polynomial has more variables than the domain dimension");
  if (t_grid.empty()) throw std::invalid_argument("empty t grid");
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (!(t_grid[i] > 0)) throw std::invalid_argument("t must be positive");
    if (i > 0 && !(t_grid[i] > t_grid[i - 1])) throw std::invalid_argument("t grid must be strictly increasing");
  }
  check_method(method);

  const CompiledPolynomial f(extend_variables(p, dom.dim()));

  Counts c = std::holds_alternative<MonteCarloMethod>(method)
                 ? count_monte_carlo(f, dom, t_grid, std::get<MonteCarloMethod>(method), workers)
                 : count_grid(f, dom, t_grid, std::get<GridMethod>(method), workers);

  VolumeCurve curve;
  curve.t_values.assign(t_grid.begin(), t_grid.end());
  curve.method = method;
  curve.domain_volume = domain_volume(dom);
  curve.total = c.total;
  const bool mc = std::holds_alternative<MonteCarloMethod>(method);
  std::uint64_t cum = 0;
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    cum += c.hist[i];
    curve.hits.push_back(cum);
    const double frac = c.total ? static_cast<double>(cum) / static_cast<double>(c.total) : 0.0;
    curve.estimates.push_back(cum == c.total ? curve.domain_volume : frac * curve.domain_volume);
    curve.ci_half_widths.push_back(mc ? ci_half_width(cum, c.total, curve.domain_volume) : 0.0);
  }
  return curve;
}

VolumeCurve volume_sweep(const Polynomial& p, const Domain& dom, double t_min, double t_max, std::size_t n_points,
                         const VolumeMethod& method, unsigned workers) {
  if (!(t_min > 0) || !(t_max > t_min)) throw std::invalid_argument("volume_sweep: need 0 < t_min < t_max");
  if (n_points < 8) throw std::invalid_argument("volume_sweep: n_points must be >= 8");
  const auto grid = log_grid(t_min, t_max, n_points);
  return volume_curve(p, dom, grid, method, workers);
}

VolumeEstimate estimate_volume(const Polynomial& p, const Domain& dom, double t, const VolumeMethod& method,
                               unsigned workers) {
  if (!(t > 0)) throw std::invalid_argument("estimate_volume: t must be positive");
  const double grid[1] = {t};
  VolumeCurve c = volume_curve(p, dom, grid, method, workers);
  return {c.estimates[0], c.ci_half_widths[0], c.hits[0], c.total};
}

PowerLawFit fit_log_log(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("fit_log_log: need at least 2 points");
  const std::size_t n = x.size();
  std::vector<double> lx(n), ly(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(x[i] > 0) || !(y[i] > 0)) throw std::invalid_argument("fit_log_log: values must be positive");
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
  }
  const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / static_cast<double>(n);
  const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / static_cast<double>(n);
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  if (sxx == 0) throw std::invalid_argument("fit_log_log: x values must not all coincide");
  PowerLawFit fit;
  fit.alpha_hat = sxy / sxx;
  fit.log_c_hat = my - fit.alpha_hat * mx;
  double ssr = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double r = ly[i] - fit.log_c_hat - fit.alpha_hat * lx[i];
    ssr += r * r;
  }
  fit.r_squared = syy > 0 ? std::clamp(1 - ssr / syy, 0.0, 1.0) : 1.0;
  fit.stderr_alpha = n > 2 ? std::sqrt(ssr / static_cast<double>(n - 2) / sxx) : 0.0;
  fit.window = {*std::min_element(x.begin(), x.end()), *std::max_element(x.begin(), x.end())};
  fit.n_points = n;
  return fit;
}

PowerLawFit fit_power_law(const VolumeCurve& curve, std::optional<std::pair<double, double>> window) {
  std::vector<double> xs, ys;
  std::size_t zeros = 0;
  std::pair<double, double> w;
  if (window) {
    w = *window;
    if (!(w.first > 0) || !(w.second >= w.first)) throw std::invalid_argument("fit_power_law: invalid window");
  } else {
    std::optional<double> start;
    for (std::size_t i = 0; i < curve.size(); ++i) {
      if (curve.estimates[i] > 0 && curve.ci_half_widths[i] <= 0.2 * curve.estimates[i]) {
        start = curve.t_values[i];
        break;
      }
    }
    if (!start) throw std::invalid_argument("fit_power_law: no grid point with a positive, well-resolved estimate");
    w = {*start, *start * 100};
  }
  const double lo = w.first * (1 - 1e-12), hi = w.second * (1 + 1e-12);
  for (std::size_t i = 0; i < curve.size(); ++i) {
    const double t = curve.t_values[i];
    if (t < lo || t > hi) continue;
    if (curve.estimates[i] <= 0) {
      ++zeros;
      continue;
    }
    if (!window && curve.ci_half_widths[i] > 0.2 * curve.estimates[i]) continue;
    xs.push_back(t);
    ys.push_back(curve.estimates[i]);
  }
  if (xs.size() < 5)
    throw std::invalid_argument("fit_power_law: fewer than 5 positive points in the window (" +
                                std::to_string(xs.size()) + ")");
  PowerLawFit fit = fit_log_log(xs, ys);
  fit.window = w;
  fit.n_excluded_zero = zeros;
  return fit;
}

ExponentBracket exponent_bracket(const Polynomial& p, const Domain& dom, unsigned d_prime, unsigned k_prime,
                                 bool star_certified) {
  if (p.is_zero() || p.degree().value() < 1) throw std::invalid_argument("bracket: polynomial must have degree >= 1");
  const unsigned d = p.degree().value();
  const unsigned n = static_cast<unsigned>(dom.dim());
  if (p.n_vars() > n) throw std::invalid_argument("bracket: polynomial has more variables than the domain");
  if (d_prime < 1 || d_prime > d)
    throw std::invalid_argument("bracket: d' must satisfy 1 <= d' <= d = " + std::to_string(d));
  if (k_prime > n - 1) throw std::invalid_argument("bracket: k' must satisfy 0 <= k' <= n - 1 = " + std::to_string(n - 1));

  ExponentBracket b;
  std::ostringstream up, low;
  if (star_certified) {
    b.alpha = Rational(n, d);
    up << "n/d = " << n << "/" << d << " (star-shaped sub-level sets)";
  } else {
    b.alpha = Rational(1, d);
    up << "1/d = 1/" << d << " (general upper bound)";
  }
  b.alpha.canonicalize();
  b.alpha_prime = Rational(n - k_prime, d_prime);
  b.alpha_prime.canonicalize();
  if (k_prime == 0)
    low << "n/d' = " << n << "/" << d_prime << " (zero of order d' = " << d_prime << ")";
  else
    low << "(n-k')/d' = (" << n << "-" << k_prime << ")/" << d_prime << " (" << k_prime
        << "-dimensional zeros of order " << d_prime << ")";
  b.alpha_source = up.str();
  b.alpha_prime_source = low.str();
  if (b.alpha > b.alpha_prime)
    throw std::invalid_argument("bracket: upper-bound exponent " + to_string(b.alpha) +
                                " exceeds lower-bound exponent " + to_string(b.alpha_prime) +
                                "; the supplied d', k' are inconsistent with the polynomial");
  return b;
}

BracketReport verify_bracket(const VolumeCurve& curve, const PowerLawFit& fit, const ExponentBracket& bracket,
                             double margin) {
  BracketReport r;
  const double a = to_double(bracket.alpha), ap = to_double(bracket.alpha_prime);
  r.alpha_hat = fit.alpha_hat;
  r.lower_limit = a - margin;
  r.upper_limit = ap + margin;
  r.exponent_in_range = fit.alpha_hat >= r.lower_limit && fit.alpha_hat <= r.upper_limit;
  r.upper_ratio_slope = fit.alpha_hat - a;
  r.lower_ratio_slope = fit.alpha_hat - ap;
  r.max_upper_ratio = 0;
  r.min_lower_ratio = std::numeric_limits<double>::infinity();
  const double lo = fit.window.first * (1 - 1e-12), hi = fit.window.second * (1 + 1e-12);
  for (std::size_t i = 0; i < curve.size(); ++i) {
    const double t = curve.t_values[i];
    if (t < lo || t > hi || curve.estimates[i] <= 0) continue;
    r.max_upper_ratio = std::max(r.max_upper_ratio, curve.estimates[i] / std::pow(t, a));
    r.min_lower_ratio = std::min(r.min_lower_ratio, curve.estimates[i] / std::pow(t, ap));
  }
  r.passes = r.exponent_in_range;
  std::ostringstream msg;
  msg << "alpha_hat " << format_double(fit.alpha_hat) << (r.passes ? " in " : " outside ") << "["
      << format_double(r.lower_limit) << ", " << format_double(r.upper_limit) << "]";
  if (fit.alpha_hat < r.lower_limit) msg << "; V/t^alpha grows as t -> 0 (upper bound violated)";
  if (fit.alpha_hat > r.upper_limit) msg << "; V/t^alpha' vanishes as t -> 0 (lower bound violated)";
  r.message = msg.str();
  return r;
}

namespace {

template <class Reduce>
double reduce_on_grid(const Polynomial& p, const Domain& dom, std::size_t resolution, double init, Reduce reduce) {
  if (resolution < 1) throw std::invalid_argument("grid resolution must be >= 1");
  const auto bb = dom.bounding_box();
  const std::size_t n = bb.size();
  // Keep the node count desk-sized in higher dimensions.
  while (n > 1 && std::pow(static_cast<double>(resolution + 1), static_cast<double>(n)) > 2e7 && resolution > 8)
    resolution /= 2;
  if (p.n_vars() > n) throw std::invalid_argument("polynomial has more variables than the domain dimension");
  const CompiledPolynomial f(extend_variables(p, n));
  const std::size_t per_axis = resolution + 1;
  std::size_t nodes = 1;
  for (std::size_t j = 0; j < n; ++j) nodes *= per_axis;
  double acc = init;
  std::vector<double> x(n);
  for (std::size_t k = 0; k < nodes; ++k) {
    std::size_t rem = k;
    for (std::size_t j = 0; j < n; ++j) {
      x[j] = to_double(bb[j].lo) + bb[j].length() * static_cast<double>(rem % per_axis) / static_cast<double>(resolution);
      rem /= per_axis;
    }
    if (!dom.contains(x.data())) continue;
    acc = reduce(acc, std::fabs(f(x.data())));
  }
  return acc;
}

}  // namespace

double sup_abs_on_domain(const Polynomial& p, const Domain& dom, std::size_t resolution) {
  return reduce_on_grid(p, dom, resolution, 0.0, [](double a, double b) { return std::max(a, b); });
}

double inf_abs_on_domain(const Polynomial& p, const Domain& dom, std::size_t resolution) {
  return reduce_on_grid(p, dom, resolution, std::numeric_limits<double>::infinity(),
                        [](double a, double b) { return std::min(a, b); });
}

WitnessCheck check_witness(const Polynomial& p, const Domain& dom, const RationalPoint& point) {
  if (point.size() != dom.dim()) throw std::invalid_argument("witness dimension does not match the domain");
  WitnessCheck w;
  w.point = point;
  w.in_domain = dom.contains(std::span<const Rational>(point));
  RationalPoint a(point.begin(), point.begin() + static_cast<std::ptrdiff_t>(std::min(point.size(), p.n_vars())));
  a.resize(p.n_vars(), Rational(0));
  w.is_zero = evaluate(p, a) == 0;
  w.order = order_at(p, a);
  return w;
}

}  // namespace sublevel
