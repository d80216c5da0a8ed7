#include "sublevel/domain.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <thread>

namespace sublevel {

Domain::Domain(std::variant<Box, Ball> shape) : shape_(std::move(shape)) {
  if (is_box()) {
    for (const auto& iv : as_box().intervals) {
      lo_.push_back(to_double(iv.lo));
      hi_.push_back(to_double(iv.hi));
    }
  } else {
    center_ = to_double_point(as_ball().center);
    radius_ = to_double(as_ball().radius);
  }
}

Domain Domain::box(std::vector<Interval> intervals) {
  if (intervals.empty()) throw std::invalid_argument("box domain needs at least one interval");
  for (const auto& iv : intervals)
    if (iv.is_point()) throw std::invalid_argument("box domain intervals must have positive length");
  return Domain(Box{std::move(intervals)});
}

Domain Domain::ball(RationalPoint center, Rational radius) {
  if (center.empty()) throw std::invalid_argument("ball domain needs a center");
  if (radius <= 0) throw std::invalid_argument("ball radius must be positive");
  return Domain(Ball{std::move(center), std::move(radius)});
}

Domain Domain::unit_cube(std::size_t n) {
  return box(std::vector<Interval>(n, Interval(Rational(0), Rational(1))));
}

std::size_t Domain::dim() const {
  return is_box() ? as_box().intervals.size() : as_ball().center.size();
}

std::vector<Interval> Domain::bounding_box() const {
  if (is_box()) return as_box().intervals;
  const auto& b = as_ball();
  std::vector<Interval> out;
  for (const auto& c : b.center) out.emplace_back(c - b.radius, c + b.radius);
  return out;
}

bool Domain::contains(const double* x) const {
  if (is_box()) {
    for (std::size_t i = 0; i < lo_.size(); ++i)
      if (x[i] < lo_[i] || x[i] > hi_[i]) return false;
    return true;
  }
  double r2 = 0;
  for (std::size_t i = 0; i < center_.size(); ++i) {
    double d = x[i] - center_[i];
    r2 += d * d;
  }
  return r2 <= radius_ * radius_;
}

bool Domain::contains(std::span<const Rational> x) const {
  if (x.size() != dim()) throw std::invalid_argument("contains: dimension mismatch");
  if (is_box()) {
    const auto& iv = as_box().intervals;
    for (std::size_t i = 0; i < iv.size(); ++i)
      if (!iv[i].contains(x[i])) return false;
    return true;
  }
  const auto& b = as_ball();
  Rational r2(0);
  for (std::size_t i = 0; i < x.size(); ++i) r2 += (x[i] - b.center[i]) * (x[i] - b.center[i]);
  return r2 <= b.radius * b.radius;
}

double Domain::diameter() const {
  if (is_ball()) return 2 * to_double(as_ball().radius);
  double s = 0;
  for (const auto& iv : as_box().intervals) s += iv.length() * iv.length();
  return std::sqrt(s);
}

double Domain::max_norm() const {
  if (is_ball()) {
    double c = 0;
    for (const auto& v : as_ball().center) c += to_double(v) * to_double(v);
    return std::sqrt(c) + to_double(as_ball().radius);
  }
  double s = 0;
  for (const auto& iv : as_box().intervals) {
    double m = std::max(std::fabs(to_double(iv.lo)), std::fabs(to_double(iv.hi)));
    s += m * m;
  }
  return std::sqrt(s);
}

double domain_volume(const Domain& dom) {
  if (dom.is_box()) {
    Rational v(1);
    for (const auto& iv : dom.as_box().intervals) v *= iv.width();
    return to_double(v);
  }
  const double n = static_cast<double>(dom.dim());
  const double r = to_double(dom.as_ball().radius);
  return std::pow(std::numbers::pi, n / 2) * std::pow(r, n) / std::tgamma(n / 2 + 1);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

void sample_block(const Domain& dom, std::uint64_t seed, std::uint64_t block_index, std::size_t count, double* out) {
  std::mt19937_64 gen(derive_seed(seed, block_index));
  const auto bb = dom.bounding_box();
  const std::size_t n = bb.size();
  std::vector<double> lo(n), width(n);
  for (std::size_t j = 0; j < n; ++j) {
    lo[j] = to_double(bb[j].lo);
    width[j] = bb[j].length();
  }
  const bool reject = dom.is_ball();
  for (std::size_t i = 0; i < count;) {
    double* x = out + i * n;
    for (std::size_t j = 0; j < n; ++j) x[j] = lo[j] + width[j] * uniform01(gen);
    if (!reject || dom.contains(x)) ++i;
  }
}

PointSet sample(const Domain& dom, std::uint64_t seed, std::size_t k) {
  if (k < 1) throw std::invalid_argument("sample: k must be >= 1");
  PointSet ps;
  ps.dim = dom.dim();
  ps.coords.resize(k * ps.dim);
  for (std::size_t b = 0; b * kSampleBlockSize < k; ++b) {
    std::size_t count = std::min(kSampleBlockSize, k - b * kSampleBlockSize);
    sample_block(dom, seed, b, count, ps.coords.data() + b * kSampleBlockSize * ps.dim);
  }
  return ps;
}

void parallel_for(std::size_t n, unsigned workers, const std::function<void(std::size_t)>& fn) {
  workers = std::max(1U, workers);
  if (workers == 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < std::min<std::size_t>(workers, n); ++w) {
    pool.emplace_back([&] {
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= n) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

void for_each_sample_block(const Domain& dom, std::uint64_t seed, std::size_t k, unsigned workers,
                           const std::function<void(std::size_t, const double*, std::size_t)>& fn) {
  const std::size_t n_blocks = (k + kSampleBlockSize - 1) / kSampleBlockSize;
  const std::size_t dim = dom.dim();
  parallel_for(n_blocks, workers, [&](std::size_t b) {
    std::size_t count = std::min(kSampleBlockSize, k - b * kSampleBlockSize);
    std::vector<double> buf(count * dim);
    sample_block(dom, seed, b, count, buf.data());
    fn(b, buf.data(), count);
  });
}

}  // namespace sublevel
