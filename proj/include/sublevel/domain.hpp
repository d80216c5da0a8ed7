#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "sublevel/interval.hpp"

namespace sublevel {

struct Box {
  std::vector<Interval> intervals;
};

struct Ball {
  RationalPoint center;
  Rational radius;
};

/// Bounded region: an axis-aligned box or a closed Euclidean ball.
class Domain {
 public:
  static Domain box(std::vector<Interval> intervals);
  static Domain ball(RationalPoint center, Rational radius);
  /// [0, 1]^n
  static Domain unit_cube(std::size_t n);

  std::size_t dim() const;
  bool is_box() const { return std::holds_alternative<Box>(shape_); }
  bool is_ball() const { return std::holds_alternative<Ball>(shape_); }
  const Box& as_box() const { return std::get<Box>(shape_); }
  const Ball& as_ball() const { return std::get<Ball>(shape_); }

  /// Tight axis-aligned bounding box.
  std::vector<Interval> bounding_box() const;
  bool contains(const double* x) const;
  bool contains(std::span<const double> x) const { return contains(x.data()); }
  bool contains(std::span<const Rational> x) const;
  double diameter() const;
  /// sup ||x|| over the domain.
  double max_norm() const;

 private:
  explicit Domain(std::variant<Box, Ball> shape);
  std::variant<Box, Ball> shape_;
  // Floating copies for hot membership tests.
  std::vector<double> lo_, hi_, center_;
  double radius_ = 0;
};

/// Exact product of side lengths for boxes; pi^(n/2) r^n / Gamma(n/2 + 1) for balls.
double domain_volume(const Domain& dom);

/// Points are stored row-major: coords[i * dim + j].
struct PointSet {
  std::size_t dim = 0;
  std::vector<double> coords;

  std::size_t size() const { return dim ? coords.size() / dim : 0; }
  std::span<const double> point(std::size_t i) const { return {coords.data() + i * dim, dim}; }
};

/// splitmix64 finalizer applied to seed + golden * index; derives the
/// per-block and per-worker streams from a single seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

/// Uniform double in [0, 1) from the top 53 bits.
inline double uniform01(std::mt19937_64& gen) { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }

/// Samples are generated in fixed-size blocks, each from its own derived
/// stream, so the output does not depend on how blocks are scheduled.
inline constexpr std::size_t kSampleBlockSize = 1U << 16;

/// Fills out (count * dim doubles) with uniform points of block block_index.
void sample_block(const Domain& dom, std::uint64_t seed, std::uint64_t block_index, std::size_t count, double* out);

/// k i.i.d. uniform points; deterministic in seed. Balls use rejection from
/// the bounding box.
PointSet sample(const Domain& dom, std::uint64_t seed, std::size_t k);

/// Runs fn(i) for i in [0, n) on up to `workers` threads.
void parallel_for(std::size_t n, unsigned workers, const std::function<void(std::size_t)>& fn);

/// Calls fn(block_index, points, count) for every block of k samples; fn may
/// run concurrently for different blocks.
void for_each_sample_block(const Domain& dom, std::uint64_t seed, std::size_t k, unsigned workers,
                           const std::function<void(std::size_t, const double*, std::size_t)>& fn);

}  // namespace sublevel
