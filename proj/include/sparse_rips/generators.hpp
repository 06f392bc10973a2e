#ifndef SPARSE_RIPS_GENERATORS_HPP
#define SPARSE_RIPS_GENERATORS_HPP

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "sparse_rips/error.hpp"
#include "sparse_rips/metric.hpp"

namespace sparse_rips {

/// Seeded source of uniform doubles in [0, 1). The mapping from engine output
/// is fixed here so sample values do not depend on the standard library.
class Random {
 public:
  explicit Random(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(uniform() * static_cast<double>(n)); }

 private:
  std::mt19937_64 engine_;
};

using PointList = std::vector<std::vector<double>>;

/// n points uniform in [0,1]^dim.
inline PointList uniform_cube(std::size_t n, std::size_t dim, Random& rng) {
  PointList pts(n, std::vector<double>(dim));
  for (auto& p : pts)
    for (auto& x : p) x = rng.uniform();
  return pts;
}

/// n points around the unit circle, radius perturbed uniformly within +-noise.
/// Angles are stratified: point i lies at a uniform angle in the i-th of n equal
/// arcs, so no gap exceeds two arcs.
inline PointList noisy_circle(std::size_t n, double noise, Random& rng) {
  PointList pts;
  pts.reserve(n);
  const double arc = 2.0 * std::numbers::pi / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double theta = arc * (static_cast<double>(i) + rng.uniform());
    const double r = 1.0 + rng.uniform(-noise, noise);
    pts.push_back({r * std::cos(theta), r * std::sin(theta)});
  }
  return pts;
}

/// Two unit-square blobs of side 0.3 centred at (0.25,0.25) and (0.75,0.75).
inline PointList two_clusters(std::size_t n, Random& rng) {
  PointList pts;
  pts.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double c = i % 2 == 0 ? 0.25 : 0.75;
    pts.push_back({c + rng.uniform(-0.15, 0.15), c + rng.uniform(-0.15, 0.15)});
  }
  return pts;
}

inline bool is_known_generator(std::string_view name) {
  return name == "uniform2d" || name == "uniform3d" || name == "circle" || name == "clusters";
}

/// Named generators: uniform2d, uniform3d, circle (noise 0.05), clusters.
inline PointList generate(std::string_view name, std::size_t n, Random& rng) {
  if (name == "uniform2d") return uniform_cube(n, 2, rng);
  if (name == "uniform3d") return uniform_cube(n, 3, rng);
  if (name == "circle") return noisy_circle(n, 0.05, rng);
  if (name == "clusters") return two_clusters(n, rng);
  throw InvalidArgument("unknown generator '" + std::string(name) + "'");
}

}  // namespace sparse_rips

#endif  // SPARSE_RIPS_GENERATORS_HPP
