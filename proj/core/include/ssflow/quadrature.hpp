#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace ssflow {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
};

/// Gauss-Legendre rule with `points` nodes mapped to [a, b].
QuadratureRule gauss_legendre(int points, double a = -1.0, double b = 1.0);

/// Composite Gauss-Legendre: `panels` equal panels on [a, b], `points` nodes each.
QuadratureRule composite_gauss_legendre(int panels, int points, double a, double b);

/// Seeded generator with a platform-independent uniform draw.
/// std::uniform_real_distribution is implementation-defined, so outputs that
/// must be bit-reproducible go through uniform() instead.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace ssflow
