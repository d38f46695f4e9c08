#include "ssflow/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "ssflow/errors.hpp"

namespace ssflow {

namespace {

// Legendre P_n(x) and its derivative by the three-term recurrence.
void legendre(int n, double x, double& p, double& dp) {
  double p0 = 1.0;
  double p1 = x;
  for (int k = 2; k <= n; ++k) {
    const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = pk;
  }
  p = p1;
  dp = n * (x * p1 - p0) / (x * x - 1.0);
}

}  // namespace

QuadratureRule gauss_legendre(int points, double a, double b) {
  require(points >= 1, ErrorCode::InvalidArgument, "gauss_legendre needs at least one point");
  QuadratureRule rule;
  rule.nodes.assign(points, 0.0);
  rule.weights.assign(points, 2.0);
  if (points > 1) {
    for (int i = 0; i < (points + 1) / 2; ++i) {
      double x = std::cos(std::numbers::pi * (i + 0.75) / (points + 0.5));
      double p = 0.0;
      double dp = 1.0;
      for (int iter = 0; iter < 100; ++iter) {
        legendre(points, x, p, dp);
        const double dx = p / dp;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      legendre(points, x, p, dp);
      const double w = 2.0 / ((1.0 - x * x) * dp * dp);
      rule.nodes[i] = -x;
      rule.nodes[points - 1 - i] = x;
      rule.weights[i] = w;
      rule.weights[points - 1 - i] = w;
    }
  }
  const double mid = 0.5 * (a + b);
  const double scale = 0.5 * (b - a);
  for (int i = 0; i < points; ++i) {
    rule.nodes[i] = mid + scale * rule.nodes[i];
    rule.weights[i] *= scale;
  }
  return rule;
}

QuadratureRule composite_gauss_legendre(int panels, int points, double a, double b) {
  require(panels >= 1, ErrorCode::InvalidArgument, "composite rule needs at least one panel");
  QuadratureRule out;
  out.nodes.reserve(static_cast<std::size_t>(panels) * points);
  out.weights.reserve(static_cast<std::size_t>(panels) * points);
  const double width = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const auto rule = gauss_legendre(points, a + p * width, a + (p + 1) * width);
    out.nodes.insert(out.nodes.end(), rule.nodes.begin(), rule.nodes.end());
    out.weights.insert(out.weights.end(), rule.weights.begin(), rule.weights.end());
  }
  return out;
}

}  // namespace ssflow
