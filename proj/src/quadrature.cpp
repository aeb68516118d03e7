#include "kendall/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace kendall {

namespace {

struct LegendreValue {
  double value;
  double derivative;
};

// P_n(x) by the three-term recurrence, P_n'(x) from n (x P_n - P_{n-1}) / (x^2 - 1).
LegendreValue legendre(int n, double x) {
  double prev = 1.0, cur = x;
  for (int k = 2; k <= n; ++k) {
    const double next = ((2.0 * k - 1.0) * x * cur - (k - 1.0) * prev) / k;
    prev = cur;
    cur = next;
  }
  return {cur, n * (x * cur - prev) / (x * x - 1.0)};
}

}  // namespace

GaussLegendreRule gauss_legendre(int order) {
  if (order < 1 || order > kMaxGaussLegendreOrder) {
    throw std::invalid_argument("Gauss-Legendre order must be in [1, " +
                                std::to_string(kMaxGaussLegendreOrder) + "], got " +
                                std::to_string(order));
  }
  const auto n = static_cast<std::size_t>(order);
  GaussLegendreRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  // roots are symmetric; solve for the positive half and mirror
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                        (static_cast<double>(n) + 0.5));
    for (int iter = 0; iter < 100; ++iter) {
      const LegendreValue p = legendre(order, x);
      const double step = p.value / p.derivative;
      x -= step;
      if (std::abs(step) < 1e-15) break;
    }
    const double d = legendre(order, x).derivative;
    const double w = 2.0 / ((1.0 - x * x) * d * d);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

GaussLegendreRule gauss_legendre(int order, double lo, double hi) {
  GaussLegendreRule rule = gauss_legendre(order);
  const double half = 0.5 * (hi - lo);
  const double mid = 0.5 * (hi + lo);
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    rule.nodes[i] = mid + half * rule.nodes[i];
    rule.weights[i] *= half;
  }
  return rule;
}

}  // namespace kendall
