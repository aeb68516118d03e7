#pragma once

#include <vector>

namespace kendall {

inline constexpr int kMaxGaussLegendreOrder = 64;

/// Gauss-Legendre rule on [-1, 1]. Nodes are ascending.
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Nodes are the roots of P_order found by Newton iteration on the three-term
/// recurrence, converged to 1e-15. Valid orders: 1..kMaxGaussLegendreOrder.
GaussLegendreRule gauss_legendre(int order);

/// Same rule mapped affinely onto [lo, hi].
GaussLegendreRule gauss_legendre(int order, double lo, double hi);

}  // namespace kendall
