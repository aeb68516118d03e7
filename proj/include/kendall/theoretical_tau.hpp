#pragma once

// Population coefficient tau = 4 E F(X, Y) - 1, evaluated four ways: Monte
// Carlo over model draws (directly, and through the survival-function form
// 4 E[1 - H(X) - G(Y) + F(X, Y)] - 1), tensor Gauss-Legendre on the unit
// square, and an exact double sum for discrete distributions.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "kendall/bivariate_models.hpp"

namespace kendall {

struct EstimateWithError {
  double value = 0.0;
  double std_error = 0.0;  // sample sd of the per-draw statistic / sqrt(n_draws)
  std::size_t n_draws = 0;
};

inline constexpr std::size_t kMinMonteCarloDraws = 100;

/// Deterministic given seed; draws come from SeededGenerator(seed, 0).
EstimateWithError tau_monte_carlo(const BivariateModel& model, std::size_t n_draws,
                                  std::uint64_t seed);

/// Same draw stream as tau_monte_carlo for the same seed.
EstimateWithError tau_monte_carlo_survival(const BivariateModel& model, std::size_t n_draws,
                                           std::uint64_t seed);

/// Requires Support::UnitSquare and 4 <= order <= kMaxGaussLegendreOrder.
double tau_quadrature_unit_square(const BivariateModel& model, int order);

/// Joint pmf on a finite grid. support_x and support_y are strictly
/// increasing; probs is row-major with probs[j * ny + k] = P(X = x_j, Y = y_k).
class DiscretePmf {
 public:
  static constexpr double kSumTolerance = 1e-12;

  DiscretePmf(std::vector<double> support_x, std::vector<double> support_y,
              std::vector<double> probs);

  std::size_t nx() const noexcept { return support_x_.size(); }
  std::size_t ny() const noexcept { return support_y_.size(); }
  std::span<const double> support_x() const noexcept { return support_x_; }
  std::span<const double> support_y() const noexcept { return support_y_; }
  double prob(std::size_t j, std::size_t k) const noexcept { return probs_[j * ny() + k]; }

 private:
  std::vector<double> support_x_;
  std::vector<double> support_y_;
  std::vector<double> probs_;
};

/// LeftContinuous: F(j, k) = P(X < x_j, Y < y_k), the convention under which
/// the discrete and continuous tau share one formula. RightContinuous uses <=.
enum class CdfConvention { LeftContinuous, RightContinuous };

/// 4 * sum_{j,k} f(j, k) F(j, k) - 1, with F from a 2-D prefix sum.
double tau_discrete(const DiscretePmf& pmf,
                    CdfConvention convention = CdfConvention::LeftContinuous);

/// sum_j h(j) H(j) over the x-marginal with H(j) = P(X < x_j); never exceeds 1/2.
double x_marginal_mass_cdf_sum(const DiscretePmf& pmf);

}  // namespace kendall
