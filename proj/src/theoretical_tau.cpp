#include "kendall/theoretical_tau.hpp"

#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "kendall/quadrature.hpp"

namespace kendall {

namespace {

// Welford accumulator for the per-draw statistic.
class RunningMoments {
 public:
  void add(double v) {
    ++count_;
    const double delta = v - mean_;
    mean_ += delta / static_cast<double>(count_);
    m2_ += delta * (v - mean_);
  }
  double mean() const { return mean_; }
  double sample_variance() const {
    return count_ > 1 ? m2_ / static_cast<double>(count_ - 1) : 0.0;
  }
  std::size_t count() const { return count_; }

 private:
  std::size_t count_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

template <class Statistic>
EstimateWithError monte_carlo(const BivariateModel& model, std::size_t n_draws,
                              std::uint64_t seed, Statistic&& statistic) {
  if (n_draws < kMinMonteCarloDraws) {
    throw std::invalid_argument(
        fmt::format("Monte Carlo tau needs at least {} draws (got {})", kMinMonteCarloDraws,
                    n_draws));
  }
  SeededGenerator rng(seed, 0);
  RunningMoments moments;
  for (std::size_t i = 0; i < n_draws; ++i) {
    const Point p = model.draw(rng);
    moments.add(statistic(p));
  }
  const double n = static_cast<double>(n_draws);
  return {4.0 * moments.mean() - 1.0, 4.0 * std::sqrt(moments.sample_variance() / n), n_draws};
}

}  // namespace

EstimateWithError tau_monte_carlo(const BivariateModel& model, std::size_t n_draws,
                                  std::uint64_t seed) {
  return monte_carlo(model, n_draws, seed, [&](const Point& p) { return model.cdf(p.x, p.y); });
}

EstimateWithError tau_monte_carlo_survival(const BivariateModel& model, std::size_t n_draws,
                                           std::uint64_t seed) {
  return monte_carlo(model, n_draws, seed, [&](const Point& p) {
    return 1.0 - model.marginal_cdf_x(p.x) - model.marginal_cdf_y(p.y) + model.cdf(p.x, p.y);
  });
}

double tau_quadrature_unit_square(const BivariateModel& model, int order) {
  if (model.support() != Support::UnitSquare) {
    throw std::invalid_argument("quadrature path requires unit-square support");
  }
  if (order < 4) {
    throw std::invalid_argument(fmt::format("quadrature order must be >= 4 (got {})", order));
  }
  const GaussLegendreRule rule = gauss_legendre(order, 0.0, 1.0);
  double total = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
      const double u = rule.nodes[i];
      const double v = rule.nodes[j];
      row += rule.weights[j] * model.cdf(u, v) * model.pdf(u, v);
    }
    total += rule.weights[i] * row;
  }
  return 4.0 * total - 1.0;
}

DiscretePmf::DiscretePmf(std::vector<double> support_x, std::vector<double> support_y,
                         std::vector<double> probs)
    : support_x_(std::move(support_x)),
      support_y_(std::move(support_y)),
      probs_(std::move(probs)) {
  if (support_x_.empty() || support_y_.empty()) {
    throw std::invalid_argument("pmf support must be non-empty");
  }
  auto strictly_increasing = [](const std::vector<double>& v) {
    for (std::size_t i = 1; i < v.size(); ++i) {
      if (!(v[i - 1] < v[i])) return false;
    }
    return true;
  };
  if (!strictly_increasing(support_x_) || !strictly_increasing(support_y_)) {
    throw std::invalid_argument("pmf support values must be distinct and increasing");
  }
  if (probs_.size() != support_x_.size() * support_y_.size()) {
    throw std::invalid_argument(fmt::format("pmf has {} probabilities, expected {}x{}",
                                            probs_.size(), support_x_.size(),
                                            support_y_.size()));
  }
  for (const double p : probs_) {
    if (!(p >= 0.0) || !std::isfinite(p)) {
      throw std::invalid_argument("pmf probabilities must be finite and nonnegative");
    }
  }
  const double total = std::accumulate(probs_.begin(), probs_.end(), 0.0);
  if (std::abs(total - 1.0) > kSumTolerance) {
    throw std::invalid_argument(fmt::format("pmf probabilities sum to {:.17g}, not 1", total));
  }
}

double tau_discrete(const DiscretePmf& pmf, CdfConvention convention) {
  const std::size_t nx = pmf.nx();
  const std::size_t ny = pmf.ny();
  // cum[(j)(ny+1) + k] = sum of probs over rows < j and columns < k
  std::vector<double> cum((nx + 1) * (ny + 1), 0.0);
  auto at = [&](std::size_t j, std::size_t k) -> double& { return cum[j * (ny + 1) + k]; };
  for (std::size_t j = 0; j < nx; ++j) {
    double row = 0.0;
    for (std::size_t k = 0; k < ny; ++k) {
      row += pmf.prob(j, k);
      at(j + 1, k + 1) = at(j, k + 1) + row;
    }
  }
  const std::size_t shift = convention == CdfConvention::LeftContinuous ? 0 : 1;
  double total = 0.0;
  for (std::size_t j = 0; j < nx; ++j) {
    for (std::size_t k = 0; k < ny; ++k) {
      total += pmf.prob(j, k) * at(j + shift, k + shift);
    }
  }
  return 4.0 * total - 1.0;
}

double x_marginal_mass_cdf_sum(const DiscretePmf& pmf) {
  double below = 0.0;
  double total = 0.0;
  for (std::size_t j = 0; j < pmf.nx(); ++j) {
    double mass = 0.0;
    for (std::size_t k = 0; k < pmf.ny(); ++k) mass += pmf.prob(j, k);
    total += mass * below;
    below += mass;
  }
  return total;
}

}  // namespace kendall
