#include "kendall/bivariate_models.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace kendall {

namespace {

class ExpParetoModel final : public BivariateModel {
 public:
  explicit ExpParetoModel(double t) : t_(t) {}

  double cdf(double x, double y) const override {
    if (x <= 0.0 || y <= 0.0) return 0.0;
    const double s = std::pow(y + 1.0, t_);
    return -std::expm1(-x) + std::expm1(-x * s) / s;
  }

  double pdf(double x, double y) const override {
    if (x < 0.0 || y < 0.0 || std::isinf(x) || std::isinf(y)) return 0.0;
    // log space: x (y+1)^{t-1} overflows long before exp(-x (y+1)^t) underflows
    const double log_y1 = std::log1p(y);
    return std::exp(std::log(t_ * x) + (t_ - 1.0) * log_y1 - x * std::exp(t_ * log_y1));
  }

  double marginal_cdf_x(double x) const override { return x <= 0.0 ? 0.0 : -std::expm1(-x); }

  double marginal_cdf_y(double y) const override {
    return y <= 0.0 ? 0.0 : -std::expm1(-t_ * std::log1p(y));
  }

  double marginal_quantile_x(double u) const override { return -std::log1p(-u); }

  // Given X = x, W = (Y+1)^t - 1 is exponential with rate x.
  double conditional_cdf_y(double y, double x) const override {
    if (y <= 0.0) return 0.0;
    return -std::expm1(-x * std::expm1(t_ * std::log1p(y)));
  }

  double conditional_quantile_y(double u, double x) const override {
    return std::expm1(std::log1p(-std::log1p(-u) / x) / t_);
  }

  Point draw(SeededGenerator& rng) const override {
    double x = 0.0;
    do {
      x = marginal_quantile_x(rng.uniform_open());
    } while (!(x > 0.0));
    return {x, conditional_quantile_y(rng.uniform_open(), x)};
  }

  std::optional<double> tau_closed_form() const override { return -0.5; }

  std::optional<double> rho_closed_form() const override {
    if (!(t_ > 2.0)) return std::nullopt;
    return -std::sqrt(t_ * (t_ - 2.0)) / (2.0 * t_ - 1.0);
  }

  std::string rho_domain() const override { return "t>2"; }
  Support support() const override { return Support::PositiveQuadrant; }
  ModelParams params() const override { return {Family::ExpPareto, t_, 0.0}; }

 private:
  double t_;
};

class BivariateParetoModel final : public BivariateModel {
 public:
  explicit BivariateParetoModel(double t) : t_(t) {}

  double cdf(double x, double y) const override {
    if (x <= 0.0 || y <= 0.0) return 0.0;
    return 1.0 - std::pow(x + 1.0, -t_) - std::pow(y + 1.0, -t_) + std::pow(x + y + 1.0, -t_);
  }

  double pdf(double x, double y) const override {
    if (x < 0.0 || y < 0.0 || std::isinf(x) || std::isinf(y)) return 0.0;
    return t_ * (t_ + 1.0) * std::pow(x + y + 1.0, -(t_ + 2.0));
  }

  double marginal_cdf_x(double x) const override {
    return x <= 0.0 ? 0.0 : -std::expm1(-t_ * std::log1p(x));
  }

  double marginal_cdf_y(double y) const override { return marginal_cdf_x(y); }

  double marginal_quantile_x(double u) const override {
    return std::expm1(-std::log1p(-u) / t_);
  }

  // 1 - ((x+1)/(x+y+1))^{t+1}
  double conditional_cdf_y(double y, double x) const override {
    if (y <= 0.0) return 0.0;
    return -std::expm1(-(t_ + 1.0) * std::log1p(y / (x + 1.0)));
  }

  double conditional_quantile_y(double u, double x) const override {
    return (x + 1.0) * std::expm1(-std::log1p(-u) / (t_ + 1.0));
  }

  std::optional<double> tau_closed_form() const override { return 1.0 / (2.0 * t_ + 1.0); }

  std::optional<double> rho_closed_form() const override {
    if (!(t_ > 2.0)) return std::nullopt;
    return 1.0 / t_;
  }

  std::string rho_domain() const override { return "t>2"; }
  Support support() const override { return Support::PositiveQuadrant; }
  ModelParams params() const override { return {Family::BivariatePareto, t_, 0.0}; }

 private:
  double t_;
};

class FgmModel final : public BivariateModel {
 public:
  explicit FgmModel(double alpha) : alpha_(alpha) {}

  double cdf(double x, double y) const override {
    const double u = std::clamp(x, 0.0, 1.0);
    const double v = std::clamp(y, 0.0, 1.0);
    return u * v * (1.0 + alpha_ * (1.0 - u) * (1.0 - v));
  }

  double pdf(double x, double y) const override {
    if (x < 0.0 || x > 1.0 || y < 0.0 || y > 1.0) return 0.0;
    return 1.0 + alpha_ * (1.0 - 2.0 * x) * (1.0 - 2.0 * y);
  }

  double marginal_cdf_x(double x) const override { return std::clamp(x, 0.0, 1.0); }
  double marginal_cdf_y(double y) const override { return std::clamp(y, 0.0, 1.0); }
  double marginal_quantile_x(double u) const override { return u; }

  double conditional_cdf_y(double y, double x) const override {
    const double v = std::clamp(y, 0.0, 1.0);
    return v * (1.0 + alpha_ * (1.0 - 2.0 * x) * (1.0 - v));
  }

  // Root of a v^2 - (1+a) v + w = 0 in [0, 1], a = alpha (1 - 2x), written as
  // 2w / (b + sqrt(b^2 - 4 a w)) so that a -> 0 does not cancel.
  double conditional_quantile_y(double w, double x) const override {
    const double a = alpha_ * (1.0 - 2.0 * x);
    const double b = 1.0 + a;
    const double disc = std::max(b * b - 4.0 * a * w, 0.0);
    return 2.0 * w / (b + std::sqrt(disc));
  }

  std::optional<double> tau_closed_form() const override { return 2.0 * alpha_ / 9.0; }
  std::optional<double> rho_closed_form() const override { return alpha_ / 3.0; }
  std::string rho_domain() const override { return "-1<=alpha<=1"; }
  Support support() const override { return Support::UnitSquare; }
  ModelParams params() const override { return {Family::Fgm, 0.0, alpha_}; }

 private:
  double alpha_;
};

}  // namespace

std::string_view family_name(Family family) noexcept {
  switch (family) {
    case Family::ExpPareto:
      return "exp-pareto";
    case Family::BivariatePareto:
      return "pareto";
    case Family::Fgm:
      return "fgm";
  }
  return "unknown";
}

Family parse_family(std::string_view text) {
  if (text == "exp-pareto") return Family::ExpPareto;
  if (text == "pareto") return Family::BivariatePareto;
  if (text == "fgm") return Family::Fgm;
  throw ParameterError(
      fmt::format("unknown family '{}' (expected exp-pareto, pareto or fgm)", text));
}

void validate(const ModelParams& params) {
  switch (params.family) {
    case Family::ExpPareto:
    case Family::BivariatePareto:
      if (!(params.t > 0.0) || !std::isfinite(params.t)) {
        throw ParameterError(fmt::format("{} requires t > 0 (got {})",
                                         family_name(params.family), params.t));
      }
      break;
    case Family::Fgm:
      if (!(params.alpha >= -1.0 && params.alpha <= 1.0)) {
        throw ParameterError(fmt::format("fgm requires -1 <= alpha <= 1 (got {})", params.alpha));
      }
      break;
  }
}

Point BivariateModel::draw(SeededGenerator& rng) const {
  const double x = marginal_quantile_x(rng.uniform_open());
  return {x, conditional_quantile_y(rng.uniform_open(), x)};
}

std::string BivariateModel::describe() const {
  const ModelParams p = params();
  if (p.family == Family::Fgm) return fmt::format("fgm(alpha={})", p.alpha);
  return fmt::format("{}(t={})", family_name(p.family), p.t);
}

std::unique_ptr<const BivariateModel> make_model(const ModelParams& params) {
  validate(params);
  switch (params.family) {
    case Family::ExpPareto:
      return std::make_unique<ExpParetoModel>(params.t);
    case Family::BivariatePareto:
      return std::make_unique<BivariateParetoModel>(params.t);
    case Family::Fgm:
      return std::make_unique<FgmModel>(params.alpha);
  }
  throw ParameterError("unknown family");
}

}  // namespace kendall
