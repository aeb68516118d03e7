#pragma once

// Three absolutely continuous bivariate families with closed-form Kendall tau:
//
//   ExpPareto        F = 1 - e^{-x} - (1 - e^{-x(y+1)^t}) / (y+1)^t,   x, y > 0
//   BivariatePareto  F = 1 - (x+1)^{-t} - (y+1)^{-t} + (x+y+1)^{-t},  x, y > 0
//   Fgm              F = xy (1 + alpha (1-x)(1-y)),                   0 < x, y < 1
//
// Each model exposes its CDF, density, marginals and an exact sampler that
// inverts the x-marginal and then the conditional law of Y given X = x.

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "kendall/rng.hpp"

namespace kendall {

class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Family { ExpPareto, BivariatePareto, Fgm };

enum class Support { PositiveQuadrant, UnitSquare };

struct ModelParams {
  Family family = Family::Fgm;
  double t = 1.0;      // ExpPareto, BivariatePareto; must be > 0
  double alpha = 0.0;  // Fgm; must lie in [-1, 1]
};

struct Point {
  double x = 0.0;
  double y = 0.0;
};

std::string_view family_name(Family family) noexcept;

/// Accepts "exp-pareto", "pareto" and "fgm".
Family parse_family(std::string_view text);

void validate(const ModelParams& params);

class BivariateModel {
 public:
  virtual ~BivariateModel() = default;

  /// F(x, y). Off-support arguments clamp: 0 below the support, the marginal
  /// when one argument is beyond the upper end, 1 when both are.
  virtual double cdf(double x, double y) const = 0;
  /// Mixed second partial of cdf; 0 off the support.
  virtual double pdf(double x, double y) const = 0;
  virtual double marginal_cdf_x(double x) const = 0;
  virtual double marginal_cdf_y(double y) const = 0;
  virtual double marginal_quantile_x(double u) const = 0;
  /// P(Y < y | X = x) for x inside the support.
  virtual double conditional_cdf_y(double y, double x) const = 0;
  /// Inverse of conditional_cdf_y in y, for u in (0, 1).
  virtual double conditional_quantile_y(double u, double x) const = 0;

  virtual Point draw(SeededGenerator& rng) const;

  virtual std::optional<double> tau_closed_form() const = 0;
  /// Empty when second moments do not exist for the parameters.
  virtual std::optional<double> rho_closed_form() const = 0;
  /// Human-readable domain on which rho_closed_form is defined, e.g. "t>2".
  virtual std::string rho_domain() const = 0;

  virtual Support support() const = 0;
  virtual ModelParams params() const = 0;
  std::string describe() const;
};

std::unique_ptr<const BivariateModel> make_model(const ModelParams& params);

}  // namespace kendall
