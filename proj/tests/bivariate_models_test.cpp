#include "kendall/bivariate_models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <gtest/gtest.h>

#include "kendall/quadrature.hpp"
#include "kendall/rank_core.hpp"

namespace kendall {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Case {
  ModelParams params;
  const char* label;
};

std::vector<Case> all_cases() {
  return {
      {{Family::ExpPareto, 0.5, 0.0}, "exp-pareto t=0.5"},
      {{Family::ExpPareto, 1.0, 0.0}, "exp-pareto t=1"},
      {{Family::ExpPareto, 3.0, 0.0}, "exp-pareto t=3"},
      {{Family::BivariatePareto, 0.5, 0.0}, "pareto t=0.5"},
      {{Family::BivariatePareto, 2.0, 0.0}, "pareto t=2"},
      {{Family::BivariatePareto, 5.0, 0.0}, "pareto t=5"},
      {{Family::Fgm, 0.0, -1.0}, "fgm alpha=-1"},
      {{Family::Fgm, 0.0, 0.0}, "fgm alpha=0"},
      {{Family::Fgm, 0.0, 0.7}, "fgm alpha=0.7"},
  };
}

double marginal_quantile_y(const BivariateModel& m, double v) {
  switch (m.params().family) {
    case Family::ExpPareto:
    case Family::BivariatePareto:
      return std::expm1(-std::log1p(-v) / m.params().t);
    case Family::Fgm:
      return v;
  }
  return 0.0;
}

// A point whose marginal probabilities both lie in [lo, hi].
Point interior_point(const BivariateModel& m, std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  return {m.marginal_quantile_x(u(rng)), marginal_quantile_y(m, u(rng))};
}

TEST(MakeModelTest, RejectsInvalidParameters) {
  try {
    make_model({Family::ExpPareto, 0.0, 0.0});
    FAIL();
  } catch (const ParameterError& e) {
    EXPECT_NE(std::string(e.what()).find("t > 0"), std::string::npos);
  }
  EXPECT_THROW(make_model({Family::BivariatePareto, -1.0, 0.0}), ParameterError);
  try {
    make_model({Family::Fgm, 1.0, 1.5});
    FAIL();
  } catch (const ParameterError& e) {
    EXPECT_NE(std::string(e.what()).find("alpha"), std::string::npos);
  }
  EXPECT_NO_THROW(make_model({Family::Fgm, 0.0, -1.0}));
  EXPECT_NO_THROW(make_model({Family::Fgm, 0.0, 1.0}));
}

TEST(MakeModelTest, ParseFamily) {
  EXPECT_THROW(parse_family("5.1"), ParameterError);
  EXPECT_EQ(parse_family("pareto"), Family::BivariatePareto);
  EXPECT_EQ(parse_family("fgm"), Family::Fgm);
  EXPECT_THROW(parse_family("gauss"), ParameterError);
}

TEST(CdfTest, Examples) {
  const auto indep = make_model({Family::Fgm, 0.0, 0.0});
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const double a = u(rng), b = u(rng);
    EXPECT_DOUBLE_EQ(indep->cdf(a, b), a * b);
  }
  const auto pareto = make_model({Family::BivariatePareto, 1.0, 0.0});
  EXPECT_NEAR(pareto->cdf(1.0, 1.0), 1.0 / 3.0, 1e-15);
  for (const double t : {0.3, 1.0, 4.0}) {
    const auto m = make_model({Family::ExpPareto, t, 0.0});
    for (const double x : {0.01, 0.5, 2.0, 10.0}) {
      EXPECT_NEAR(m->marginal_cdf_x(x), 1.0 - std::exp(-x), 1e-15);
    }
  }
}

TEST(CdfTest, BoundaryLimitsAndClamping) {
  for (const Case& c : all_cases()) {
    SCOPED_TRACE(c.label);
    const auto m = make_model(c.params);
    std::mt19937_64 rng(2);
    for (int i = 0; i < 50; ++i) {
      const Point p = interior_point(*m, rng, 0.01, 0.99);
      EXPECT_NEAR(m->cdf(p.x, kInf), m->marginal_cdf_x(p.x), 1e-14);
      EXPECT_NEAR(m->cdf(kInf, p.y), m->marginal_cdf_y(p.y), 1e-14);
      EXPECT_NEAR(m->cdf(p.x, 1e40), m->marginal_cdf_x(p.x), 1e-12);
      EXPECT_EQ(m->cdf(-1.0, p.y), 0.0);
      EXPECT_EQ(m->cdf(p.x, -1.0), 0.0);
    }
    EXPECT_EQ(m->cdf(kInf, kInf), 1.0);
    EXPECT_EQ(m->cdf(0.0, 0.0), 0.0);
  }
}

TEST(CdfTest, NondecreasingAlongAxisSegments) {
  for (const Case& c : all_cases()) {
    SCOPED_TRACE(c.label);
    const auto m = make_model(c.params);
    std::mt19937_64 rng(3);
    for (int seg = 0; seg < 50; ++seg) {
      const Point a = interior_point(*m, rng, 0.001, 0.999);
      const Point b = interior_point(*m, rng, 0.001, 0.999);
      const double x0 = std::min(a.x, b.x), x1 = std::max(a.x, b.x);
      const double y0 = std::min(a.y, b.y), y1 = std::max(a.y, b.y);
      double prev_x = -1.0, prev_y = -1.0;
      for (int k = 0; k <= 40; ++k) {
        const double fx = m->cdf(x0 + (x1 - x0) * k / 40.0, a.y);
        const double fy = m->cdf(a.x, y0 + (y1 - y0) * k / 40.0);
        EXPECT_GE(fx, prev_x - 1e-15);
        EXPECT_GE(fy, prev_y - 1e-15);
        prev_x = fx;
        prev_y = fy;
      }
    }
  }
}

TEST(PdfTest, Examples) {
  const auto indep = make_model({Family::Fgm, 0.0, 0.0});
  EXPECT_EQ(indep->pdf(0.2, 0.9), 1.0);
  EXPECT_EQ(indep->pdf(0.5, 0.5), 1.0);
  EXPECT_EQ(indep->pdf(1.5, 0.5), 0.0);
  const auto pareto = make_model({Family::BivariatePareto, 1.0, 0.0});
  EXPECT_DOUBLE_EQ(pareto->pdf(0.0, 0.0), 2.0);
  EXPECT_EQ(pareto->pdf(-0.1, 0.0), 0.0);
}

TEST(PdfTest, NonnegativeOnSupport) {
  for (const Case& c : all_cases()) {
    const auto m = make_model(c.params);
    std::mt19937_64 rng(4);
    for (int i = 0; i < 1000; ++i) {
      const Point p = interior_point(*m, rng, 1e-6, 1.0 - 1e-6);
      EXPECT_GE(m->pdf(p.x, p.y), 0.0) << c.label;
    }
  }
}

// Central difference of d2F/dxdy with two Richardson steps (error O(h^6)).
double mixed_partial(const BivariateModel& m, double x, double y, double hx, double hy) {
  auto central = [&](double k) {
    const double a = hx / k, b = hy / k;
    return (m.cdf(x + a, y + b) - m.cdf(x + a, y - b) - m.cdf(x - a, y + b) +
            m.cdf(x - a, y - b)) /
           (4.0 * a * b);
  };
  const double d1 = central(1), d2 = central(2), d4 = central(4);
  const double r1 = (4.0 * d2 - d1) / 3.0;
  const double r2 = (4.0 * d4 - d2) / 3.0;
  return (16.0 * r2 - r1) / 15.0;
}

// Proportional to the coordinate, and keeps v +/- step inside the support.
double step(const BivariateModel& m, double v) {
  return 0.1 * (m.support() == Support::UnitSquare ? std::min(v, 1.0 - v) : v);
}

// Points drawn from the model itself, kept to the central 90% of each marginal.
std::vector<Point> typical_points(const BivariateModel& m, std::size_t count) {
  SeededGenerator rng(5, 0);
  std::vector<Point> out;
  while (out.size() < count) {
    const Point p = m.draw(rng);
    const double u = m.marginal_cdf_x(p.x), v = m.marginal_cdf_y(p.y);
    if (u > 0.05 && u < 0.95 && v > 0.05 && v < 0.95) out.push_back(p);
  }
  return out;
}

TEST(PdfTest, MatchesFiniteDifferenceOfCdf) {
  for (const Case& c : all_cases()) {
    SCOPED_TRACE(c.label);
    const auto m = make_model(c.params);
    for (const Point& p : typical_points(*m, 100)) {
      const double fd = mixed_partial(*m, p.x, p.y, step(*m, p.x), step(*m, p.y));
      const double exact = m->pdf(p.x, p.y);
      EXPECT_NEAR(fd, exact, 1e-5 * std::abs(exact)) << "at " << p.x << "," << p.y;
    }
  }
}

TEST(PdfTest, IntegratesToOne) {
  for (const Case& c : all_cases()) {
    SCOPED_TRACE(c.label);
    const auto m = make_model(c.params);
    double total = 0.0;
    if (m->support() == Support::UnitSquare) {
      const GaussLegendreRule rule = gauss_legendre(8, 0.0, 1.0);
      for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
          total += rule.weights[i] * rule.weights[j] * m->pdf(rule.nodes[i], rule.nodes[j]);
        }
      }
      // independent midpoint rule; exact for the bilinear density
      double midpoint = 0.0;
      constexpr int kCells = 50;
      for (int i = 0; i < kCells; ++i) {
        for (int j = 0; j < kCells; ++j) {
          midpoint += m->pdf((i + 0.5) / kCells, (j + 0.5) / kCells);
        }
      }
      EXPECT_NEAR(midpoint / (kCells * kCells), 1.0, 1e-12);
    } else {
      boost::math::quadrature::exp_sinh<double> outer, inner;
      total = outer.integrate([&](double x) {
        return inner.integrate([&](double y) { return m->pdf(x, y); }, 1e-12);
      }, 1e-10);
    }
    EXPECT_NEAR(total, 1.0, 1e-6);
  }
}

TEST(SamplerTest, ConditionalInverseRoundTrip) {
  for (const Case& c : all_cases()) {
    SCOPED_TRACE(c.label);
    const auto m = make_model(c.params);
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> u(1e-6, 1.0 - 1e-6);
    for (int i = 0; i < 2000; ++i) {
      const double x = m->marginal_quantile_x(u(rng));
      const double w = u(rng);
      const double y = m->conditional_quantile_y(w, x);
      EXPECT_NEAR(m->conditional_cdf_y(y, x), w, 1e-10);
    }
  }
}

// The conditional CDF must agree with dF/dx / h(x) computed from the joint cdf.
TEST(SamplerTest, ConditionalCdfMatchesJointCdf) {
  for (const Case& c : all_cases()) {
    SCOPED_TRACE(c.label);
    const auto m = make_model(c.params);
    std::mt19937_64 rng(7);
    for (int i = 0; i < 100; ++i) {
      const Point p = interior_point(*m, rng, 0.05, 0.95);
      const double h = 1e-5 * std::min(p.x, 1.0);
      const double dfdx = (m->cdf(p.x + h, p.y) - m->cdf(p.x - h, p.y)) / (2 * h);
      const double dhdx =
          (m->marginal_cdf_x(p.x + h) - m->marginal_cdf_x(p.x - h)) / (2 * h);
      EXPECT_NEAR(dfdx / dhdx, m->conditional_cdf_y(p.y, p.x), 1e-6);
    }
  }
}

TEST(SamplerTest, MarginalsMatchEmpiricalCdf) {
  constexpr std::size_t kDraws = 100000;
  for (const Case& c : all_cases()) {
    SCOPED_TRACE(c.label);
    const auto m = make_model(c.params);
    SeededGenerator rng(8, 0);
    std::vector<double> xs(kDraws), ys(kDraws);
    for (std::size_t i = 0; i < kDraws; ++i) {
      const Point p = m->draw(rng);
      ASSERT_TRUE(std::isfinite(p.x) && std::isfinite(p.y));
      xs[i] = p.x;
      ys[i] = p.y;
    }
    std::sort(xs.begin(), xs.end());
    std::sort(ys.begin(), ys.end());
    double dx = 0.0, dy = 0.0;
    for (std::size_t i = 0; i < kDraws; ++i) {
      const double lo = static_cast<double>(i) / kDraws;
      const double hi = static_cast<double>(i + 1) / kDraws;
      const double hx = m->marginal_cdf_x(xs[i]);
      const double gy = m->marginal_cdf_y(ys[i]);
      dx = std::max({dx, std::abs(hx - lo), std::abs(hx - hi)});
      dy = std::max({dy, std::abs(gy - lo), std::abs(gy - hi)});
    }
    EXPECT_LE(dx, 0.01);
    EXPECT_LE(dy, 0.01);
  }
}

TEST(SamplerTest, IndependenceCopulaDrawsUncorrelated) {
  const auto m = make_model({Family::Fgm, 0.0, 0.0});
  SeededGenerator rng(9, 0);
  constexpr std::size_t kDraws = 100000;
  std::vector<double> xs(kDraws), ys(kDraws);
  for (std::size_t i = 0; i < kDraws; ++i) {
    const Point p = m->draw(rng);
    xs[i] = p.x;
    ys[i] = p.y;
  }
  const double rho = pearson_rho_sample(BivariateSample(xs, ys));
  EXPECT_LT(std::abs(rho), 4.0 / std::sqrt(static_cast<double>(kDraws)));
}

double mean_cdf_at_draws(const BivariateModel& m, std::size_t draws, double* se) {
  SeededGenerator rng(10, 0);
  double sum = 0.0, sum_sq = 0.0;
  for (std::size_t i = 0; i < draws; ++i) {
    const Point p = m.draw(rng);
    const double f = m.cdf(p.x, p.y);
    sum += f;
    sum_sq += f * f;
  }
  const double n = static_cast<double>(draws);
  const double mean = sum / n;
  *se = std::sqrt((sum_sq / n - mean * mean) / n);
  return mean;
}

TEST(SamplerTest, MeanCdfAtDrawsMatchesClosedForms) {
  double se = 0.0;
  const auto pareto = make_model({Family::BivariatePareto, 1.0, 0.0});
  const double pareto_mean = mean_cdf_at_draws(*pareto, 1'000'000, &se);
  EXPECT_NEAR(pareto_mean, 1.0 / 3.0, 4.0 * se);
  const auto exp_pareto = make_model({Family::ExpPareto, 2.0, 0.0});
  EXPECT_NEAR(mean_cdf_at_draws(*exp_pareto, 1'000'000, &se), 0.125, 0.002);
}

TEST(SamplerTest, FgmRhoMatchesClosedForm) {
  constexpr int kBatches = 20;
  constexpr std::size_t kBatch = 5000;
  for (const double alpha : {-1.0, 0.0, 1.0}) {
    const auto m = make_model({Family::Fgm, 0.0, alpha});
    SeededGenerator rng(11, static_cast<std::uint64_t>(alpha + 2));
    std::vector<double> rhos;
    for (int b = 0; b < kBatches; ++b) {
      std::vector<double> xs(kBatch), ys(kBatch);
      for (std::size_t i = 0; i < kBatch; ++i) {
        const Point p = m->draw(rng);
        xs[i] = p.x;
        ys[i] = p.y;
      }
      rhos.push_back(pearson_rho_sample(BivariateSample(xs, ys)));
    }
    double mean = 0.0;
    for (const double r : rhos) mean += r / kBatches;
    double ss = 0.0;
    for (const double r : rhos) ss += (r - mean) * (r - mean);
    const double se = std::sqrt(ss / (kBatches - 1) / kBatches);
    EXPECT_NEAR(mean, alpha / 3.0, 4.0 * se) << "alpha=" << alpha;
  }
}

TEST(ClosedFormTest, Tau) {
  EXPECT_EQ(*make_model({Family::ExpPareto, 0.7, 0.0})->tau_closed_form(), -0.5);
  EXPECT_DOUBLE_EQ(*make_model({Family::BivariatePareto, 2.0, 0.0})->tau_closed_form(), 0.2);
  EXPECT_DOUBLE_EQ(*make_model({Family::Fgm, 0.0, -1.0})->tau_closed_form(), -2.0 / 9.0);
}

TEST(ClosedFormTest, Rho) {
  EXPECT_DOUBLE_EQ(*make_model({Family::BivariatePareto, 4.0, 0.0})->rho_closed_form(), 0.25);
  EXPECT_NEAR(*make_model({Family::ExpPareto, 3.0, 0.0})->rho_closed_form(),
              -std::sqrt(3.0) / 5.0, 1e-15);
  EXPECT_NEAR(*make_model({Family::ExpPareto, 3.0, 0.0})->rho_closed_form(), -0.34641, 1e-5);
  EXPECT_FALSE(make_model({Family::BivariatePareto, 1.5, 0.0})->rho_closed_form());
  EXPECT_FALSE(make_model({Family::ExpPareto, 2.0, 0.0})->rho_closed_form());
  EXPECT_DOUBLE_EQ(*make_model({Family::Fgm, 0.0, 0.6})->rho_closed_form(), 0.2);
}

// Pearson rho of the exponential-Pareto family by numerical integration:
// E[XY] = E[X E[Y | X]] with Y = (1 + W/x)^{1/t} - 1, W ~ Exp(1).
TEST(ClosedFormTest, ExpParetoRhoAgreesWithIntegration) {
  boost::math::quadrature::exp_sinh<double> outer, inner;
  for (const double t : {3.0, 5.0}) {
    const auto m = make_model({Family::ExpPareto, t, 0.0});
    const double exy = outer.integrate([&](double x) {
      const double ey = inner.integrate(
          [&](double w) { return (std::pow(1.0 + w / x, 1.0 / t) - 1.0) * std::exp(-w); }, 1e-12);
      return x * ey * std::exp(-x);
    }, 1e-10);
    const double ey = 1.0 / (t - 1.0);
    const double vy = 2.0 / ((t - 1.0) * (t - 2.0)) - ey * ey;
    EXPECT_NEAR((exy - ey) / std::sqrt(vy), *m->rho_closed_form(), 1e-8) << "t=" << t;
  }
}

}  // namespace
}  // namespace kendall
