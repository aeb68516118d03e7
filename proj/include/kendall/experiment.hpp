#pragma once

// Replication harness: repeated samples of size n from a model, tau_n and
// rho_n per replication, and the aggregate tables that check E tau_n = tau for
// every n and the concentration of tau_n around tau as n grows.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kendall/bivariate_models.hpp"

namespace kendall {

/// Tolerances, in standard errors, for reproduced means (closed-form targets)
/// and for zero checks.
inline constexpr double kMeanToleranceSe = 3.0;
inline constexpr double kZeroToleranceSe = 4.0;

inline constexpr std::size_t kDefaultSampleSize = 1000;
inline constexpr std::size_t kDefaultReplications = 200;
inline constexpr std::size_t kReferenceDraws = 1'000'000;

enum class TauAlgorithm { Fast, Naive };

struct ReplicationOptions {
  std::vector<double> epsilons;
  /// Overrides reference_tau(model) in exceedance counts.
  std::optional<double> reference_tau;
  unsigned threads = 1;
  TauAlgorithm algorithm = TauAlgorithm::Fast;
};

struct ReplicationSummary {
  std::size_t n = 0;
  std::size_t replications = 0;
  std::uint64_t master_seed = 0;
  double reference_tau = 0.0;
  double tau_mean = 0.0;
  double tau_variance = 0.0;  // unbiased (R - 1 denominator); 0 when R = 1
  double tau_std_error = 0.0;
  std::optional<double> rho_mean;  // over replications with nondegenerate rho_n
  std::size_t rho_count = 0;
  std::size_t tie_fallbacks = 0;
  std::map<double, std::size_t> exceed_count;  // epsilon -> #{|tau_n - tau| > epsilon}
  std::vector<double> tau_values;              // replication order

  /// (tau_mean - target) / tau_std_error; infinite if the error is zero and
  /// the mean misses the target.
  double z_score(double target) const;
};

/// Closed-form tau when the model has one, else tau_monte_carlo with
/// kReferenceDraws draws.
double reference_tau(const BivariateModel& model);

/// Replication r (0-based) draws its n points from SeededGenerator(master_seed, r).
/// Results do not depend on options.threads.
ReplicationSummary run_replications(const BivariateModel& model, std::size_t n,
                                    std::size_t replications, std::uint64_t master_seed,
                                    const ReplicationOptions& options = {});

struct UnbiasednessRow {
  std::size_t n = 0;
  double tau_mean = 0.0;
  double std_error = 0.0;
  double reference = 0.0;
  double z_score = 0.0;
  bool within_tolerance = false;  // |z| <= kZeroToleranceSe
};

/// Row i uses master seed derive_seed(master_seed, i).
std::vector<UnbiasednessRow> unbiasedness_table(const BivariateModel& model,
                                                const std::vector<std::size_t>& n_list,
                                                std::size_t replications,
                                                std::uint64_t master_seed,
                                                const ReplicationOptions& options = {});

struct ConvergenceRow {
  std::size_t n = 0;
  double epsilon = 0.0;
  std::size_t exceed_count = 0;
  double exceed_frequency = 0.0;
  double tau_variance = 0.0;
};

/// One replication set per n (seeded as in unbiasedness_table), shared by all
/// epsilons, so exceedance is exactly nonincreasing in epsilon. n_list must be
/// strictly increasing and epsilons positive.
std::vector<ConvergenceRow> convergence_table(const BivariateModel& model,
                                              const std::vector<std::size_t>& n_list,
                                              std::size_t replications,
                                              const std::vector<double>& epsilons,
                                              std::uint64_t master_seed,
                                              const ReplicationOptions& options = {});

struct AssertionResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Every row within kZeroToleranceSe of its reference.
std::vector<AssertionResult> check_unbiasedness(const std::vector<UnbiasednessRow>& rows);

/// Per epsilon, exceedance may rise between consecutive n by at most 3 binomial
/// standard errors; tau variance must strictly decrease between consecutive n.
std::vector<AssertionResult> check_convergence(const std::vector<ConvergenceRow>& rows,
                                               std::size_t replications);

}  // namespace kendall
