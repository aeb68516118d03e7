#include "kendall/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <stdexcept>
#include <thread>

#include <fmt/format.h>

#include "kendall/rank_core.hpp"
#include "kendall/rng.hpp"
#include "kendall/theoretical_tau.hpp"

namespace kendall {

namespace {

constexpr std::uint64_t kReferenceSeed = 0x7A0217;

struct ReplicationResult {
  double tau = 0.0;
  std::optional<double> rho;
  bool fell_back = false;
};

ReplicationResult replicate(const BivariateModel& model, std::size_t n, std::uint64_t seed,
                            std::uint64_t stream, TauAlgorithm algorithm) {
  SeededGenerator rng(seed, stream);
  std::vector<double> xs(n), ys(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Point p = model.draw(rng);
    xs[i] = p.x;
    ys[i] = p.y;
  }
  const BivariateSample sample(std::move(xs), std::move(ys));
  ReplicationResult out;
  if (algorithm == TauAlgorithm::Fast) {
    const TauEstimate est = kendall_tau_fast(sample);
    out.tau = est.value;
    out.fell_back = est.path == TauPath::NaiveFallback;
  } else {
    out.tau = kendall_tau_naive(sample);
  }
  try {
    out.rho = pearson_rho_sample(sample);
  } catch (const DataError&) {
    out.rho.reset();
  }
  return out;
}

std::vector<ReplicationResult> replicate_all(const BivariateModel& model, std::size_t n,
                                             std::size_t replications, std::uint64_t seed,
                                             const ReplicationOptions& options) {
  std::vector<ReplicationResult> results(replications);
  const unsigned workers =
      std::max(1u, std::min<unsigned>(options.threads, static_cast<unsigned>(replications)));
  if (workers == 1) {
    for (std::size_t r = 0; r < replications; ++r) {
      results[r] = replicate(model, n, seed, r, options.algorithm);
    }
    return results;
  }
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t r = w; r < replications; r += workers) {
            results[r] = replicate(model, n, seed, r, options.algorithm);
          }
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

void require_sizes(std::size_t n, std::size_t replications) {
  if (n < 2) throw std::invalid_argument("need at least two observations");
  if (replications < 1) throw std::invalid_argument("need at least one replication");
}

void require_n_list(const std::vector<std::size_t>& n_list) {
  if (n_list.empty()) throw std::invalid_argument("n list must not be empty");
  for (const std::size_t n : n_list) require_sizes(n, 1);
}

}  // namespace

double ReplicationSummary::z_score(double target) const {
  const double diff = tau_mean - target;
  if (tau_std_error > 0.0) return diff / tau_std_error;
  if (diff == 0.0) return 0.0;
  return std::copysign(std::numeric_limits<double>::infinity(), diff);
}

double reference_tau(const BivariateModel& model) {
  if (const auto closed = model.tau_closed_form()) return *closed;
  return tau_monte_carlo(model, kReferenceDraws, kReferenceSeed).value;
}

ReplicationSummary run_replications(const BivariateModel& model, std::size_t n,
                                    std::size_t replications, std::uint64_t master_seed,
                                    const ReplicationOptions& options) {
  require_sizes(n, replications);
  for (const double eps : options.epsilons) {
    if (!(eps > 0.0)) throw std::invalid_argument("epsilons must be positive");
  }
  const std::vector<ReplicationResult> results =
      replicate_all(model, n, replications, master_seed, options);

  ReplicationSummary s;
  s.n = n;
  s.replications = replications;
  s.master_seed = master_seed;
  s.reference_tau = options.reference_tau ? *options.reference_tau : reference_tau(model);
  s.tau_values.reserve(replications);

  double tau_sum = 0.0;
  double rho_sum = 0.0;
  for (const ReplicationResult& r : results) {
    s.tau_values.push_back(r.tau);
    tau_sum += r.tau;
    if (r.rho) {
      rho_sum += *r.rho;
      ++s.rho_count;
    }
    if (r.fell_back) ++s.tie_fallbacks;
  }
  const double count = static_cast<double>(replications);
  s.tau_mean = tau_sum / count;
  if (replications > 1) {
    double ss = 0.0;
    for (const double v : s.tau_values) ss += (v - s.tau_mean) * (v - s.tau_mean);
    s.tau_variance = ss / (count - 1.0);
  }
  s.tau_std_error = std::sqrt(s.tau_variance / count);
  if (s.rho_count > 0) s.rho_mean = rho_sum / static_cast<double>(s.rho_count);

  for (const double eps : options.epsilons) {
    s.exceed_count[eps] = static_cast<std::size_t>(
        std::count_if(s.tau_values.begin(), s.tau_values.end(),
                      [&](double v) { return std::abs(v - s.reference_tau) > eps; }));
  }
  return s;
}

std::vector<UnbiasednessRow> unbiasedness_table(const BivariateModel& model,
                                                const std::vector<std::size_t>& n_list,
                                                std::size_t replications,
                                                std::uint64_t master_seed,
                                                const ReplicationOptions& options) {
  require_n_list(n_list);
  ReplicationOptions opts = options;
  if (!opts.reference_tau) opts.reference_tau = reference_tau(model);
  std::vector<UnbiasednessRow> rows;
  rows.reserve(n_list.size());
  for (std::size_t i = 0; i < n_list.size(); ++i) {
    const ReplicationSummary s =
        run_replications(model, n_list[i], replications, derive_seed(master_seed, i), opts);
    UnbiasednessRow row;
    row.n = s.n;
    row.tau_mean = s.tau_mean;
    row.std_error = s.tau_std_error;
    row.reference = s.reference_tau;
    row.z_score = s.z_score(s.reference_tau);
    row.within_tolerance = std::abs(row.z_score) <= kZeroToleranceSe;
    rows.push_back(row);
  }
  return rows;
}

std::vector<ConvergenceRow> convergence_table(const BivariateModel& model,
                                              const std::vector<std::size_t>& n_list,
                                              std::size_t replications,
                                              const std::vector<double>& epsilons,
                                              std::uint64_t master_seed,
                                              const ReplicationOptions& options) {
  require_n_list(n_list);
  for (std::size_t i = 1; i < n_list.size(); ++i) {
    if (!(n_list[i - 1] < n_list[i])) {
      throw std::invalid_argument("n list must be strictly increasing");
    }
  }
  if (epsilons.empty()) throw std::invalid_argument("need at least one epsilon");
  ReplicationOptions opts = options;
  opts.epsilons = epsilons;
  if (!opts.reference_tau) opts.reference_tau = reference_tau(model);

  std::vector<ConvergenceRow> rows;
  for (std::size_t i = 0; i < n_list.size(); ++i) {
    const ReplicationSummary s =
        run_replications(model, n_list[i], replications, derive_seed(master_seed, i), opts);
    for (const double eps : epsilons) {
      ConvergenceRow row;
      row.n = s.n;
      row.epsilon = eps;
      row.exceed_count = s.exceed_count.at(eps);
      row.exceed_frequency =
          static_cast<double>(row.exceed_count) / static_cast<double>(replications);
      row.tau_variance = s.tau_variance;
      rows.push_back(row);
    }
  }
  return rows;
}

std::vector<AssertionResult> check_unbiasedness(const std::vector<UnbiasednessRow>& rows) {
  std::vector<AssertionResult> out;
  for (const UnbiasednessRow& row : rows) {
    out.push_back({fmt::format("unbiased n={}", row.n), row.within_tolerance,
                   fmt::format("mean {:.6f} vs tau {:.6f}, z = {:+.2f} (limit {})", row.tau_mean,
                               row.reference, row.z_score, kZeroToleranceSe)});
  }
  return out;
}

std::vector<AssertionResult> check_convergence(const std::vector<ConvergenceRow>& rows,
                                               std::size_t replications) {
  std::vector<AssertionResult> out;
  const double r = static_cast<double>(replications);
  std::map<double, std::vector<const ConvergenceRow*>> by_eps;
  for (const ConvergenceRow& row : rows) by_eps[row.epsilon].push_back(&row);

  for (const auto& [eps, series] : by_eps) {
    for (std::size_t i = 1; i < series.size(); ++i) {
      const ConvergenceRow& prev = *series[i - 1];
      const ConvergenceRow& next = *series[i];
      const double p0 = prev.exceed_frequency;
      const double p1 = next.exceed_frequency;
      const double slack = 3.0 * std::sqrt(p0 * (1.0 - p0) / r + p1 * (1.0 - p1) / r);
      out.push_back({fmt::format("exceedance eps={} n={}->{}", eps, prev.n, next.n),
                     p1 <= p0 + slack,
                     fmt::format("P {:.4f} -> {:.4f} (slack {:.4f})", p0, p1, slack)});
    }
  }
  // variance is per n; take it from the first epsilon's series
  if (!by_eps.empty()) {
    const auto& series = by_eps.begin()->second;
    for (std::size_t i = 1; i < series.size(); ++i) {
      const ConvergenceRow& prev = *series[i - 1];
      const ConvergenceRow& next = *series[i];
      out.push_back({fmt::format("variance n={}->{}", prev.n, next.n),
                     next.tau_variance < prev.tau_variance,
                     fmt::format("var {:.3e} -> {:.3e}", prev.tau_variance, next.tau_variance)});
    }
  }
  return out;
}

}  // namespace kendall
