#pragma once

// Sample statistics built on concomitants of order statistics: the x-sorted
// view of a paired sample, concomitant ranks, Kendall's tau (quadratic and
// merge-sort paths) and the Pearson sample correlation.

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace kendall {

/// Raised for samples that cannot be processed (non-finite values, too few
/// observations, zero variance).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// n paired observations (x_i, y_i). All values are finite and both
/// coordinates have the same length; construction enforces this.
class BivariateSample {
 public:
  BivariateSample() = default;
  BivariateSample(std::vector<double> xs, std::vector<double> ys);

  std::size_t size() const noexcept { return xs_.size(); }
  std::span<const double> xs() const noexcept { return xs_; }
  std::span<const double> ys() const noexcept { return ys_; }

 private:
  std::vector<double> xs_;
  std::vector<double> ys_;
};

/// The sample re-indexed by x order: x_sorted[j] = X_{j,n} and
/// y_concomitants[j] = Y_{[j,n]}. original_indices[j] is the zero-based
/// input position of the j-th order statistic.
struct ConcomitantSequence {
  std::vector<double> x_sorted;
  std::vector<double> y_concomitants;
  std::vector<std::size_t> original_indices;

  std::size_t size() const noexcept { return x_sorted.size(); }
};

/// Ranks r_{j,n} for j = 2..n; ranks[k] holds r_{k+2,n} and lies in [0, k+1].
struct RankVector {
  std::vector<std::int64_t> ranks;

  std::int64_t sum() const noexcept;
};

struct TieReport {
  std::size_t x_tie_count = 0;
  std::size_t y_tie_count = 0;

  bool any() const noexcept { return x_tie_count > 0 || y_tie_count > 0; }
};

enum class TauPath { MergeSort, NaiveFallback };

struct TauEstimate {
  double value = 0.0;
  TauPath path = TauPath::MergeSort;
  TieReport ties;
};

/// Stable sort by x carrying each y along with its partner.
ConcomitantSequence sort_with_concomitants(const BivariateSample& sample);

/// r_{j,n} = #{i < j : Y_{[i,n]} <= Y_{[j,n]}}, with the inclusive inequality.
/// Quadratic; throws DataError when n < 2.
RankVector concomitant_ranks(const ConcomitantSequence& seq);

/// tau_n = 4 * sum_j r_{j,n} / (n(n-1)) - 1 evaluated literally.
double kendall_tau_naive(const BivariateSample& sample);

/// Merge-sort inversion count D of the concomitants, tau_n = (N - 4D) / N with
/// N = n(n-1). Requires tie-free data; on ties it evaluates the naive formula
/// and reports TauPath::NaiveFallback.
TauEstimate kendall_tau_fast(const BivariateSample& sample);

double pearson_rho_sample(const BivariateSample& sample);

/// Adjacent equal pairs after sorting each coordinate on its own.
TieReport detect_ties(const BivariateSample& sample);

/// Number of pairs i < j with values[i] > values[j]. O(n log n).
std::int64_t count_inversions(std::span<const double> values);

}  // namespace kendall
