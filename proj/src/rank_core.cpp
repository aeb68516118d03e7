#include "kendall/rank_core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace kendall {

namespace {

void require_two(std::size_t n) {
  if (n < 2) throw DataError("need at least two observations");
}

// N = n(n-1), the denominator shared by both tau paths.
std::int64_t ordered_pair_count(std::size_t n) {
  const auto m = static_cast<std::int64_t>(n);
  return m * (m - 1);
}

double tau_from_numerator(std::int64_t numerator, std::int64_t pairs) {
  return static_cast<double>(numerator) / static_cast<double>(pairs);
}

std::size_t adjacent_ties(std::span<const double> values) {
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  std::size_t ties = 0;
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i] == sorted[i - 1]) ++ties;
  }
  return ties;
}

// Sorts values[lo, hi) using scratch and returns the inversions inside it.
std::int64_t merge_count(std::vector<double>& values, std::vector<double>& scratch,
                         std::size_t lo, std::size_t hi) {
  if (hi - lo < 2) return 0;
  const std::size_t mid = lo + (hi - lo) / 2;
  std::int64_t inversions = merge_count(values, scratch, lo, mid) +
                            merge_count(values, scratch, mid, hi);
  std::size_t i = lo, j = mid, k = lo;
  while (i < mid && j < hi) {
    if (values[j] < values[i]) {
      // every remaining left element is greater than values[j]
      inversions += static_cast<std::int64_t>(mid - i);
      scratch[k++] = values[j++];
    } else {
      scratch[k++] = values[i++];
    }
  }
  while (i < mid) scratch[k++] = values[i++];
  while (j < hi) scratch[k++] = values[j++];
  std::copy(scratch.begin() + static_cast<std::ptrdiff_t>(lo),
            scratch.begin() + static_cast<std::ptrdiff_t>(hi),
            values.begin() + static_cast<std::ptrdiff_t>(lo));
  return inversions;
}

}  // namespace

BivariateSample::BivariateSample(std::vector<double> xs, std::vector<double> ys)
    : xs_(std::move(xs)), ys_(std::move(ys)) {
  if (xs_.size() != ys_.size()) {
    throw DataError("x and y lengths differ (" + std::to_string(xs_.size()) + " vs " +
                    std::to_string(ys_.size()) + ")");
  }
  for (std::size_t i = 0; i < xs_.size(); ++i) {
    if (!std::isfinite(xs_[i]) || !std::isfinite(ys_[i])) {
      throw DataError("non-finite value at index " + std::to_string(i));
    }
  }
}

std::int64_t RankVector::sum() const noexcept {
  return std::accumulate(ranks.begin(), ranks.end(), std::int64_t{0});
}

ConcomitantSequence sort_with_concomitants(const BivariateSample& sample) {
  const auto xs = sample.xs();
  const auto ys = sample.ys();
  ConcomitantSequence seq;
  seq.original_indices.resize(sample.size());
  std::iota(seq.original_indices.begin(), seq.original_indices.end(), std::size_t{0});
  std::stable_sort(seq.original_indices.begin(), seq.original_indices.end(),
                   [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
  seq.x_sorted.reserve(sample.size());
  seq.y_concomitants.reserve(sample.size());
  for (const std::size_t i : seq.original_indices) {
    seq.x_sorted.push_back(xs[i]);
    seq.y_concomitants.push_back(ys[i]);
  }
  return seq;
}

RankVector concomitant_ranks(const ConcomitantSequence& seq) {
  const auto& y = seq.y_concomitants;
  require_two(y.size());
  RankVector out;
  out.ranks.reserve(y.size() - 1);
  for (std::size_t j = 1; j < y.size(); ++j) {
    std::int64_t r = 0;
    for (std::size_t i = 0; i < j; ++i) {
      if (y[i] <= y[j]) ++r;
    }
    out.ranks.push_back(r);
  }
  return out;
}

double kendall_tau_naive(const BivariateSample& sample) {
  require_two(sample.size());
  const RankVector ranks = concomitant_ranks(sort_with_concomitants(sample));
  const std::int64_t pairs = ordered_pair_count(sample.size());
  return tau_from_numerator(4 * ranks.sum() - pairs, pairs);
}

std::int64_t count_inversions(std::span<const double> values) {
  std::vector<double> work(values.begin(), values.end());
  std::vector<double> scratch(work.size());
  return merge_count(work, scratch, 0, work.size());
}

TauEstimate kendall_tau_fast(const BivariateSample& sample) {
  require_two(sample.size());
  TauEstimate est;
  est.ties = detect_ties(sample);
  if (est.ties.any()) {
    est.value = kendall_tau_naive(sample);
    est.path = TauPath::NaiveFallback;
    return est;
  }
  const ConcomitantSequence seq = sort_with_concomitants(sample);
  const std::int64_t discordant = count_inversions(seq.y_concomitants);
  const std::int64_t pairs = ordered_pair_count(sample.size());
  est.value = tau_from_numerator(pairs - 4 * discordant, pairs);
  est.path = TauPath::MergeSort;
  return est;
}

double pearson_rho_sample(const BivariateSample& sample) {
  require_two(sample.size());
  const auto xs = sample.xs();
  const auto ys = sample.ys();
  const double n = static_cast<double>(sample.size());
  const double mean_x = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double mean_y = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double dx = xs[i] - mean_x;
    const double dy = ys[i] - mean_y;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw DataError("degenerate sample");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

TieReport detect_ties(const BivariateSample& sample) {
  return TieReport{adjacent_ties(sample.xs()), adjacent_ties(sample.ys())};
}

}  // namespace kendall
