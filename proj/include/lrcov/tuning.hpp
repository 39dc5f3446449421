#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "lrcov/estimators.hpp"

namespace lrcov {

/// Repeated double-block validation plan. An empty grid means "use the
/// default grid" for the quantity being tuned.
struct CvPlan {
  std::size_t repetitions = 50;
  double train_frac = 0.6;
  double valid_frac = 0.3;
  std::uint64_t seed = 0;
  std::vector<double> grid;
};

/// Half-open 0-based row range [begin, end).
struct IndexRange {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const noexcept { return end - begin; }
  friend bool operator==(const IndexRange&, const IndexRange&) = default;
};

struct BlockPair {
  IndexRange train;
  IndexRange valid;
  friend bool operator==(const BlockPair&, const BlockPair&) = default;
};

/// Draws two disjoint contiguous blocks of lengths floor(train_frac n) and
/// floor(valid_frac n) for repetition b. Deterministic in (n, plan, b).
BlockPair draw_blocks(std::size_t n, const CvPlan& plan, std::size_t b);

/// Unregularized DB pilots on the training and validation block of every
/// repetition. The bandwidth is recomputed for each block length.
struct CvPilots {
  std::vector<BlockPair> splits;
  std::vector<CovMatrix> train;
  std::vector<CovMatrix> valid;
};

CvPilots prepare_cv_pilots(const TimeSeriesPanel& x, const DiffConfig& cfg, const CvPlan& plan);

enum class ThresholdRule { Hard, Soft };

struct CvResult {
  double selected = 0.0;
  /// (candidate, B-average loss) in grid order.
  std::vector<std::pair<double, double>> criterion;
  /// losses[b][g]: squared Frobenius loss of candidate g on repetition b.
  std::vector<std::vector<double>> losses;
  std::vector<BlockPair> splits;
};

/// Picks the threshold minimizing the average squared Frobenius distance
/// between the thresholded training pilot and the validation pilot. Ties go
/// to the larger threshold.
CvResult select_threshold(const CvPilots& pilots, std::span<const double> grid,
                          ThresholdRule rule);

/// Same criterion for the taper bandwidth. Grid values must be positive
/// integers. Ties go to the smaller bandwidth.
CvResult select_taper(const CvPilots& pilots, std::span<const double> grid);

CvResult cv_select_threshold(const TimeSeriesPanel& x, const DiffConfig& cfg, const CvPlan& plan,
                             ThresholdRule rule);
CvResult cv_select_taper(const TimeSeriesPanel& x, const DiffConfig& cfg, const CvPlan& plan);

/// 20 geometrically spaced points between the 10% quantile and the maximum
/// of the absolute off-diagonal entries of `pilot`.
std::vector<double> default_threshold_grid(const CovMatrix& pilot);

/// {2, 4, ..., min(p, 4 ceil(p / 4))}, at most 40 candidates.
std::vector<double> default_taper_grid(std::size_t p);

}  // namespace lrcov
