#include "lrcov/tuning.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <span>

#include <omp.h>

#include "lrcov/kernels.hpp"
#include "lrcov/random.hpp"
#include "lrcov/regularize.hpp"

namespace lrcov {

namespace {

std::size_t block_length(double frac, std::size_t n) {
  return static_cast<std::size_t>(std::floor(frac * static_cast<double>(n)));
}

void check_plan(std::size_t n, const CvPlan& plan) {
  if (plan.repetitions < 1) throw ConfigError("CV plan needs at least one repetition");
  if (!(plan.train_frac > 0.0 && plan.train_frac < 1.0) ||
      !(plan.valid_frac > 0.0 && plan.valid_frac < 1.0)) {
    throw ConfigError("CV block fractions must lie in (0, 1)");
  }
  if (plan.train_frac + plan.valid_frac > 1.0 + 1e-12) {
    throw ConfigError("CV block fractions must sum to at most 1");
  }
  if (block_length(plan.train_frac, n) < 2 || block_length(plan.valid_frac, n) < 2) {
    throw ConfigError("CV blocks are too short for a series of length " + std::to_string(n));
  }
}

void check_grid(std::span<const double> grid) {
  if (grid.empty()) throw ConfigError("tuning grid must be nonempty");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) throw ConfigError("tuning grid must be strictly increasing");
  }
}

// Squared Frobenius distance between f(train) and valid, where f maps each
// off-diagonal entry (value, |r - s|) and leaves the diagonal alone. Walks the
// upper triangle row by row without materializing f(train).
template <typename OffDiagonal>
double regularized_loss(const CovMatrix& train, const CovMatrix& valid, OffDiagonal&& f) {
  const std::size_t p = train.dim();
  const double* t = train.values().data();
  const double* v = valid.values().data();
  double diag = 0.0;
  double off = 0.0;
  for (std::size_t r = 0; r < p; ++r) {
    const double* trow = t + r * p;
    const double* vrow = v + r * p;
    const double dd = trow[r] - vrow[r];
    diag += dd * dd;
    for (std::size_t s = r + 1; s < p; ++s) {
      const double d = f(trow[s], s - r) - vrow[s];
      off += d * d;
    }
  }
  return diag + 2.0 * off;
}

template <typename Loss>
CvResult select(const CvPilots& pilots, std::span<const double> grid, Loss&& loss,
                bool prefer_larger) {
  check_grid(grid);
  const std::size_t reps = pilots.splits.size();
  if (reps == 0 || pilots.train.size() != reps || pilots.valid.size() != reps) {
    throw ConfigError("CV pilots are empty or inconsistent");
  }
  for (std::size_t b = 0; b < reps; ++b) {
    if (pilots.train[b].dim() != pilots.valid[b].dim()) {
      throw ConfigError("CV pilots are empty or inconsistent");
    }
  }
  CvResult result;
  result.splits = pilots.splits;
  result.losses.assign(reps, std::vector<double>(grid.size(), 0.0));
  const bool parallel = reps > 1 && !omp_in_parallel();
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (std::size_t b = 0; b < reps; ++b) {
    for (std::size_t g = 0; g < grid.size(); ++g) {
      result.losses[b][g] = loss(pilots.train[b], pilots.valid[b], grid[g]);
    }
  }
  result.criterion.reserve(grid.size());
  for (std::size_t g = 0; g < grid.size(); ++g) {
    double sum = 0.0;
    for (std::size_t b = 0; b < reps; ++b) sum += result.losses[b][g];
    result.criterion.emplace_back(grid[g], sum / static_cast<double>(reps));
  }
  std::size_t best = 0;
  for (std::size_t g = 1; g < grid.size(); ++g) {
    const double value = result.criterion[g].second;
    const double incumbent = result.criterion[best].second;
    if (value < incumbent || (prefer_larger && value == incumbent)) best = g;
  }
  result.selected = grid[best];
  return result;
}

}  // namespace

BlockPair draw_blocks(std::size_t n, const CvPlan& plan, std::size_t b) {
  check_plan(n, plan);
  const std::size_t train = block_length(plan.train_frac, n);
  const std::size_t valid = block_length(plan.valid_frac, n);
  std::mt19937_64 rng(derive_seed(plan.seed, b));
  const bool train_first = (rng() & 1u) == 0u;
  const std::size_t first = train_first ? train : valid;
  const std::size_t second = train_first ? valid : train;
  const std::size_t slack = n - train - valid;
  const std::size_t start1 = std::uniform_int_distribution<std::size_t>(0, slack)(rng);
  const std::size_t start2 =
      std::uniform_int_distribution<std::size_t>(start1 + first, n - second)(rng);
  const IndexRange a{start1, start1 + first};
  const IndexRange c{start2, start2 + second};
  return train_first ? BlockPair{a, c} : BlockPair{c, a};
}

CvPilots prepare_cv_pilots(const TimeSeriesPanel& x, const DiffConfig& cfg, const CvPlan& plan) {
  check_plan(x.n(), plan);
  const std::size_t reps = plan.repetitions;
  CvPilots pilots;
  pilots.splits.resize(reps);
  for (std::size_t b = 0; b < reps; ++b) pilots.splits[b] = draw_blocks(x.n(), plan, b);

  // Both block lengths are fixed across repetitions, so one config each.
  const DiffConfig train_cfg = cfg.rescaled_for(pilots.splits[0].train.size(), x.p());
  const DiffConfig valid_cfg = cfg.rescaled_for(pilots.splits[0].valid.size(), x.p());
  train_cfg.check_fits(pilots.splits[0].train.size());
  valid_cfg.check_fits(pilots.splits[0].valid.size());

  std::vector<CovMatrix> train(reps, CovMatrix::zeros(0));
  std::vector<CovMatrix> valid(reps, CovMatrix::zeros(0));
  const bool parallel = reps > 1 && !omp_in_parallel();
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (std::size_t b = 0; b < reps; ++b) {
    const BlockPair& s = pilots.splits[b];
    train[b] = db_estimate(x.slice(s.train.begin, s.train.end), train_cfg);
    valid[b] = db_estimate(x.slice(s.valid.begin, s.valid.end), valid_cfg);
  }
  pilots.train = std::move(train);
  pilots.valid = std::move(valid);
  return pilots;
}

CvResult select_threshold(const CvPilots& pilots, std::span<const double> grid,
                          ThresholdRule rule) {
  for (double tau : grid) {
    if (!(tau >= 0.0) || !std::isfinite(tau)) {
      throw ConfigError("threshold must be a finite nonnegative number");
    }
  }
  if (rule == ThresholdRule::Hard) {
    return select(
        pilots, grid,
        [](const CovMatrix& t, const CovMatrix& v, double tau) {
          return regularized_loss(t, v, [tau](double x, std::size_t) {
            return std::abs(x) >= tau ? x : 0.0;
          });
        },
        true);
  }
  return select(
      pilots, grid,
      [](const CovMatrix& t, const CovMatrix& v, double tau) {
        return regularized_loss(t, v, [tau](double x, std::size_t) {
          const double shrunk = std::abs(x) - tau;
          return shrunk > 0.0 ? std::copysign(shrunk, x) : 0.0;
        });
      },
      true);
}

CvResult select_taper(const CvPilots& pilots, std::span<const double> grid) {
  for (double k : grid) {
    if (!(k >= 1.0) || k != std::floor(k)) {
      throw ConfigError("taper bandwidth candidates must be positive integers");
    }
  }
  return select(
      pilots, grid,
      [](const CovMatrix& t, const CovMatrix& v, double k) {
        const auto kk = static_cast<std::size_t>(k);
        std::vector<double> weight(t.dim());
        for (std::size_t d = 0; d < weight.size(); ++d) weight[d] = taper_weight(0, d, kk);
        return regularized_loss(t, v, [&weight](double x, std::size_t dist) {
          return weight[dist] == 0.0 ? 0.0 : weight[dist] * x;
        });
      },
      false);
}

CvResult cv_select_threshold(const TimeSeriesPanel& x, const DiffConfig& cfg, const CvPlan& plan,
                             ThresholdRule rule) {
  const std::vector<double> grid =
      plan.grid.empty() ? default_threshold_grid(db_estimate(x, cfg)) : plan.grid;
  check_grid(grid);
  return select_threshold(prepare_cv_pilots(x, cfg, plan), grid, rule);
}

CvResult cv_select_taper(const TimeSeriesPanel& x, const DiffConfig& cfg, const CvPlan& plan) {
  const std::vector<double> grid = plan.grid.empty() ? default_taper_grid(x.p()) : plan.grid;
  check_grid(grid);
  return select_taper(prepare_cv_pilots(x, cfg, plan), grid);
}

std::vector<double> default_threshold_grid(const CovMatrix& pilot) {
  const std::size_t p = pilot.dim();
  std::vector<double> off;
  off.reserve(p * (p - (p > 0 ? 1 : 0)) / 2);
  for (std::size_t r = 0; r < p; ++r) {
    for (std::size_t s = r + 1; s < p; ++s) off.push_back(std::abs(pilot(r, s)));
  }
  if (off.empty()) return {0.0};
  std::sort(off.begin(), off.end());
  // Linear interpolation between order statistics.
  const double pos = 0.1 * static_cast<double>(off.size() - 1);
  const auto lo_index = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi_index = std::min(lo_index + 1, off.size() - 1);
  const double frac = pos - static_cast<double>(lo_index);
  double lo = off[lo_index] + frac * (off[hi_index] - off[lo_index]);
  const double hi = off.back();
  if (!(hi > 0.0)) return {0.0};
  if (!(lo > 0.0)) lo = hi * 1e-3;
  if (lo >= hi) return {hi};
  constexpr std::size_t kPoints = 20;
  std::vector<double> grid(kPoints);
  const double ratio = std::log(hi / lo) / static_cast<double>(kPoints - 1);
  for (std::size_t i = 0; i < kPoints; ++i) {
    grid[i] = lo * std::exp(ratio * static_cast<double>(i));
  }
  grid.front() = lo;
  grid.back() = hi;
  return grid;
}

std::vector<double> default_taper_grid(std::size_t p) {
  const std::size_t upper = std::min(p, 4 * ((p + 3) / 4));
  std::vector<double> grid;
  for (std::size_t k = 2; k <= upper && grid.size() < 40; k += 2) {
    grid.push_back(static_cast<double>(k));
  }
  if (grid.empty()) grid.push_back(1.0);
  return grid;
}

}  // namespace lrcov
