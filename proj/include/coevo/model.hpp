#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "coevo/error.hpp"

namespace coevo {

/// One observation of a user's cumulative counters.
///
/// Counts are signed so that origin-translated trajectories (which can dip
/// below their first observation when friends or posts are removed) share
/// the same type as raw ones.
struct Snapshot {
  double t = 0.0;         // days since study start
  std::int64_t posts = 0; // cumulative post count P
  std::int64_t friends = 0; // friend count F

  friend bool operator==(const Snapshot&, const Snapshot&) = default;
};

struct Trajectory {
  std::string user_id;
  std::vector<Snapshot> snapshots;

  std::size_t size() const { return snapshots.size(); }
  bool empty() const { return snapshots.empty(); }
  double first_day() const { return snapshots.front().t; }
  double last_day() const { return snapshots.back().t; }

  friend bool operator==(const Trajectory&, const Trajectory&) = default;
};

struct RateSample {
  double t = 0.0;
  double posts_per_day = 0.0;
  double friends_per_day = 0.0;
};

struct Thresholds {
  double max_step = 0.0;
  double max_range = 0.0;
};

struct FilterReport {
  std::vector<std::string> kept;
  std::vector<std::string> dropped;
  Thresholds posts;
  Thresholds friends;
};

/// Sorts by day and collapses duplicated days (the last snapshot read for a
/// day wins). Throws too_short when fewer than two snapshots remain and
/// non_finite when a day is NaN or infinite.
Trajectory validate(Trajectory traj);

/// True when the post counter ever decreases.
bool has_post_deletion(const Trajectory& traj);

/// Nearest-rank quantile of `values` (need not be sorted). `pct` in (0, 1].
double nearest_rank_quantile(std::vector<double> values, double pct);

/// Keeps a trajectory iff its largest step and its range, in both the post
/// and the friend dimension, are at or below the population `pct` quantile
/// of the respective statistic.
FilterReport percentile_filter(std::span<const Trajectory> trajs, double pct = 0.98);

/// Subtracts the first snapshot from every snapshot.
Trajectory translate_to_origin(Trajectory traj);

/// Piecewise-linear (P, F) at day `t`; exact at sample days.
std::pair<double, double> interpolate(const Trajectory& traj, double t);

/// Forward differences, one sample per consecutive pair, stamped at the
/// earlier day.
std::vector<RateSample> activity_rates(const Trajectory& traj);

/// Pearson correlation of the P and F series. Empty when either series has
/// zero variance.
std::optional<double> pf_correlation(const Trajectory& traj);

/// Plain Pearson correlation; empty on zero variance or size mismatch.
std::optional<double> pearson(std::span<const double> x, std::span<const double> y);

}  // namespace coevo
