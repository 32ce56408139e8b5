#include "coevo/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace coevo {

std::string_view to_string(errc code) {
  switch (code) {
    case errc::too_short: return "TooShort";
    case errc::non_finite: return "NonFinite";
    case errc::empty_input: return "EmptyInput";
    case errc::out_of_range: return "OutOfRange";
    case errc::insufficient_events: return "InsufficientEvents";
    case errc::too_few_points: return "TooFewPoints";
    case errc::empty_cluster: return "EmptyCluster";
    case errc::rank_deficient: return "RankDeficient";
    case errc::no_positive_p: return "NoPositiveP";
    case errc::mismatched_universe: return "MismatchedUniverse";
    case errc::invalid_mix: return "InvalidMix";
    case errc::invalid_argument: return "InvalidArgument";
    case errc::parse_error: return "ParseError";
    case errc::duplicate_row: return "DuplicateRow";
    case errc::io_error: return "IoError";
    case errc::source_unavailable: return "SourceUnavailable";
    case errc::missing_analysis: return "MissingAnalysis";
  }
  return "Unknown";
}

Trajectory validate(Trajectory traj) {
  for (const auto& s : traj.snapshots) {
    if (!std::isfinite(s.t)) {
      throw error(errc::non_finite, "trajectory " + traj.user_id + ": non-finite day");
    }
  }
  // stable sort keeps read order within a day so "last wins" is well defined
  std::stable_sort(traj.snapshots.begin(), traj.snapshots.end(),
                   [](const Snapshot& a, const Snapshot& b) { return a.t < b.t; });
  std::vector<Snapshot> unique;
  unique.reserve(traj.snapshots.size());
  for (const auto& s : traj.snapshots) {
    if (!unique.empty() && unique.back().t == s.t) {
      unique.back() = s;
    } else {
      unique.push_back(s);
    }
  }
  traj.snapshots = std::move(unique);
  if (traj.snapshots.size() < 2) {
    throw error(errc::too_short, "trajectory " + traj.user_id + ": fewer than 2 snapshots");
  }
  return traj;
}

bool has_post_deletion(const Trajectory& traj) {
  for (std::size_t i = 1; i < traj.snapshots.size(); ++i) {
    if (traj.snapshots[i].posts < traj.snapshots[i - 1].posts) return true;
  }
  return false;
}

double nearest_rank_quantile(std::vector<double> values, double pct) {
  if (values.empty()) throw error(errc::empty_input, "quantile of an empty population");
  if (!(pct > 0.0 && pct <= 1.0)) {
    throw error(errc::invalid_argument, "quantile fraction must lie in (0, 1]");
  }
  std::sort(values.begin(), values.end());
  // the slack keeps products such as 0.98 * 50 from rounding up a rank
  auto rank = static_cast<std::size_t>(std::ceil(pct * static_cast<double>(values.size()) - 1e-9));
  rank = std::clamp<std::size_t>(rank, 1, values.size());
  return values[rank - 1];
}

namespace {

struct StepStats {
  double post_step = 0, post_range = 0, friend_step = 0, friend_range = 0;
};

StepStats step_stats(const Trajectory& traj) {
  StepStats s;
  if (traj.snapshots.empty()) return s;
  auto pmin = traj.snapshots.front().posts, pmax = pmin;
  auto fmin = traj.snapshots.front().friends, fmax = fmin;
  for (std::size_t i = 1; i < traj.snapshots.size(); ++i) {
    const auto& a = traj.snapshots[i - 1];
    const auto& b = traj.snapshots[i];
    s.post_step = std::max(s.post_step, static_cast<double>(std::llabs(b.posts - a.posts)));
    s.friend_step =
        std::max(s.friend_step, static_cast<double>(std::llabs(b.friends - a.friends)));
    pmin = std::min(pmin, b.posts);
    pmax = std::max(pmax, b.posts);
    fmin = std::min(fmin, b.friends);
    fmax = std::max(fmax, b.friends);
  }
  s.post_range = static_cast<double>(pmax - pmin);
  s.friend_range = static_cast<double>(fmax - fmin);
  return s;
}

}  // namespace

FilterReport percentile_filter(std::span<const Trajectory> trajs, double pct) {
  if (trajs.empty()) throw error(errc::empty_input, "percentile filter over an empty population");

  std::vector<StepStats> stats;
  stats.reserve(trajs.size());
  for (const auto& t : trajs) stats.push_back(step_stats(t));

  auto quantile_of = [&](double StepStats::*field) {
    std::vector<double> v;
    v.reserve(stats.size());
    for (const auto& s : stats) v.push_back(s.*field);
    return nearest_rank_quantile(std::move(v), pct);
  };

  FilterReport report;
  report.posts = {quantile_of(&StepStats::post_step), quantile_of(&StepStats::post_range)};
  report.friends = {quantile_of(&StepStats::friend_step), quantile_of(&StepStats::friend_range)};

  for (std::size_t i = 0; i < trajs.size(); ++i) {
    const auto& s = stats[i];
    bool keep = s.post_step <= report.posts.max_step && s.post_range <= report.posts.max_range &&
                s.friend_step <= report.friends.max_step &&
                s.friend_range <= report.friends.max_range;
    (keep ? report.kept : report.dropped).push_back(trajs[i].user_id);
  }
  return report;
}

Trajectory translate_to_origin(Trajectory traj) {
  if (traj.snapshots.empty()) return traj;
  const Snapshot origin = traj.snapshots.front();
  for (auto& s : traj.snapshots) {
    s.t -= origin.t;
    s.posts -= origin.posts;
    s.friends -= origin.friends;
  }
  return traj;
}

std::pair<double, double> interpolate(const Trajectory& traj, double t) {
  const auto& s = traj.snapshots;
  if (s.empty() || !(t >= s.front().t && t <= s.back().t)) {
    throw error(errc::out_of_range, "interpolation day outside the observation window");
  }
  auto hi = std::lower_bound(s.begin(), s.end(), t,
                             [](const Snapshot& a, double day) { return a.t < day; });
  if (hi->t == t) return {static_cast<double>(hi->posts), static_cast<double>(hi->friends)};
  auto lo = std::prev(hi);
  const double w = (t - lo->t) / (hi->t - lo->t);
  auto lerp = [w](std::int64_t a, std::int64_t b) {
    return static_cast<double>(a) + w * static_cast<double>(b - a);
  };
  return {lerp(lo->posts, hi->posts), lerp(lo->friends, hi->friends)};
}

std::vector<RateSample> activity_rates(const Trajectory& traj) {
  std::vector<RateSample> out;
  const auto& s = traj.snapshots;
  if (s.size() < 2) return out;
  out.reserve(s.size() - 1);
  for (std::size_t i = 0; i + 1 < s.size(); ++i) {
    const double dt = s[i + 1].t - s[i].t;
    out.push_back({s[i].t, static_cast<double>(s[i + 1].posts - s[i].posts) / dt,
                   static_cast<double>(s[i + 1].friends - s[i].friends) / dt});
  }
  return out;
}

std::optional<double> pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) return std::nullopt;
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) return std::nullopt;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::optional<double> pf_correlation(const Trajectory& traj) {
  std::vector<double> p, f;
  p.reserve(traj.size());
  f.reserve(traj.size());
  for (const auto& s : traj.snapshots) {
    p.push_back(static_cast<double>(s.posts));
    f.push_back(static_cast<double>(s.friends));
  }
  return pearson(p, f);
}

}  // namespace coevo
