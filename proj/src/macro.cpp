#include "coevo/macro.hpp"

#include <algorithm>
#include <cmath>

namespace coevo {

std::string_view to_string(Dynamics d) {
  switch (d) {
    case Dynamics::ascending: return "asc";
    case Dynamics::constant: return "const";
    case Dynamics::descending: return "desc";
    case Dynamics::super_ascending: return "super_asc";
    case Dynamics::sub_ascending: return "sub_asc";
    case Dynamics::sub_descending: return "sub_desc";
    case Dynamics::super_descending: return "super_desc";
  }
  return "?";
}

std::string_view symbol(Dynamics d) {
  switch (d) {
    case Dynamics::ascending: return "↑";
    case Dynamics::constant: return "↕";
    case Dynamics::descending: return "↓";
    case Dynamics::super_ascending: return "⇈";
    case Dynamics::sub_ascending: return "↿";
    case Dynamics::sub_descending: return "⇂";
    case Dynamics::super_descending: return "⇊";
  }
  return "?";
}

Dynamics dynamics_from_string(std::string_view s) {
  for (auto d : kAllDynamics) {
    if (to_string(d) == s) return d;
  }
  throw error(errc::parse_error, "unknown dynamics class '" + std::string(s) + "'");
}

std::string to_string(const MacroKey& key) {
  return std::string(to_string(key.posts)) + ":" + std::string(to_string(key.friends));
}

MacroKey macro_key_from_string(std::string_view s) {
  const auto colon = s.find(':');
  if (colon == std::string_view::npos) {
    throw error(errc::parse_error, "macro key '" + std::string(s) + "' lacks ':'");
  }
  return {dynamics_from_string(s.substr(0, colon)), dynamics_from_string(s.substr(colon + 1))};
}

namespace {

// Least squares for at most three columns via Householder QR. `cols` are
// the design columns (each of length n); returns the coefficients.
template <std::size_t M>
std::array<double, M> least_squares(std::array<std::vector<double>, M> cols, std::vector<double> y) {
  const std::size_t n = y.size();
  for (std::size_t k = 0; k < M; ++k) {
    auto& a = cols[k];
    double norm = 0.0;
    for (std::size_t i = k; i < n; ++i) norm += a[i] * a[i];
    norm = std::sqrt(norm);
    if (norm == 0.0) throw error(errc::rank_deficient, "degenerate design matrix");
    const double alpha = a[k] > 0 ? -norm : norm;
    std::vector<double> v(n, 0.0);
    for (std::size_t i = k; i < n; ++i) v[i] = a[i];
    v[k] -= alpha;
    double vnorm2 = 0.0;
    for (std::size_t i = k; i < n; ++i) vnorm2 += v[i] * v[i];
    if (vnorm2 == 0.0) continue;
    auto reflect = [&](std::vector<double>& x) {
      double dot = 0.0;
      for (std::size_t i = k; i < n; ++i) dot += v[i] * x[i];
      const double scale = 2.0 * dot / vnorm2;
      for (std::size_t i = k; i < n; ++i) x[i] -= scale * v[i];
    };
    for (std::size_t j = k; j < M; ++j) reflect(cols[j]);
    reflect(y);
  }
  std::array<double, M> beta{};
  for (std::size_t k = M; k-- > 0;) {
    double s = y[k];
    for (std::size_t j = k + 1; j < M; ++j) s -= cols[j][k] * beta[j];
    if (std::abs(cols[k][k]) < 1e-13) throw error(errc::rank_deficient, "rank-deficient fit");
    beta[k] = s / cols[k][k];
  }
  return beta;
}

double r_squared(std::span<const double> g, double mean, auto&& model) {
  double ss_tot = 0.0, ss_res = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    ss_tot += (g[i] - mean) * (g[i] - mean);
    const double r = g[i] - model(i);
    ss_res += r * r;
  }
  if (ss_tot == 0.0) return 1.0;
  return std::min(1.0, 1.0 - ss_res / ss_tot);
}

}  // namespace

QuadFit fit_component(std::span<const double> t, std::span<const double> g) {
  const std::size_t n = t.size();
  if (n != g.size()) throw error(errc::invalid_argument, "time and value series differ in length");
  if (n < 2) throw error(errc::too_few_points, "need at least 2 points to fit");

  const auto [tmin, tmax] = std::minmax_element(t.begin(), t.end());
  if (*tmin == *tmax) throw error(errc::rank_deficient, "all sample days coincide");

  QuadFit fit;
  double mean = 0.0;
  for (double v : g) mean += v;
  mean /= static_cast<double>(n);
  if (std::all_of(g.begin(), g.end(), [&](double v) { return v == g[0]; })) {
    fit.a0 = fit.lin_a0 = g[0];
    fit.flat = true;
    return fit;
  }

  // work on t rescaled to [-1, 1] for conditioning, then map back
  const double center = 0.5 * (*tmin + *tmax);
  const double half = 0.5 * (*tmax - *tmin);
  std::vector<double> ones(n, 1.0), x(n), x2(n), y(g.begin(), g.end());
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = (t[i] - center) / half;
    x2[i] = x[i] * x[i];
  }

  const auto lin = least_squares<2>({ones, x}, y);
  fit.lin_a1 = lin[1] / half;
  fit.lin_a0 = lin[0] - lin[1] * center / half;
  fit.r2_linear = r_squared(g, mean, [&](std::size_t i) { return lin[0] + lin[1] * x[i]; });

  std::size_t distinct = 1;
  {
    std::vector<double> sorted(t.begin(), t.end());
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 1; i < n; ++i) distinct += sorted[i] != sorted[i - 1];
  }
  if (distinct < 3) {
    fit.a0 = fit.lin_a0;
    fit.a1 = fit.lin_a1;
    fit.a2 = 0.0;
    fit.r2_quadratic = fit.r2_linear;
  } else {
    const auto q = least_squares<3>({ones, x, x2}, y);
    const double h2 = half * half;
    fit.a2 = q[2] / h2;
    fit.a1 = q[1] / half - 2.0 * center * q[2] / h2;
    fit.a0 = q[0] - q[1] * center / half + q[2] * center * center / h2;
    fit.r2_quadratic =
        r_squared(g, mean, [&](std::size_t i) { return q[0] + q[1] * x[i] + q[2] * x2[i]; });
  }
  auto at = [&](double day) { return fit.a0 + fit.a1 * day + fit.a2 * day * day; };
  fit.net_change = at(*tmax) - at(*tmin);
  return fit;
}

Dynamics classify_dynamics(const QuadFit& fit, const ClassifyOptions& opts) {
  // pure curvature (a1 == 0, a2 != 0) has an infinite ratio
  const bool linear = fit.a2 == 0.0 || (fit.a1 != 0.0 && std::abs(fit.a2 / fit.a1) < opts.linearity_eps);
  // whichever model is used, a poor fit means the series is read as constant
  if ((linear ? fit.r2_linear : fit.r2_quadratic) < opts.r2_min) return Dynamics::constant;
  if (linear) {
    if (fit.lin_a1 > 0.0) return Dynamics::ascending;
    if (fit.lin_a1 < 0.0) return Dynamics::descending;
    return Dynamics::constant;
  }
  if (fit.net_change > 0.0) return fit.a2 > 0.0 ? Dynamics::super_ascending : Dynamics::sub_ascending;
  if (fit.net_change < 0.0) return fit.a2 > 0.0 ? Dynamics::sub_descending : Dynamics::super_descending;
  return Dynamics::constant;
}

namespace {

ComponentClass classify_component(std::span<const double> t, std::span<const double> g,
                                  const ClassifyOptions& opts) {
  ComponentClass c;
  c.fit = fit_component(t, g);
  c.dynamics = classify_dynamics(c.fit, opts);
  switch (c.dynamics) {
    case Dynamics::constant: c.fit_quality = c.fit.flat ? 1.0 : 0.0; break;
    case Dynamics::ascending:
    case Dynamics::descending: c.fit_quality = c.fit.r2_linear; break;
    default: c.fit_quality = c.fit.r2_quadratic; break;
  }
  c.fit_quality = std::max(0.0, c.fit_quality);
  return c;
}

}  // namespace

TrajectoryClass classify_trajectory(const Trajectory& traj, const ClassifyOptions& opts) {
  std::vector<double> t, p, f;
  t.reserve(traj.size());
  p.reserve(traj.size());
  f.reserve(traj.size());
  for (const auto& s : traj.snapshots) {
    t.push_back(s.t);
    p.push_back(static_cast<double>(s.posts));
    f.push_back(static_cast<double>(s.friends));
  }
  TrajectoryClass out;
  out.posts = classify_component(t, p, opts);
  out.friends = classify_component(t, f, opts);
  out.key = {out.posts.dynamics, out.friends.dynamics};
  return out;
}

Archetype macro_archetype(const MacroKey& key) {
  auto active = [](Dynamics d) { return d == Dynamics::ascending || d == Dynamics::super_ascending; };
  const bool p = active(key.posts), f = active(key.friends);
  if (p && f) return Archetype::blogger_socializer;
  if (p) return Archetype::blogger;
  if (f) return Archetype::socializer;
  return Archetype::reader;
}

bool is_ascending(Dynamics d) {
  return d == Dynamics::ascending || d == Dynamics::super_ascending || d == Dynamics::sub_ascending;
}

bool is_descending(Dynamics d) {
  return d == Dynamics::descending || d == Dynamics::super_descending ||
         d == Dynamics::sub_descending;
}

double anticorrelated_share(std::span<const MacroKey> keys) {
  if (keys.empty()) throw error(errc::empty_input, "anticorrelated share of no trajectories");
  std::size_t anti = 0;
  for (const auto& k : keys) {
    if ((is_ascending(k.posts) && is_descending(k.friends)) ||
        (is_descending(k.posts) && is_ascending(k.friends))) {
      ++anti;
    }
  }
  return static_cast<double>(anti) / static_cast<double>(keys.size());
}

std::vector<double> common_grid(std::span<const Trajectory* const> members) {
  if (members.empty()) return {};
  double lo = members.front()->first_day(), hi = members.front()->last_day();
  for (const auto* m : members) {
    lo = std::max(lo, m->first_day());
    hi = std::min(hi, m->last_day());
  }
  std::vector<double> grid;
  for (double day = std::ceil(lo); day <= hi; day += 1.0) grid.push_back(day);
  return grid;
}

MacroCluster mean_trajectory(const MacroKey& key, std::span<const Trajectory* const> members,
                             std::span<const double> grid, std::span<const double> fit_quality) {
  if (members.empty()) throw error(errc::empty_cluster, "mean trajectory of an empty cluster");
  MacroCluster out;
  out.key = key;
  out.grid.assign(grid.begin(), grid.end());
  out.mean_posts.assign(grid.size(), 0.0);
  out.mean_friends.assign(grid.size(), 0.0);
  for (const auto* m : members) {
    out.members.push_back(m->user_id);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const auto [p, f] = interpolate(*m, grid[i]);
      out.mean_posts[i] += p;
      out.mean_friends[i] += f;
    }
  }
  const double n = static_cast<double>(members.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    out.mean_posts[i] /= n;
    out.mean_friends[i] /= n;
  }
  if (!fit_quality.empty()) {
    double q = 0.0;
    for (double v : fit_quality) q += v;
    out.mean_fit_quality = q / static_cast<double>(fit_quality.size());
  }
  return out;
}

SqrtLawFit sqrt_law_fit(std::span<const MeanSeries> means, bool weighted) {
  double sxy = 0.0, sxx = 0.0, wsum = 0.0, wf = 0.0;
  SqrtLawFit fit;
  for (const auto& m : means) {
    const double w = weighted ? m.weight : 1.0;
    for (std::size_t i = 0; i < m.posts.size() && i < m.friends.size(); ++i) {
      if (!(m.posts[i] > 0.0)) continue;
      sxy += w * m.friends[i] * std::sqrt(m.posts[i]);
      sxx += w * m.posts[i];
      wsum += w;
      wf += w * m.friends[i];
      ++fit.points;
    }
  }
  if (fit.points == 0 || sxx <= 0.0) {
    throw error(errc::no_positive_p, "no pooled points with positive post count");
  }
  fit.c = sxy / sxx;
  const double mean_f = wf / wsum;
  double ss_tot = 0.0, ss_res = 0.0;
  for (const auto& m : means) {
    const double w = weighted ? m.weight : 1.0;
    for (std::size_t i = 0; i < m.posts.size() && i < m.friends.size(); ++i) {
      if (!(m.posts[i] > 0.0)) continue;
      const double r = m.friends[i] - fit.c * std::sqrt(m.posts[i]);
      ss_res += w * r * r;
      ss_tot += w * (m.friends[i] - mean_f) * (m.friends[i] - mean_f);
    }
  }
  fit.r2 = ss_tot == 0.0 ? (ss_res == 0.0 ? 1.0 : 0.0) : 1.0 - ss_res / ss_tot;
  return fit;
}

}  // namespace coevo
