#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "coevo/micro.hpp"
#include "coevo/model.hpp"

namespace coevo {

/// Least-squares fit G(t) = a0 + a1 t + a2 t^2, with the R^2 of the
/// quadratic fit and of a separate degree-1 refit (whose coefficients are
/// kept as well).
struct QuadFit {
  double a0 = 0, a1 = 0, a2 = 0;
  double r2_quadratic = 1.0;
  double lin_a0 = 0, lin_a1 = 0;
  double r2_linear = 1.0;
  double net_change = 0.0;  // fitted G(t_last) - G(t_first)
  bool flat = false;        // zero-variance series
};

/// Shape taxonomy for one component of a trajectory.
enum class Dynamics : std::uint8_t {
  ascending,         // linear, G' > 0
  constant,          // linear, G' ~ 0, or poorly fit
  descending,        // linear, G' < 0
  super_ascending,   // G' > 0, G'' > 0
  sub_ascending,     // G' > 0, G'' < 0
  sub_descending,    // G' < 0, G'' > 0
  super_descending,  // G' < 0, G'' < 0
};

inline constexpr std::array<Dynamics, 7> kAllDynamics = {
    Dynamics::ascending,       Dynamics::constant,      Dynamics::descending,
    Dynamics::super_ascending, Dynamics::sub_ascending, Dynamics::sub_descending,
    Dynamics::super_descending};

std::string_view to_string(Dynamics d);  // "asc", "const", ...
std::string_view symbol(Dynamics d);     // arrow glyph for reports
Dynamics dynamics_from_string(std::string_view s);

struct MacroKey {
  Dynamics posts = Dynamics::constant;
  Dynamics friends = Dynamics::constant;

  friend auto operator<=>(const MacroKey&, const MacroKey&) = default;
};

std::string to_string(const MacroKey& key);  // "asc:const"
MacroKey macro_key_from_string(std::string_view s);

struct ClassifyOptions {
  double linearity_eps = 0.0085;
  double r2_min = 0.7;
};

struct ComponentClass {
  Dynamics dynamics = Dynamics::constant;
  QuadFit fit;
  double fit_quality = 1.0;  // R^2 of the model the class was read from
};

struct TrajectoryClass {
  MacroKey key;
  ComponentClass posts;
  ComponentClass friends;
};

struct MacroCluster {
  MacroKey key;
  std::vector<std::string> members;
  std::vector<double> grid;
  std::vector<double> mean_posts;
  std::vector<double> mean_friends;
  double mean_fit_quality = 0.0;  // mean over members of sqrt(R2_P * R2_F)
};

struct SqrtLawFit {
  double c = 0.0;
  double r2 = 0.0;
  std::size_t points = 0;
};

/// Mean (P, F) series of one cluster on a day grid, with an optional weight
/// for the square-root law fit.
struct MeanSeries {
  std::span<const double> posts;
  std::span<const double> friends;
  double weight = 1.0;
};

QuadFit fit_component(std::span<const double> t, std::span<const double> g);

Dynamics classify_dynamics(const QuadFit& fit, const ClassifyOptions& opts = {});

TrajectoryClass classify_trajectory(const Trajectory& traj, const ClassifyOptions& opts = {});

Archetype macro_archetype(const MacroKey& key);

bool is_ascending(Dynamics d);
bool is_descending(Dynamics d);

double anticorrelated_share(std::span<const MacroKey> keys);

/// Common integer-day grid of the members' observation windows.
std::vector<double> common_grid(std::span<const Trajectory* const> members);

/// Per-day mean of interpolated (P, F) over the members. `fit_quality` holds
/// each member's sqrt(R2_P * R2_F), in member order, and may be empty.
MacroCluster mean_trajectory(const MacroKey& key, std::span<const Trajectory* const> members,
                             std::span<const double> grid, std::span<const double> fit_quality = {});

/// Least-squares F = c sqrt(P) over pooled points with P > 0.
SqrtLawFit sqrt_law_fit(std::span<const MeanSeries> means, bool weighted = false);

}  // namespace coevo
