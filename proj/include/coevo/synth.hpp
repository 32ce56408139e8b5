#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "coevo/micro.hpp"
#include "coevo/model.hpp"

namespace coevo {

/// Generator parameters for one behavioral type.
///
/// Rates are per-day probabilities that a family produces an observable
/// event on a given day (at daily snapshot resolution events are binary).
/// Within a day, arrivals follow an exponential inter-arrival process whose
/// intensity -ln(1 - rate) makes the day-occupancy probability equal the
/// rate; the arrival count is the event magnitude.
struct ArchetypeSpec {
  Archetype archetype = Archetype::reader;
  double pub_rate = 0.0;
  double soc_rate = 0.0;
  /// Share of social events that are removals. Realized as add/remove pairs
  /// ("toggles"), so friend counts do not drift; saturates at 0.5.
  double churn = 0.0;
  /// Probability that a day with both a publishing and a social arrival is
  /// kept as one compound event; otherwise the social event slips to the
  /// next day without publishing.
  double compound_prob = 1.0;
  /// 0 draws the two families independently; 1 drives both from the same
  /// latent daily activity level, so social days nest inside publishing days.
  double coupling = 0.0;
  std::string name;  // preset name, for reports
};

struct MixComponent {
  ArchetypeSpec spec;
  double fraction = 0.0;
};

struct Blackout {
  double begin = 0.0;  // first day without a snapshot
  double end = 0.0;    // first day observed again
};

struct PopulationSpec {
  std::size_t users = 0;
  std::vector<MixComponent> mix;
  double duration = 140.0;
  std::uint64_t seed = 0;
  std::optional<Blackout> blackout;
};

struct SyntheticUser {
  Trajectory trajectory;
  Archetype label = Archetype::reader;
  std::string component;
};

ArchetypeSpec reader_spec();
ArchetypeSpec blogger_spec();
ArchetypeSpec socializer_spec();
ArchetypeSpec blogger_socializer_spec();
/// Socializer with heavy add/remove churn and near-zero net friend change.
ArchetypeSpec churn_socializer_spec();
/// Blogger-socializer whose social side is pure churn.
ArchetypeSpec churn_blogger_socializer_spec();

/// Reader .45, Blogger-Socializer .20, Socializer .20, Blogger .15.
std::vector<MixComponent> standard_mix();
/// Same shares as standard_mix, with half of the socializers and half of the
/// blogger-socializers replaced by churn variants.
std::vector<MixComponent> churn_mix();
std::vector<MixComponent> reader_only_mix();

void check_spec(const ArchetypeSpec& spec);

/// Independent 64-bit seed for stream `index` of a master seed.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

/// Daily snapshots for days 0..duration (minus any blackout days).
Trajectory generate_user(const ArchetypeSpec& spec, double duration, std::uint64_t seed,
                         const std::string& user_id = "u000001",
                         const std::optional<Blackout>& blackout = std::nullopt);

/// Users drawn i.i.d. from the mix. Throws invalid_mix on an empty mix,
/// negative fractions, or fractions not summing to 1.
std::vector<SyntheticUser> generate_population(const PopulationSpec& spec);

struct SqrtCoupledSpec {
  std::size_t users = 100;
  double c = 9.0;
  double noise = 0.1;  // relative standard deviation
  double duration = 140.0;
  double pub_rate_min = 0.5;  // posts per day, drawn per user
  double pub_rate_max = 1.5;
  std::uint64_t seed = 0;
};

/// Posts follow a Poisson counting process; friends track round(c sqrt(P))
/// with multiplicative Gaussian noise, clamped at zero.
std::vector<Trajectory> generate_sqrt_coupled(const SqrtCoupledSpec& spec);

struct HeavyTailSpec {
  std::size_t users = 1836;
  double duration = 140.0;
  double tail_index = 1.5;  // Pareto exponent of event magnitudes
  std::uint64_t seed = 0;
};

/// Active users whose event magnitudes are Pareto distributed, for
/// exercising the percentile filter.
std::vector<Trajectory> generate_heavy_tailed(const HeavyTailSpec& spec);

}  // namespace coevo
