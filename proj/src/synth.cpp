#include "coevo/synth.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

namespace coevo {
namespace {

// Draws are built from raw engine bits so output does not depend on the
// standard library's distribution implementations.
class Stream {
public:
  explicit Stream(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double exponential(double rate) { return -std::log1p(-uniform()) / rate; }

  double normal() {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  std::int64_t integer(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(uniform() * static_cast<double>(hi - lo + 1));
  }

private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::string user_name(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "u%06zu", index + 1);
  return buf;
}

// Number of exponential arrivals inside one day, given the uniform that
// decides the first one. Zero iff u >= rate.
std::int64_t arrivals_in_day(double u, double rate, Stream& rng) {
  if (rate <= 0.0 || u >= rate) return 0;
  const double intensity = -std::log1p(-rate);
  double clock = -std::log1p(-u) / intensity;  // first arrival, < 1 by construction
  std::int64_t count = 0;
  while (clock < 1.0) {
    ++count;
    clock += rng.exponential(intensity);
  }
  return count;
}

bool in_blackout(double day, const std::optional<Blackout>& b) {
  return b && day >= b->begin && day < b->end;
}

std::vector<double> observation_days(double duration, const std::optional<Blackout>& blackout) {
  std::vector<double> days;
  for (double d = 0.0; d <= duration; d += 1.0) {
    if (!in_blackout(d, blackout)) days.push_back(d);
  }
  return days;
}

ArchetypeSpec make_spec(std::string name, Archetype a, double pub, double soc, double churn,
                        double compound, double coupling) {
  ArchetypeSpec s;
  s.name = std::move(name);
  s.archetype = a;
  s.pub_rate = pub;
  s.soc_rate = soc;
  s.churn = churn;
  s.compound_prob = compound;
  s.coupling = coupling;
  return s;
}

}  // namespace

ArchetypeSpec reader_spec() { return make_spec("reader", Archetype::reader, 0, 0, 0, 1, 0); }
ArchetypeSpec blogger_spec() { return make_spec("blogger", Archetype::blogger, 0.45, 0, 0, 1, 0); }
ArchetypeSpec socializer_spec() {
  return make_spec("socializer", Archetype::socializer, 0, 0.2, 0.05, 1, 0);
}
ArchetypeSpec blogger_socializer_spec() {
  return make_spec("blogger-socializer", Archetype::blogger_socializer, 0.45, 0.2, 0.05, 1, 1.0);
}
ArchetypeSpec churn_socializer_spec() {
  return make_spec("churn-socializer", Archetype::socializer, 0, 0.5, 0.5, 1, 0);
}
ArchetypeSpec churn_blogger_socializer_spec() {
  return make_spec("churn-blogger-socializer", Archetype::blogger_socializer, 0.45, 0.45, 0.5, 1,
                   1.0);
}

std::vector<MixComponent> standard_mix() {
  return {{reader_spec(), 0.45},
          {blogger_socializer_spec(), 0.20},
          {socializer_spec(), 0.20},
          {blogger_spec(), 0.15}};
}

std::vector<MixComponent> churn_mix() {
  return {{reader_spec(), 0.45},
          {blogger_socializer_spec(), 0.10},
          {churn_blogger_socializer_spec(), 0.10},
          {socializer_spec(), 0.10},
          {churn_socializer_spec(), 0.10},
          {blogger_spec(), 0.15}};
}

std::vector<MixComponent> reader_only_mix() { return {{reader_spec(), 1.0}}; }

void check_spec(const ArchetypeSpec& s) {
  auto rate_ok = [](double r) { return r >= 0.0 && r < 1.0; };
  auto prob_ok = [](double p) { return p >= 0.0 && p <= 1.0; };
  if (!rate_ok(s.pub_rate) || !rate_ok(s.soc_rate)) {
    throw error(errc::invalid_argument, "daily event rates must lie in [0, 1)");
  }
  if (!prob_ok(s.churn) || !prob_ok(s.compound_prob) || !prob_ok(s.coupling)) {
    throw error(errc::invalid_argument, "churn, compound_prob and coupling must lie in [0, 1]");
  }
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(master ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

Trajectory generate_user(const ArchetypeSpec& spec, double duration, std::uint64_t seed,
                         const std::string& user_id, const std::optional<Blackout>& blackout) {
  check_spec(spec);
  if (!(duration > 0.0)) throw error(errc::invalid_argument, "duration must be positive");
  Stream rng(seed);

  Trajectory traj;
  traj.user_id = user_id;
  std::int64_t posts = rng.integer(0, 200);
  std::int64_t friends = rng.integer(0, 50);

  const double toggle_prob = std::min(1.0, 2.0 * spec.churn);
  std::int64_t churned = 0;        // friends added by an open toggle
  std::int64_t slipped_social = 0; // social arrivals deferred off a publishing day

  auto apply_social = [&](std::int64_t magnitude) {
    if (rng.uniform() < toggle_prob) {
      if (churned > 0) {
        friends -= churned;
        churned = 0;
      } else {
        friends += magnitude;
        churned = magnitude;
      }
    } else {
      friends += magnitude;
    }
  };

  const auto days = observation_days(duration, blackout);
  std::size_t next_obs = 0;
  for (double day = 0.0; day <= duration; day += 1.0) {
    if (next_obs < days.size() && days[next_obs] == day) {
      traj.snapshots.push_back({day, posts, friends});
      ++next_obs;
    }
    if (day + 1.0 > duration) break;

    const double u_pub = rng.uniform();
    const double u_own = rng.uniform();
    const double u_soc = rng.uniform() < spec.coupling ? u_pub : u_own;
    const auto pub = arrivals_in_day(u_pub, spec.pub_rate, rng);
    auto soc = arrivals_in_day(u_soc, spec.soc_rate, rng);
    const double u_compound = rng.uniform();

    posts += pub;
    if (pub > 0 && soc > 0 && u_compound >= spec.compound_prob) {
      slipped_social += soc;
      soc = 0;
    } else if (pub == 0 && slipped_social > 0) {
      soc += slipped_social;
      slipped_social = 0;
    }
    if (soc > 0) apply_social(soc);
  }
  return traj;
}

std::vector<SyntheticUser> generate_population(const PopulationSpec& spec) {
  if (spec.mix.empty()) throw error(errc::invalid_mix, "population mix is empty");
  double total = 0.0;
  for (const auto& c : spec.mix) {
    if (!(c.fraction >= 0.0)) throw error(errc::invalid_mix, "mix fractions must be non-negative");
    check_spec(c.spec);
    total += c.fraction;
  }
  if (std::abs(total - 1.0) > 1e-9) throw error(errc::invalid_mix, "mix fractions must sum to 1");

  std::vector<SyntheticUser> out;
  out.reserve(spec.users);
  for (std::size_t i = 0; i < spec.users; ++i) {
    const auto user_seed = derive_seed(spec.seed, 2 * i);
    Stream pick(derive_seed(spec.seed, 2 * i + 1));
    double u = pick.uniform() * total;
    std::size_t comp = 0;
    while (comp + 1 < spec.mix.size() && u >= spec.mix[comp].fraction) {
      u -= spec.mix[comp].fraction;
      ++comp;
    }
    const auto& c = spec.mix[comp];
    out.push_back({generate_user(c.spec, spec.duration, user_seed, user_name(i), spec.blackout),
                   c.spec.archetype, c.spec.name});
  }
  return out;
}

std::vector<Trajectory> generate_sqrt_coupled(const SqrtCoupledSpec& spec) {
  if (!(spec.c > 0.0)) throw error(errc::invalid_argument, "sqrt-law coefficient must be positive");
  if (!(spec.duration > 0.0)) throw error(errc::invalid_argument, "duration must be positive");
  std::vector<Trajectory> out;
  out.reserve(spec.users);
  for (std::size_t i = 0; i < spec.users; ++i) {
    Stream rng(derive_seed(spec.seed, i));
    const double rate =
        spec.pub_rate_min + (spec.pub_rate_max - spec.pub_rate_min) * rng.uniform();
    Trajectory traj;
    traj.user_id = user_name(i);
    std::int64_t posts = 0;
    double next_post = rate > 0.0 ? rng.exponential(rate) : HUGE_VAL;
    for (double day = 0.0; day <= spec.duration; day += 1.0) {
      while (next_post <= day) {
        ++posts;
        next_post += rng.exponential(rate);
      }
      const double ideal = spec.c * std::sqrt(static_cast<double>(posts));
      const double noisy = ideal * (1.0 + spec.noise * rng.normal());
      traj.snapshots.push_back(
          {day, posts, std::max<std::int64_t>(0, std::llround(noisy))});
    }
    out.push_back(std::move(traj));
  }
  return out;
}

std::vector<Trajectory> generate_heavy_tailed(const HeavyTailSpec& spec) {
  if (!(spec.tail_index > 0.0)) throw error(errc::invalid_argument, "tail index must be positive");
  std::vector<Trajectory> out;
  out.reserve(spec.users);
  for (std::size_t i = 0; i < spec.users; ++i) {
    Stream rng(derive_seed(spec.seed, i));
    const double pub_rate = 0.6 * rng.uniform();
    const double soc_rate = 0.3 * rng.uniform();
    auto magnitude = [&] {
      const double u = 1.0 - rng.uniform();
      return static_cast<std::int64_t>(std::floor(std::pow(u, -1.0 / spec.tail_index)));
    };
    Trajectory traj;
    traj.user_id = user_name(i);
    std::int64_t posts = rng.integer(0, 200);
    std::int64_t friends = rng.integer(0, 50);
    for (double day = 0.0; day <= spec.duration; day += 1.0) {
      traj.snapshots.push_back({day, posts, friends});
      if (rng.uniform() < pub_rate) posts += magnitude();
      if (rng.uniform() < soc_rate) {
        const auto m = magnitude();
        friends = rng.uniform() < 0.1 ? std::max<std::int64_t>(0, friends - m) : friends + m;
      }
    }
    out.push_back(std::move(traj));
  }
  return out;
}

}  // namespace coevo
