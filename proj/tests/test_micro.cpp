#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "coevo/micro.hpp"
#include "oracles.hpp"

using namespace coevo;

namespace {

constexpr auto P = EventKind::post_add;
constexpr auto Fa = EventKind::friend_add;
constexpr auto Fr = EventKind::friend_remove;
constexpr auto PF = EventKind::compound;

Trajectory traj(std::vector<Snapshot> s, std::string id = "u") { return {std::move(id), std::move(s)}; }

std::vector<EventKind> kinds(const EventSequence& s) {
  std::vector<EventKind> out;
  for (const auto& e : s.events) out.push_back(e.kind);
  return out;
}

EventSequence timed(std::vector<std::pair<double, EventKind>> ev, double days, std::string id = "u") {
  EventSequence s{std::move(id), {}, days};
  for (auto [t, k] : ev) s.events.push_back({t, k, 1});
  return s;
}

}  // namespace

TEST_CASE("event extraction follows the difference rules") {
  CHECK(extract_events(traj({{0, 3, 3}, {1, 3, 3}, {2, 3, 3}})).events.empty());

  auto s = extract_events(traj({{0, 0, 0}, {1, 1, 0}, {2, 1, 2}, {3, 2, 1}}));
  REQUIRE(s.events.size() == 3);
  CHECK(kinds(s) == std::vector<EventKind>{P, Fa, PF});
  CHECK(s.events[0].t == 0.0);
  CHECK(s.events[1].t == 1.0);
  CHECK(s.events[2].t == 2.0);
  CHECK(s.observed_days == 3.0);

  s = extract_events(traj({{0, 0, 0}, {1, 0, -1}}));
  REQUIRE(s.events.size() == 1);
  CHECK(s.events[0].kind == Fr);
  CHECK(s.events[0].t == 0.0);

  // deletions fold into P+ with a signed magnitude; mixed signs are compound
  s = extract_events(traj({{0, 5, 5}, {1, 3, 5}, {2, 2, 9}}));
  CHECK(kinds(s) == std::vector<EventKind>{P, PF});
  CHECK(s.events[0].magnitude == -2);
}

TEST_CASE("family membership") {
  CHECK(in_family(P, EventFamily::publishing));
  CHECK_FALSE(in_family(P, EventFamily::social));
  CHECK(in_family(Fa, EventFamily::social));
  CHECK(in_family(Fr, EventFamily::social));
  CHECK(in_family(PF, EventFamily::publishing));
  CHECK(in_family(PF, EventFamily::social));
}

TEST_CASE("delay rate") {
  std::vector<EventSequence> seqs{timed({{0, P}, {2, P}, {4, P}, {6, P}}, 6)};
  CHECK(delay_rate(seqs, EventFamily::publishing) == doctest::Approx(0.5));

  seqs = {timed({{0, P}}, 1)};
  CHECK_THROWS_AS(delay_rate(seqs, EventFamily::publishing), error);
  seqs = {timed({{0, P}, {3, P}}, 3)};
  CHECK_THROWS_AS(delay_rate(seqs, EventFamily::social), error);

  // 10,000 exponential delays at 0.45 per day, spread over 100 users
  std::mt19937_64 rng(5);
  std::exponential_distribution<double> ex(0.45);
  seqs.clear();
  for (int u = 0; u < 100; ++u) {
    EventSequence s{"u" + std::to_string(u), {}, 0};
    double t = 0;
    for (int i = 0; i <= 100; ++i) {
      s.events.push_back({t, P, 1});
      t += ex(rng);
    }
    seqs.push_back(s);
  }
  CHECK(std::abs(delay_rate(seqs, EventFamily::publishing) - 0.45) < 0.05 * 0.45);
}

TEST_CASE("signature examples") {
  std::vector<EventKind> s{P, P, P};
  auto sig = signature(s);
  for (auto a : kAllEventKinds) {
    for (auto b : kAllEventKinds) CHECK(sig(a, b) == ((a == P && b == P) ? 1.0 : 0.0));
  }
  s = {P, Fa, P, Fa};
  sig = signature(s);
  CHECK(sig(P, Fa) == 1.0);
  CHECK(sig(Fa, P) == 1.0);
  CHECK(sig(P, P) == 0.0);
  CHECK(signature(std::vector<EventKind>{}).flat() == std::array<double, 16>{});
}

TEST_CASE("signature matches the pair-counting oracle") {
  std::mt19937_64 rng(17);
  for (int rep = 0; rep < 100; ++rep) {
    const std::size_t n = rng() % 21;
    std::vector<int> raw(n);
    std::vector<EventKind> ks(n);
    for (std::size_t i = 0; i < n; ++i) {
      raw[i] = static_cast<int>(rng() % 4);
      ks[i] = kAllEventKinds[raw[i]];
    }
    const auto expect = oracle::signature(raw);
    const auto got = signature(ks);
    for (int i = 0; i < 4; ++i) {
      double row = 0;
      for (int j = 0; j < 4; ++j) {
        CHECK(std::abs(got.psi[i][j] - expect[i][j]) <= 1e-12);
        row += got.psi[i][j];
      }
      CHECK((row == 0.0 || std::abs(row - 1.0) < 1e-12));
    }
  }
}

TEST_CASE("signature distance is a metric") {
  Signature zero, unit;
  unit.psi[2][3] = 1.0;
  CHECK(signature_distance(zero, unit) == 1.0);
  CHECK(signature_distance(unit, unit) == 0.0);

  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u;
  auto random_sig = [&] {
    Signature s;
    for (auto& row : s.psi) {
      for (auto& v : row) v = u(rng);
    }
    return s;
  };
  for (int rep = 0; rep < 200; ++rep) {
    auto a = random_sig(), b = random_sig(), c = random_sig();
    CHECK(signature_distance(a, b) == signature_distance(b, a));
    CHECK(signature_distance(a, c) <= signature_distance(a, b) + signature_distance(b, c) + 1e-12);
    double sq = 0;
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) sq += (a.psi[i][j] - b.psi[i][j]) * (a.psi[i][j] - b.psi[i][j]);
    }
    CHECK(signature_distance(a, b) == doctest::Approx(std::sqrt(sq)).epsilon(1e-12));
  }
}

TEST_CASE("markov model") {
  SUBCASE("posting every nine days") {
    std::map<std::string, EventSequence> seqs;
    MicroCluster c{7, {}, {}, ""};
    for (int u = 0; u < 3; ++u) {
      std::vector<Snapshot> snaps;
      for (int d = 0; d <= 90; ++d) snaps.push_back({double(d), (d + 8) / 9, 0});
      auto id = "u" + std::to_string(u);
      seqs[id] = extract_events(traj(snaps, id));
      c.members.push_back(id);
    }
    auto m = markov_model(c, seqs);
    REQUIRE(m.duration[0][0].has_value());
    CHECK(*m.duration[0][0] == doctest::Approx(9.0));
    CHECK(m.observed_days == 270.0);
    // ten posts per member, nine P+P+ transitions
    CHECK(m.count[0][0] == 27.0);
    CHECK(m.freq[0][0] == doctest::Approx(27.0 / 270.0));
    CHECK(micro_archetype(m, 0.11).archetype == Archetype::reader);
    CHECK(micro_archetype(m, 0.1).archetype == Archetype::blogger);
  }
  SUBCASE("no events") {
    std::map<std::string, EventSequence> seqs{{"a", timed({}, 140, "a")}, {"b", timed({}, 140, "b")}};
    auto m = markov_model(MicroCluster{1, {"a", "b"}, {}, "a"}, seqs);
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        CHECK(m.freq[i][j] == 0.0);
        CHECK_FALSE(m.duration[i][j].has_value());
      }
    }
    CHECK(micro_archetype(m).archetype == Archetype::reader);
    CHECK(micro_archetype(m).dominant.empty());
  }
  SUBCASE("empty cluster") {
    try {
      markov_model(MicroCluster{}, {});
      FAIL("expected EmptyCluster");
    } catch (const error& e) {
      CHECK(e.code() == errc::empty_cluster);
    }
  }
  SUBCASE("known chain") {
    const std::array<std::array<double, 4>, 4> chain{{{0.5, 0.2, 0.1, 0.2},
                                                      {0.3, 0.4, 0.2, 0.1},
                                                      {0.25, 0.25, 0.25, 0.25},
                                                      {0.6, 0.1, 0.0, 0.3}}};
    const auto pi = oracle::stationary(chain);
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> u;
    EventSequence s{"x", {}, 100000};
    int state = 0;
    for (int d = 0; d < 100000; ++d) {
      s.events.push_back({double(d), kAllEventKinds[state], 1});
      double r = u(rng), acc = 0;
      int next = 3;
      for (int j = 0; j < 4; ++j) {
        acc += chain[state][j];
        if (r < acc) {
          next = j;
          break;
        }
      }
      state = next;
    }
    auto m = markov_model(MicroCluster{1, {"x"}, {}, "x"}, {{"x", s}});
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        const double expect = pi[i] * chain[i][j];
        if (expect == 0.0) {
          CHECK(m.freq[i][j] == 0.0);
        } else {
          CHECK(std::abs(m.freq[i][j] - expect) <= 0.1 * expect);
          CHECK(*m.duration[i][j] == doctest::Approx(1.0));
        }
      }
    }
  }
}

TEST_CASE("archetype from dominant transitions") {
  auto model_with = [](std::vector<std::pair<Transition, double>> cells) {
    MarkovModel m;
    m.observed_days = 100;
    for (auto [tr, f] : cells) m.freq[index_of(tr.from)][index_of(tr.to)] = f;
    return m;
  };
  CHECK(micro_archetype(model_with({})).archetype == Archetype::reader);

  auto call = micro_archetype(model_with({{{Fa, Fa}, 0.1}, {{P, Fa}, 0.02}}));
  CHECK(call.archetype == Archetype::socializer);
  CHECK(call.dominant == std::vector<Transition>{{Fa, Fa}});

  call = micro_archetype(model_with({{{P, P}, 0.3}, {{P, PF}, 0.15}, {{PF, P}, 0.15}}));
  CHECK(call.archetype == Archetype::blogger_socializer);
  CHECK(call.dominant.size() == 3);

  CHECK(micro_archetype(model_with({{{P, P}, 0.11}})).archetype == Archetype::blogger);
  CHECK(micro_archetype(model_with({{{P, P}, 0.2}, {{Fr, Fa}, 0.2}})).archetype ==
        Archetype::blogger_socializer);
  CHECK(micro_archetype(model_with({{{PF, PF}, 0.2}})).archetype == Archetype::blogger_socializer);
  CHECK(micro_archetype(model_with({{{P, P}, 0.05}}), 0.05).archetype == Archetype::blogger);
}

TEST_CASE("archetype distribution") {
  auto d = archetype_distribution({{"a", Archetype::reader}, {"b", Archetype::reader}});
  CHECK(d.at(Archetype::reader) == 1.0);
  CHECK(d.at(Archetype::blogger) == 0.0);
  CHECK(d.size() == 4);

  d = archetype_distribution({{"a", Archetype::reader}, {"b", Archetype::blogger}});
  CHECK(d.at(Archetype::reader) == 0.5);
  CHECK(d.at(Archetype::blogger) == 0.5);
}

TEST_CASE("string forms round-trip") {
  for (auto k : kAllEventKinds) CHECK(event_kind_from_string(to_string(k)) == k);
  for (auto a : kAllArchetypes) CHECK(archetype_from_string(to_string(a)) == a);
  CHECK(to_string(PF) == "PF");
  CHECK(to_string(Archetype::blogger_socializer) == "BloggerSocializer");
  CHECK_THROWS_AS(archetype_from_string("Lurker"), error);
}
