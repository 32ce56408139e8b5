#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <functional>

#include "coevo/collector.hpp"
#include "coevo/macro.hpp"
#include "coevo/micro.hpp"

using namespace coevo;
using namespace std::chrono_literals;

namespace {

// Counters grow by one post per day and one friend every other day.
struct SteadyFetcher : Fetcher {
  std::function<bool(const std::string&, double)> down = [](const std::string&, double) { return false; };
  int calls = 0;
  FetchResult fetch(const std::string& user, double day) override {
    ++calls;
    if (down(user, day)) return {};
    const auto base = static_cast<std::int64_t>(user.size());
    return {true, base + static_cast<std::int64_t>(day), static_cast<std::int64_t>(day) / 2};
  }
};

// Oracle: brute-force count of requests in [t, t + window) for every logged t.
std::size_t brute_max_window(const std::vector<Nanos>& log, Nanos window) {
  std::size_t best = 0;
  for (auto start : log) {
    std::size_t n = 0;
    for (auto t : log) n += (t >= start && t < start + window);
    best = std::max(best, n);
  }
  return best;
}

std::vector<std::string> users(int n) {
  std::vector<std::string> out;
  for (int i = 0; i < n; ++i) out.push_back("user" + std::to_string(i));
  return out;
}

}  // namespace

TEST_CASE("ten users at five per second take two simulated seconds") {
  SteadyFetcher src;
  SimulatedClock clock;
  const auto us = users(10);
  auto r = rate_limited_collect(src, us, 0.0, CollectorPolicy{}, clock);
  CHECK(r.rows.size() == 10);
  CHECK(r.failures.empty());
  CHECK(clock.now() >= 2s);
  CHECK(max_requests_in_window(r.request_log, 1s) <= 5);
  CHECK(brute_max_window(r.request_log, 1s) <= 5);
}

TEST_CASE("window counting matches the brute-force oracle") {
  std::vector<Nanos> log{0ms, 100ms, 200ms, 999ms, 1000ms, 1500ms, 1999ms, 2000ms};
  for (Nanos w : {Nanos(1ms), Nanos(100ms), Nanos(1s), Nanos(2s)}) {
    CHECK(max_requests_in_window(log, w) == brute_max_window(log, w));
  }
}

TEST_CASE("a source that always fails yields only failures") {
  SteadyFetcher src;
  src.down = [](const std::string&, double) { return true; };
  SimulatedClock clock;
  const auto us = users(3);
  auto r = rate_limited_collect(src, us, 4.0, CollectorPolicy{}, clock);
  CHECK(r.rows.empty());
  REQUIRE(r.failures.size() == 3);
  for (const auto& f : r.failures) CHECK(f.attempts == 4);
  CHECK(src.calls == 12);
  // three backoffs of 1 + 2 + 4 seconds per user
  CHECK(clock.now() >= 21s);
  CHECK(max_requests_in_window(r.request_log, 1s) <= 5);
}

TEST_CASE("a transient failure is retried") {
  SteadyFetcher src;
  int left = 2;
  src.down = [&](const std::string&, double) { return left-- > 0; };
  SimulatedClock clock;
  const auto us = users(1);
  auto r = rate_limited_collect(src, us, 0.0, CollectorPolicy{}, clock);
  CHECK(r.rows.size() == 1);
  CHECK(r.failures.empty());
  CHECK(r.request_log.size() == 3);
}

TEST_CASE("a blackout leaves a tolerated gap") {
  SteadyFetcher src;
  src.down = [](const std::string&, double day) { return day >= 50 && day < 60; };
  SimulatedClock clock;
  const auto us = users(4);
  CollectorPolicy policy;
  policy.backoff_seconds = {};
  auto r = collect_days(src, us, 0, 99, policy, clock);
  CHECK(r.failures.size() == 40);
  auto trajs = to_trajectories(r.rows);
  REQUIRE(trajs.size() == 4);
  for (const auto& t : trajs) {
    CHECK(t.size() == 90);
    CHECK(classify_trajectory(t).key == MacroKey{Dynamics::ascending, Dynamics::ascending});
    // the gap turns ten daily steps into one
    CHECK(extract_events(t).events.size() == 89);
  }
  CHECK(max_requests_in_window(r.request_log, 1s) <= 5);
}

TEST_CASE("rate limiter") {
  CHECK_THROWS_AS(RateLimiter(0), error);
  RateLimiter lim(3);
  SimulatedClock clock;
  const auto a = lim.acquire(clock), b = lim.acquire(clock);
  CHECK(b - a == Nanos(333'333'334));
  clock.advance(10s);
  CHECK(lim.acquire(clock) == clock.now());
}

TEST_CASE("rows group into trajectories") {
  std::vector<CollectedRow> rows{{"b", 1, 2, 2}, {"a", 0, 1, 1}, {"b", 0, 1, 1}, {"c", 0, 0, 0}, {"a", 1, 1, 2}};
  auto t = to_trajectories(rows);
  REQUIRE(t.size() == 2);
  CHECK(t[0].user_id == "a");
  CHECK(t[1].snapshots == std::vector<Snapshot>{{0, 1, 1}, {1, 2, 2}});
}
