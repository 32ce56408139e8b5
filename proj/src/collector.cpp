#include "coevo/collector.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <thread>

#include "coevo/error.hpp"

namespace coevo {

Nanos SystemClock::now() const {
  return std::chrono::duration_cast<Nanos>(std::chrono::steady_clock::now().time_since_epoch());
}

void SystemClock::sleep_until(Nanos t) {
  const auto d = t - now();
  if (d > Nanos::zero()) std::this_thread::sleep_for(d);
}

RateLimiter::RateLimiter(int per_second) {
  if (per_second <= 0) throw error(errc::invalid_argument, "request cap must be positive");
  // round the spacing up so integer truncation can never exceed the cap
  interval_ = Nanos((1'000'000'000LL + per_second - 1) / per_second);
}

Nanos RateLimiter::acquire(Clock& clock) {
  if (!last_) last_ = clock.now();
  const Nanos next = std::max(clock.now(), *last_ + interval_);
  clock.sleep_until(next);
  last_ = next;
  return next;
}

namespace {

Nanos seconds(double s) { return Nanos(static_cast<std::int64_t>(std::llround(s * 1e9))); }

}  // namespace

void rate_limited_collect(Fetcher& source, std::span<const std::string> users, double day,
                          const CollectorPolicy& policy, Clock& clock, RateLimiter& limiter,
                          CollectionResult& into) {
  for (const auto& user : users) {
    int attempts = 0;
    bool done = false;
    while (!done) {
      into.request_log.push_back(limiter.acquire(clock));
      ++attempts;
      const auto r = source.fetch(user, day);
      if (r.ok) {
        into.rows.push_back({user, day, r.posts_total, r.friends_total});
        done = true;
      } else if (static_cast<std::size_t>(attempts) > policy.backoff_seconds.size()) {
        into.failures.push_back({user, day, attempts});
        done = true;
      } else {
        clock.sleep_until(clock.now() + seconds(policy.backoff_seconds[attempts - 1]));
      }
    }
  }
}

CollectionResult rate_limited_collect(Fetcher& source, std::span<const std::string> users,
                                      double day, const CollectorPolicy& policy, Clock& clock) {
  RateLimiter limiter(policy.max_requests_per_second);
  CollectionResult result;
  rate_limited_collect(source, users, day, policy, clock, limiter, result);
  return result;
}

CollectionResult collect_days(Fetcher& source, std::span<const std::string> users,
                              double first_day, double last_day, const CollectorPolicy& policy,
                              Clock& clock) {
  if (!(policy.sampling_interval_days > 0.0)) {
    throw error(errc::invalid_argument, "sampling interval must be positive");
  }
  RateLimiter limiter(policy.max_requests_per_second);
  CollectionResult result;
  for (double day = first_day; day <= last_day; day += policy.sampling_interval_days) {
    rate_limited_collect(source, users, day, policy, clock, limiter, result);
  }
  return result;
}

std::vector<Trajectory> to_trajectories(std::span<const CollectedRow> rows) {
  std::map<std::string, std::vector<Snapshot>> by_user;
  for (const auto& r : rows) by_user[r.user_id].push_back({r.day, r.posts_total, r.friends_total});
  std::vector<Trajectory> out;
  for (auto& [user, snaps] : by_user) {
    if (snaps.size() < 2) continue;
    out.push_back(validate({user, std::move(snaps)}));
  }
  return out;
}

std::size_t max_requests_in_window(std::span<const Nanos> log, Nanos window) {
  std::vector<Nanos> sorted(log.begin(), log.end());
  std::sort(sorted.begin(), sorted.end());
  std::size_t best = 0, lo = 0;
  for (std::size_t hi = 0; hi < sorted.size(); ++hi) {
    while (sorted[hi] - sorted[lo] >= window) ++lo;
    best = std::max(best, hi - lo + 1);
  }
  return best;
}

}  // namespace coevo
