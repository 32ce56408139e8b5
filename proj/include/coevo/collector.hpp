#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "coevo/model.hpp"

namespace coevo {

using Nanos = std::chrono::nanoseconds;

/// Time source for the collector. Real crawls use SystemClock; tests drive a
/// SimulatedClock so no wall-clock sleeping happens.
class Clock {
public:
  virtual ~Clock() = default;
  virtual Nanos now() const = 0;
  virtual void sleep_until(Nanos t) = 0;
};

class SimulatedClock final : public Clock {
public:
  Nanos now() const override { return now_; }
  void sleep_until(Nanos t) override { now_ = std::max(now_, t); }
  void advance(Nanos d) { now_ += d; }

private:
  Nanos now_{0};
};

class SystemClock final : public Clock {
public:
  Nanos now() const override;
  void sleep_until(Nanos t) override;
};

struct FetchResult {
  bool ok = false;
  std::int64_t posts_total = 0;
  std::int64_t friends_total = 0;
};

/// Platform client (RSS, FOAF, profile scraping...). A failed result is a
/// transient error and may be retried.
class Fetcher {
public:
  virtual ~Fetcher() = default;
  virtual FetchResult fetch(const std::string& user, double day) = 0;
};

struct CollectorPolicy {
  int max_requests_per_second = 5;
  std::vector<double> backoff_seconds = {1.0, 2.0, 4.0};  // one retry per entry
  double sampling_interval_days = 1.0;
};

/// Admits requests no faster than a fixed cadence. The bucket holds one
/// token and starts empty, so any 1-second window sees at most `per_second`
/// admissions.
class RateLimiter {
public:
  explicit RateLimiter(int per_second);

  /// Blocks on `clock` until a request may be issued; returns the admission time.
  Nanos acquire(Clock& clock);

private:
  Nanos interval_;
  std::optional<Nanos> last_;
};

struct CollectedRow {
  std::string user_id;
  double day = 0.0;
  std::int64_t posts_total = 0;
  std::int64_t friends_total = 0;
};

struct CollectionFailure {
  std::string user_id;
  double day = 0.0;
  int attempts = 0;
};

struct CollectionResult {
  std::vector<CollectedRow> rows;
  std::vector<CollectionFailure> failures;  // SourceUnavailable after retries
  std::vector<Nanos> request_log;           // admission time of every request
};

/// One sampling pass over `users` for `day`. Every request, retries included,
/// passes through the rate limiter. A user-day that fails on every attempt
/// yields a failure record and no row.
CollectionResult rate_limited_collect(Fetcher& source, std::span<const std::string> users,
                                      double day, const CollectorPolicy& policy, Clock& clock);
void rate_limited_collect(Fetcher& source, std::span<const std::string> users, double day,
                          const CollectorPolicy& policy, Clock& clock, RateLimiter& limiter,
                          CollectionResult& into);

/// Samples days first_day, first_day + interval, ... up to last_day with one
/// limiter shared by the whole run.
CollectionResult collect_days(Fetcher& source, std::span<const std::string> users,
                              double first_day, double last_day, const CollectorPolicy& policy,
                              Clock& clock);

/// Groups rows by user into day-ordered trajectories. Users with a single
/// row are skipped.
std::vector<Trajectory> to_trajectories(std::span<const CollectedRow> rows);

/// Largest number of requests inside any half-open window of length `window`.
std::size_t max_requests_in_window(std::span<const Nanos> log, Nanos window);

}  // namespace coevo
