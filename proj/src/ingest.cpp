#include "coevo/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace coevo {
namespace {

constexpr std::string_view kVersionHeader = "version,start_date";
constexpr std::string_view kColumnHeader = "user_id,day,posts_total,friends_total";

[[noreturn]] void parse_fail(std::size_t line, const std::string& what) {
  throw error(errc::parse_error, "line " + std::to_string(line) + ": " + what);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::int64_t parse_count(std::string_view s, std::size_t line, const char* column) {
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    parse_fail(line, std::string("malformed ") + column + " '" + std::string(s) + "'");
  }
  if (v < 0) parse_fail(line, std::string("negative ") + column);
  return v;
}

double parse_day(std::string_view s, std::size_t line) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    parse_fail(line, "malformed day '" + std::string(s) + "'");
  }
  if (!std::isfinite(v) || v < 0.0) parse_fail(line, "day must be finite and non-negative");
  return v;
}

bool valid_user_id(std::string_view id) {
  return !id.empty() && id.find_first_of(",\r\n") == std::string_view::npos;
}

}  // namespace

std::string format_number(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw error(errc::io_error, "cannot format number");
  return std::string(buf, ptr);
}

SnapshotSet read_snapshots(std::istream& in) {
  SnapshotSet set;
  std::map<std::string, std::vector<Snapshot>> rows;
  std::string raw;
  std::size_t line = 0;
  int stage = 0;  // 0: version header, 1: version row, 2: column header, 3: rows
  while (std::getline(in, raw)) {
    ++line;
    std::string_view text(raw);
    if (!text.empty() && text.back() == '\r') text.remove_suffix(1);
    if (stage == 0) {
      if (!text.empty() && text.front() == '#') continue;
      if (text != kVersionHeader) parse_fail(line, "expected '" + std::string(kVersionHeader) + "'");
      ++stage;
      continue;
    }
    if (stage == 1) {
      const auto f = split(text, ',');
      if (f.size() != 2 || f[0] != std::to_string(kSnapshotFormatVersion)) {
        parse_fail(line, "unsupported format version row");
      }
      set.start_date = std::string(f[1]);
      ++stage;
      continue;
    }
    if (stage == 2) {
      if (text != kColumnHeader) parse_fail(line, "expected '" + std::string(kColumnHeader) + "'");
      ++stage;
      continue;
    }
    if (text.empty()) continue;
    const auto f = split(text, ',');
    if (f.size() != 4) parse_fail(line, "expected 4 fields, found " + std::to_string(f.size()));
    if (!valid_user_id(f[0])) parse_fail(line, "empty user_id");
    Snapshot s{parse_day(f[1], line), parse_count(f[2], line, "posts_total"),
               parse_count(f[3], line, "friends_total")};
    auto& user_rows = rows[std::string(f[0])];
    for (const auto& prev : user_rows) {
      if (prev.t == s.t) {
        throw error(errc::duplicate_row, "line " + std::to_string(line) + ": duplicate row for user " +
                                             std::string(f[0]) + " day " + format_number(s.t));
      }
    }
    user_rows.push_back(s);
  }
  if (stage < 3) parse_fail(line + 1, "missing header");

  for (auto& [user, snaps] : rows) {
    if (snaps.size() < 2) {
      set.abandoned.push_back(user);
      continue;
    }
    std::sort(snaps.begin(), snaps.end(),
              [](const Snapshot& a, const Snapshot& b) { return a.t < b.t; });
    set.trajectories.push_back({user, std::move(snaps)});
  }
  return set;
}

SnapshotSet read_snapshots(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw error(errc::io_error, "cannot open " + path.string());
  return read_snapshots(in);
}

void write_snapshots(std::ostream& out, std::span<const Trajectory> trajs,
                     const std::string& start_date, std::span<const std::string> preamble) {
  std::vector<const Trajectory*> order;
  order.reserve(trajs.size());
  for (const auto& t : trajs) {
    if (!valid_user_id(t.user_id)) {
      throw error(errc::invalid_argument, "user id '" + t.user_id + "' cannot be stored");
    }
    order.push_back(&t);
  }
  std::sort(order.begin(), order.end(),
            [](const Trajectory* a, const Trajectory* b) { return a->user_id < b->user_id; });

  for (const auto& line : preamble) out << "# " << line << '\n';
  out << kVersionHeader << '\n' << kSnapshotFormatVersion << ',' << start_date << '\n';
  out << kColumnHeader << '\n';
  for (const auto* t : order) {
    auto snaps = t->snapshots;
    std::sort(snaps.begin(), snaps.end(),
              [](const Snapshot& a, const Snapshot& b) { return a.t < b.t; });
    for (const auto& s : snaps) {
      if (s.posts < 0 || s.friends < 0) {
        throw error(errc::invalid_argument, "negative counts for user " + t->user_id);
      }
      out << t->user_id << ',' << format_number(s.t) << ',' << s.posts << ',' << s.friends << '\n';
    }
  }
  if (!out) throw error(errc::io_error, "write failed");
}

void write_snapshots(const std::filesystem::path& path, std::span<const Trajectory> trajs,
                     const std::string& start_date, std::span<const std::string> preamble) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw error(errc::io_error, "cannot open " + path.string() + " for writing");
  write_snapshots(out, trajs, start_date, preamble);
  out.flush();
  if (!out) throw error(errc::io_error, "write to " + path.string() + " failed");
}

}  // namespace coevo
