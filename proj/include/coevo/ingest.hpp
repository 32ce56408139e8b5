#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "coevo/model.hpp"

namespace coevo {

// Snapshot file layout (UTF-8, '\n' line endings):
//
//   version,start_date
//   1,2011-08-01
//   user_id,day,posts_total,friends_total
//   <one row per user-day, sorted by user_id then day>
//
// Lines starting with '#' before the first header line are provenance
// comments and are ignored by the reader.

inline constexpr int kSnapshotFormatVersion = 1;
inline constexpr const char* kDefaultStartDate = "2011-08-01";

struct SnapshotSet {
  std::string start_date = kDefaultStartDate;
  std::vector<Trajectory> trajectories;  // users with at least two rows
  std::vector<std::string> abandoned;    // users with a single row
};

SnapshotSet read_snapshots(std::istream& in);
SnapshotSet read_snapshots(const std::filesystem::path& path);

/// Canonical, byte-stable output. `preamble` lines are written as '#'
/// comments ahead of the header.
void write_snapshots(std::ostream& out, std::span<const Trajectory> trajs,
                     const std::string& start_date = kDefaultStartDate,
                     std::span<const std::string> preamble = {});
void write_snapshots(const std::filesystem::path& path, std::span<const Trajectory> trajs,
                     const std::string& start_date = kDefaultStartDate,
                     std::span<const std::string> preamble = {});

/// Shortest decimal text that reads back to the same double.
std::string format_number(double v);

}  // namespace coevo
