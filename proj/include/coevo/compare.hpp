#pragma once

#include <map>
#include <string>
#include <vector>

#include "coevo/micro.hpp"

namespace coevo {

/// A labeled partition of users: cluster name -> member ids.
struct Clustering {
  std::vector<std::string> names;
  std::vector<std::vector<std::string>> members;
};

struct OverlapMatrix {
  std::vector<std::string> rows;  // micro cluster ids
  std::vector<std::string> cols;  // macro cluster keys
  std::vector<std::vector<std::size_t>> counts;
  std::vector<std::size_t> row_sizes;
  std::vector<std::size_t> col_sizes;

  std::size_t total() const;
};

enum class EdgePattern { one_to_one, one_to_many, many_to_one, many_to_many };

std::string_view to_string(EdgePattern p);

struct OverlapEdge {
  std::size_t row = 0;
  std::size_t col = 0;
  std::size_t count = 0;
  EdgePattern pattern = EdgePattern::one_to_one;
};

struct ArchetypeShare {
  double micro = 0.0;
  double macro = 0.0;
  double difference = 0.0;  // macro - micro
};

using ArchetypeComparison = std::map<Archetype, ArchetypeShare>;

/// Shared-member counts. Both clusterings must cover the same users, or
/// mismatched_universe is thrown.
OverlapMatrix overlap(const Clustering& micro, const Clustering& macro);

/// Keeps only the `n` largest columns (ties broken by name). Row sizes keep
/// their full-universe values.
OverlapMatrix largest_columns(const OverlapMatrix& m, std::size_t n);

/// Cells holding at least `min_fraction` of the smaller of the two clusters.
/// Zero-count cells never qualify.
std::vector<OverlapEdge> significant_edges(const OverlapMatrix& m, double min_fraction = 0.25);

ArchetypeComparison archetype_table(const std::map<std::string, Archetype>& micro,
                                    const std::map<std::string, Archetype>& macro);

}  // namespace coevo
