#include "coevo/compare.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>

namespace coevo {

std::string_view to_string(EdgePattern p) {
  switch (p) {
    case EdgePattern::one_to_one: return "one-to-one";
    case EdgePattern::one_to_many: return "one-to-many";
    case EdgePattern::many_to_one: return "many-to-one";
    case EdgePattern::many_to_many: return "many-to-many";
  }
  return "?";
}

std::size_t OverlapMatrix::total() const {
  std::size_t sum = 0;
  for (const auto& row : counts) sum = std::accumulate(row.begin(), row.end(), sum);
  return sum;
}

OverlapMatrix overlap(const Clustering& micro, const Clustering& macro) {
  std::unordered_map<std::string, std::size_t> macro_of;
  for (std::size_t j = 0; j < macro.members.size(); ++j) {
    for (const auto& u : macro.members[j]) {
      if (!macro_of.emplace(u, j).second) {
        throw error(errc::invalid_argument, "user " + u + " appears in two macro clusters");
      }
    }
  }
  OverlapMatrix m;
  m.rows = micro.names;
  m.cols = macro.names;
  m.counts.assign(micro.members.size(), std::vector<std::size_t>(macro.members.size(), 0));
  m.row_sizes.assign(micro.members.size(), 0);
  m.col_sizes.assign(macro.members.size(), 0);
  std::size_t seen = 0;
  for (std::size_t i = 0; i < micro.members.size(); ++i) {
    for (const auto& u : micro.members[i]) {
      auto it = macro_of.find(u);
      if (it == macro_of.end()) {
        throw error(errc::mismatched_universe, "user " + u + " has no macro cluster");
      }
      ++m.counts[i][it->second];
      ++m.row_sizes[i];
      ++m.col_sizes[it->second];
      ++seen;
    }
  }
  if (seen != macro_of.size()) {
    throw error(errc::mismatched_universe, "macro clustering covers users absent from micro");
  }
  return m;
}

OverlapMatrix largest_columns(const OverlapMatrix& m, std::size_t n) {
  std::vector<std::size_t> order(m.cols.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (m.col_sizes[a] != m.col_sizes[b]) return m.col_sizes[a] > m.col_sizes[b];
    return m.cols[a] < m.cols[b];
  });
  order.resize(std::min(n, order.size()));
  OverlapMatrix out;
  out.rows = m.rows;
  out.row_sizes = m.row_sizes;
  out.counts.assign(m.rows.size(), {});
  for (auto j : order) {
    out.cols.push_back(m.cols[j]);
    out.col_sizes.push_back(m.col_sizes[j]);
    for (std::size_t i = 0; i < m.rows.size(); ++i) out.counts[i].push_back(m.counts[i][j]);
  }
  return out;
}

std::vector<OverlapEdge> significant_edges(const OverlapMatrix& m, double min_fraction) {
  std::vector<OverlapEdge> edges;
  for (std::size_t i = 0; i < m.rows.size(); ++i) {
    for (std::size_t j = 0; j < m.cols.size(); ++j) {
      const auto c = m.counts[i][j];
      if (c == 0) continue;
      const double smaller = static_cast<double>(std::min(m.row_sizes[i], m.col_sizes[j]));
      if (static_cast<double>(c) >= min_fraction * smaller) edges.push_back({i, j, c});
    }
  }
  std::vector<std::size_t> row_deg(m.rows.size(), 0), col_deg(m.cols.size(), 0);
  for (const auto& e : edges) {
    ++row_deg[e.row];
    ++col_deg[e.col];
  }
  for (auto& e : edges) {
    const bool one_row = row_deg[e.row] == 1, one_col = col_deg[e.col] == 1;
    if (one_row && one_col) {
      e.pattern = EdgePattern::one_to_one;
    } else if (one_col) {
      e.pattern = EdgePattern::one_to_many;  // one micro cluster fans out to several macro ones
    } else if (one_row) {
      e.pattern = EdgePattern::many_to_one;
    } else {
      e.pattern = EdgePattern::many_to_many;
    }
  }
  return edges;
}

ArchetypeComparison archetype_table(const std::map<std::string, Archetype>& micro,
                                    const std::map<std::string, Archetype>& macro) {
  if (micro.size() != macro.size() ||
      !std::equal(micro.begin(), micro.end(), macro.begin(),
                  [](const auto& a, const auto& b) { return a.first == b.first; })) {
    throw error(errc::mismatched_universe, "micro and macro labelings cover different users");
  }
  const auto micro_shares = archetype_distribution(micro);
  const auto macro_shares = archetype_distribution(macro);
  ArchetypeComparison out;
  for (auto a : kAllArchetypes) {
    const double mi = micro_shares.at(a), ma = macro_shares.at(a);
    out[a] = {mi, ma, ma - mi};
  }
  return out;
}

}  // namespace coevo
