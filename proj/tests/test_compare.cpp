#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "coevo/compare.hpp"
#include "oracles.hpp"

using namespace coevo;

namespace {

Clustering partition(std::vector<std::vector<std::string>> groups, const std::string& prefix) {
  Clustering c;
  for (std::size_t i = 0; i < groups.size(); ++i) c.names.push_back(prefix + std::to_string(i));
  c.members = std::move(groups);
  return c;
}

std::vector<std::string> ids(int from, int to) {
  std::vector<std::string> out;
  for (int i = from; i < to; ++i) out.push_back("u" + std::to_string(i));
  return out;
}

std::map<std::string, Archetype> labels(std::vector<std::pair<Archetype, int>> counts) {
  std::map<std::string, Archetype> out;
  int n = 0;
  for (auto [a, k] : counts) {
    for (int i = 0; i < k; ++i) out["u" + std::to_string(n++)] = a;
  }
  return out;
}

}  // namespace

TEST_CASE("overlap of identical partitions is diagonal") {
  auto p = partition({ids(0, 5), ids(5, 8), ids(8, 20)}, "c");
  auto m = overlap(p, p);
  for (std::size_t i = 0; i < 3; ++i) {
    std::size_t nonzero = 0;
    for (std::size_t j = 0; j < 3; ++j) nonzero += m.counts[i][j] != 0;
    CHECK(nonzero == 1);
    CHECK(m.counts[i][i] == p.members[i].size());
  }
  CHECK(m.total() == 20);

  auto e = significant_edges(m);
  CHECK(e.size() == 3);
  for (const auto& edge : e) CHECK(edge.pattern == EdgePattern::one_to_one);
}

TEST_CASE("singleton overlap") {
  auto a = partition({{"x"}}, "a"), b = partition({{"x"}}, "b");
  auto m = overlap(a, b);
  CHECK(m.counts == std::vector<std::vector<std::size_t>>{{1}});
}

TEST_CASE("overlap matches a set-intersection oracle") {
  std::mt19937_64 rng(13);
  for (int rep = 0; rep < 5; ++rep) {
    std::vector<std::vector<std::string>> a(12), b(9);
    for (const auto& u : ids(0, 1000)) {
      a[rng() % 12].push_back(u);
      b[rng() % 9].push_back(u);
    }
    auto m = overlap(partition(a, "m"), partition(b, "M"));
    CHECK(m.counts == oracle::intersections(a, b));
    CHECK(m.total() == 1000);
  }
}

TEST_CASE("overlap rejects different universes") {
  auto a = partition({ids(0, 5)}, "a"), b = partition({ids(0, 4)}, "b");
  for (auto [x, y] : {std::pair{a, b}, std::pair{b, a}}) {
    try {
      overlap(x, y);
      FAIL("expected MismatchedUniverse");
    } catch (const error& e) {
      CHECK(e.code() == errc::mismatched_universe);
    }
  }
}

TEST_CASE("edge significance and patterns") {
  // micro 0 = {0..9}, micro 1 = {10..19}; macro 0 = {0..4}, macro 1 = {5..19}
  auto micro = partition({ids(0, 10), ids(10, 20)}, "m");
  auto macro = partition({ids(0, 5), ids(5, 20)}, "M");
  auto m = overlap(micro, macro);

  auto all = significant_edges(m, 0.0);
  CHECK(all.size() == 3);

  auto e = significant_edges(m, 0.25);
  REQUIRE(e.size() == 3);
  // micro 0 splits over both macro clusters; macro 1 draws from both micro clusters
  for (const auto& edge : e) {
    if (edge.row == 0 && edge.col == 0) CHECK(edge.pattern == EdgePattern::one_to_many);
    if (edge.row == 0 && edge.col == 1) CHECK(edge.pattern == EdgePattern::many_to_many);
    if (edge.row == 1 && edge.col == 1) CHECK(edge.pattern == EdgePattern::many_to_one);
  }

  // 5 of min(10, 15) = 50%; 10 of min(10, 15) = 100%
  e = significant_edges(m, 0.6);
  REQUIRE(e.size() == 2);
  CHECK(e[0].row == 0);
  CHECK(e[0].col == 0);
  CHECK(e[1].row == 1);
}

TEST_CASE("largest columns keep the biggest macro clusters") {
  auto micro = partition({ids(0, 30)}, "m");
  auto macro = partition({ids(0, 3), ids(3, 20), ids(20, 30)}, "M");
  auto m = largest_columns(overlap(micro, macro), 2);
  CHECK(m.cols == std::vector<std::string>{"M1", "M2"});
  CHECK(m.col_sizes == std::vector<std::size_t>{17, 10});
  CHECK(m.row_sizes == std::vector<std::size_t>{30});
  CHECK(m.counts == std::vector<std::vector<std::size_t>>{{17, 10}});
}

TEST_CASE("archetype table") {
  auto same = labels({{Archetype::reader, 3}, {Archetype::blogger, 2}});
  for (const auto& [a, s] : archetype_table(same, same)) CHECK(s.difference == 0.0);

  using A = Archetype;
  auto micro = labels({{A::reader, 45}, {A::blogger_socializer, 20}, {A::socializer, 20}, {A::blogger, 15}});
  auto macro = labels({{A::reader, 52}, {A::blogger_socializer, 15}, {A::socializer, 11}, {A::blogger, 22}});
  auto t = archetype_table(micro, macro);
  CHECK(t.at(A::reader).micro == doctest::Approx(0.45));
  CHECK(t.at(A::reader).macro == doctest::Approx(0.52));
  CHECK(t.at(A::reader).difference == doctest::Approx(0.07));
  CHECK(t.at(A::blogger_socializer).difference == doctest::Approx(-0.05));
  CHECK(t.at(A::socializer).difference == doctest::Approx(-0.09));
  CHECK(t.at(A::blogger).difference == doctest::Approx(0.07));

  auto bloggers = labels({{A::blogger, 4}}), readers = labels({{A::reader, 4}});
  t = archetype_table(bloggers, readers);
  CHECK(t.at(A::blogger).difference == -1.0);
  CHECK(t.at(A::reader).difference == 1.0);

  CHECK_THROWS_AS(archetype_table(bloggers, labels({{A::reader, 3}})), error);
}
