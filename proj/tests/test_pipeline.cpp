#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <fstream>
#include <sstream>

#include "coevo/ingest.hpp"
#include "coevo/pipeline.hpp"

using namespace coevo;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("coevo_test_pipeline_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<Trajectory> population(const std::string& mix, std::size_t n, std::uint64_t seed) {
  std::vector<Trajectory> out;
  for (auto& u : generate_population({n, mix_preset(mix), 140, seed, std::nullopt})) {
    out.push_back(std::move(u.trajectory));
  }
  return out;
}

}  // namespace

TEST_CASE("config checks") {
  RunConfig c;
  CHECK_NOTHROW(c.check());
  c.k = 0;
  CHECK_THROWS_AS(c.check(), error);
  c = {};
  c.r2_min = 1.5;
  CHECK_THROWS_AS(c.check(), error);
  c = {};
  c.percentile = 0;
  CHECK_THROWS_AS(c.check(), error);
  CHECK_THROWS_AS(mix_preset("everyone"), error);
  CHECK(RunConfig{}.describe().front() == "input=");
}

TEST_CASE("flat population is all readers on both scales") {
  auto trajs = population("reader-only", 30, 1);
  RunConfig c;
  auto a = analyze(trajs, c);
  CHECK(a.trajectories.size() == 30);
  CHECK(a.micro.k_used == 12);
  for (const auto& [u, arch] : a.micro.labels) CHECK(arch == Archetype::reader);
  for (const auto& [u, cls] : a.macro.classes) CHECK(cls.key == MacroKey{});
  REQUIRE(a.macro.clusters.size() == 1);
  CHECK(a.macro.clusters[0].members.size() == 30);
  for (const auto& [u, rho] : a.correlations) CHECK_FALSE(rho.has_value());
  CHECK_FALSE(a.micro.publishing_rate.has_value());
}

TEST_CASE("k is clamped to the population") {
  auto trajs = population("paper", 5, 2);
  auto a = analyze(trajs, RunConfig{});
  CHECK(a.micro.k_used == a.trajectories.size());
}

TEST_CASE("standard mix lands near its archetype shares") {
  auto trajs = population("paper", 600, 11);
  auto a = analyze(trajs, RunConfig{});
  auto shares = archetype_distribution(a.micro.labels);
  CHECK(std::abs(shares[Archetype::reader] - 0.45) <= 0.10);
  CHECK(std::abs(shares[Archetype::blogger_socializer] - 0.20) <= 0.10);
  CHECK(std::abs(shares[Archetype::socializer] - 0.20) <= 0.10);
  CHECK(std::abs(shares[Archetype::blogger] - 0.15) <= 0.10);
}

TEST_CASE("compare") {
  std::map<std::string, int> cluster{{"a", 1}, {"b", 1}, {"c", 2}};
  std::map<std::string, Archetype> labels{
      {"a", Archetype::blogger}, {"b", Archetype::blogger}, {"c", Archetype::reader}};
  std::map<std::string, MacroKey> keys{{"a", {Dynamics::ascending, Dynamics::constant}},
                                       {"b", {Dynamics::ascending, Dynamics::constant}},
                                       {"c", {}}};
  auto c = compare(cluster, labels, keys, labels, 0.25, 12);
  for (const auto& [arch, s] : c.archetypes) CHECK(s.difference == 0.0);
  CHECK(c.edges.size() == 2);
  CHECK(c.anomalies.empty());

  // micro cluster 1 labelled Blogger but macro calls its members readers
  std::map<std::string, MacroKey> flat{{"a", {}}, {"b", {}}, {"c", {}}};
  std::map<std::string, Archetype> readers{
      {"a", Archetype::reader}, {"b", Archetype::reader}, {"c", Archetype::reader}};
  c = compare(cluster, labels, flat, readers, 0.25, 12);
  CHECK(c.anomalies.size() == 1);

  std::map<std::string, MacroKey> other{{"x", {}}};
  std::map<std::string, Archetype> other_labels{{"x", Archetype::reader}};
  try {
    compare(cluster, labels, other, other_labels, 0.25, 12);
    FAIL("expected MismatchedUniverse");
  } catch (const error& e) {
    CHECK(e.code() == errc::mismatched_universe);
  }
}

TEST_CASE("bundle round trip and byte-identical reruns") {
  auto trajs = population("paper", 150, 5);
  RunConfig cfg;
  cfg.k = 6;
  auto a = analyze(trajs, cfg);

  const auto d1 = scratch("one"), d2 = scratch("two");
  for (const auto& d : {d1, d2}) {
    write_analysis(analyze(trajs, cfg), cfg, d);
    write_comparison(compare_from_dir(d, cfg), cfg, d);
    write_report(d, cfg);
  }
  for (const auto* name : {"correlations.csv", "trajectories.csv", "micro_clusters.csv",
                           "markov_models.txt", "macro_grid.csv", "mean_trajectories.csv",
                           "sqrt_law.txt", "archetypes_micro.csv", "archetypes_macro.csv",
                           "overlap_edges.csv", "archetype_diff.csv", "report.md",
                           "correlations.svg", "mean_trajectories.svg"}) {
    CAPTURE(name);
    REQUIRE(fs::exists(d1 / name));
    CHECK(slurp(d1 / name) == slurp(d2 / name));
  }
  // every data file carries the run configuration
  CHECK(slurp(d1 / "macro_grid.csv").rfind("# input=\n# out=out\n", 0) == 0);
  CHECK(slurp(d1 / "macro_grid.csv").find("# k=6\n") != std::string::npos);

  // what was read back agrees with what was computed
  auto cmp = compare_from_dir(d1, cfg);
  auto direct = compare(a.micro.cluster_of, a.micro.labels,
                        [&] {
                          std::map<std::string, MacroKey> k;
                          for (const auto& [u, cls] : a.macro.classes) k[u] = cls.key;
                          return k;
                        }(),
                        a.macro.labels, cfg.min_fraction, cfg.macro_top);
  CHECK(cmp.full.counts == direct.full.counts);
  CHECK(cmp.edges.size() == direct.edges.size());

  // the grid has one row per shape pair
  std::istringstream grid(slurp(d1 / "macro_grid.csv"));
  std::string line;
  int rows = 0;
  while (std::getline(grid, line)) rows += !line.empty() && line[0] != '#';
  CHECK(rows == 1 + 49);
}

TEST_CASE("missing analysis is reported") {
  const auto d = scratch("missing");
  try {
    compare_from_dir(d, RunConfig{});
    FAIL("expected MissingAnalysis");
  } catch (const error& e) {
    CHECK(e.code() == errc::missing_analysis);
  }
  CHECK_THROWS_AS(write_report(d, RunConfig{}), error);
}
