#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "coevo/cluster.hpp"
#include "coevo/compare.hpp"
#include "coevo/macro.hpp"
#include "coevo/micro.hpp"
#include "coevo/model.hpp"
#include "coevo/synth.hpp"

namespace coevo {

struct RunConfig {
  std::string input;          // snapshot file; empty means <out>/snapshots.csv
  std::string out = "out";
  std::string mix = "paper";  // generator preset
  std::size_t users = 1836;
  double days = 140.0;
  std::uint64_t seed = 7;
  std::size_t k = 12;
  double linearity_eps = 0.0085;
  double r2_min = 0.7;
  double dominant_freq = 0.1;
  double min_fraction = 0.25;
  double percentile = 0.98;
  std::size_t macro_top = 12;
  bool weighted_sqrt_law = false;

  void check() const;
  /// "key=value" lines, in a fixed order, for provenance headers.
  std::vector<std::string> describe() const;
  std::filesystem::path snapshot_path() const;
};

/// Mix presets: paper, paper-churn, reader-only. Throws invalid_mix otherwise.
std::vector<MixComponent> mix_preset(const std::string& name);

struct MicroAnalysis {
  std::map<std::string, EventSequence> sequences;
  std::map<std::string, Signature> signatures;
  std::vector<MicroCluster> clusters;
  std::vector<MarkovModel> models;  // parallel to clusters
  std::vector<ArchetypeCall> calls; // parallel to clusters
  std::map<std::string, int> cluster_of;
  std::map<std::string, Archetype> labels;
  std::optional<double> publishing_rate;
  std::optional<double> social_rate;
  std::size_t k_used = 0;
};

struct MacroAnalysis {
  std::map<std::string, TrajectoryClass> classes;
  std::vector<MacroCluster> clusters;  // by decreasing size
  std::map<std::string, Archetype> labels;
  std::optional<SqrtLawFit> sqrt_law;
  double anticorrelated = 0.0;
};

struct Analysis {
  FilterReport filter;
  std::vector<Trajectory> trajectories;  // kept and origin-translated
  std::map<std::string, std::optional<double>> correlations;
  MicroAnalysis micro;
  MacroAnalysis macro;
};

MicroAnalysis analyze_micro(std::span<const Trajectory> trajs, std::size_t k, std::uint64_t seed,
                            double dominant_freq);

MacroAnalysis analyze_macro(std::span<const Trajectory> trajs, const ClassifyOptions& opts,
                            bool weighted_sqrt_law = false);

/// Validation, percentile filter, translation, then both pipelines.
Analysis analyze(std::span<const Trajectory> raw, const RunConfig& config);

struct Comparison {
  OverlapMatrix full;
  OverlapMatrix top;  // restricted to the largest macro clusters
  std::vector<OverlapEdge> edges;
  ArchetypeComparison archetypes;
  std::vector<std::string> anomalies;  // significant edges joining different archetypes
};

Comparison compare(const std::map<std::string, int>& micro_cluster,
                   const std::map<std::string, Archetype>& micro_labels,
                   const std::map<std::string, MacroKey>& macro_key,
                   const std::map<std::string, Archetype>& macro_labels, double min_fraction,
                   std::size_t macro_top);

// Bundle writers and readers used by the command-line front end.
void write_analysis(const Analysis& a, const RunConfig& config, const std::filesystem::path& dir);
Comparison compare_from_dir(const std::filesystem::path& dir, const RunConfig& config);
void write_comparison(const Comparison& c, const RunConfig& config,
                      const std::filesystem::path& dir);
void write_report(const std::filesystem::path& dir, const RunConfig& config);

}  // namespace coevo
