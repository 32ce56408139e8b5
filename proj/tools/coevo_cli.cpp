// coevo: generate synthetic blogging populations and analyze how friendship
// and publishing evolve together.

#include <charconv>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "coevo/ingest.hpp"
#include "coevo/pipeline.hpp"

namespace {

using coevo::RunConfig;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <class T>
T parse_value(const std::string& key, const std::string& text) {
  T v{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw UsageError("bad value for " + key + ": '" + text + "'");
  }
  return v;
}

void set_key(RunConfig& c, const std::string& key, const std::string& value) {
  if (key == "input") c.input = value;
  else if (key == "out") c.out = value;
  else if (key == "mix") c.mix = value;
  else if (key == "users" || key == "n") c.users = parse_value<std::size_t>(key, value);
  else if (key == "days") c.days = parse_value<double>(key, value);
  else if (key == "seed") c.seed = parse_value<std::uint64_t>(key, value);
  else if (key == "k") c.k = parse_value<std::size_t>(key, value);
  else if (key == "linearity_eps") c.linearity_eps = parse_value<double>(key, value);
  else if (key == "r2_min") c.r2_min = parse_value<double>(key, value);
  else if (key == "dominant_freq") c.dominant_freq = parse_value<double>(key, value);
  else if (key == "min_fraction") c.min_fraction = parse_value<double>(key, value);
  else if (key == "percentile") c.percentile = parse_value<double>(key, value);
  else if (key == "macro_top") c.macro_top = parse_value<std::size_t>(key, value);
  else if (key == "weighted_sqrt_law") {
    if (value == "true" || value == "1") c.weighted_sqrt_law = true;
    else if (value == "false" || value == "0") c.weighted_sqrt_law = false;
    else throw UsageError("bad value for weighted_sqrt_law: '" + value + "'");
  } else {
    throw UsageError("unknown config key '" + key + "'");
  }
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

void load_config_file(RunConfig& c, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file " + path);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw UsageError(path + ":" + std::to_string(lineno) + ": expected key=value");
    }
    set_key(c, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
}

// Flags are kept as text so that config-file values can be overridden only
// by flags the user actually passed.
struct Flags {
  std::string config;
  std::map<std::string, std::string> values;

  void add(CLI::App* app, const std::string& flag, const std::string& key, const std::string& help) {
    app->add_option(flag, values[key], help);
  }

  RunConfig resolve(CLI::App* app) const {
    RunConfig c;
    if (!config.empty()) load_config_file(c, config);
    for (const auto& [key, value] : values) {
      const auto* opt = app->get_option_no_throw("--" + key);
      if (!opt && key == "users") opt = app->get_option_no_throw("--n");
      if (opt && opt->count() > 0) set_key(c, key, value);
    }
    try {
      c.check();
    } catch (const coevo::error& e) {
      throw UsageError(e.what());
    }
    return c;
  }
};

void add_common(CLI::App* app, Flags& f) {
  app->add_option("--config", f.config, "key=value file mirroring the run configuration");
  f.add(app, "--seed", "seed", "master random seed");
  f.add(app, "--out", "out", "output directory");
}

void add_analysis(CLI::App* app, Flags& f) {
  f.add(app, "--input", "input", "snapshot file (default <out>/snapshots.csv)");
  f.add(app, "--k", "k", "number of micro clusters");
  f.add(app, "--linearity_eps", "linearity_eps", "|a2/a1| below which a fit counts as linear");
  f.add(app, "--r2_min", "r2_min", "linear R^2 below which a series is constant");
  f.add(app, "--dominant_freq", "dominant_freq", "dominant transition threshold (1/day)");
  f.add(app, "--percentile", "percentile", "percentile filter level");
  f.add(app, "--weighted_sqrt_law", "weighted_sqrt_law", "weight the sqrt-law fit by cluster size");
}

void add_comparison(CLI::App* app, Flags& f) {
  f.add(app, "--min_fraction", "min_fraction", "edge significance as a share of the smaller cluster");
  f.add(app, "--macro_top", "macro_top", "number of largest macro clusters to compare");
}

int cmd_generate(const RunConfig& c) {
  coevo::PopulationSpec spec{c.users, coevo::mix_preset(c.mix), c.days, c.seed, std::nullopt};
  const auto users = coevo::generate_population(spec);
  std::vector<coevo::Trajectory> trajs;
  std::array<std::size_t, coevo::kEventKinds> events{};
  for (const auto& u : users) {
    for (const auto& e : coevo::extract_events(u.trajectory).events) ++events[coevo::index_of(e.kind)];
    trajs.push_back(u.trajectory);
  }
  std::filesystem::create_directories(c.out);
  const auto path = std::filesystem::path(c.out) / "snapshots.csv";
  coevo::write_snapshots(path, trajs, coevo::kDefaultStartDate, c.describe());

  std::cout << "wrote " << path.string() << "\n"
            << "users: " << trajs.size() << "\n"
            << "days: " << coevo::format_number(c.days) << "\n";
  for (std::size_t i = 0; i < coevo::kEventKinds; ++i) {
    std::cout << "events " << coevo::to_string(coevo::kAllEventKinds[i]) << ": " << events[i] << "\n";
  }
  return 0;
}

int cmd_analyze(const RunConfig& c) {
  const auto input = c.snapshot_path();
  coevo::SnapshotSet set;
  try {
    set = coevo::read_snapshots(input);
  } catch (const coevo::error& e) {
    throw coevo::error(e.code(), input.string() + ": " + e.what());
  }
  const auto a = coevo::analyze(set.trajectories, c);
  coevo::write_analysis(a, c, c.out);

  std::cout << "read " << set.trajectories.size() << " trajectories from " << input.string();
  if (!set.abandoned.empty()) std::cout << " (" << set.abandoned.size() << " single-row users skipped)";
  std::cout << "\nkept after filter: " << a.filter.kept.size() << "\n"
            << "micro clusters: " << a.micro.clusters.size() << "\n"
            << "macro clusters: " << a.macro.clusters.size() << "\n";
  if (a.macro.sqrt_law) {
    std::cout << "sqrt law: c=" << coevo::format_number(a.macro.sqrt_law->c)
              << " r2=" << coevo::format_number(a.macro.sqrt_law->r2) << "\n";
  }
  return 0;
}

int cmd_compare(const RunConfig& c) {
  const auto cmp = coevo::compare_from_dir(c.out, c);
  coevo::write_comparison(cmp, c, c.out);
  std::cout << "significant edges: " << cmp.edges.size() << "\n";
  for (auto a : coevo::kAllArchetypes) {
    const auto& s = cmp.archetypes.at(a);
    std::cout << coevo::to_string(a) << ": micro " << coevo::format_number(s.micro) << " macro "
              << coevo::format_number(s.macro) << "\n";
  }
  return 0;
}

int cmd_report(const RunConfig& c) {
  coevo::write_report(c.out, c);
  std::cout << "wrote " << (std::filesystem::path(c.out) / "report.md").string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Friendship and publishing co-evolution toolkit"};
  app.require_subcommand(1);

  Flags gen_flags, ana_flags, cmp_flags, rep_flags;
  auto* gen = app.add_subcommand("generate", "write a synthetic snapshot file");
  add_common(gen, gen_flags);
  gen_flags.add(gen, "--mix", "mix", "population preset: paper, paper-churn, reader-only");
  gen_flags.add(gen, "--n", "users", "number of users");
  gen_flags.add(gen, "--days", "days", "observation length in days");

  auto* ana = app.add_subcommand("analyze", "run the micro and macro pipelines");
  add_common(ana, ana_flags);
  add_analysis(ana, ana_flags);

  auto* cmp = app.add_subcommand("compare", "relate micro and macro clusters");
  add_common(cmp, cmp_flags);
  add_comparison(cmp, cmp_flags);

  auto* rep = app.add_subcommand("report", "summarize an analysis directory");
  add_common(rep, rep_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (gen->parsed()) return cmd_generate(gen_flags.resolve(gen));
    if (ana->parsed()) return cmd_analyze(ana_flags.resolve(ana));
    if (cmp->parsed()) return cmd_compare(cmp_flags.resolve(cmp));
    if (rep->parsed()) return cmd_report(rep_flags.resolve(rep));
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const coevo::error& e) {
    std::cerr << "error (" << coevo::to_string(e.code()) << "): " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
