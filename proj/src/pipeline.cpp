#include "coevo/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "coevo/ingest.hpp"

namespace coevo {
namespace fs = std::filesystem;

void RunConfig::check() const {
  auto fail = [](const std::string& what) { throw error(errc::invalid_argument, what); };
  if (k == 0) fail("k must be at least 1");
  if (!(linearity_eps > 0.0)) fail("linearity_eps must be positive");
  if (!(r2_min >= 0.0 && r2_min <= 1.0)) fail("r2_min must lie in [0, 1]");
  if (!(dominant_freq >= 0.0)) fail("dominant_freq must be non-negative");
  if (!(min_fraction >= 0.0 && min_fraction <= 1.0)) fail("min_fraction must lie in [0, 1]");
  if (!(percentile > 0.0 && percentile <= 1.0)) fail("percentile must lie in (0, 1]");
  if (!(days > 0.0)) fail("days must be positive");
  if (macro_top == 0) fail("macro_top must be at least 1");
  mix_preset(mix);
}

std::vector<std::string> RunConfig::describe() const {
  return {"input=" + input,
          "out=" + out,
          "mix=" + mix,
          "users=" + std::to_string(users),
          "days=" + format_number(days),
          "seed=" + std::to_string(seed),
          "k=" + std::to_string(k),
          "linearity_eps=" + format_number(linearity_eps),
          "r2_min=" + format_number(r2_min),
          "dominant_freq=" + format_number(dominant_freq),
          "min_fraction=" + format_number(min_fraction),
          "percentile=" + format_number(percentile),
          "macro_top=" + std::to_string(macro_top),
          std::string("weighted_sqrt_law=") + (weighted_sqrt_law ? "true" : "false")};
}

fs::path RunConfig::snapshot_path() const {
  return input.empty() ? fs::path(out) / "snapshots.csv" : fs::path(input);
}

std::vector<MixComponent> mix_preset(const std::string& name) {
  if (name == "paper") return standard_mix();
  if (name == "paper-churn") return churn_mix();
  if (name == "reader-only") return reader_only_mix();
  throw error(errc::invalid_mix, "unknown mix preset '" + name + "'");
}

MicroAnalysis analyze_micro(std::span<const Trajectory> trajs, std::size_t k, std::uint64_t seed,
                            double dominant_freq) {
  MicroAnalysis out;
  std::vector<EventSequence> all;
  all.reserve(trajs.size());
  for (const auto& t : trajs) {
    auto seq = extract_events(t);
    out.signatures[t.user_id] = signature(seq);
    all.push_back(seq);
    out.sequences[t.user_id] = std::move(seq);
  }
  try {
    out.publishing_rate = delay_rate(all, EventFamily::publishing);
  } catch (const error& e) {
    if (e.code() != errc::insufficient_events) throw;
  }
  try {
    out.social_rate = delay_rate(all, EventFamily::social);
  } catch (const error& e) {
    if (e.code() != errc::insufficient_events) throw;
  }
  if (trajs.empty()) return out;

  out.k_used = std::min(k, trajs.size());
  out.clusters = cluster_micro(out.signatures, out.k_used, seed);
  for (const auto& c : out.clusters) {
    out.models.push_back(markov_model(c, out.sequences));
    out.calls.push_back(micro_archetype(out.models.back(), dominant_freq));
    for (const auto& u : c.members) {
      out.cluster_of[u] = c.id;
      out.labels[u] = out.calls.back().archetype;
    }
  }
  return out;
}

MacroAnalysis analyze_macro(std::span<const Trajectory> trajs, const ClassifyOptions& opts,
                            bool weighted_sqrt_law) {
  MacroAnalysis out;
  std::map<MacroKey, std::vector<std::size_t>> groups;
  std::vector<double> quality(trajs.size());
  std::vector<MacroKey> keys;
  for (std::size_t i = 0; i < trajs.size(); ++i) {
    auto cls = classify_trajectory(trajs[i], opts);
    quality[i] = std::sqrt(cls.posts.fit_quality * cls.friends.fit_quality);
    groups[cls.key].push_back(i);
    keys.push_back(cls.key);
    out.labels[trajs[i].user_id] = macro_archetype(cls.key);
    out.classes[trajs[i].user_id] = std::move(cls);
  }
  if (trajs.empty()) return out;
  out.anticorrelated = anticorrelated_share(keys);

  for (const auto& [key, idx] : groups) {
    std::vector<const Trajectory*> members;
    std::vector<double> q;
    for (auto i : idx) {
      members.push_back(&trajs[i]);
      q.push_back(quality[i]);
    }
    out.clusters.push_back(mean_trajectory(key, members, common_grid(members), q));
  }
  std::stable_sort(out.clusters.begin(), out.clusters.end(),
                   [](const MacroCluster& a, const MacroCluster& b) {
                     return a.members.size() > b.members.size();
                   });

  std::vector<MeanSeries> means;
  for (const auto& c : out.clusters) {
    means.push_back({c.mean_posts, c.mean_friends, static_cast<double>(c.members.size())});
  }
  try {
    out.sqrt_law = sqrt_law_fit(means, weighted_sqrt_law);
  } catch (const error& e) {
    if (e.code() != errc::no_positive_p) throw;
  }
  return out;
}

Analysis analyze(std::span<const Trajectory> raw, const RunConfig& config) {
  config.check();
  std::vector<Trajectory> valid;
  valid.reserve(raw.size());
  for (const auto& t : raw) valid.push_back(validate(t));
  if (valid.empty()) throw error(errc::empty_input, "no trajectories to analyze");

  Analysis a;
  a.filter = percentile_filter(valid, config.percentile);
  const std::set<std::string> kept(a.filter.kept.begin(), a.filter.kept.end());
  for (auto& t : valid) {
    if (kept.count(t.user_id)) a.trajectories.push_back(translate_to_origin(std::move(t)));
  }
  for (const auto& t : a.trajectories) a.correlations[t.user_id] = pf_correlation(t);
  a.micro = analyze_micro(a.trajectories, config.k, config.seed, config.dominant_freq);
  a.macro = analyze_macro(a.trajectories, {config.linearity_eps, config.r2_min},
                          config.weighted_sqrt_law);
  return a;
}

Comparison compare(const std::map<std::string, int>& micro_cluster,
                   const std::map<std::string, Archetype>& micro_labels,
                   const std::map<std::string, MacroKey>& macro_key,
                   const std::map<std::string, Archetype>& macro_labels, double min_fraction,
                   std::size_t macro_top) {
  if (micro_cluster.empty() || macro_key.empty()) {
    throw error(errc::mismatched_universe, "no users to compare");
  }
  Clustering micro, macro;
  std::map<int, std::vector<std::string>> by_id;
  for (const auto& [user, id] : micro_cluster) by_id[id].push_back(user);
  for (auto& [id, users] : by_id) {
    micro.names.push_back(std::to_string(id));
    micro.members.push_back(std::move(users));
  }
  std::map<MacroKey, std::vector<std::string>> by_key;
  for (const auto& [user, key] : macro_key) by_key[key].push_back(user);
  for (auto& [key, users] : by_key) {
    macro.names.push_back(to_string(key));
    macro.members.push_back(std::move(users));
  }

  Comparison c;
  c.full = overlap(micro, macro);
  c.top = largest_columns(c.full, macro_top);
  c.edges = significant_edges(c.top, min_fraction);
  c.archetypes = archetype_table(micro_labels, macro_labels);

  // a micro cluster carries a single archetype; read it from any member
  std::map<std::string, Archetype> micro_arch;
  for (std::size_t i = 0; i < micro.names.size(); ++i) {
    micro_arch[micro.names[i]] = micro_labels.at(micro.members[i].front());
  }
  for (const auto& e : c.edges) {
    const auto mi = micro_arch.at(c.top.rows[e.row]);
    const auto ma = macro_archetype(macro_key_from_string(c.top.cols[e.col]));
    if (mi != ma) {
      c.anomalies.push_back("micro " + c.top.rows[e.row] + " (" + std::string(to_string(mi)) +
                            ") ~ macro " + c.top.cols[e.col] + " (" + std::string(to_string(ma)) +
                            "), shared " + std::to_string(e.count));
    }
  }
  return c;
}

namespace {

std::ofstream open_output(const fs::path& path, const RunConfig& config) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw error(errc::io_error, "cannot open " + path.string() + " for writing");
  for (const auto& line : config.describe()) out << "# " << line << '\n';
  return out;
}

void finish(std::ofstream& out, const fs::path& path) {
  out.flush();
  if (!out) throw error(errc::io_error, "write to " + path.string() + " failed");
}

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

Table read_table(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw error(errc::missing_analysis, "missing analysis output " + path.string());
  Table t;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    auto fields = split_csv(line);
    if (t.header.empty()) {
      t.header = std::move(fields);
      continue;
    }
    if (fields.size() != t.header.size()) {
      throw error(errc::parse_error, path.string() + ":" + std::to_string(lineno) +
                                         ": expected " + std::to_string(t.header.size()) +
                                         " fields");
    }
    t.rows.push_back(std::move(fields));
  }
  if (t.header.empty()) throw error(errc::parse_error, path.string() + ": missing header");
  return t;
}

std::string matrix_row(const KindMatrix& m, std::size_t i) {
  std::string s;
  for (std::size_t j = 0; j < kEventKinds; ++j) {
    if (j) s += ' ';
    s += format_number(m[i][j]);
  }
  return s;
}

}  // namespace

void write_analysis(const Analysis& a, const RunConfig& config, const fs::path& dir) {
  fs::create_directories(dir);

  {
    const auto path = dir / "filter.txt";
    auto out = open_output(path, config);
    out << "kept=" << a.filter.kept.size() << '\n'
        << "dropped=" << a.filter.dropped.size() << '\n'
        << "posts_max_step=" << format_number(a.filter.posts.max_step) << '\n'
        << "posts_max_range=" << format_number(a.filter.posts.max_range) << '\n'
        << "friends_max_step=" << format_number(a.filter.friends.max_step) << '\n'
        << "friends_max_range=" << format_number(a.filter.friends.max_range) << '\n';
    for (const auto& u : a.filter.dropped) out << "dropped_user=" << u << '\n';
    finish(out, path);
  }
  {
    const auto path = dir / "correlations.csv";
    auto out = open_output(path, config);
    out << "user_id,rho\n";
    for (const auto& [u, rho] : a.correlations) {
      out << u << ',' << (rho ? format_number(*rho) : "undefined") << '\n';
    }
    finish(out, path);
  }
  {
    const auto path = dir / "trajectories.csv";
    auto out = open_output(path, config);
    out << "user_id,day,posts,friends\n";
    for (const auto& t : a.trajectories) {
      for (const auto& s : t.snapshots) {
        out << t.user_id << ',' << format_number(s.t) << ',' << s.posts << ',' << s.friends << '\n';
      }
    }
    finish(out, path);
  }
  {
    const auto path = dir / "micro_clusters.csv";
    auto out = open_output(path, config);
    out << "user_id,cluster,archetype\n";
    for (const auto& [u, id] : a.micro.cluster_of) {
      out << u << ',' << id << ',' << to_string(a.micro.labels.at(u)) << '\n';
    }
    finish(out, path);
  }
  {
    const auto path = dir / "markov_models.txt";
    auto out = open_output(path, config);
    out << "states=P+ F+ F- PF\n";
    out << "publishing_rate_per_day="
        << (a.micro.publishing_rate ? format_number(*a.micro.publishing_rate) : "undefined") << '\n';
    out << "social_rate_per_day="
        << (a.micro.social_rate ? format_number(*a.micro.social_rate) : "undefined") << '\n';
    for (std::size_t c = 0; c < a.micro.clusters.size(); ++c) {
      const auto& cl = a.micro.clusters[c];
      const auto& m = a.micro.models[c];
      const auto& call = a.micro.calls[c];
      out << "\n[cluster " << cl.id << "]\n"
          << "size=" << cl.members.size() << '\n'
          << "archetype=" << to_string(call.archetype) << '\n'
          << "observed_days=" << format_number(m.observed_days) << '\n'
          << "dominant=";
      if (call.dominant.empty()) out << "none";
      for (std::size_t d = 0; d < call.dominant.size(); ++d) {
        const auto& tr = call.dominant[d];
        const auto dur = m.duration[index_of(tr.from)][index_of(tr.to)];
        out << (d ? " " : "") << to_string(tr.from) << to_string(tr.to) << '/'
            << (dur ? format_number(std::round(*dur * 10.0) / 10.0) : "-");
      }
      out << '\n';
      for (std::size_t i = 0; i < kEventKinds; ++i) {
        out << "freq[" << to_string(kAllEventKinds[i]) << "]=" << matrix_row(m.freq, i) << '\n';
      }
      for (std::size_t i = 0; i < kEventKinds; ++i) {
        out << "duration[" << to_string(kAllEventKinds[i]) << "]=";
        for (std::size_t j = 0; j < kEventKinds; ++j) {
          out << (j ? " " : "") << (m.duration[i][j] ? format_number(*m.duration[i][j]) : "-");
        }
        out << '\n';
      }
      for (std::size_t i = 0; i < kEventKinds; ++i) {
        out << "mean_signature[" << to_string(kAllEventKinds[i])
            << "]=" << matrix_row(cl.mean_signature, i) << '\n';
      }
    }
    finish(out, path);
  }
  {
    const auto path = dir / "macro_grid.csv";
    auto out = open_output(path, config);
    out << "posts_class,friends_class,count,share\n";
    std::map<MacroKey, std::size_t> counts;
    for (const auto& [u, cls] : a.macro.classes) ++counts[cls.key];
    const double n = static_cast<double>(a.macro.classes.size());
    for (auto p : kAllDynamics) {
      for (auto f : kAllDynamics) {
        const auto c = counts[{p, f}];
        out << to_string(p) << ',' << to_string(f) << ',' << c << ','
            << format_number(n > 0 ? static_cast<double>(c) / n : 0.0) << '\n';
      }
    }
    finish(out, path);
  }
  {
    const auto path = dir / "mean_trajectories.csv";
    auto out = open_output(path, config);
    out << "macro_key,size,fit_quality,day,mean_posts,mean_friends\n";
    for (const auto& c : a.macro.clusters) {
      for (std::size_t i = 0; i < c.grid.size(); ++i) {
        out << to_string(c.key) << ',' << c.members.size() << ','
            << format_number(c.mean_fit_quality) << ',' << format_number(c.grid[i]) << ','
            << format_number(c.mean_posts[i]) << ',' << format_number(c.mean_friends[i]) << '\n';
      }
    }
    finish(out, path);
  }
  {
    const auto path = dir / "sqrt_law.txt";
    auto out = open_output(path, config);
    if (a.macro.sqrt_law) {
      out << "c=" << format_number(a.macro.sqrt_law->c) << '\n'
          << "r2=" << format_number(a.macro.sqrt_law->r2) << '\n'
          << "points=" << a.macro.sqrt_law->points << '\n';
    } else {
      out << "c=undefined\nr2=undefined\npoints=0\n";
    }
    out << "anticorrelated_share=" << format_number(a.macro.anticorrelated) << '\n';
    finish(out, path);
  }
  {
    const auto path = dir / "archetypes_micro.csv";
    auto out = open_output(path, config);
    out << "user_id,archetype\n";
    for (const auto& [u, arch] : a.micro.labels) out << u << ',' << to_string(arch) << '\n';
    finish(out, path);
  }
  {
    const auto path = dir / "archetypes_macro.csv";
    auto out = open_output(path, config);
    out << "user_id,macro_key,archetype\n";
    for (const auto& [u, cls] : a.macro.classes) {
      out << u << ',' << to_string(cls.key) << ',' << to_string(a.macro.labels.at(u)) << '\n';
    }
    finish(out, path);
  }
}

Comparison compare_from_dir(const fs::path& dir, const RunConfig& config) {
  const auto clusters = read_table(dir / "micro_clusters.csv");
  const auto micro = read_table(dir / "archetypes_micro.csv");
  const auto macro = read_table(dir / "archetypes_macro.csv");

  std::map<std::string, int> micro_cluster;
  for (const auto& r : clusters.rows) micro_cluster[r.at(0)] = std::stoi(r.at(1));
  std::map<std::string, Archetype> micro_labels, macro_labels;
  for (const auto& r : micro.rows) micro_labels[r.at(0)] = archetype_from_string(r.at(1));
  std::map<std::string, MacroKey> macro_key;
  for (const auto& r : macro.rows) {
    macro_key[r.at(0)] = macro_key_from_string(r.at(1));
    macro_labels[r.at(0)] = archetype_from_string(r.at(2));
  }
  return compare(micro_cluster, micro_labels, macro_key, macro_labels, config.min_fraction,
                 config.macro_top);
}

void write_comparison(const Comparison& c, const RunConfig& config, const fs::path& dir) {
  fs::create_directories(dir);
  {
    const auto path = dir / "overlap_edges.csv";
    auto out = open_output(path, config);
    out << "micro_id,macro_key,count,significant,pattern\n";
    std::map<std::pair<std::size_t, std::size_t>, const OverlapEdge*> sig;
    for (const auto& e : c.edges) sig[{e.row, e.col}] = &e;
    for (std::size_t i = 0; i < c.top.rows.size(); ++i) {
      for (std::size_t j = 0; j < c.top.cols.size(); ++j) {
        const auto n = c.top.counts[i][j];
        if (n == 0) continue;
        auto it = sig.find({i, j});
        out << c.top.rows[i] << ',' << c.top.cols[j] << ',' << n << ','
            << (it != sig.end() ? "true" : "false") << ','
            << (it != sig.end() ? std::string(to_string(it->second->pattern)) : "") << '\n';
      }
    }
    finish(out, path);
  }
  {
    const auto path = dir / "archetype_diff.csv";
    auto out = open_output(path, config);
    out << "Archetype,Micro,Macro,Difference\n";
    for (auto a : kAllArchetypes) {
      const auto& s = c.archetypes.at(a);
      out << to_string(a) << ',' << format_number(s.micro) << ',' << format_number(s.macro) << ','
          << format_number(s.difference) << '\n';
    }
    finish(out, path);
  }
  {
    const auto path = dir / "comparison.txt";
    auto out = open_output(path, config);
    out << "common_users=" << c.full.total() << '\n'
        << "micro_clusters=" << c.full.rows.size() << '\n'
        << "macro_clusters=" << c.full.cols.size() << '\n'
        << "macro_clusters_compared=" << c.top.cols.size() << '\n'
        << "significant_edges=" << c.edges.size() << '\n';
    std::map<EdgePattern, std::size_t> patterns;
    for (const auto& e : c.edges) ++patterns[e.pattern];
    for (auto p : {EdgePattern::one_to_one, EdgePattern::one_to_many, EdgePattern::many_to_one,
                   EdgePattern::many_to_many}) {
      out << "edges_" << to_string(p) << '=' << patterns[p] << '\n';
    }
    for (const auto& a : c.anomalies) out << "anomaly=" << a << '\n';
    finish(out, path);
  }
}

namespace {

std::string svg_header(int w, int h) {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(w) +
         "\" height=\"" + std::to_string(h) + "\" viewBox=\"0 0 " + std::to_string(w) + " " +
         std::to_string(h) + "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

void write_correlation_svg(const Table& corr, const fs::path& path) {
  constexpr int kBins = 20, kW = 600, kH = 300, kPad = 40;
  std::array<int, kBins> bins{};
  for (const auto& r : corr.rows) {
    if (r.at(1) == "undefined") continue;
    const double rho = std::stod(r.at(1));
    const int b = std::clamp(static_cast<int>((rho + 1.0) / 2.0 * kBins), 0, kBins - 1);
    ++bins[b];
  }
  const int top = std::max(1, *std::max_element(bins.begin(), bins.end()));
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << svg_header(kW, kH);
  const double bw = static_cast<double>(kW - 2 * kPad) / kBins;
  for (int b = 0; b < kBins; ++b) {
    const double h = static_cast<double>(kH - 2 * kPad) * bins[b] / top;
    out << "<rect x=\"" << format_number(kPad + b * bw) << "\" y=\""
        << format_number(kH - kPad - h) << "\" width=\"" << format_number(bw - 1) << "\" height=\""
        << format_number(h) << "\" fill=\"steelblue\"/>\n";
  }
  out << "<text x=\"" << kPad << "\" y=\"" << kH - 10 << "\" font-size=\"12\">-1</text>\n"
      << "<text x=\"" << kW - kPad - 8 << "\" y=\"" << kH - 10 << "\" font-size=\"12\">1</text>\n"
      << "<text x=\"" << kW / 2 - 40 << "\" y=\"20\" font-size=\"14\">rho(P, F)</text>\n</svg>\n";
}

void write_means_svg(const Table& means, const fs::path& path) {
  constexpr int kW = 600, kH = 400, kPad = 40;
  std::map<std::string, std::vector<std::pair<double, double>>> series;
  double max_p = 1.0, max_f = 1.0;
  for (const auto& r : means.rows) {
    const double p = std::stod(r.at(4)), f = std::stod(r.at(5));
    series[r.at(0)].emplace_back(p, f);
    max_p = std::max(max_p, p);
    max_f = std::max(max_f, f);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << svg_header(kW, kH);
  for (const auto& [key, pts] : series) {
    out << "<polyline fill=\"none\" stroke=\"black\" stroke-opacity=\"0.6\" points=\"";
    for (const auto& [p, f] : pts) {
      const double x = kPad + (kW - 2 * kPad) * std::max(0.0, p) / max_p;
      const double y = kH - kPad - (kH - 2 * kPad) * std::max(0.0, f) / max_f;
      out << format_number(std::round(x * 10) / 10) << ',' << format_number(std::round(y * 10) / 10)
          << ' ';
    }
    out << "\"><title>" << key << "</title></polyline>\n";
  }
  out << "<text x=\"" << kW / 2 << "\" y=\"" << kH - 10 << "\" font-size=\"12\">P</text>\n"
      << "<text x=\"8\" y=\"" << kH / 2 << "\" font-size=\"12\">F</text>\n</svg>\n";
}

std::map<std::string, std::string> read_keyvalues(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw error(errc::missing_analysis, "missing analysis output " + path.string());
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line.front() == '#' || line.front() == '[') continue;
    const auto eq = line.find('=');
    if (eq != std::string::npos) kv.emplace(line.substr(0, eq), line.substr(eq + 1));
  }
  return kv;
}

}  // namespace

void write_report(const fs::path& dir, const RunConfig& config) {
  const auto corr = read_table(dir / "correlations.csv");
  const auto grid = read_table(dir / "macro_grid.csv");
  const auto means = read_table(dir / "mean_trajectories.csv");
  const auto diff = read_table(dir / "archetype_diff.csv");
  const auto sqrt_law = read_keyvalues(dir / "sqrt_law.txt");
  const auto filter = read_keyvalues(dir / "filter.txt");
  const auto comparison = read_keyvalues(dir / "comparison.txt");
  const auto markov = read_keyvalues(dir / "markov_models.txt");

  write_correlation_svg(corr, dir / "correlations.svg");
  write_means_svg(means, dir / "mean_trajectories.svg");

  std::vector<double> rhos;
  for (const auto& r : corr.rows) {
    if (r.at(1) != "undefined") rhos.push_back(std::stod(r.at(1)));
  }
  std::sort(rhos.begin(), rhos.end());

  const auto path = dir / "report.md";
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw error(errc::io_error, "cannot open " + path.string() + " for writing");
  out << "# Friendship/publishing co-evolution report\n\n";
  out << "## Run configuration\n\n";
  for (const auto& line : config.describe()) out << "    " << line << '\n';
  out << "\n## Population\n\n"
      << "- trajectories kept by the percentile filter: " << filter.at("kept") << '\n'
      << "- trajectories dropped: " << filter.at("dropped") << '\n'
      << "- defined P/F correlations: " << rhos.size() << " of " << corr.rows.size() << '\n';
  if (!rhos.empty()) {
    out << "- median correlation: " << format_number(rhos[rhos.size() / 2]) << '\n';
  }
  out << "- publishing delay rate (1/day): " << markov.at("publishing_rate_per_day") << '\n'
      << "- social delay rate (1/day): " << markov.at("social_rate_per_day") << '\n';

  out << "\n## Largest macro clusters\n\n| P | F | count | share |\n|---|---|---|---|\n";
  auto rows = grid.rows;
  std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    return std::stoul(a.at(2)) > std::stoul(b.at(2));
  });
  for (std::size_t i = 0; i < rows.size() && i < 12 && rows[i].at(2) != "0"; ++i) {
    out << "| " << symbol(dynamics_from_string(rows[i].at(0))) << " | "
        << symbol(dynamics_from_string(rows[i].at(1))) << " | " << rows[i].at(2) << " | "
        << rows[i].at(3) << " |\n";
  }
  out << "\n## Square-root law\n\n"
      << "- F ~ c sqrt(P): c = " << sqrt_law.at("c") << ", R^2 = " << sqrt_law.at("r2") << '\n'
      << "- anticorrelated share: " << sqrt_law.at("anticorrelated_share") << '\n';
  out << "\n## Archetypes\n\n| Archetype | Micro | Macro | Difference |\n|---|---|---|---|\n";
  for (const auto& r : diff.rows) {
    out << "| " << r.at(0) << " | " << r.at(1) << " | " << r.at(2) << " | " << r.at(3) << " |\n";
  }
  out << "\n## Micro/macro correspondence\n\n"
      << "- significant edges: " << comparison.at("significant_edges") << '\n'
      << "- one-to-one: " << comparison.at("edges_one-to-one") << '\n'
      << "- one-to-many: " << comparison.at("edges_one-to-many") << '\n'
      << "- many-to-one: " << comparison.at("edges_many-to-one") << '\n'
      << "- many-to-many: " << comparison.at("edges_many-to-many") << '\n';
  {
    std::ifstream in(dir / "comparison.txt", std::ios::binary);
    std::string line;
    bool any = false;
    while (std::getline(in, line)) {
      if (line.rfind("anomaly=", 0) != 0) continue;
      if (!any) out << "\nCross-archetype links:\n\n";
      any = true;
      out << "- " << line.substr(8) << '\n';
    }
  }
  out << "\nPlots: correlations.svg, mean_trajectories.svg\n";
  out.flush();
  if (!out) throw error(errc::io_error, "write to " + path.string() + " failed");
}

}  // namespace coevo
