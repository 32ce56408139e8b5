#include "coevo/micro.hpp"

#include <cmath>

namespace coevo {

std::string_view to_string(EventKind kind) {
  switch (kind) {
    case EventKind::post_add: return "P+";
    case EventKind::friend_add: return "F+";
    case EventKind::friend_remove: return "F-";
    case EventKind::compound: return "PF";
  }
  return "?";
}

EventKind event_kind_from_string(std::string_view s) {
  for (auto k : kAllEventKinds) {
    if (to_string(k) == s) return k;
  }
  throw error(errc::parse_error, "unknown event kind '" + std::string(s) + "'");
}

std::string_view to_string(Archetype a) {
  switch (a) {
    case Archetype::reader: return "Reader";
    case Archetype::blogger: return "Blogger";
    case Archetype::socializer: return "Socializer";
    case Archetype::blogger_socializer: return "BloggerSocializer";
  }
  return "?";
}

Archetype archetype_from_string(std::string_view s) {
  for (auto a : kAllArchetypes) {
    if (to_string(a) == s) return a;
  }
  throw error(errc::parse_error, "unknown archetype '" + std::string(s) + "'");
}

bool in_family(EventKind kind, EventFamily family) {
  if (kind == EventKind::compound) return true;
  if (family == EventFamily::publishing) return kind == EventKind::post_add;
  return kind == EventKind::friend_add || kind == EventKind::friend_remove;
}

std::array<double, kEventKinds * kEventKinds> Signature::flat() const {
  std::array<double, kEventKinds * kEventKinds> out{};
  for (std::size_t i = 0; i < kEventKinds; ++i) {
    for (std::size_t j = 0; j < kEventKinds; ++j) out[i * kEventKinds + j] = psi[i][j];
  }
  return out;
}

EventSequence extract_events(const Trajectory& traj) {
  EventSequence seq;
  seq.user_id = traj.user_id;
  const auto& s = traj.snapshots;
  if (s.size() >= 2) seq.observed_days = s.back().t - s.front().t;
  for (std::size_t i = 0; i + 1 < s.size(); ++i) {
    const auto dp = s[i + 1].posts - s[i].posts;
    const auto df = s[i + 1].friends - s[i].friends;
    if (dp == 0 && df == 0) continue;
    Event e{s[i].t, EventKind::post_add, dp};
    if (dp != 0 && df != 0) {
      e.kind = EventKind::compound;
      e.magnitude = std::abs(dp) + std::abs(df);
    } else if (dp == 0) {
      e.kind = df > 0 ? EventKind::friend_add : EventKind::friend_remove;
      e.magnitude = df;
    }
    seq.events.push_back(e);
  }
  return seq;
}

double delay_rate(std::span<const EventSequence> seqs, EventFamily family) {
  std::size_t delays = 0;
  double total = 0.0;
  for (const auto& seq : seqs) {
    std::optional<double> prev;
    for (const auto& e : seq.events) {
      if (!in_family(e.kind, family)) continue;
      if (prev) {
        total += e.t - *prev;
        ++delays;
      }
      prev = e.t;
    }
  }
  if (delays == 0 || total <= 0.0) {
    throw error(errc::insufficient_events, "need at least two events of the family in a sequence");
  }
  return static_cast<double>(delays) / total;
}

Signature signature(std::span<const EventKind> kinds) {
  Signature sig;
  std::array<double, kEventKinds> outgoing{};
  for (std::size_t i = 0; i + 1 < kinds.size(); ++i) {
    sig.psi[index_of(kinds[i])][index_of(kinds[i + 1])] += 1.0;
    outgoing[index_of(kinds[i])] += 1.0;
  }
  for (std::size_t i = 0; i < kEventKinds; ++i) {
    if (outgoing[i] == 0.0) continue;
    for (auto& v : sig.psi[i]) v /= outgoing[i];
  }
  return sig;
}

Signature signature(const EventSequence& seq) {
  std::vector<EventKind> kinds;
  kinds.reserve(seq.events.size());
  for (const auto& e : seq.events) kinds.push_back(e.kind);
  return signature(kinds);
}

double signature_distance(const KindMatrix& a, const KindMatrix& b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < kEventKinds; ++i) {
    for (std::size_t j = 0; j < kEventKinds; ++j) {
      const double d = a[i][j] - b[i][j];
      sum += d * d;
    }
  }
  return std::sqrt(sum);
}

double signature_distance(const Signature& a, const Signature& b) {
  return signature_distance(a.psi, b.psi);
}

MarkovModel markov_model(const MicroCluster& cluster,
                         const std::map<std::string, EventSequence>& seqs) {
  if (cluster.members.empty()) {
    throw error(errc::empty_cluster, "cluster " + std::to_string(cluster.id) + " has no members");
  }
  MarkovModel model;
  KindMatrix gap_sum{};
  for (const auto& user : cluster.members) {
    auto it = seqs.find(user);
    if (it == seqs.end()) {
      throw error(errc::invalid_argument, "no event sequence for cluster member " + user);
    }
    const auto& events = it->second.events;
    model.observed_days += it->second.observed_days;
    for (std::size_t i = 0; i + 1 < events.size(); ++i) {
      const auto from = index_of(events[i].kind), to = index_of(events[i + 1].kind);
      model.count[from][to] += 1.0;
      gap_sum[from][to] += events[i + 1].t - events[i].t;
    }
  }
  for (std::size_t i = 0; i < kEventKinds; ++i) {
    for (std::size_t j = 0; j < kEventKinds; ++j) {
      if (model.count[i][j] == 0.0) continue;
      model.duration[i][j] = gap_sum[i][j] / model.count[i][j];
      if (model.observed_days > 0.0) model.freq[i][j] = model.count[i][j] / model.observed_days;
    }
  }
  return model;
}

ArchetypeCall micro_archetype(const MarkovModel& model, double freq_threshold) {
  ArchetypeCall call;
  bool publishing = false, social = false;
  for (auto from : kAllEventKinds) {
    for (auto to : kAllEventKinds) {
      const double f = model.freq[index_of(from)][index_of(to)];
      if (f <= 0.0 || f < freq_threshold) continue;
      call.dominant.push_back({from, to});
      for (auto k : {from, to}) {
        if (k == EventKind::compound) {
          publishing = social = true;
        } else if (k == EventKind::post_add) {
          publishing = true;
        } else {
          social = true;
        }
      }
    }
  }
  if (publishing && social) {
    call.archetype = Archetype::blogger_socializer;
  } else if (publishing) {
    call.archetype = Archetype::blogger;
  } else if (social) {
    call.archetype = Archetype::socializer;
  }
  return call;
}

std::map<Archetype, double> archetype_distribution(const std::map<std::string, Archetype>& labels) {
  if (labels.empty()) throw error(errc::empty_input, "archetype distribution of an empty labeling");
  std::map<Archetype, double> shares;
  for (auto a : kAllArchetypes) shares[a] = 0.0;
  for (const auto& [user, a] : labels) shares[a] += 1.0;
  for (auto& [a, v] : shares) v /= static_cast<double>(labels.size());
  return shares;
}

}  // namespace coevo
