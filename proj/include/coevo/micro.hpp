#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "coevo/model.hpp"

namespace coevo {

/// The four-symbol event alphabet. Post deletions fold into post_add with a
/// negative magnitude.
enum class EventKind : std::uint8_t { post_add = 0, friend_add = 1, friend_remove = 2, compound = 3 };

inline constexpr std::size_t kEventKinds = 4;
inline constexpr std::array<EventKind, kEventKinds> kAllEventKinds = {
    EventKind::post_add, EventKind::friend_add, EventKind::friend_remove, EventKind::compound};

std::string_view to_string(EventKind kind);  // "P+", "F+", "F-", "PF"
EventKind event_kind_from_string(std::string_view s);

inline constexpr std::size_t index_of(EventKind k) { return static_cast<std::size_t>(k); }

struct Event {
  double t = 0.0;
  EventKind kind = EventKind::post_add;
  std::int64_t magnitude = 0;  // diagnostics only

  friend bool operator==(const Event&, const Event&) = default;
};

struct EventSequence {
  std::string user_id;
  std::vector<Event> events;
  double observed_days = 0.0;  // t_last - t_first of the source trajectory
};

enum class EventFamily { publishing, social };

bool in_family(EventKind kind, EventFamily family);

/// 4x4 matrix indexed [preceding][following].
using KindMatrix = std::array<std::array<double, kEventKinds>, kEventKinds>;

/// Conditional next-event probabilities; a point in the 16-dimensional
/// signature space. Each row sums to 1 or is all zero.
struct Signature {
  KindMatrix psi{};

  double operator()(EventKind from, EventKind to) const {
    return psi[index_of(from)][index_of(to)];
  }
  std::array<double, kEventKinds * kEventKinds> flat() const;
};

enum class Archetype : std::uint8_t { reader = 0, blogger = 1, socializer = 2, blogger_socializer = 3 };

inline constexpr std::array<Archetype, 4> kAllArchetypes = {
    Archetype::reader, Archetype::blogger_socializer, Archetype::socializer, Archetype::blogger};

std::string_view to_string(Archetype a);
Archetype archetype_from_string(std::string_view s);

struct MicroCluster {
  int id = 0;
  std::vector<std::string> members;
  KindMatrix mean_signature{};
  std::string medoid;
};

struct Transition {
  EventKind from;
  EventKind to;

  friend bool operator==(const Transition&, const Transition&) = default;
};

struct MarkovModel {
  KindMatrix freq{};                                   // transitions per observed day
  std::array<std::array<std::optional<double>, kEventKinds>, kEventKinds> duration{};  // days
  KindMatrix count{};
  double observed_days = 0.0;
};

struct ArchetypeCall {
  Archetype archetype = Archetype::reader;
  std::vector<Transition> dominant;
};

EventSequence extract_events(const Trajectory& traj);

/// Maximum-likelihood exponential rate of same-family inter-event delays,
/// pooled over all sequences. Throws insufficient_events when no delay
/// can be formed.
double delay_rate(std::span<const EventSequence> seqs, EventFamily family);

Signature signature(const EventSequence& seq);
Signature signature(std::span<const EventKind> kinds);

double signature_distance(const Signature& a, const Signature& b);
double signature_distance(const KindMatrix& a, const KindMatrix& b);

/// Pools member sequences into one chain. Throws empty_cluster when the
/// cluster has no members.
MarkovModel markov_model(const MicroCluster& cluster,
                         const std::map<std::string, EventSequence>& seqs);

ArchetypeCall micro_archetype(const MarkovModel& model, double freq_threshold = 0.1);

/// Shares per archetype over a non-empty labeling; every archetype is present
/// in the result (possibly with share 0).
std::map<Archetype, double> archetype_distribution(const std::map<std::string, Archetype>& labels);

}  // namespace coevo
