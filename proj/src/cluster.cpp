#include "coevo/cluster.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <random>

namespace coevo {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double unit_draw(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

struct Nearest {
  std::vector<std::size_t> slot;
  std::vector<double> d1, d2;
};

Nearest nearest_medoids(const DistanceMatrix& d, const std::vector<std::size_t>& medoids) {
  const std::size_t n = d.size();
  Nearest out{std::vector<std::size_t>(n), std::vector<double>(n, kInf),
              std::vector<double>(n, kInf)};
  for (std::size_t o = 0; o < n; ++o) {
    for (std::size_t m = 0; m < medoids.size(); ++m) {
      const double dist = d(o, medoids[m]);
      if (dist < out.d1[o]) {
        out.d2[o] = out.d1[o];
        out.d1[o] = dist;
        out.slot[o] = m;
      } else if (dist < out.d2[o]) {
        out.d2[o] = dist;
      }
    }
  }
  return out;
}

std::vector<std::size_t> seed_medoids(const DistanceMatrix& d, std::size_t k, std::mt19937_64& rng) {
  const std::size_t n = d.size();
  std::vector<std::size_t> medoids;
  std::vector<bool> chosen(n, false);
  std::vector<double> nearest(n, kInf);

  auto take = [&](std::size_t idx) {
    medoids.push_back(idx);
    chosen[idx] = true;
    for (std::size_t o = 0; o < n; ++o) nearest[o] = std::min(nearest[o], d(o, idx));
  };

  take(static_cast<std::size_t>(unit_draw(rng) * static_cast<double>(n)) % n);
  while (medoids.size() < k) {
    double total = 0.0;
    for (std::size_t o = 0; o < n; ++o) {
      if (!chosen[o]) total += nearest[o] * nearest[o];
    }
    if (total <= 0.0) {
      // every remaining point coincides with a medoid; pick uniformly among them
      std::vector<std::size_t> rest;
      for (std::size_t o = 0; o < n; ++o) {
        if (!chosen[o]) rest.push_back(o);
      }
      take(rest[static_cast<std::size_t>(unit_draw(rng) * static_cast<double>(rest.size())) %
                rest.size()]);
      continue;
    }
    double target = unit_draw(rng) * total;
    std::size_t pick = n;
    for (std::size_t o = 0; o < n; ++o) {
      if (chosen[o]) continue;
      pick = o;
      target -= nearest[o] * nearest[o];
      if (target < 0.0) break;
    }
    take(pick);
  }
  return medoids;
}

}  // namespace

MedoidResult k_medoids(const DistanceMatrix& d, std::size_t k, std::uint64_t seed) {
  const std::size_t n = d.size();
  if (k == 0 || k > n) {
    throw error(errc::too_few_points,
                "cannot form " + std::to_string(k) + " clusters from " + std::to_string(n) + " points");
  }
  std::mt19937_64 rng(seed);
  MedoidResult result;
  result.medoids = seed_medoids(d, k, rng);

  std::vector<bool> is_medoid(n, false);
  for (auto m : result.medoids) is_medoid[m] = true;

  // Swap phase. For a candidate h, the change in total cost when h replaces
  // the medoid in slot m splits into a part shared by all m and a per-slot
  // correction, so every slot is evaluated in one pass over the points.
  constexpr double kMinGain = 1e-12;
  std::vector<double> per_slot(k);
  while (true) {
    const auto near = nearest_medoids(d, result.medoids);
    double best = -kMinGain;
    std::size_t best_slot = k, best_h = n;
    for (std::size_t h = 0; h < n; ++h) {
      if (is_medoid[h]) continue;
      double shared = 0.0;
      std::fill(per_slot.begin(), per_slot.end(), 0.0);
      for (std::size_t o = 0; o < n; ++o) {
        const double dh = d(o, h);
        if (dh < near.d1[o]) {
          shared += dh - near.d1[o];
        } else {
          per_slot[near.slot[o]] += std::min(dh, near.d2[o]) - near.d1[o];
        }
      }
      for (std::size_t m = 0; m < k; ++m) {
        const double delta = shared + per_slot[m];
        if (delta < best) {
          best = delta;
          best_slot = m;
          best_h = h;
        }
      }
    }
    if (best_slot == k) break;
    is_medoid[result.medoids[best_slot]] = false;
    is_medoid[best_h] = true;
    result.medoids[best_slot] = best_h;
    ++result.swaps;
  }

  const auto near = nearest_medoids(d, result.medoids);
  result.assignment = near.slot;
  // a medoid always belongs to its own slot, even when it coincides with another medoid
  for (std::size_t m = 0; m < k; ++m) result.assignment[result.medoids[m]] = m;
  for (std::size_t o = 0; o < n; ++o) result.total_cost += d(o, result.medoids[result.assignment[o]]);
  return result;
}

std::vector<MicroCluster> cluster_micro(const std::map<std::string, Signature>& signatures,
                                        std::size_t k, std::uint64_t seed) {
  const std::size_t n = signatures.size();
  if (k == 0 || k > n) {
    throw error(errc::too_few_points,
                "cannot form " + std::to_string(k) + " micro clusters from " + std::to_string(n) +
                    " signatures");
  }
  std::vector<const std::string*> ids;
  std::vector<const Signature*> sigs;
  ids.reserve(n);
  sigs.reserve(n);
  for (const auto& [user, sig] : signatures) {
    ids.push_back(&user);
    sigs.push_back(&sig);
  }
  DistanceMatrix d(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) d.set(i, j, signature_distance(*sigs[i], *sigs[j]));
  }
  const auto pam = k_medoids(d, k, seed);

  std::vector<MicroCluster> clusters(k);
  for (std::size_t m = 0; m < k; ++m) clusters[m].medoid = *ids[pam.medoids[m]];
  for (std::size_t o = 0; o < n; ++o) {
    auto& c = clusters[pam.assignment[o]];
    c.members.push_back(*ids[o]);
    for (std::size_t i = 0; i < kEventKinds; ++i) {
      for (std::size_t j = 0; j < kEventKinds; ++j) c.mean_signature[i][j] += sigs[o]->psi[i][j];
    }
  }
  for (auto& c : clusters) {
    const double size = static_cast<double>(c.members.size());
    for (auto& row : c.mean_signature) {
      for (auto& v : row) v /= size;
    }
  }
  std::sort(clusters.begin(), clusters.end(), [](const MicroCluster& a, const MicroCluster& b) {
    if (a.members.size() != b.members.size()) return a.members.size() > b.members.size();
    return a.medoid < b.medoid;
  });
  for (std::size_t i = 0; i < k; ++i) clusters[i].id = static_cast<int>(i + 1);
  return clusters;
}

}  // namespace coevo
