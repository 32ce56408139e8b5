#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "coevo/micro.hpp"

namespace coevo {

/// Dense symmetric distance matrix over n points, row-major.
class DistanceMatrix {
public:
  explicit DistanceMatrix(std::size_t n) : n_(n), d_(n * n, 0.0) {}

  std::size_t size() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return d_[i * n_ + j]; }
  void set(std::size_t i, std::size_t j, double v) {
    d_[i * n_ + j] = v;
    d_[j * n_ + i] = v;
  }

private:
  std::size_t n_;
  std::vector<double> d_;
};

struct MedoidResult {
  std::vector<std::size_t> medoids;     // point index per cluster slot
  std::vector<std::size_t> assignment;  // cluster slot per point
  double total_cost = 0.0;
  int swaps = 0;
};

/// Partitioning Around Medoids: seeded k-medoids++ initialization followed by
/// best-improvement swaps until no swap lowers the total distance.
/// Deterministic for a fixed seed. Throws too_few_points when k > n or k == 0.
MedoidResult k_medoids(const DistanceMatrix& d, std::size_t k, std::uint64_t seed);

/// Groups users by signature distance into k disjoint clusters. Clusters are
/// numbered from 1 in order of decreasing size (ties broken by medoid id).
std::vector<MicroCluster> cluster_micro(const std::map<std::string, Signature>& signatures,
                                        std::size_t k = 12, std::uint64_t seed = 0);

}  // namespace coevo
