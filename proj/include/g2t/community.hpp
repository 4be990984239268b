#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "g2t/graph.hpp"

namespace g2t {

/// Disjoint communities of node indices. Communities are stored sorted and
/// ordered by their smallest member, so equal partitions compare equal.
struct Partition {
  std::vector<std::vector<std::size_t>> communities;
  std::vector<std::size_t> assignment;  // node index -> community index

  static Partition from_labels(const std::vector<std::size_t>& labels);

  std::size_t size() const noexcept { return communities.size(); }
  friend bool operator==(const Partition& a, const Partition& b) {
    return a.communities == b.communities;
  }
};

/// Possibly overlapping communities; every node belongs to at least one.
struct Cover {
  std::vector<std::vector<std::size_t>> communities;
  std::vector<std::vector<std::size_t>> memberships;  // node -> community indices

  static Cover from_partition(const Partition& p);
  /// Canonicalises `communities` (sorted members, duplicates removed, ordered
  /// by smallest member) and derives memberships for `node_count` nodes.
  static Cover from_communities(std::vector<std::vector<std::size_t>> communities,
                                std::size_t node_count);

  std::size_t size() const noexcept { return communities.size(); }
  bool is_partition() const;
  friend bool operator==(const Cover& a, const Cover& b) {
    return a.communities == b.communities;
  }
};

enum class Algorithm { kGreedyModularity, kLouvain, kLpa, kSlpa };

Algorithm parse_algorithm(std::string_view name);
std::string_view algorithm_name(Algorithm algorithm);
bool is_overlapping(Algorithm algorithm);

struct DetectorConfig {
  Algorithm algorithm = Algorithm::kGreedyModularity;
  std::uint64_t seed = 0;
  int slpa_iterations = 20;
  double slpa_threshold = 0.3;

  void validate() const;
};

/// Newman modularity over unit edge weights:
/// Q = sum_k (L_k / m - (d_k / 2m)^2).
double modularity(const SemanticGraph& g, const Partition& p);

/// Clauset-Newman-Moore agglomeration. Always merges the pair with the largest
/// gain (ties to the smallest community pair) and stops when no merge helps.
Partition detect_greedy_modularity(const SemanticGraph& g);

Partition detect_louvain(const SemanticGraph& g, std::uint64_t seed);

/// Asynchronous label propagation, at most 100 sweeps.
Partition detect_lpa(const SemanticGraph& g, std::uint64_t seed);

Cover detect_slpa(const SemanticGraph& g, const DetectorConfig& config);

Cover detect(const SemanticGraph& g, const DetectorConfig& config);

}  // namespace g2t
