#include <algorithm>
#include <map>

#include "g2t/community.hpp"
#include "g2t/error.hpp"

namespace g2t {

Partition Partition::from_labels(const std::vector<std::size_t>& labels) {
  Partition p;
  p.assignment.resize(labels.size());
  std::map<std::size_t, std::size_t> slot;
  // Node-order scan: communities come out ordered by smallest member.
  for (std::size_t node = 0; node < labels.size(); ++node) {
    const auto [it, inserted] = slot.try_emplace(labels[node], p.communities.size());
    if (inserted) p.communities.emplace_back();
    p.communities[it->second].push_back(node);
    p.assignment[node] = it->second;
  }
  return p;
}

Cover Cover::from_partition(const Partition& p) {
  Cover c;
  c.communities = p.communities;
  c.memberships.resize(p.assignment.size());
  for (std::size_t node = 0; node < p.assignment.size(); ++node) {
    c.memberships[node] = {p.assignment[node]};
  }
  return c;
}

Cover Cover::from_communities(std::vector<std::vector<std::size_t>> communities,
                              std::size_t node_count) {
  for (auto& members : communities) {
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
  }
  std::erase_if(communities, [](const auto& members) { return members.empty(); });
  std::sort(communities.begin(), communities.end());
  communities.erase(std::unique(communities.begin(), communities.end()), communities.end());

  Cover c;
  c.communities = std::move(communities);
  c.memberships.resize(node_count);
  for (std::size_t k = 0; k < c.communities.size(); ++k) {
    for (auto node : c.communities[k]) {
      if (node >= node_count) throw_input("community member outside the graph");
      c.memberships[node].push_back(k);
    }
  }
  for (const auto& m : c.memberships) {
    if (m.empty()) throw_input("cover leaves a node without a community");
  }
  return c;
}

bool Cover::is_partition() const {
  return std::all_of(memberships.begin(), memberships.end(),
                     [](const auto& m) { return m.size() == 1; });
}

Algorithm parse_algorithm(std::string_view name) {
  if (name == "greedy-modularity" || name == "greedy_modularity") {
    return Algorithm::kGreedyModularity;
  }
  if (name == "louvain") return Algorithm::kLouvain;
  if (name == "lpa") return Algorithm::kLpa;
  if (name == "slpa") return Algorithm::kSlpa;
  throw_config("unknown community detection algorithm '" + std::string(name) + "'");
}

std::string_view algorithm_name(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::kGreedyModularity: return "greedy-modularity";
    case Algorithm::kLouvain: return "louvain";
    case Algorithm::kLpa: return "lpa";
    case Algorithm::kSlpa: return "slpa";
  }
  return "unknown";
}

bool is_overlapping(Algorithm algorithm) { return algorithm == Algorithm::kSlpa; }

void DetectorConfig::validate() const {
  if (!(slpa_threshold > 0.0 && slpa_threshold <= 1.0)) {
    throw_config("SLPA threshold must be in (0, 1]");
  }
  if (slpa_iterations < 1) throw_config("SLPA iterations must be >= 1");
}

double modularity(const SemanticGraph& g, const Partition& p) {
  const auto n = g.node_count();
  if (p.assignment.size() != n) throw_input("partition does not cover the graph's nodes");
  std::size_t covered = 0;
  for (std::size_t k = 0; k < p.communities.size(); ++k) {
    for (auto node : p.communities[k]) {
      if (node >= n) throw_input("partition references a node absent from the graph");
      if (p.assignment[node] != k) throw_input("partition assignment is inconsistent");
      ++covered;
    }
  }
  if (covered != n) throw_input("partition does not cover the graph's nodes");
  if (g.edges.empty()) throw_input("modularity is undefined on a graph without edges");

  std::vector<double> internal(p.size(), 0.0), degree(p.size(), 0.0);
  for (const auto& e : g.edges) {
    const auto cu = p.assignment[e.u], cv = p.assignment[e.v];
    if (cu == cv) internal[cu] += 1.0;
    degree[cu] += 1.0;
    degree[cv] += 1.0;
  }
  const double m = static_cast<double>(g.edge_count());
  double q = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    const double a = degree[k] / (2.0 * m);
    q += internal[k] / m - a * a;
  }
  return q;
}

Cover detect(const SemanticGraph& g, const DetectorConfig& config) {
  config.validate();
  switch (config.algorithm) {
    case Algorithm::kGreedyModularity:
      return Cover::from_partition(detect_greedy_modularity(g));
    case Algorithm::kLouvain:
      return Cover::from_partition(detect_louvain(g, config.seed));
    case Algorithm::kLpa:
      return Cover::from_partition(detect_lpa(g, config.seed));
    case Algorithm::kSlpa:
      return detect_slpa(g, config);
  }
  throw_config("unsupported community detection algorithm");
}

}  // namespace g2t
