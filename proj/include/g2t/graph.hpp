#pragma once

#include <cstddef>
#include <filesystem>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "g2t/embedding.hpp"

namespace g2t {

struct Edge {
  std::size_t u;  // u < v, indices into SemanticGraph::node_ids
  std::size_t v;
  double weight;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Undirected graph over documents. When `weighted` is false the edge weights
/// are carried for inspection only and every algorithm treats edges as unit.
struct SemanticGraph {
  std::vector<std::string> node_ids;
  std::vector<Edge> edges;
  bool weighted = true;

  std::size_t node_count() const noexcept { return node_ids.size(); }
  std::size_t edge_count() const noexcept { return edges.size(); }
};

/// Neighbour lists in ascending order, one per node.
using Adjacency = std::vector<std::vector<std::size_t>>;

Adjacency adjacency(const SemanticGraph& g);

/// Complete graph over the matrix rows weighted by cosine similarity. Edge
/// (u, v) sits at the row-major position of the strict upper triangle.
SemanticGraph build_semantic_graph(const EmbeddingMatrix& m);

enum class PruneMode {
  kKeepFraction,  // keep the heaviest P% of edges
  kPercentile,    // keep edges whose weight is >= the P-th percentile
};

PruneMode parse_prune_mode(std::string_view name);

/// Number of edges kept by kKeepFraction: ceil(P/100 * edge_count), with
/// products that land within rounding noise of an integer taken as exact.
std::size_t keep_count(double top_p, std::size_t edge_count);

SemanticGraph prune_top_p(const SemanticGraph& g, double top_p,
                          PruneMode mode = PruneMode::kKeepFraction);

struct PruneResult {
  SemanticGraph subgraph;  // largest connected component, unweighted
  std::vector<std::string> isolated;
  std::vector<std::vector<std::string>> dropped_components;
};

/// Splits an unweighted graph into its largest connected component (ties go
/// to the component holding the smallest node index), degree-0 nodes, and the
/// remaining multi-node components. A graph without edges yields an empty
/// subgraph.
PruneResult max_connected_subgraph(const SemanticGraph& g);

/// Connected components as sorted node-index lists, ordered by smallest member.
std::vector<std::vector<std::size_t>> connected_components(const SemanticGraph& g);

bool is_connected(const SemanticGraph& g);

/// Tab-separated `u_id v_id weight` edge list.
void write_edge_list(std::ostream& out, const SemanticGraph& g);

}  // namespace g2t
