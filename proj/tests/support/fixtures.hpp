#pragma once

// Test-only fixtures and oracles. Nothing here calls into the code paths it
// is used to check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "g2t/graph.hpp"

namespace g2t::testing {

inline SemanticGraph make_graph(std::size_t n,
                                const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
  SemanticGraph g;
  for (std::size_t i = 0; i < n; ++i) g.node_ids.push_back("n" + std::to_string(i));
  for (auto [u, v] : edges) g.edges.push_back({std::min(u, v), std::max(u, v), 1.0});
  std::sort(g.edges.begin(), g.edges.end(),
            [](const Edge& a, const Edge& b) { return a.u != b.u ? a.u < b.u : a.v < b.v; });
  g.weighted = false;
  return g;
}

inline std::vector<std::pair<std::size_t, std::size_t>> clique(std::size_t first,
                                                               std::size_t size) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = first; i < first + size; ++i) {
    for (std::size_t j = i + 1; j < first + size; ++j) out.emplace_back(i, j);
  }
  return out;
}

/// Two cliques of `size` nodes joined by one bridge between node size-1 and size.
inline SemanticGraph two_cliques_with_bridge(std::size_t size) {
  auto edges = clique(0, size);
  const auto second = clique(size, size);
  edges.insert(edges.end(), second.begin(), second.end());
  edges.emplace_back(size - 1, size);
  return make_graph(2 * size, edges);
}

/// Newman's modularity written as (1/2m) sum_ij [A_ij - k_i k_j / 2m] d(c_i, c_j).
inline double brute_modularity(std::size_t n,
                               const std::vector<std::pair<std::size_t, std::size_t>>& edges,
                               const std::vector<std::size_t>& labels) {
  std::vector<std::vector<int>> a(n, std::vector<int>(n, 0));
  std::vector<double> k(n, 0.0);
  for (auto [u, v] : edges) {
    a[u][v] = a[v][u] = 1;
    k[u] += 1;
    k[v] += 1;
  }
  const double two_m = 2.0 * static_cast<double>(edges.size());
  double q = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (labels[i] == labels[j]) q += a[i][j] - k[i] * k[j] / two_m;
    }
  }
  return q / two_m;
}

/// Calls `visit` with every set partition of n elements as restricted-growth
/// label strings.
inline void for_each_set_partition(std::size_t n,
                                   const std::function<void(const std::vector<std::size_t>&)>& visit) {
  std::vector<std::size_t> labels(n, 0);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t used) {
    if (i == n) {
      visit(labels);
      return;
    }
    for (std::size_t l = 0; l <= used && l < n; ++l) {
      labels[i] = l;
      rec(i + 1, std::max(used, l + 1));
    }
  };
  if (n == 0) return;
  labels[0] = 0;
  rec(1, 1);
}

struct BruteForceOptimum {
  double q = -1.0;
  std::vector<std::size_t> labels;
};

inline BruteForceOptimum brute_max_modularity(
    std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
  BruteForceOptimum best;
  for_each_set_partition(n, [&](const std::vector<std::size_t>& labels) {
    const double q = brute_modularity(n, edges, labels);
    if (q > best.q + 1e-12) {
      best.q = q;
      best.labels = labels;
    }
  });
  return best;
}

/// Agglomerative greedy modularity done the slow way: every step recounts the
/// links between every pair of communities from the raw edge list. Returns
/// per-node labels, each the smallest member of the node's community.
inline std::vector<std::size_t> naive_greedy_labels(
    std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
  std::vector<std::size_t> label(n);
  for (std::size_t i = 0; i < n; ++i) label[i] = i;
  const auto two_m = static_cast<std::int64_t>(2 * edges.size());
  for (;;) {
    std::set<std::size_t> names(label.begin(), label.end());
    std::int64_t best = 0;
    std::pair<std::size_t, std::size_t> pick{n, n};
    for (auto a : names) {
      for (auto b : names) {
        if (b <= a) continue;
        std::int64_t links = 0, da = 0, db = 0;
        for (const auto& [u, v] : edges) {
          links += (label[u] == a && label[v] == b) || (label[u] == b && label[v] == a);
          da += (label[u] == a) + (label[v] == a);
          db += (label[u] == b) + (label[v] == b);
        }
        const auto gain = two_m * links - da * db;
        if (gain > best) {
          best = gain;
          pick = {a, b};
        }
      }
    }
    if (best <= 0) return label;
    for (auto& l : label) {
      if (l == pick.second) l = pick.first;
    }
  }
}

inline std::vector<std::pair<std::size_t, std::size_t>> edge_pairs(const SemanticGraph& g) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (const auto& e : g.edges) out.emplace_back(e.u, e.v);
  return out;
}

inline bool connected(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
  std::vector<std::vector<std::size_t>> adj(n);
  for (auto [u, v] : edges) {
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  std::vector<bool> seen(n, false);
  std::vector<std::size_t> stack{0};
  seen[0] = true;
  std::size_t count = 1;
  while (!stack.empty()) {
    const auto x = stack.back();
    stack.pop_back();
    for (auto y : adj[x]) {
      if (!seen[y]) {
        seen[y] = true;
        ++count;
        stack.push_back(y);
      }
    }
  }
  return count == n;
}

/// Deterministic family of random connected graphs with 3..max_nodes nodes.
inline std::vector<SemanticGraph> random_connected_graphs(std::size_t count,
                                                          std::size_t max_nodes,
                                                          std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<SemanticGraph> out;
  while (out.size() < count) {
    const std::size_t n = 3 + rng() % (max_nodes - 2);
    const double density = 0.25 + static_cast<double>(rng() % 1000) / 1000.0 * 0.6;
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        if (static_cast<double>(rng() % 100000) / 100000.0 < density) edges.emplace_back(i, j);
      }
    }
    if (connected(n, edges)) out.push_back(make_graph(n, edges));
  }
  return out;
}

/// Labels of a node-index partition, for comparison against a clique split.
inline std::set<std::set<std::size_t>> as_sets(const std::vector<std::vector<std::size_t>>& parts) {
  std::set<std::set<std::size_t>> out;
  for (const auto& p : parts) out.emplace(p.begin(), p.end());
  return out;
}

/// Planted-topic corpus: `groups` blocks of `per_group` documents, group g
/// writing only words "g<g>w<i>". Embeddings are a factor of a designed Gram
/// matrix: intra-group cosine 0.95, inter-group 0.1, except a set of
/// cross-group triangles (one document per group) at 0.095. The triangles hold
/// exactly the pairs that top-P pruning at `top_p` removes, so the pruned
/// graph is fixed by construction.
struct PlantedFixture {
  std::filesystem::path corpus;
  std::filesystem::path embeddings;
  std::vector<std::vector<std::string>> vocab;     // per group
  std::vector<std::vector<std::string>> doc_ids;   // per group
  std::vector<std::size_t> group_of;               // per document, file order
};

inline std::string planted_word(std::size_t group, std::size_t i) {
  return "g" + std::to_string(group) + "w" + std::to_string(i);
}

inline constexpr double kPlantedIntra = 0.95;
inline constexpr double kPlantedInter = 0.1;
inline constexpr double kPlantedFar = 0.095;

/// Pairs (a < b) given the lowest similarity: triangles (a_t, b_t, c_t) with
/// a_t = A[t], b_t = B[t + r], c_t = C[t + 2r] (mod per_group, r = t /
/// per_group), skipping any that reuse a pair, then single A-B pairs to make
/// up an odd remainder.
inline std::set<std::pair<std::size_t, std::size_t>> planted_far_pairs(
    std::size_t per_group, std::size_t count) {
  std::set<std::pair<std::size_t, std::size_t>> far;
  auto key = [](std::size_t a, std::size_t b) { return std::pair{std::min(a, b), std::max(a, b)}; };
  for (std::size_t t = 0; far.size() + 3 <= count && t < 4 * per_group * per_group; ++t) {
    const std::size_t r = t / per_group;
    const std::size_t a = t % per_group;
    const std::size_t b = per_group + (t + r) % per_group;
    const std::size_t c = 2 * per_group + (t + 2 * r) % per_group;
    if (far.contains(key(a, b)) || far.contains(key(a, c)) || far.contains(key(b, c))) continue;
    far.insert(key(a, b));
    far.insert(key(a, c));
    far.insert(key(b, c));
  }
  for (std::size_t t = 0; far.size() < count; ++t) {
    far.insert(key(t % per_group, per_group + (t + per_group / 2) % per_group));
  }
  return far;
}

inline PlantedFixture write_planted_fixture(const std::filesystem::path& dir,
                                            double top_p = 95.0,
                                            std::size_t per_group = 30,
                                            std::size_t vocab_size = 20,
                                            std::uint64_t seed = 7) {
  constexpr std::size_t groups = 3;
  std::filesystem::create_directories(dir);
  PlantedFixture f;
  f.corpus = dir / "corpus.jsonl";
  f.embeddings = dir / "embeddings.jsonl";
  f.vocab.resize(groups);
  f.doc_ids.resize(groups);
  for (std::size_t g = 0; g < groups; ++g) {
    for (std::size_t i = 0; i < vocab_size; ++i) f.vocab[g].push_back(planted_word(g, i));
  }

  const std::size_t n = groups * per_group;
  const std::size_t edges = n * (n - 1) / 2;
  const auto kept = static_cast<std::size_t>(std::ceil(top_p / 100.0 * static_cast<double>(edges) - 1e-9));
  const auto far = planted_far_pairs(per_group, edges - kept);

  Eigen::MatrixXd gram(n, n);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (a == b) gram(a, b) = 1.0;
      else if (a / per_group == b / per_group) gram(a, b) = kPlantedIntra;
      else if (far.contains({std::min(a, b), std::max(a, b)})) gram(a, b) = kPlantedFar;
      else gram(a, b) = kPlantedInter;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
  if (eig.eigenvalues().minCoeff() <= 0.0) throw std::logic_error("planted Gram matrix not PD");
  const Eigen::MatrixXd x = eig.eigenvectors() * eig.eigenvalues().cwiseSqrt().asDiagonal();

  std::mt19937_64 rng(seed);
  std::ofstream corpus(f.corpus), emb(f.embeddings);
  emb.precision(17);
  for (std::size_t d = 0; d < n; ++d) {
    const std::size_t g = d / per_group;
    const std::string id = "doc" + std::to_string(d);
    f.doc_ids[g].push_back(id);
    f.group_of.push_back(g);

    const std::size_t length = 8 + rng() % 8;
    std::string text;
    for (std::size_t t = 0; t < length; ++t) {
      if (t) text += ' ';
      text += planted_word(g, rng() % vocab_size);
    }
    corpus << "{\"id\":\"" << id << "\",\"text\":\"" << text << "\"}\n";

    emb << "{\"id\":\"" << id << "\",\"embedding\":[";
    for (std::size_t k = 0; k < n; ++k) emb << (k ? "," : "") << x(d, k);
    emb << "]}\n";
  }
  return f;
}

}  // namespace g2t::testing
