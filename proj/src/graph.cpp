#include "g2t/graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <thread>

#include "g2t/error.hpp"

namespace g2t {

namespace {

std::size_t upper_offset(std::size_t u, std::size_t n) {
  // Number of strict-upper-triangle entries in rows before u.
  return u * n - u * (u + 1) / 2;
}

// Heavier first; equal weights fall back to (u, v) order.
bool heavier(const Edge& a, const Edge& b) {
  if (a.weight != b.weight) return a.weight > b.weight;
  if (a.u != b.u) return a.u < b.u;
  return a.v < b.v;
}

bool by_endpoints(const Edge& a, const Edge& b) {
  return a.u != b.u ? a.u < b.u : a.v < b.v;
}

// Linear-interpolation percentile over sorted values, q in [0, 100].
double percentile(std::vector<double> values, double q) {
  std::sort(values.begin(), values.end());
  const double pos = q / 100.0 * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + (values[hi] - values[lo]) * frac;
}

}  // namespace

Adjacency adjacency(const SemanticGraph& g) {
  Adjacency adj(g.node_count());
  for (const auto& e : g.edges) {
    adj[e.u].push_back(e.v);
    adj[e.v].push_back(e.u);
  }
  for (auto& list : adj) std::sort(list.begin(), list.end());
  return adj;
}

SemanticGraph build_semantic_graph(const EmbeddingMatrix& m) {
  const auto n = m.rows();
  if (n < 2) throw_input("semantic graph needs at least 2 documents");

  std::vector<double> norms(n);
  for (std::size_t i = 0; i < n; ++i) {
    double sq = 0.0;
    for (double x : m.row(i)) sq += x * x;
    if (sq == 0.0) throw_input("zero embedding vector for '" + m.ids()[i] + "'");
    norms[i] = std::sqrt(sq);
  }

  SemanticGraph g;
  g.node_ids = m.ids();
  g.weighted = true;
  g.edges.resize(n * (n - 1) / 2);

  auto fill_rows = [&](std::size_t first, std::size_t stride) {
    for (std::size_t u = first; u < n; u += stride) {
      const auto a = m.row(u);
      auto* out = g.edges.data() + upper_offset(u, n);
      for (std::size_t v = u + 1; v < n; ++v, ++out) {
        const auto b = m.row(v);
        double dot = 0.0;
        for (std::size_t k = 0; k < a.size(); ++k) dot += a[k] * b[k];
        *out = Edge{u, v, std::clamp(dot / (norms[u] * norms[v]), -1.0, 1.0)};
      }
    }
  };

  // Rows are interleaved across workers so the triangular workload balances.
  const std::size_t workers =
      n < 512 ? 1 : std::max(1u, std::min(16u, std::thread::hardware_concurrency()));
  if (workers == 1) {
    fill_rows(0, 1);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(fill_rows, w, workers);
  }
  return g;
}

PruneMode parse_prune_mode(std::string_view name) {
  if (name == "keep-fraction") return PruneMode::kKeepFraction;
  if (name == "percentile") return PruneMode::kPercentile;
  throw_config("unknown prune mode '" + std::string(name) + "'");
}

std::size_t keep_count(double top_p, std::size_t edge_count) {
  const double exact = top_p / 100.0 * static_cast<double>(edge_count);
  const double nearest = std::round(exact);
  if (std::abs(exact - nearest) <= 1e-9 * std::max(1.0, exact)) {
    return static_cast<std::size_t>(nearest);
  }
  return static_cast<std::size_t>(std::ceil(exact));
}

SemanticGraph prune_top_p(const SemanticGraph& g, double top_p, PruneMode mode) {
  if (!(top_p > 0.0 && top_p <= 100.0)) {
    throw_config("top-P must be in (0, 100], got " + std::to_string(top_p));
  }
  const auto n = g.node_count();
  if (!g.weighted || g.edge_count() != n * (n - 1) / 2) {
    throw_input("top-P pruning expects a weighted complete graph");
  }
  SemanticGraph out;
  out.node_ids = g.node_ids;
  out.weighted = false;

  if (mode == PruneMode::kKeepFraction) {
    const auto keep = std::min(keep_count(top_p, g.edge_count()), g.edge_count());
    out.edges = g.edges;
    std::nth_element(out.edges.begin(), out.edges.begin() + static_cast<std::ptrdiff_t>(keep),
                     out.edges.end(), heavier);
    out.edges.resize(keep);
  } else if (!g.edges.empty()) {
    std::vector<double> weights;
    weights.reserve(g.edge_count());
    for (const auto& e : g.edges) weights.push_back(e.weight);
    const double threshold = percentile(std::move(weights), top_p);
    for (const auto& e : g.edges) {
      if (e.weight >= threshold) out.edges.push_back(e);
    }
  }
  std::sort(out.edges.begin(), out.edges.end(), by_endpoints);
  return out;
}

std::vector<std::vector<std::size_t>> connected_components(const SemanticGraph& g) {
  const auto n = g.node_count();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  for (const auto& e : g.edges) {
    auto a = find(e.u), b = find(e.v);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  // Roots are the smallest member, so scanning in node order yields
  // components ordered by smallest member with sorted contents.
  std::vector<std::vector<std::size_t>> components;
  std::vector<std::size_t> slot(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto root = find(i);
    if (slot[root] == n) {
      slot[root] = components.size();
      components.emplace_back();
    }
    components[slot[root]].push_back(i);
  }
  return components;
}

bool is_connected(const SemanticGraph& g) {
  return g.node_count() > 0 && connected_components(g).size() == 1;
}

PruneResult max_connected_subgraph(const SemanticGraph& g) {
  if (g.node_count() == 0) throw_input("cannot extract a component from an empty graph");

  const auto components = connected_components(g);
  std::size_t best = components.size();
  for (std::size_t c = 0; c < components.size(); ++c) {
    if (components[c].size() < 2) continue;
    if (best == components.size() || components[c].size() > components[best].size()) {
      best = c;
    }
  }

  PruneResult result;
  result.subgraph.weighted = false;
  std::vector<std::size_t> remap(g.node_count(), g.node_count());
  for (std::size_t c = 0; c < components.size(); ++c) {
    const auto& members = components[c];
    if (c == best) {
      for (auto node : members) {
        remap[node] = result.subgraph.node_ids.size();
        result.subgraph.node_ids.push_back(g.node_ids[node]);
      }
    } else if (members.size() == 1) {
      result.isolated.push_back(g.node_ids[members.front()]);
    } else {
      auto& ids = result.dropped_components.emplace_back();
      for (auto node : members) ids.push_back(g.node_ids[node]);
    }
  }
  for (const auto& e : g.edges) {
    if (remap[e.u] != g.node_count()) {
      result.subgraph.edges.push_back(Edge{remap[e.u], remap[e.v], e.weight});
    }
  }
  std::sort(result.subgraph.edges.begin(), result.subgraph.edges.end(), by_endpoints);
  return result;
}

void write_edge_list(std::ostream& out, const SemanticGraph& g) {
  char buf[32];
  for (const auto& e : g.edges) {
    std::snprintf(buf, sizeof buf, "%.17g", e.weight);
    out << g.node_ids[e.u] << '\t' << g.node_ids[e.v] << '\t' << buf << '\n';
  }
}

}  // namespace g2t
