#include <cstdint>
#include <map>
#include <numeric>

#include "../rng.hpp"
#include "common.hpp"
#include "g2t/community.hpp"

namespace g2t {

namespace {

// Symmetric integer-weighted graph. self_weight[i] holds A_ii, which counts
// every collapsed internal edge twice, so strength[i] = sum_j A_ij equals the
// summed original degree of the nodes folded into i.
struct WeightedGraph {
  std::vector<std::vector<std::pair<std::size_t, std::int64_t>>> neighbours;
  std::vector<std::int64_t> self_weight;
  std::vector<std::int64_t> strength;
  std::int64_t two_m = 0;

  std::size_t size() const { return neighbours.size(); }
};

WeightedGraph from_semantic(const SemanticGraph& g) {
  WeightedGraph w;
  const auto n = g.node_count();
  w.neighbours.resize(n);
  w.self_weight.assign(n, 0);
  w.strength.assign(n, 0);
  for (const auto& e : g.edges) {
    w.neighbours[e.u].emplace_back(e.v, 1);
    w.neighbours[e.v].emplace_back(e.u, 1);
    ++w.strength[e.u];
    ++w.strength[e.v];
  }
  w.two_m = static_cast<std::int64_t>(2 * g.edge_count());
  return w;
}

// One round of local moves. Returns the community of every node, renumbered
// densely in node order, and whether any node moved.
std::pair<std::vector<std::size_t>, bool> local_moves(const WeightedGraph& g,
                                                      detail::Rng& rng) {
  const auto n = g.size();
  std::vector<std::size_t> community(n);
  std::iota(community.begin(), community.end(), 0);
  std::vector<std::int64_t> total(g.strength);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);

  std::vector<std::int64_t> weight_to(n, 0);
  std::vector<std::size_t> touched;
  bool any_move = false;
  bool moved = true;
  while (moved) {
    moved = false;
    rng.shuffle(order);
    for (auto node : order) {
      const auto home = community[node];
      const auto k = g.strength[node];

      touched.clear();
      for (const auto& [nb, w] : g.neighbours[node]) {
        const auto c = community[nb];
        if (weight_to[c] == 0) touched.push_back(c);
        weight_to[c] += w;
      }
      total[home] -= k;

      // Gain of joining c, scaled by 2m: 2m * k_in(c) - total(c) * k.
      auto gain = [&](std::size_t c) { return g.two_m * weight_to[c] - total[c] * k; };
      auto best = home;
      auto best_gain = gain(home);
      for (auto c : touched) {
        if (c == home) continue;
        const auto cand = gain(c);
        if (cand > best_gain || (cand == best_gain && best != home && c < best)) {
          best = c;
          best_gain = cand;
        }
      }
      total[best] += k;
      if (best != home) {
        community[node] = best;
        moved = true;
        any_move = true;
      }
      for (auto c : touched) weight_to[c] = 0;
      weight_to[home] = 0;
    }
  }

  std::map<std::size_t, std::size_t> dense;
  for (auto& c : community) {
    c = dense.try_emplace(c, dense.size()).first->second;
  }
  return {community, any_move};
}

WeightedGraph aggregate(const WeightedGraph& g, const std::vector<std::size_t>& community,
                        std::size_t count) {
  WeightedGraph out;
  out.self_weight.assign(count, 0);
  out.strength.assign(count, 0);
  out.two_m = g.two_m;
  std::vector<std::map<std::size_t, std::int64_t>> links(count);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto ci = community[i];
    out.self_weight[ci] += g.self_weight[i];
    out.strength[ci] += g.strength[i];
    for (const auto& [j, w] : g.neighbours[i]) {
      const auto cj = community[j];
      if (ci == cj) {
        out.self_weight[ci] += w;
      } else {
        links[ci][cj] += w;
      }
    }
  }
  out.neighbours.resize(count);
  for (std::size_t c = 0; c < count; ++c) {
    out.neighbours[c].assign(links[c].begin(), links[c].end());
  }
  return out;
}

}  // namespace

Partition detect_louvain(const SemanticGraph& g, std::uint64_t seed) {
  detail::require_detectable(g, "Louvain");

  detail::Rng rng(seed);
  auto level = from_semantic(g);
  std::vector<std::size_t> label(g.node_count());
  std::iota(label.begin(), label.end(), 0);

  while (true) {
    auto [community, moved] = local_moves(level, rng);
    if (!moved) break;
    std::size_t count = 0;
    for (auto c : community) count = std::max(count, c + 1);
    for (auto& l : label) l = community[l];
    if (count == level.size()) break;
    level = aggregate(level, community, count);
  }
  return Partition::from_labels(label);
}

}  // namespace g2t
