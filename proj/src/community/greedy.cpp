#include <cstdint>
#include <numeric>
#include <queue>
#include <unordered_map>

#include "common.hpp"
#include "g2t/community.hpp"

namespace g2t {

namespace {

// Merge gain scaled by 2m^2: dQ = 2(e_ij - a_i a_j) with e_ij = L_ij / 2m and
// a_i = d_i / 2m gives dQ * 2m^2 = 2m * L_ij - d_i * d_j. Integer arithmetic
// keeps ties exact.
struct Candidate {
  std::int64_t gain;
  std::size_t i;  // i < j
  std::size_t j;
};

struct WorseCandidate {
  bool operator()(const Candidate& a, const Candidate& b) const {
    if (a.gain != b.gain) return a.gain < b.gain;
    if (a.i != b.i) return a.i > b.i;
    return a.j > b.j;
  }
};

}  // namespace

Partition detect_greedy_modularity(const SemanticGraph& g) {
  detail::require_detectable(g, "greedy modularity");

  const auto n = g.node_count();
  const auto two_m = static_cast<std::int64_t>(2 * g.edge_count());

  // A community is named by its smallest member; merges keep the smaller name.
  std::vector<std::unordered_map<std::size_t, std::int64_t>> links(n);
  std::vector<std::int64_t> degree(n, 0);
  std::vector<bool> alive(n, true);
  for (const auto& e : g.edges) {
    links[e.u][e.v] += 1;
    links[e.v][e.u] += 1;
    ++degree[e.u];
    ++degree[e.v];
  }

  auto gain = [&](std::size_t i, std::size_t j, std::int64_t shared) {
    return two_m * shared - degree[i] * degree[j];
  };

  std::priority_queue<Candidate, std::vector<Candidate>, WorseCandidate> heap;
  for (const auto& e : g.edges) heap.push({gain(e.u, e.v, 1), e.u, e.v});

  std::vector<std::size_t> label(n);
  std::iota(label.begin(), label.end(), 0);
  std::vector<std::vector<std::size_t>> members(n);
  for (std::size_t i = 0; i < n; ++i) members[i] = {i};

  while (!heap.empty()) {
    const auto top = heap.top();
    heap.pop();
    if (!alive[top.i] || !alive[top.j]) continue;
    const auto link = links[top.i].find(top.j);
    if (link == links[top.i].end()) continue;
    const auto current = gain(top.i, top.j, link->second);
    if (current != top.gain) continue;  // stale entry
    if (current <= 0) break;

    const auto keep = top.i, gone = top.j;
    for (const auto& [k, shared] : links[gone]) {
      if (k == keep) continue;
      links[keep][k] += shared;
      links[k][keep] += shared;
      links[k].erase(gone);
    }
    links[keep].erase(gone);
    links[gone].clear();
    degree[keep] += degree[gone];
    alive[gone] = false;
    for (auto node : members[gone]) label[node] = keep;
    members[keep].insert(members[keep].end(), members[gone].begin(), members[gone].end());
    members[gone].clear();

    for (const auto& [k, shared] : links[keep]) {
      heap.push({gain(keep, k, shared), std::min(keep, k), std::max(keep, k)});
    }
  }
  return Partition::from_labels(label);
}

}  // namespace g2t
