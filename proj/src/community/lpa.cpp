#include <numeric>

#include "../rng.hpp"
#include "common.hpp"
#include "g2t/community.hpp"

namespace g2t {

namespace {

constexpr int kMaxSweeps = 100;

// Most frequent label among the neighbours, smallest label on ties. `count`
// is scratch space indexed by label and is left zeroed.
std::size_t dominant_label(const std::vector<std::size_t>& neighbours,
                           const std::vector<std::size_t>& labels,
                           std::vector<std::size_t>& count, std::size_t& top) {
  top = 0;
  std::size_t best = labels.size();
  for (auto nb : neighbours) {
    const auto l = labels[nb];
    const auto c = ++count[l];
    if (c > top || (c == top && l < best)) {
      top = c;
      best = l;
    }
  }
  for (auto nb : neighbours) count[labels[nb]] = 0;
  return best;
}

}  // namespace

Partition detect_lpa(const SemanticGraph& g, std::uint64_t seed) {
  detail::require_detectable(g, "label propagation");

  const auto n = g.node_count();
  const auto adj = adjacency(g);
  detail::Rng rng(seed);

  std::vector<std::size_t> labels(n);
  std::iota(labels.begin(), labels.end(), 0);
  std::vector<std::size_t> order(labels);
  std::vector<std::size_t> count(n, 0);

  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    rng.shuffle(order);
    for (auto node : order) {
      std::size_t top = 0;
      labels[node] = dominant_label(adj[node], labels, count, top);
    }

    bool settled = true;
    for (std::size_t node = 0; node < n && settled; ++node) {
      std::size_t own = 0;
      for (auto nb : adj[node]) own += labels[nb] == labels[node];
      std::size_t top = 0;
      dominant_label(adj[node], labels, count, top);
      settled = own == top;
    }
    if (settled) break;
  }
  return Partition::from_labels(labels);
}

}  // namespace g2t
