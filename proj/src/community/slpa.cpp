#include <algorithm>
#include <map>
#include <numeric>

#include "../rng.hpp"
#include "common.hpp"
#include "g2t/community.hpp"

namespace g2t {

// Speaker-listener label propagation. Each node remembers every label it has
// accepted; a speaker utters a label drawn from its memory in proportion to
// frequency and the listener accepts the most common utterance, drawing
// uniformly among tied labels (in ascending label order). Labels whose memory share reaches the threshold define the
// node's communities.
Cover detect_slpa(const SemanticGraph& g, const DetectorConfig& config) {
  config.validate();
  detail::require_detectable(g, "SLPA");

  const auto n = g.node_count();
  const auto adj = adjacency(g);
  detail::Rng rng(config.seed);

  std::vector<std::vector<std::size_t>> memory(n);
  for (std::size_t i = 0; i < n; ++i) {
    memory[i].reserve(static_cast<std::size_t>(config.slpa_iterations) + 1);
    memory[i].push_back(i);
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<std::size_t> heard(n, 0);
  std::vector<std::size_t> spoken, tied;
  for (int t = 0; t < config.slpa_iterations; ++t) {
    rng.shuffle(order);
    for (auto listener : order) {
      std::size_t top = 0;
      spoken.clear();
      for (auto speaker : adj[listener]) {
        const auto& mem = memory[speaker];
        const auto label = mem[rng.below(mem.size())];
        spoken.push_back(label);
        top = std::max(top, ++heard[label]);
      }
      tied.clear();
      for (auto label : spoken) {
        if (heard[label] == top) {
          tied.push_back(label);
          heard[label] = 0;  // collect each label once
        }
      }
      for (auto label : spoken) heard[label] = 0;
      std::sort(tied.begin(), tied.end());
      memory[listener].push_back(tied[rng.below(tied.size())]);
    }
  }

  const double slots = static_cast<double>(config.slpa_iterations + 1);
  std::map<std::size_t, std::vector<std::size_t>> by_label;
  for (std::size_t node = 0; node < n; ++node) {
    std::map<std::size_t, std::size_t> freq;
    for (auto label : memory[node]) ++freq[label];
    std::size_t top_label = 0, top_count = 0;
    for (const auto& [label, count] : freq) {
      if (count > top_count) {
        top_count = count;
        top_label = label;
      }
    }
    for (const auto& [label, count] : freq) {
      const bool frequent =
          static_cast<double>(count) / slots >= config.slpa_threshold - 1e-12;
      if (frequent || label == top_label) by_label[label].push_back(node);
    }
  }

  std::vector<std::vector<std::size_t>> communities;
  communities.reserve(by_label.size());
  for (auto& [label, members] : by_label) communities.push_back(std::move(members));
  return Cover::from_communities(std::move(communities), n);
}

}  // namespace g2t
