#pragma once

#include "g2t/error.hpp"
#include "g2t/graph.hpp"

namespace g2t::detail {

inline void require_detectable(const SemanticGraph& g, const char* detector) {
  if (g.node_count() < 2) {
    throw_input(std::string(detector) + " needs a graph with at least 2 nodes");
  }
  if (!is_connected(g)) {
    throw_input(std::string(detector) +
                " needs a connected graph; pass the maximum connected subgraph");
  }
}

}  // namespace g2t::detail
