#pragma once

#include <unordered_map>

#include "cgraph/concept_graph.hpp"

namespace cgraph {

using ValenceMap = std::unordered_map<ConceptId, double>;

// Signed pleasure/pain score for every concept:
//   clamp(alpha^d(c, pleasure) - alpha^d(c, pain), -1, 1)
// over the undirected reference graph. Distances beyond the hop cap, and
// unreachable nodes, contribute 0. The affect primitives are pinned to +1/-1.
ValenceMap propagate_valence(const ConceptGraph& g);

}  // namespace cgraph
