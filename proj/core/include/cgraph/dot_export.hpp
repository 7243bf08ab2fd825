#pragma once

#include <filesystem>
#include <string>

#include "cgraph/concept_graph.hpp"

namespace cgraph {

// One node per concept labeled `id:kind:weight`; solid edges parent -> child
// for every reference, dashed edges out of associations.
std::string to_dot(const ConceptGraph& g);
// Throws IoFailure.
void export_dot(const ConceptGraph& g, const std::filesystem::path& path);

}  // namespace cgraph
