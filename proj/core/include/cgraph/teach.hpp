#pragma once

#include <string>
#include <string_view>

#include "cgraph/concept_graph.hpp"

namespace cgraph {

// Line-oriented script rebuilding a concept bottom-up. Entries refer to
// earlier entries by their 0-based line position:
//   (prim a)
//   (concat 0 0)
//   (template 1 ?0 ?0)
//   (apply 2 0)
// Other forms: (repeat i k), (assoc i j [r]), (affect +|-), (relation name i...).
//
// Throws UnknownConcept.
std::string export_teach(const ConceptGraph& g, ConceptId id);

// Single forward scan; throws UnresolvedReference (or MalformedTemplate on
// syntax errors) if any entry refers to itself or a later entry.
void check_teach_script(std::string_view script);

// Rebuilds every entry in g (deduplicating against existing concepts) and
// returns the concept defined by the last entry.
ConceptId import_teach(ConceptGraph& g, std::string_view script);

}  // namespace cgraph
