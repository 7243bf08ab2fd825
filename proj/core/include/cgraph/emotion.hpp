#pragma once

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

#include "cgraph/concept_graph.hpp"
#include "cgraph/description.hpp"
#include "cgraph/valence.hpp"

namespace cgraph {

struct IsConcept {
  ConceptId id;
};
struct HasLabel {
  std::string label;
};
struct HasValence {
  int sign;  // +1 or -1
};
struct AnyNode {};

using SlotConstraint = std::variant<IsConcept, HasLabel, HasValence, AnyNode>;

// An ordered pattern over top-level description nodes. The whole pattern must
// occur at least min_repeats times back to back ("repeatedly").
struct EmotionTemplate {
  std::string emotion;
  std::vector<SlotConstraint> pattern;
  std::size_t min_repeats = 1;
};

struct EmotionMatch {
  std::string emotion;
  std::size_t begin = 0;
  std::size_t end = 0;  // exclusive, in top-level nodes

  bool operator==(const EmotionMatch&) const = default;
};

// anger: [label other_action][negative valence]
// frustration: ([label attempt][negative valence]) x >= 3
std::vector<EmotionTemplate> default_emotion_templates();

// Every maximal non-overlapping span matching each template, ordered by start
// position, then template order. Throws MalformedTemplate on empty patterns.
std::vector<EmotionMatch> match_emotion(const ConceptGraph& g, const Description& desc,
                                        const std::vector<EmotionTemplate>& templates,
                                        const ValenceMap& valences);

}  // namespace cgraph
