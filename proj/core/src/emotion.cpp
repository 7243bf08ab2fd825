#include "cgraph/emotion.hpp"

#include <algorithm>

#include "cgraph/error.hpp"

namespace cgraph {

std::vector<EmotionTemplate> default_emotion_templates() {
  return {
      {"anger", {HasLabel{"other_action"}, HasValence{-1}}, 1},
      {"frustration", {HasLabel{"attempt"}, HasValence{-1}}, 3},
  };
}

namespace {

bool satisfies(const ConceptGraph& g, const DescNode& node, const SlotConstraint& slot,
               const ValenceMap& valences) {
  if (std::holds_alternative<AnyNode>(slot)) return true;
  const auto* id = std::get_if<ConceptId>(&node);
  if (id == nullptr) return false;
  if (const auto* c = std::get_if<IsConcept>(&slot)) return c->id == *id;
  if (const auto* l = std::get_if<HasLabel>(&slot)) return g.at(*id).label == l->label;
  const auto& v = std::get<HasValence>(slot);
  auto it = valences.find(*id);
  double val = it == valences.end() ? 0.0 : it->second;
  return v.sign < 0 ? val < 0.0 : val > 0.0;
}

}  // namespace

std::vector<EmotionMatch> match_emotion(const ConceptGraph& g, const Description& desc,
                                        const std::vector<EmotionTemplate>& templates,
                                        const ValenceMap& valences) {
  struct Ranked {
    EmotionMatch match;
    std::size_t order;
  };
  std::vector<Ranked> found;
  const auto& nodes = desc.nodes;
  for (std::size_t t = 0; t < templates.size(); ++t) {
    const auto& tpl = templates[t];
    if (tpl.pattern.empty()) {
      throw Error(ErrorCode::MalformedTemplate, "emotion '" + tpl.emotion + "' has no pattern");
    }
    const std::size_t width = tpl.pattern.size();
    const std::size_t need = std::max<std::size_t>(1, tpl.min_repeats);
    auto occurs_at = [&](std::size_t pos) {
      if (pos + width > nodes.size()) return false;
      for (std::size_t k = 0; k < width; ++k) {
        if (!satisfies(g, nodes[pos + k], tpl.pattern[k], valences)) return false;
      }
      return true;
    };
    std::size_t i = 0;
    while (i < nodes.size()) {
      std::size_t reps = 0;
      while (occurs_at(i + reps * width)) ++reps;
      if (reps >= need) {
        found.push_back({{tpl.emotion, i, i + reps * width}, t});
        i += reps * width;
      } else {
        ++i;
      }
    }
  }
  std::stable_sort(found.begin(), found.end(), [](const Ranked& a, const Ranked& b) {
    if (a.match.begin != b.match.begin) return a.match.begin < b.match.begin;
    return a.order < b.order;
  });
  std::vector<EmotionMatch> out;
  out.reserve(found.size());
  for (auto& r : found) out.push_back(std::move(r.match));
  return out;
}

}  // namespace cgraph
