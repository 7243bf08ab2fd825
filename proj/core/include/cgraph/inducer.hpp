#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "cgraph/concept_graph.hpp"
#include "cgraph/description.hpp"
#include "cgraph/mdl.hpp"
#include "cgraph/parser.hpp"
#include "cgraph/segmenter.hpp"

namespace cgraph {

// Called around every induction step with the two-part objective before and
// after it. Gated rules only ever report after < before.
using StepObserver =
    std::function<void(std::string_view rule, bool gated, double before, double after)>;

struct InductionOptions {
  bool use_fast_path_index = true;
  StepObserver observer;
};

struct IngestOptions {
  InductionOptions induction;
  // Affect felt right after the experience (+1 pleasure, -1 pain). It is
  // treated as the node following the last concept for association purposes.
  std::optional<int> outcome;
};

struct IngestReport {
  std::uint64_t episode = 0;
  Description description;
  std::vector<ConceptId> new_concepts;
  std::vector<std::pair<ConceptId, ConceptId>> new_associations;
  DLReport dl;
};

// Label given to the number template for runs of length k ("NUM_2").
std::string number_label(std::uint32_t k);

// model_dl + stored_dl + description_dl(current): what every gated step must
// strictly decrease.
double induction_objective(const ConceptGraph& g, const Description& current);

// Digram and run rules plus number generalization over one episode's
// description. Rewrites desc in place; returns the concepts created.
std::vector<ConceptId> induce_repeats(ConceptGraph& g, Description& desc,
                                      const InductionOptions& options = {});

// One-hole template abstraction over concat concepts sharing every child but
// one. current (optional) is the in-flight episode description, included in
// the objective.
std::vector<ConceptId> abstract_common(ConceptGraph& g, const Description* current = nullptr,
                                       const InductionOptions& options = {});

// Counts adjacent pairs of the sequence; reifies a pair as an Association
// once its count reaches the association threshold, and adds the generic
// FOLLOWS relation once enough associations exist.
std::vector<std::pair<ConceptId, ConceptId>> record_associations(
    ConceptGraph& g, std::span<const ConceptId> sequence);

// Same, over the adjacent top-level references of a description (blobs break
// adjacency). outcome, if given, follows the last node.
std::vector<std::pair<ConceptId, ConceptId>> record_associations(
    ConceptGraph& g, const Description& desc, std::optional<int> outcome = std::nullopt);

// The full per-experience pipeline: segment, parse, induce, abstract,
// associate, tick weights, store the description as refinement level 0.
// Throws UnknownToken.
IngestReport ingest(ConceptGraph& g, const RawStream& experience,
                    const IngestOptions& options = {});
IngestReport ingest(ConceptGraph& g, const TokenSeq& tokens, const IngestOptions& options = {});

// Re-parses the stored episode at the next budget level with the current tail
// as a candidate and appends the result. Throws UnknownEpisode.
Description refine(ConceptGraph& g, std::uint64_t episode, const InductionOptions& options = {});

// Drops the deepest level of any chain whose level-specific concepts have all
// decayed below 2^-20.
void forget_details(ConceptGraph& g);

}  // namespace cgraph
