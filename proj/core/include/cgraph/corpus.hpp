#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "cgraph/concept_graph.hpp"
#include "cgraph/fn_ensemble.hpp"

namespace cgraph {

// Hidden-grammar corpus over a..h. Level i rules concatenate two symbols of
// level i-1 (level 0 = primitives); the corpus samples top-level rules.
struct GrammarCorpus {
  Alphabet alphabet;
  TokenSeq tokens;
  // Rules per level, as pairs of lower-level indices (level 0 = tokens).
  std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> levels;
  // Top rule index and start offset of every sampled instance.
  std::vector<std::uint32_t> instances;
  std::vector<std::size_t> instance_starts;
  // model_dl + description_dl of the generator grammar (all weights 1)
  // describing the corpus as a sequence of top rules.
  double generator_dl = 0.0;
};

// Throws InvalidConfig if depth == 0.
GrammarCorpus gen_grammar_corpus(std::uint64_t seed, std::uint32_t depth, std::size_t target_len);

// Builds the generator grammar into g (which must use the corpus alphabet);
// returns the ids of the top-level rules.
std::vector<ConceptId> build_generator_grammar(ConceptGraph& g, const GrammarCorpus& corpus);

// Generator grammar model_dl plus the description_dl of every consecutive
// episode_len-token chunk, each described by the top-rule instances it fully
// contains and blobs for cut instances (all weights 1). Same framing as an
// engine fed the corpus in chunks.
double episode_framed_generator_dl(const GrammarCorpus& corpus, std::size_t episode_len);

// Three-level ensemble of six arithmetic functions, each reachable only
// through the level below.
struct EnsembleFunction {
  std::string name;
  std::uint32_t level = 0;
  std::uint32_t arity = 0;
  std::vector<std::string> uses;  // direct dependencies inside the ensemble
  std::function<fn::Value(std::span<const fn::Value>)> truth;
};

struct FunctionEnsemble {
  std::vector<EnsembleFunction> functions;
  std::vector<fn::LabeledExamples> sets;  // interleaved
};

FunctionEnsemble gen_function_ensemble(std::uint64_t seed, std::uint32_t examples_per_function = 8,
                                       fn::Value max_input = 10);

}  // namespace cgraph
