#pragma once

#include <cstdint>
#include <string>

#include "cgraph/concept_graph.hpp"
#include "cgraph/description.hpp"

namespace cgraph {

// Description-length accounting. All costs are real-valued bit counts; nothing
// is ever entropy coded.

struct DLReport {
  double raw_bits = 0.0;
  double described_bits = 0.0;
  double model_bits = 0.0;
  double attention = 0.0;  // raw_bits - described_bits

  bool operator==(const DLReport&) const = default;
};

// "raw_bits=... described_bits=... model_bits=... attention=..." with nine
// decimals.
std::string format_report(const DLReport& r);

// Elias-gamma code length, 2*floor(log2 k) + 1. Throws NonPositive for k = 0.
std::uint64_t gamma_len(std::uint64_t k);

double raw_dl(std::uint64_t n, std::size_t sigma_size);

// Snapshot of the weight-proportional reference code. Computing it is
// O(#concepts); every cost below is O(1) given it.
struct CodeTable {
  double total_weight = 0.0;  // W, over codable concepts
  std::uint64_t codable = 0;  // N
  double log2_denominator = 0.0;  // log2(W + N + 1)

  static CodeTable of(const ConceptGraph& g);

  double escape_cost() const { return log2_denominator; }
  double ref_cost_for_weight(double w) const;
};

// -log2((w_c + 1) / (W + N + 1)). Throws UnknownConcept, NonExpandingConcept.
double ref_cost(const ConceptGraph& g, ConceptId c);
double ref_cost(const ConceptGraph& g, const CodeTable& code, ConceptId c);

double blob_cost(const CodeTable& code, std::uint64_t len, std::size_t sigma_size);
double blob_cost(const ConceptGraph& g, std::uint64_t len);

// Data part: gamma_len(k+1) plus per-node reference / escape costs.
// Throws InvalidDescription.
double description_dl(const ConceptGraph& g, const Description& desc);
double description_dl(const ConceptGraph& g, const CodeTable& code, const Description& desc);

// Model part: definition cost of every non-primitive codable concept.
double model_dl(const ConceptGraph& g);
double model_dl(const ConceptGraph& g, const CodeTable& code);
double definition_cost(const ConceptGraph& g, const CodeTable& code, ConceptId c);

// Sum of description_dl over the tail description of every stored chain.
double stored_dl(const ConceptGraph& g);
double stored_dl(const ConceptGraph& g, const CodeTable& code);

// model_dl + stored_dl: the objective every induction step must not increase.
double two_part_total(const ConceptGraph& g);

// raw_dl(|tokens|, |Sigma|) - description_dl. Throws ReconstructionMismatch
// when desc does not reproduce tokens.
double attention(const ConceptGraph& g, const TokenSeq& tokens, const Description& desc);

DLReport make_report(const ConceptGraph& g, std::uint64_t n_tokens, const Description& desc);

// Kraft sum over every codable concept plus the escape symbol.
double kraft_sum(const ConceptGraph& g);

}  // namespace cgraph
