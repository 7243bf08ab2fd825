#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "cgraph/description.hpp"
#include "cgraph/types.hpp"

namespace cgraph {

// ---------------------------------------------------------------------------
// Concept kinds. Every concept is one of these payloads plus bookkeeping.
// ---------------------------------------------------------------------------

struct Primitive {
  Token token;
  bool operator==(const Primitive&) const = default;
};

struct Concat {
  std::vector<ConceptId> children;
  bool operator==(const Concat&) const = default;
};

struct Repeat {
  ConceptId child;
  std::uint32_t count;
  bool operator==(const Repeat&) const = default;
};

struct Hole {
  std::uint32_t index;
  bool operator==(const Hole&) const = default;
};

using Slot = std::variant<Hole, ConceptId>;

// A lambda-style body: Ref slots are fixed, Hole(i) is replaced by the i-th
// filler of an Apply.
struct Template {
  std::vector<Slot> body;
  std::uint32_t holes;
  bool operator==(const Template&) const = default;
};

struct Apply {
  ConceptId templ;
  std::vector<ConceptId> fillers;
  bool operator==(const Apply&) const = default;
};

// "second follows first". relation links to the generic FOLLOWS node when it
// existed at creation time.
struct Association {
  ConceptId first;
  ConceptId second;
  std::optional<ConceptId> relation;
  bool operator==(const Association&) const = default;
};

struct AffectPrimitive {
  int sign;  // +1 pleasure, -1 pain
  bool operator==(const AffectPrimitive&) const = default;
};

// Generic relation marker (FOLLOWS). instances lists the associations that
// existed when the marker was created; later ones point back via
// Association::relation.
struct Relation {
  std::string name;
  std::vector<ConceptId> instances;
  bool operator==(const Relation&) const = default;
};

using ConceptKind = std::variant<Primitive, Concat, Repeat, Template, Apply,
                                 Association, AffectPrimitive, Relation>;

std::string_view kind_name(const ConceptKind& kind);

// Direct references of a payload, in payload order (duplicates kept).
std::vector<ConceptId> references(const ConceptKind& kind);

struct Concept {
  ConceptId id;
  ConceptKind kind;
  double weight = 1.0;
  std::uint64_t created_at = 0;
  std::string label;
};

// ---------------------------------------------------------------------------

struct Config {
  double contrast_threshold = 1.0;    // theta_c
  std::uint32_t repeat_threshold = 2;  // r
  double decay = 0.9;                  // gamma
  double fast_path_threshold = 8.0;    // theta_f
  std::uint32_t association_threshold = 3;
  std::uint32_t generalization_threshold = 3;  // m
  double valence_decay = 0.5;                  // alpha
  std::uint32_t valence_hops = 6;              // H
  std::uint32_t base_beam = 4;                 // B0
  std::uint32_t base_pool = 64;                // C0
  std::uint32_t synth_size_cap = 7;            // S_max
  std::uint32_t iter_cap = 100;
  std::int64_t value_cap = 1'000'000;
  double smoothness_threshold = 1.0;  // theta_s
  // Symbols in this set form their own contrast class when segmenting token
  // streams; everything else is one class.
  std::string separators;

  bool operator==(const Config&) const = default;

  // Throws InvalidConfig.
  void validate() const;
};

// Fixed, ordered symbol set. Tokens are indices into it.
class Alphabet {
 public:
  Alphabet() { lookup_.fill(-1); }
  explicit Alphabet(std::string symbols);

  std::size_t size() const { return symbols_.size(); }
  const std::string& symbols() const { return symbols_; }
  char symbol(Token t) const;
  std::optional<Token> token(char symbol) const;

  // Throws UnknownToken on symbols outside the alphabet.
  TokenSeq encode(std::string_view text) const;
  std::string decode(std::span<const Token> tokens) const;

  bool operator==(const Alphabet&) const = default;

 private:
  std::string symbols_;
  std::array<std::int16_t, 256> lookup_{};
};

struct RefinementChain {
  TokenSeq tokens;
  std::vector<Description> levels;
  bool operator==(const RefinementChain&) const = default;
};

// Observed runs of k identical references: k -> (repeated concept -> episode
// in which that run was first seen).
using RunEvidence = std::map<std::uint32_t, std::map<ConceptId, std::uint64_t>>;
using AssocCounts = std::map<std::pair<ConceptId, ConceptId>, std::uint32_t>;

// Integer-exact tallies over the tail description of every stored chain, so
// the stored part of the two-part objective can be re-priced in O(#concepts)
// when only the code table changes.
struct StoredTally {
  std::uint64_t fixed_int_bits = 0;  // gamma terms
  std::uint64_t blob_tokens = 0;
  std::uint64_t coded_nodes = 0;     // refs + blob escapes
  std::map<ConceptId, std::uint64_t> ref_counts;
  bool operator==(const StoredTally&) const = default;
};

// The whole learner state. Value type: copying yields an independent
// snapshot that is safe to query from other threads.
class ConceptGraph {
 public:
  ConceptGraph(Alphabet alphabet, Config config);

  const Alphabet& alphabet() const { return alphabet_; }
  const Config& config() const { return config_; }
  Config& mutable_config() { return config_; }

  std::size_t size() const { return concepts_.size(); }
  bool contains(ConceptId id) const { return id.value < concepts_.size(); }
  const Concept& at(ConceptId id) const;
  std::span<const Concept> concepts() const { return concepts_; }

  ConceptId primitive(Token t) const { return ConceptId{t}; }
  ConceptId pleasure() const { return pleasure_; }
  ConceptId pain() const { return pain_; }

  // Appends a concept, or returns the id of a structurally identical one.
  ConceptId add_concept(ConceptKind kind, std::string label = {});
  std::optional<ConceptId> find(const ConceptKind& kind) const;
  void set_label(ConceptId id, std::string label);
  std::optional<ConceptId> find_label(std::string_view label) const;

  // Replaces the payload of an existing concept. The expansion must be
  // unchanged (templates must keep the same body shape); used by abstraction
  // rewrites.
  void rewrite(ConceptId id, ConceptKind kind);

  // Drops every concept with id >= new_size. Only valid for concepts that
  // nothing else references yet.
  void rollback_to(std::size_t new_size);

  // Parseable concepts have a token expansion and may appear in descriptions.
  bool is_parseable(ConceptId id) const;
  // Codable concepts take part in the reference code (parseable + templates).
  bool is_codable(ConceptId id) const;

  // Throws UnknownConcept / NonExpandingConcept.
  const TokenSeq& expansion(ConceptId id) const;

  void set_weight(ConceptId id, double w);
  // Decay every non-affect weight by gamma, then add 1 to each used concept.
  void tick_weights(const std::set<ConceptId>& used);
  std::vector<ConceptId> fast_path_set() const;

  std::uint64_t episode() const { return episode_; }
  void advance_episode() { ++episode_; }

  AssocCounts& assoc_counts() { return assoc_counts_; }
  const AssocCounts& assoc_counts() const { return assoc_counts_; }
  RunEvidence& run_evidence() { return run_evidence_; }
  const RunEvidence& run_evidence() const { return run_evidence_; }

  const std::map<std::uint64_t, RefinementChain>& chains() const {
    return chains_;
  }
  const RefinementChain& chain(std::uint64_t episode) const;
  void store_chain(std::uint64_t episode, TokenSeq tokens, Description first);
  void append_level(std::uint64_t episode, Description desc);
  void drop_deepest_level(std::uint64_t episode);
  // Swaps the deepest level for another description of the same tokens.
  // Throws UnknownEpisode, InvalidDescription.
  void replace_deepest_level(std::uint64_t episode, Description desc);
  const StoredTally& stored_tally() const { return tally_; }

  // Throws InvalidDescription.
  void validate(const Description& desc) const;
  TokenSeq reconstruct(const Description& desc) const;

  // Full structural equality (weights compared exactly).
  bool operator==(const ConceptGraph& other) const;

  // Used by the loader; bypasses dedup and validation ordering checks.
  struct RawState {
    std::vector<Concept> concepts;
    AssocCounts assoc_counts;
    RunEvidence run_evidence;
    std::uint64_t episode = 0;
    std::map<std::uint64_t, RefinementChain> chains;
  };
  static ConceptGraph from_raw(Alphabet alphabet, Config config,
                               RawState state);

 private:
  void check_payload(const ConceptKind& kind) const;
  TokenSeq compute_expansion(const ConceptKind& kind) const;
  void index_concept(const Concept& c);
  void tally_add(const Description& desc, int sign);

  Alphabet alphabet_;
  Config config_;
  std::vector<Concept> concepts_;
  std::vector<TokenSeq> expansions_;
  std::unordered_map<std::string, ConceptId> by_key_;
  ConceptId pleasure_{0};
  ConceptId pain_{0};
  AssocCounts assoc_counts_;
  RunEvidence run_evidence_;
  std::uint64_t episode_ = 0;
  std::map<std::uint64_t, RefinementChain> chains_;
  StoredTally tally_;
};

// Canonical dedup key of a payload.
std::string structural_key(const ConceptKind& kind);

}  // namespace cgraph
