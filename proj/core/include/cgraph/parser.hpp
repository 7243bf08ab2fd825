#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "cgraph/concept_graph.hpp"
#include "cgraph/description.hpp"

namespace cgraph {

// Search budget at a given attention level: beam = B0 * 2^level,
// pool = C0 * 2^level. Pools are nested because the candidate ordering is
// frozen per call.
struct Budget {
  std::uint32_t level = 0;

  std::size_t beam(const Config& cfg) const;
  std::size_t pool(const Config& cfg) const;
};

// Exact-match memo over the fast-path set: expansion -> concepts.
class FastPathIndex {
 public:
  explicit FastPathIndex(const ConceptGraph& g);

  // Concepts of the fast-path set whose expansion equals tokens[pos, pos+len)
  // for some len, appended to out (unordered).
  void matches(const TokenSeq& tokens, std::size_t pos, std::vector<ConceptId>& out) const;

  const std::vector<ConceptId>& members() const { return members_; }

 private:
  std::vector<ConceptId> members_;
  std::vector<std::size_t> lengths_;
  std::unordered_map<std::string, std::vector<ConceptId>> by_expansion_;
};

struct ParseOptions {
  // Disabling the memo index switches to a linear scan of the same set; the
  // result is identical either way.
  bool use_fast_path_index = true;
  // Complete descriptions offered as extra candidates (e.g. the previous
  // refinement level). Each must reconstruct the input.
  std::vector<Description> extra_candidates;
};

// Left-to-right beam search for a minimum description_dl parse. Always
// considers the all-blob description. Throws UnknownToken.
Description parse(const ConceptGraph& g, const TokenSeq& tokens, Budget budget,
                  const ParseOptions& options = {});

// Lexicographic order on descriptions used for deterministic tie-breaks:
// references before blobs, lower ids first, then shorter.
bool description_less(const Description& a, const Description& b);

}  // namespace cgraph
