#pragma once

#include <variant>
#include <vector>

#include "cgraph/types.hpp"

namespace cgraph {

struct Blob {
  TokenSeq tokens;
  bool operator==(const Blob&) const = default;
  auto operator<=>(const Blob&) const = default;
};

// A description node is either a reference to an expanding concept or a raw
// run of tokens left unexplained.
using DescNode = std::variant<ConceptId, Blob>;

struct Description {
  std::vector<DescNode> nodes;

  bool empty() const { return nodes.empty(); }
  std::size_t size() const { return nodes.size(); }
  bool operator==(const Description&) const = default;
};

// Top-level concept references in order (blobs skipped).
std::vector<ConceptId> top_level_refs(const Description& desc);

}  // namespace cgraph
