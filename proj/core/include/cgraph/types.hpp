#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <vector>

namespace cgraph {

// Index into the graph's alphabet.
using Token = std::uint32_t;
using TokenSeq = std::vector<Token>;

// Concept identifier. Assigned densely in creation order and never reused.
struct ConceptId {
  std::uint32_t value = 0;

  constexpr auto operator<=>(const ConceptId&) const = default;
};

}  // namespace cgraph

template <>
struct std::hash<cgraph::ConceptId> {
  std::size_t operator()(cgraph::ConceptId id) const noexcept {
    return std::hash<std::uint32_t>{}(id.value);
  }
};
