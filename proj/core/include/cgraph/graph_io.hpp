#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "cgraph/concept_graph.hpp"
#include "cgraph/fn_ensemble.hpp"

namespace cgraph {

inline constexpr std::string_view kGraphFormatVersion = "cg1";

// Everything a graph file holds: the concept graph and the learned function
// library.
struct GraphFile {
  ConceptGraph graph;
  fn::Library library = fn::Library::with_successor();
};

// JSON with sorted keys. Reals are written with 9 fixed decimals; weights also
// carry an exact hexadecimal copy so a reload is bit-identical.
std::string serialize(const ConceptGraph& g, const fn::Library& library);
// Throws VersionMismatch / CorruptFile.
GraphFile deserialize(std::string_view text);

// Throws IoFailure on top of the above.
void save(const ConceptGraph& g, const std::filesystem::path& path,
          const fn::Library& library = fn::Library::with_successor());
GraphFile load(const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace cgraph
