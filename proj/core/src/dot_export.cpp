#include "cgraph/dot_export.hpp"

#include <cstdio>

#include "cgraph/graph_io.hpp"

namespace cgraph {

std::string to_dot(const ConceptGraph& g) {
  std::string out = "digraph concepts {\n";
  char buf[64];
  for (const auto& c : g.concepts()) {
    std::snprintf(buf, sizeof buf, "%.2f", c.weight);
    out += "  n" + std::to_string(c.id.value) + " [label=\"" + std::to_string(c.id.value) + ":" +
           std::string(kind_name(c.kind)) + ":" + buf + "\"];\n";
  }
  for (const auto& c : g.concepts()) {
    const bool dashed = std::holds_alternative<Association>(c.kind);
    for (auto child : references(c.kind)) {
      out += "  n" + std::to_string(c.id.value) + " -> n" + std::to_string(child.value);
      out += dashed ? " [style=dashed];\n" : ";\n";
    }
  }
  out += "}\n";
  return out;
}

void export_dot(const ConceptGraph& g, const std::filesystem::path& path) {
  write_text_file(path, to_dot(g));
}

}  // namespace cgraph
