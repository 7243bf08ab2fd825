#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "cgraph/error.hpp"

namespace cgraph {

// Minimal s-expression reader shared by the teach and library formats.
struct SExpr {
  bool is_atom = false;
  std::string atom;
  std::vector<SExpr> items;
};

// Parses exactly one expression; trailing text is an error. Failures are
// reported with `code`.
SExpr parse_sexpr(std::string_view text, ErrorCode code);

}  // namespace cgraph
