#include "cgraph/sexpr.hpp"

#include <cctype>

namespace cgraph {

namespace {

class Reader {
 public:
  Reader(std::string_view text, ErrorCode code) : text_(text), code_(code) {}

  SExpr read() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    if (text_[pos_] == ')') fail("unbalanced ')'");
    SExpr e;
    if (text_[pos_] == '(') {
      ++pos_;
      for (;;) {
        skip_space();
        if (pos_ >= text_.size()) fail("missing ')'");
        if (text_[pos_] == ')') {
          ++pos_;
          break;
        }
        e.items.push_back(read());
      }
      return e;
    }
    e.is_atom = true;
    while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) &&
           text_[pos_] != '(' && text_[pos_] != ')') {
      e.atom.push_back(text_[pos_++]);
    }
    return e;
  }

  void expect_end() {
    skip_space();
    if (pos_ != text_.size()) fail("trailing input");
  }

 private:
  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  [[noreturn]] void fail(const char* what) const {
    throw Error(code_, std::string(what) + " at offset " + std::to_string(pos_));
  }

  std::string_view text_;
  ErrorCode code_;
  std::size_t pos_ = 0;
};

}  // namespace

SExpr parse_sexpr(std::string_view text, ErrorCode code) {
  Reader r(text, code);
  SExpr e = r.read();
  r.expect_end();
  return e;
}

}  // namespace cgraph
