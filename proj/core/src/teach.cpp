#include "cgraph/teach.hpp"

#include <charconv>
#include <map>
#include <sstream>

#include "cgraph/error.hpp"
#include "cgraph/sexpr.hpp"

namespace cgraph {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// Children in teaching order: fillers go before the template they fill.
std::vector<ConceptId> teaching_order(const ConceptKind& kind) {
  if (const auto* a = std::get_if<Apply>(&kind)) {
    auto v = a->fillers;
    v.push_back(a->templ);
    return v;
  }
  return references(kind);
}

class Exporter {
 public:
  explicit Exporter(const ConceptGraph& g) : g_(g) {}

  std::string run(ConceptId root) {
    g_.at(root);
    // Iterative post-order so deep chains do not exhaust the stack.
    std::vector<std::pair<ConceptId, std::size_t>> stack{{root, 0}};
    std::map<ConceptId, bool> open{{root, true}};
    while (!stack.empty()) {
      auto& [cur, next] = stack.back();
      auto children = teaching_order(g_.at(cur).kind);
      if (next < children.size()) {
        ConceptId child = children[next++];
        if (!position_.count(child) && !open.count(child)) {
          open[child] = true;
          stack.push_back({child, 0});
        }
        continue;
      }
      emit(cur);
      stack.pop_back();
    }
    return out_;
  }

 private:
  std::string pos(ConceptId id) const { return std::to_string(position_.at(id)); }

  void emit(ConceptId id) {
    std::string line = std::visit(
        overloaded{
            [&](const Primitive& k) {
              return "(prim " + std::string(1, g_.alphabet().symbol(k.token)) + ")";
            },
            [&](const Concat& k) {
              std::string s = "(concat";
              for (auto c : k.children) s += " " + pos(c);
              return s + ")";
            },
            [&](const Repeat& k) {
              return "(repeat " + pos(k.child) + " " + std::to_string(k.count) + ")";
            },
            [&](const Template& k) {
              std::string s = "(template " + std::to_string(k.holes);
              for (const auto& slot : k.body) {
                if (const auto* h = std::get_if<Hole>(&slot)) {
                  s += " ?" + std::to_string(h->index);
                } else {
                  s += " " + pos(std::get<ConceptId>(slot));
                }
              }
              return s + ")";
            },
            [&](const Apply& k) {
              std::string s = "(apply " + pos(k.templ);
              for (auto c : k.fillers) s += " " + pos(c);
              return s + ")";
            },
            [&](const Association& k) {
              std::string s = "(assoc " + pos(k.first) + " " + pos(k.second);
              if (k.relation) s += " " + pos(*k.relation);
              return s + ")";
            },
            [&](const AffectPrimitive& k) {
              return std::string(k.sign > 0 ? "(affect +)" : "(affect -)");
            },
            [&](const Relation& k) {
              std::string s = "(relation " + k.name;
              for (auto c : k.instances) s += " " + pos(c);
              return s + ")";
            },
        },
        g_.at(id).kind);
    position_[id] = count_++;
    out_ += line + "\n";
  }

  const ConceptGraph& g_;
  std::map<ConceptId, std::size_t> position_;
  std::size_t count_ = 0;
  std::string out_;
};

[[noreturn]] void malformed(std::size_t line, const std::string& what) {
  throw Error(ErrorCode::MalformedTemplate, "teach line " + std::to_string(line) + ": " + what);
}

std::size_t number(const SExpr& e, std::size_t line) {
  std::size_t v = 0;
  if (!e.is_atom) malformed(line, "expected a number");
  auto [p, ec] = std::from_chars(e.atom.data(), e.atom.data() + e.atom.size(), v);
  if (ec != std::errc{} || p != e.atom.data() + e.atom.size()) malformed(line, "bad number " + e.atom);
  return v;
}

std::vector<SExpr> script_entries(std::string_view script) {
  std::vector<SExpr> entries;
  std::istringstream in{std::string(script)};
  std::string text;
  while (std::getline(in, text)) {
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto e = parse_sexpr(text, ErrorCode::MalformedTemplate);
    if (e.is_atom || e.items.empty() || !e.items[0].is_atom) {
      malformed(entries.size(), "expected (kind ...)");
    }
    entries.push_back(std::move(e));
  }
  return entries;
}

// Positions of the script entries an entry refers to (template holes and
// literal fields skipped).
std::vector<std::size_t> entry_refs(const SExpr& e, std::size_t line) {
  const auto& head = e.items[0].atom;
  std::vector<std::size_t> refs;
  auto from = [&](std::size_t first) {
    for (std::size_t i = first; i < e.items.size(); ++i) refs.push_back(number(e.items[i], line));
  };
  if (head == "prim" || head == "affect") {
    if (e.items.size() != 2) malformed(line, head + " takes one argument");
  } else if (head == "concat" || head == "apply") {
    from(1);
  } else if (head == "repeat") {
    if (e.items.size() != 3) malformed(line, "repeat takes a child and a count");
    refs.push_back(number(e.items[1], line));
  } else if (head == "template") {
    if (e.items.size() < 2) malformed(line, "template needs a hole count");
    for (std::size_t i = 2; i < e.items.size(); ++i) {
      const auto& s = e.items[i];
      if (s.is_atom && !s.atom.empty() && s.atom[0] == '?') continue;
      refs.push_back(number(s, line));
    }
  } else if (head == "assoc") {
    if (e.items.size() != 3 && e.items.size() != 4) malformed(line, "assoc takes 2 or 3 entries");
    from(1);
  } else if (head == "relation") {
    if (e.items.size() < 2) malformed(line, "relation needs a name");
    from(2);
  } else {
    malformed(line, "unknown entry kind " + head);
  }
  return refs;
}

}  // namespace

std::string export_teach(const ConceptGraph& g, ConceptId id) { return Exporter(g).run(id); }

void check_teach_script(std::string_view script) {
  auto entries = script_entries(script);
  for (std::size_t i = 0; i < entries.size(); ++i) {
    for (auto r : entry_refs(entries[i], i)) {
      if (r >= i) {
        throw Error(ErrorCode::UnresolvedReference,
                    "teach line " + std::to_string(i) + " refers to entry " + std::to_string(r));
      }
    }
  }
}

ConceptId import_teach(ConceptGraph& g, std::string_view script) {
  check_teach_script(script);
  auto entries = script_entries(script);
  if (entries.empty()) throw Error(ErrorCode::UnresolvedReference, "empty teach script");
  std::vector<ConceptId> built;
  for (std::size_t line = 0; line < entries.size(); ++line) {
    const auto& e = entries[line];
    const auto& head = e.items[0].atom;
    auto at = [&](std::size_t i) { return built[number(e.items[i], line)]; };
    auto list = [&](std::size_t first) {
      std::vector<ConceptId> v;
      for (std::size_t i = first; i < e.items.size(); ++i) v.push_back(at(i));
      return v;
    };
    ConceptId id;
    if (head == "prim") {
      const auto& sym = e.items[1].atom;
      auto t = sym.size() == 1 ? g.alphabet().token(sym[0]) : std::nullopt;
      if (!t) throw Error(ErrorCode::UnknownToken, "symbol " + sym + " not in alphabet");
      id = g.primitive(*t);
    } else if (head == "affect") {
      const auto& s = e.items[1].atom;
      if (s != "+" && s != "-") malformed(line, "affect sign must be + or -");
      id = s == "+" ? g.pleasure() : g.pain();
    } else if (head == "concat") {
      id = g.add_concept(Concat{list(1)});
    } else if (head == "repeat") {
      id = g.add_concept(
          Repeat{at(1), static_cast<std::uint32_t>(number(e.items[2], line))});
    } else if (head == "template") {
      Template t{{}, static_cast<std::uint32_t>(number(e.items[1], line))};
      for (std::size_t i = 2; i < e.items.size(); ++i) {
        const auto& s = e.items[i];
        if (s.is_atom && !s.atom.empty() && s.atom[0] == '?') {
          SExpr idx{true, s.atom.substr(1), {}};
          t.body.push_back(Hole{static_cast<std::uint32_t>(number(idx, line))});
        } else {
          t.body.push_back(at(i));
        }
      }
      id = g.add_concept(std::move(t));
    } else if (head == "apply") {
      if (e.items.size() < 2) malformed(line, "apply needs a template");
      id = g.add_concept(Apply{at(1), list(2)});
    } else if (head == "assoc") {
      std::optional<ConceptId> rel;
      if (e.items.size() == 4) rel = at(3);
      id = g.add_concept(Association{at(1), at(2), rel});
    } else {
      const auto& name = e.items[1].atom;
      id = g.add_concept(Relation{name, list(2)});
    }
    built.push_back(id);
  }
  return built.back();
}

}  // namespace cgraph
