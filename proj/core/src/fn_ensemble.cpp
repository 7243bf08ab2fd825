#include "cgraph/fn_ensemble.hpp"

#include <algorithm>
#include <charconv>
#include <functional>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "cgraph/error.hpp"
#include "cgraph/sexpr.hpp"

namespace cgraph::fn {

TermPtr make_var(std::uint32_t i) { return std::make_shared<const Term>(Term{Var{i}}); }
TermPtr make_const(Value v) { return std::make_shared<const Term>(Term{Const{v}}); }
TermPtr make_call(std::uint32_t f, std::vector<TermPtr> args) {
  return std::make_shared<const Term>(Term{Call{f, std::move(args)}});
}
TermPtr make_iter(Section section, TermPtr count, TermPtr seed) {
  return std::make_shared<const Term>(
      Term{Iter{std::move(section), std::move(count), std::move(seed)}});
}

std::size_t term_size(const Term& t) {
  if (std::holds_alternative<Var>(t.node) || std::holds_alternative<Const>(t.node)) return 1;
  if (const auto* c = std::get_if<Call>(&t.node)) {
    std::size_t s = 1;
    for (const auto& a : c->args) s += term_size(*a);
    return s;
  }
  const auto& it = std::get<Iter>(t.node);
  std::size_t s = 1 + 1;  // the iter node and the section node
  for (const auto& f : it.section.filled) s += term_size(*f);
  return s + term_size(*it.count) + term_size(*it.seed);
}

bool term_equal(const Term& a, const Term& b) {
  if (a.node.index() != b.node.index()) return false;
  if (const auto* v = std::get_if<Var>(&a.node)) return v->index == std::get<Var>(b.node).index;
  if (const auto* k = std::get_if<Const>(&a.node)) return k->value == std::get<Const>(b.node).value;
  auto same_list = [](const std::vector<TermPtr>& x, const std::vector<TermPtr>& y) {
    if (x.size() != y.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (!term_equal(*x[i], *y[i])) return false;
    }
    return true;
  };
  if (const auto* c = std::get_if<Call>(&a.node)) {
    const auto& d = std::get<Call>(b.node);
    return c->function == d.function && same_list(c->args, d.args);
  }
  const auto& x = std::get<Iter>(a.node);
  const auto& y = std::get<Iter>(b.node);
  return x.section.function == y.section.function && x.section.open_slot == y.section.open_slot &&
         same_list(x.section.filled, y.section.filled) && term_equal(*x.count, *y.count) &&
         term_equal(*x.seed, *y.seed);
}

// ---------------------------------------------------------------------------

Library Library::with_successor() {
  Library lib;
  lib.entries_.push_back({"succ", 1, nullptr});
  return lib;
}

std::optional<std::uint32_t> Library::index_of(std::string_view name) const {
  for (std::uint32_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i].name == name) return i;
  }
  return std::nullopt;
}

namespace {

void check_references(const Term& t, std::uint32_t limit, std::uint32_t arity) {
  auto bad = [](const std::string& what) { throw Error(ErrorCode::MalformedTerm, what); };
  std::visit(
      [&](const auto& n) {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, Var>) {
          if (n.index >= arity) bad("variable x" + std::to_string(n.index) + " out of range");
        } else if constexpr (std::is_same_v<N, Const>) {
        } else if constexpr (std::is_same_v<N, Call>) {
          if (n.function >= limit) bad("reference to a later library entry");
          for (const auto& a : n.args) check_references(*a, limit, arity);
        } else {
          if (n.section.function >= limit) bad("reference to a later library entry");
          for (const auto& a : n.section.filled) check_references(*a, limit, arity);
          check_references(*n.count, limit, arity);
          check_references(*n.seed, limit, arity);
        }
      },
      t.node);
}

}  // namespace

std::uint32_t Library::add(std::string name, std::uint32_t arity, TermPtr definition) {
  if (index_of(name)) throw Error(ErrorCode::MalformedTerm, "duplicate library name " + name);
  if (!definition) throw Error(ErrorCode::MalformedTerm, "only succ may be builtin");
  check_references(*definition, static_cast<std::uint32_t>(entries_.size()), arity);
  entries_.push_back({std::move(name), arity, std::move(definition)});
  return static_cast<std::uint32_t>(entries_.size() - 1);
}

// ---------------------------------------------------------------------------

namespace {

// Evaluator with a memo over (function, small argument) applications; the
// synthesizer hits the same applications constantly.
class Evaluator {
 public:
  Evaluator(const Library& lib, const Caps& caps) : lib_(lib), caps_(caps) {}

  EvalResult eval(const Term& t, std::span<const Value> inputs) {
    if (const auto* v = std::get_if<Var>(&t.node)) {
      if (v->index >= inputs.size()) {
        throw Error(ErrorCode::MalformedTerm, "variable x" + std::to_string(v->index) +
                                                  " with " + std::to_string(inputs.size()) +
                                                  " inputs");
      }
      return checked(inputs[v->index]);
    }
    if (const auto* k = std::get_if<Const>(&t.node)) return checked(k->value);
    if (const auto* c = std::get_if<Call>(&t.node)) {
      std::vector<Value> args;
      args.reserve(c->args.size());
      for (const auto& a : c->args) {
        auto r = eval(*a, inputs);
        if (!r.ok()) return r;
        args.push_back(r.value);
      }
      return apply(c->function, args);
    }
    const auto& it = std::get<Iter>(t.node);
    auto count = eval(*it.count, inputs);
    if (!count.ok()) return count;
    if (count.value > static_cast<Value>(caps_.iter_cap)) {
      return {EvalStatus::IterCountExceeded, count.value};
    }
    auto seed = eval(*it.seed, inputs);
    if (!seed.ok()) return seed;
    std::vector<Value> fillers;
    for (const auto& f : it.section.filled) {
      auto r = eval(*f, inputs);
      if (!r.ok()) return r;
      fillers.push_back(r.value);
    }
    return iterate(it.section.function, it.section.open_slot, fillers, count.value, seed.value);
  }

  EvalResult iterate(std::uint32_t f, std::uint32_t open, std::span<const Value> fillers,
                     Value count, Value seed) {
    if (count > static_cast<Value>(caps_.iter_cap)) return {EvalStatus::IterCountExceeded, count};
    const auto& e = entry(f);
    if (open >= e.arity || fillers.size() + 1 != e.arity) {
      throw Error(ErrorCode::MalformedTerm, "section shape does not match " + e.name);
    }
    std::vector<Value> args(e.arity);
    Value acc = seed;
    for (Value i = 0; i < count; ++i) {
      for (std::uint32_t s = 0, k = 0; s < e.arity; ++s) args[s] = s == open ? acc : fillers[k++];
      auto r = apply(f, args);
      if (!r.ok()) return r;
      acc = r.value;
    }
    return {EvalStatus::Ok, acc};
  }

  EvalResult apply(std::uint32_t f, std::span<const Value> args) {
    const auto& e = entry(f);
    if (args.size() != e.arity) {
      throw Error(ErrorCode::MalformedTerm, e.name + " expects " + std::to_string(e.arity) +
                                                " arguments");
    }
    if (!e.definition) return checked(args[0] + 1);

    std::uint64_t key = 0;
    const bool cacheable = memo_key(f, args, key);
    if (cacheable) {
      if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    }
    auto r = eval(*e.definition, args);
    if (cacheable) memo_.emplace(key, r);
    return r;
  }

 private:
  const LibraryEntry& entry(std::uint32_t f) const {
    if (f >= lib_.size()) throw Error(ErrorCode::MalformedTerm, "unknown library function");
    return lib_.at(f);
  }

  EvalResult checked(Value v) const {
    if (v > caps_.value_cap) return {EvalStatus::Overflow, v};
    return {EvalStatus::Ok, v};
  }

  static bool memo_key(std::uint32_t f, std::span<const Value> args, std::uint64_t& key) {
    constexpr Value kLimit = Value{1} << 21;
    if (f >= (1u << 16) || args.size() > 2) return false;
    key = f;
    int shift = 16;
    for (Value a : args) {
      if (a < 0 || a >= kLimit) return false;
      key |= static_cast<std::uint64_t>(a) << shift;
      shift += 21;
    }
    key |= static_cast<std::uint64_t>(args.size()) << 58;
    return true;
  }

  const Library& lib_;
  Caps caps_;
  std::unordered_map<std::uint64_t, EvalResult> memo_;
};

}  // namespace

EvalResult eval_term(const Term& term, std::span<const Value> inputs, const Library& lib,
                     const Caps& caps) {
  return Evaluator(lib, caps).eval(term, inputs);
}

EvalResult apply_function(const Library& lib, std::uint32_t f, std::span<const Value> args,
                          const Caps& caps) {
  return Evaluator(lib, caps).apply(f, args);
}

// ---------------------------------------------------------------------------

namespace {

struct VectorHash {
  std::size_t operator()(const std::vector<Value>& v) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (Value x : v) {
      h ^= static_cast<std::size_t>(x) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return h;
  }
};

// Bottom-up enumeration by size with observational-equivalence pruning: a
// term is kept only if its output vector on the examples is new. Because
// enumeration is lexicographic over banks in generation order, the first
// consistent term found is the same one a full enumeration would find.
class Synthesizer {
 public:
  Synthesizer(const std::vector<FunctionExample>& examples, const Library& lib,
              std::uint32_t max_size, const Caps& caps)
      : lib_(lib), eval_(lib, caps), caps_(caps), max_size_(max_size) {
    if (examples.empty()) throw Error(ErrorCode::ArityMismatch, "no examples");
    arity_ = static_cast<std::uint32_t>(examples.front().inputs.size());
    for (const auto& e : examples) {
      if (e.inputs.size() != arity_) {
        throw Error(ErrorCode::ArityMismatch, "inconsistent example arity for " + e.label);
      }
      inputs_.push_back(e.inputs);
      target_.push_back(e.output);
    }
    for (std::uint32_t i = 0; i < arity_; ++i) atoms_.push_back(make_var(i));
    atoms_.push_back(make_const(0));
    atoms_.push_back(make_const(1));
    bank_.resize(max_size + 1);
  }

  std::optional<TermPtr> run() {
    for (std::uint32_t s = 1; s <= max_size_; ++s) {
      size_ = s;
      if (enumerate(s)) return found_;
    }
    return std::nullopt;
  }

  SynthesisStats stats;

 private:
  struct Entry {
    TermPtr term;
    std::vector<Value> out;
  };

  // Returns true once a consistent term was emitted.
  bool emit(const std::function<TermPtr()>& build, std::vector<Value>&& out) {
    ++stats.generated;
    if (out == target_) {
      found_ = build();
      return true;
    }
    if (size_ < max_size_ && seen_.insert(out).second) {
      ++stats.kept;
      bank_[size_].push_back({build(), std::move(out)});
    }
    return false;
  }

  std::optional<std::vector<Value>> atom_outputs(const Term& t) {
    std::vector<Value> out;
    out.reserve(inputs_.size());
    for (const auto& in : inputs_) {
      auto r = eval_.eval(t, in);
      if (!r.ok()) return std::nullopt;
      out.push_back(r.value);
    }
    return out;
  }

  bool enumerate(std::uint32_t s) {
    if (s == 1) {
      for (const auto& a : atoms_) {
        auto out = atom_outputs(*a);
        if (out && emit([&] { return a; }, std::move(*out))) return true;
      }
      return false;
    }
    for (std::uint32_t f = 0; f < lib_.size(); ++f) {
      if (calls(f, s)) return true;
    }
    for (std::uint32_t f = 0; f < lib_.size(); ++f) {
      if (iters(f, s)) return true;
    }
    return false;
  }

  // Visits every composition of `total` into `parts` positive sizes in
  // lexicographic order.
  template <class Fn>
  static bool compositions(std::uint32_t total, std::uint32_t parts, Fn&& fn) {
    std::vector<std::uint32_t> sizes(parts, 1);
    if (parts == 0 || total < parts) return false;
    std::function<bool(std::uint32_t, std::uint32_t)> rec = [&](std::uint32_t i,
                                                                std::uint32_t left) {
      if (i + 1 == parts) {
        sizes[i] = left;
        return fn(sizes);
      }
      for (std::uint32_t k = 1; k + (parts - i - 1) <= left; ++k) {
        sizes[i] = k;
        if (rec(i + 1, left - k)) return true;
      }
      return false;
    };
    return rec(0, total);
  }

  bool calls(std::uint32_t f, std::uint32_t s) {
    const auto arity = lib_.at(f).arity;
    if (arity == 0 || s < 1 + arity) return false;
    return compositions(s - 1, arity, [&](const std::vector<std::uint32_t>& sizes) {
      std::vector<const Entry*> pick(arity);
      std::function<bool(std::uint32_t)> rec = [&](std::uint32_t i) {
        if (i == arity) {
          std::vector<Value> out(inputs_.size());
          std::vector<Value> args(arity);
          for (std::size_t e = 0; e < inputs_.size(); ++e) {
            for (std::uint32_t k = 0; k < arity; ++k) args[k] = pick[k]->out[e];
            auto r = eval_.apply(f, args);
            if (!r.ok()) return false;
            out[e] = r.value;
          }
          return emit(
              [&] {
                std::vector<TermPtr> terms;
                for (auto* p : pick) terms.push_back(p->term);
                return make_call(f, std::move(terms));
              },
              std::move(out));
        }
        for (const auto& entry : bank_[sizes[i]]) {
          pick[i] = &entry;
          if (rec(i + 1)) return true;
        }
        return false;
      };
      return rec(0);
    });
  }

  bool iters(std::uint32_t f, std::uint32_t s) {
    const auto arity = lib_.at(f).arity;
    if (arity == 0) return false;
    const std::uint32_t section_size = arity;  // section node + (arity-1) atoms
    if (s < 1 + section_size + 2) return false;
    const std::uint32_t rest = s - 1 - section_size;
    const std::uint32_t nfill = arity - 1;

    for (std::uint32_t open = 0; open < arity; ++open) {
      std::vector<std::size_t> choice(nfill, 0);
      for (;;) {
        // Filler values per example, in slot order.
        std::vector<std::vector<Value>> fill_vals(inputs_.size(), std::vector<Value>(nfill));
        for (std::uint32_t k = 0; k < nfill; ++k) {
          const auto& atom = *atoms_[choice[k]];
          for (std::size_t e = 0; e < inputs_.size(); ++e) {
            fill_vals[e][k] = eval_.eval(atom, inputs_[e]).value;
          }
        }
        bool hit = compositions(rest, 2, [&](const std::vector<std::uint32_t>& sizes) {
          for (const auto& count : bank_[sizes[0]]) {
            for (const auto& seed : bank_[sizes[1]]) {
              std::vector<Value> out(inputs_.size());
              bool ok = true;
              for (std::size_t e = 0; e < inputs_.size() && ok; ++e) {
                auto r = eval_.iterate(f, open, fill_vals[e], count.out[e], seed.out[e]);
                ok = r.ok();
                out[e] = r.value;
              }
              if (!ok) continue;
              bool done = emit(
                  [&] {
                    Section sec{f, open, {}};
                    for (auto c : choice) sec.filled.push_back(atoms_[c]);
                    return make_iter(std::move(sec), count.term, seed.term);
                  },
                  std::move(out));
              if (done) return true;
            }
          }
          return false;
        });
        if (hit) return true;
        // Next filler combination, last slot fastest.
        std::int64_t k = static_cast<std::int64_t>(nfill) - 1;
        while (k >= 0 && ++choice[static_cast<std::size_t>(k)] == atoms_.size()) {
          choice[static_cast<std::size_t>(k)] = 0;
          --k;
        }
        if (k < 0) break;
      }
    }
    return false;
  }

  const Library& lib_;
  Evaluator eval_;
  Caps caps_;
  std::uint32_t max_size_;
  std::uint32_t arity_ = 0;
  std::uint32_t size_ = 0;
  std::vector<std::vector<Value>> inputs_;
  std::vector<Value> target_;
  std::vector<TermPtr> atoms_;
  std::vector<std::vector<Entry>> bank_;
  std::unordered_set<std::vector<Value>, VectorHash> seen_;
  TermPtr found_;
};

}  // namespace

std::optional<TermPtr> synthesize(const std::vector<FunctionExample>& examples,
                                  const Library& lib, std::uint32_t max_size, const Caps& caps,
                                  SynthesisStats* stats) {
  Synthesizer s(examples, lib, max_size, caps);
  auto result = s.run();
  if (stats) *stats = s.stats;
  return result;
}

LearnResult learn_all(const std::vector<LabeledExamples>& sets, Library library,
                      std::uint32_t max_size, const Caps& caps) {
  LearnResult result;
  std::vector<const LabeledExamples*> pending;
  for (const auto& s : sets) pending.push_back(&s);
  for (std::uint32_t pass = 1; !pending.empty(); ++pass) {
    const Library snapshot = library;
    std::vector<const LabeledExamples*> still;
    std::vector<Learned> solved;
    for (const auto* set : pending) {
      auto term = synthesize(set->examples, snapshot, max_size, caps);
      if (term) {
        solved.push_back({set->label, pass, *term});
      } else {
        still.push_back(set);
      }
    }
    if (solved.empty()) break;
    for (auto& l : solved) {
      const auto* set = *std::find_if(pending.begin(), pending.end(),
                                      [&](const auto* p) { return p->label == l.label; });
      library.add(l.label, static_cast<std::uint32_t>(set->examples.front().inputs.size()),
                  l.term);
      result.learned.push_back(std::move(l));
    }
    pending = std::move(still);
  }
  for (const auto* p : pending) result.unsolved.push_back(p->label);
  result.library = std::move(library);
  return result;
}

// ---------------------------------------------------------------------------

std::string to_sexpr(const Term& t, const Library& lib) {
  if (const auto* v = std::get_if<Var>(&t.node)) return "x" + std::to_string(v->index);
  if (const auto* k = std::get_if<Const>(&t.node)) return std::to_string(k->value);
  if (const auto* c = std::get_if<Call>(&t.node)) {
    std::string s = "(" + lib.at(c->function).name;
    for (const auto& a : c->args) s += " " + to_sexpr(*a, lib);
    return s + ")";
  }
  const auto& it = std::get<Iter>(t.node);
  std::string s = "(iter (section " + lib.at(it.section.function).name;
  const auto arity = lib.at(it.section.function).arity;
  for (std::uint32_t slot = 0, k = 0; slot < arity; ++slot) {
    s += " ";
    s += slot == it.section.open_slot ? "_" : to_sexpr(*it.section.filled[k++], lib);
  }
  return s + ") " + to_sexpr(*it.count, lib) + " " + to_sexpr(*it.seed, lib) + ")";
}

namespace {

[[noreturn]] void malformed(const std::string& what) {
  throw Error(ErrorCode::MalformedTerm, what);
}

std::uint32_t function_named(const Library& lib, const SExpr& e) {
  if (!e.is_atom) malformed("expected a function name");
  auto f = lib.index_of(e.atom);
  if (!f) malformed("unknown function " + e.atom);
  return *f;
}

TermPtr term_from(const SExpr& e, const Library& lib) {
  if (e.is_atom) {
    if (e.atom == "0" || e.atom == "1") return make_const(e.atom == "1" ? 1 : 0);
    if (e.atom.size() > 1 && e.atom[0] == 'x') {
      std::uint32_t i = 0;
      auto [p, ec] = std::from_chars(e.atom.data() + 1, e.atom.data() + e.atom.size(), i);
      if (ec == std::errc{} && p == e.atom.data() + e.atom.size()) return make_var(i);
    }
    malformed("bad atom " + e.atom);
  }
  if (e.items.empty()) malformed("empty list");
  if (e.items[0].is_atom && e.items[0].atom == "iter") {
    if (e.items.size() != 4) malformed("iter takes a section, a count and a seed");
    const auto& sec = e.items[1];
    if (sec.is_atom || sec.items.size() < 2 || !sec.items[0].is_atom ||
        sec.items[0].atom != "section") {
      malformed("iter needs a (section f ...) form");
    }
    Section s{function_named(lib, sec.items[1]), 0, {}};
    const auto arity = lib.at(s.function).arity;
    if (sec.items.size() != 2 + arity) malformed("section slot count mismatch");
    int open = -1;
    for (std::uint32_t slot = 0; slot < arity; ++slot) {
      const auto& item = sec.items[2 + slot];
      if (item.is_atom && item.atom == "_") {
        if (open >= 0) malformed("section has more than one open slot");
        open = static_cast<int>(slot);
        continue;
      }
      auto filler = term_from(item, lib);
      if (!std::holds_alternative<Var>(filler->node) && !std::holds_alternative<Const>(filler->node)) {
        malformed("section fillers must be variables or constants");
      }
      s.filled.push_back(std::move(filler));
    }
    if (open < 0) malformed("section has no open slot");
    s.open_slot = static_cast<std::uint32_t>(open);
    return make_iter(std::move(s), term_from(e.items[2], lib), term_from(e.items[3], lib));
  }
  auto f = function_named(lib, e.items[0]);
  if (e.items.size() - 1 != lib.at(f).arity) malformed("arity mismatch calling " + e.items[0].atom);
  std::vector<TermPtr> args;
  for (std::size_t i = 1; i < e.items.size(); ++i) args.push_back(term_from(e.items[i], lib));
  return make_call(f, std::move(args));
}

}  // namespace

TermPtr parse_term(std::string_view text, const Library& lib) {
  return term_from(parse_sexpr(text, ErrorCode::MalformedTerm), lib);
}

std::string export_library(const Library& lib) {
  std::string out;
  for (const auto& e : lib.entries()) {
    if (!e.definition) {
      out += "(builtin " + e.name + " " + std::to_string(e.arity) + ")\n";
    } else {
      out += "(define " + e.name + " " + std::to_string(e.arity) + " " +
             to_sexpr(*e.definition, lib) + ")\n";
    }
  }
  return out;
}

Library import_library(std::string_view text) {
  Library lib;
  bool have_succ = false;
  std::istringstream in{std::string(text)};
  std::string line;
  Library partial;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto e = parse_sexpr(line, ErrorCode::MalformedTerm);
    if (e.is_atom || e.items.size() < 3 || !e.items[0].is_atom) malformed("bad library line");
    const auto& head = e.items[0].atom;
    if (head == "builtin") {
      if (e.items[1].atom != "succ" || e.items[2].atom != "1" || have_succ || partial.size() != 0) {
        malformed("only a leading (builtin succ 1) is supported");
      }
      partial = Library::with_successor();
      have_succ = true;
      continue;
    }
    if (head != "define" || e.items.size() != 4 || !have_succ) malformed("bad library line");
    std::uint32_t arity = 0;
    const auto& a = e.items[2].atom;
    auto [p, ec] = std::from_chars(a.data(), a.data() + a.size(), arity);
    if (ec != std::errc{} || p != a.data() + a.size()) malformed("bad arity " + a);
    partial.add(e.items[1].atom, arity, term_from(e.items[3], partial));
  }
  if (!have_succ) malformed("library must start with (builtin succ 1)");
  return partial;
}

std::vector<LabeledExamples> parse_examples(std::string_view text) {
  std::vector<LabeledExamples> sets;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream fields(line);
    std::string label;
    if (!(fields >> label)) continue;
    auto bad = [&](const char* what) {
      throw Error(ErrorCode::CorruptFile, "line " + std::to_string(lineno) + ": " + what);
    };
    long long arity = -1;
    if (!(fields >> arity) || arity < 0) bad("missing arity");
    FunctionExample ex{label, {}, 0};
    for (long long i = 0; i < arity; ++i) {
      long long v = 0;
      if (!(fields >> v) || v < 0) bad("expected a non-negative input");
      ex.inputs.push_back(v);
    }
    long long out = 0;
    if (!(fields >> out) || out < 0) bad("expected a non-negative output");
    std::string extra;
    if (fields >> extra) bad("trailing fields");
    ex.output = out;
    auto it = std::find_if(sets.begin(), sets.end(),
                           [&](const LabeledExamples& s) { return s.label == label; });
    if (it == sets.end()) {
      sets.push_back({label, {}});
      it = sets.end() - 1;
    } else if (it->examples.front().inputs.size() != ex.inputs.size()) {
      bad("arity differs from earlier examples of this label");
    }
    it->examples.push_back(std::move(ex));
  }
  return sets;
}

}  // namespace cgraph::fn
