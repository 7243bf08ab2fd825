#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace cgraph::fn {

using Value = std::int64_t;

struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Var {
  std::uint32_t index;
};
struct Const {
  Value value;  // 0 or 1
};
struct Call {
  std::uint32_t function;  // library index
  std::vector<TermPtr> args;
};
// A library function with exactly one open argument slot; the others hold
// variables or constants.
struct Section {
  std::uint32_t function;
  std::uint32_t open_slot;
  std::vector<TermPtr> filled;  // arity - 1 atoms, in slot order
};
// Apply the section `count` times, starting from `seed`.
struct Iter {
  Section section;
  TermPtr count;
  TermPtr seed;
};

struct Term {
  std::variant<Var, Const, Call, Iter> node;
};

TermPtr make_var(std::uint32_t i);
TermPtr make_const(Value v);
TermPtr make_call(std::uint32_t f, std::vector<TermPtr> args);
TermPtr make_iter(Section section, TermPtr count, TermPtr seed);

std::size_t term_size(const Term& t);
bool term_equal(const Term& a, const Term& b);

struct LibraryEntry {
  std::string name;
  std::uint32_t arity = 0;
  TermPtr definition;  // null for builtins
};

// Ordered; definitions reference only earlier entries.
class Library {
 public:
  // {succ}
  static Library with_successor();

  const std::vector<LibraryEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  const LibraryEntry& at(std::uint32_t i) const { return entries_.at(i); }
  std::optional<std::uint32_t> index_of(std::string_view name) const;

  // Throws MalformedTerm on duplicate names or forward references.
  std::uint32_t add(std::string name, std::uint32_t arity, TermPtr definition);

 private:
  std::vector<LibraryEntry> entries_;
};

struct Caps {
  std::uint32_t iter_cap = 100;
  Value value_cap = 1'000'000;
};

enum class EvalStatus { Ok, Overflow, IterCountExceeded };

struct EvalResult {
  EvalStatus status = EvalStatus::Ok;
  Value value = 0;

  bool ok() const { return status == EvalStatus::Ok; }
};

// Strict evaluation. Iter evaluates its count first. Throws MalformedTerm on
// bad variable indices or call arity.
EvalResult eval_term(const Term& term, std::span<const Value> inputs, const Library& lib,
                     const Caps& caps);
EvalResult apply_function(const Library& lib, std::uint32_t f, std::span<const Value> args,
                          const Caps& caps);

struct FunctionExample {
  std::string label;
  std::vector<Value> inputs;
  Value output = 0;
};

struct SynthesisStats {
  std::uint64_t generated = 0;  // terms built, including pruned duplicates
  std::uint64_t kept = 0;       // observationally distinct terms kept
};

// First term, in (size, enumeration order), consistent with every example.
// Throws ArityMismatch on inconsistent or empty example sets.
std::optional<TermPtr> synthesize(const std::vector<FunctionExample>& examples,
                                  const Library& lib, std::uint32_t max_size, const Caps& caps,
                                  SynthesisStats* stats = nullptr);

struct LabeledExamples {
  std::string label;
  std::vector<FunctionExample> examples;
};

struct Learned {
  std::string label;
  std::uint32_t pass = 0;  // 1-based
  TermPtr term;
};

struct LearnResult {
  Library library;
  std::vector<Learned> learned;
  std::vector<std::string> unsolved;
};

// Passes over the unsolved labels against the library as it stood at the start
// of the pass; successes join the library at the end of the pass. Stops after
// a pass without progress.
LearnResult learn_all(const std::vector<LabeledExamples>& sets, Library library,
                      std::uint32_t max_size, const Caps& caps);

// ---- text forms ----------------------------------------------------------

// x0, 0, (succ x0), (iter (section plus _ x0) x1 0)
std::string to_sexpr(const Term& t, const Library& lib);
// Throws MalformedTerm.
TermPtr parse_term(std::string_view text, const Library& lib);

// One line per entry in dependency order:
//   (builtin succ 1)
//   (define red 2 (iter (section succ _) x0 x1))
std::string export_library(const Library& lib);
// Throws MalformedTerm.
Library import_library(std::string_view text);

// `label arity in1 ... inN out` per line; blank lines and '#' comments are
// ignored. Labels keep first-appearance order. Throws CorruptFile.
std::vector<LabeledExamples> parse_examples(std::string_view text);

}  // namespace cgraph::fn
