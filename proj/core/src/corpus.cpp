#include "cgraph/corpus.hpp"

#include <algorithm>
#include <random>
#include <set>

#include "cgraph/error.hpp"
#include "cgraph/mdl.hpp"

namespace cgraph {

namespace {

// Engine-independent uniform draw: std distributions differ across standard
// libraries, this does not.
std::uint64_t draw(std::mt19937_64& rng, std::uint64_t n) { return rng() % n; }

std::uint32_t rules_at_level(std::uint32_t level) { return level >= 3 ? 2 : 5 - level; }

}  // namespace

std::vector<ConceptId> build_generator_grammar(ConceptGraph& g, const GrammarCorpus& corpus) {
  std::vector<ConceptId> below;
  for (Token t = 0; t < corpus.alphabet.size(); ++t) below.push_back(g.primitive(t));
  for (const auto& level : corpus.levels) {
    std::vector<ConceptId> here;
    for (auto [l, r] : level) here.push_back(g.add_concept(Concat{{below.at(l), below.at(r)}}));
    below = std::move(here);
  }
  return below;
}

GrammarCorpus gen_grammar_corpus(std::uint64_t seed, std::uint32_t depth, std::size_t target_len) {
  if (depth == 0) throw Error(ErrorCode::InvalidConfig, "grammar depth must be >= 1");
  GrammarCorpus c{Alphabet("abcdefgh"), {}, {}, {}, {}, 0.0};
  std::mt19937_64 rng(seed);

  std::uint64_t below = c.alphabet.size();
  for (std::uint32_t level = 1; level <= depth; ++level) {
    std::set<std::pair<std::uint32_t, std::uint32_t>> seen;
    auto& rules = c.levels.emplace_back();
    while (rules.size() < rules_at_level(level)) {
      std::pair<std::uint32_t, std::uint32_t> rule{static_cast<std::uint32_t>(draw(rng, below)),
                                                   static_cast<std::uint32_t>(draw(rng, below))};
      if (seen.insert(rule).second) rules.push_back(rule);
    }
    below = rules.size();
  }

  ConceptGraph g(c.alphabet, Config{});
  auto top = build_generator_grammar(g, c);
  Description desc;
  while (c.tokens.size() < target_len) {
    const auto which = static_cast<std::uint32_t>(draw(rng, top.size()));
    ConceptId pick = top[which];
    const auto& e = g.expansion(pick);
    c.instances.push_back(which);
    c.instance_starts.push_back(c.tokens.size());
    const std::size_t room = target_len - c.tokens.size();
    if (e.size() <= room) {
      c.tokens.insert(c.tokens.end(), e.begin(), e.end());
      desc.nodes.push_back(pick);
    } else {
      TokenSeq part(e.begin(), e.begin() + static_cast<std::ptrdiff_t>(room));
      c.tokens.insert(c.tokens.end(), part.begin(), part.end());
      desc.nodes.push_back(Blob{std::move(part)});
    }
  }
  auto code = CodeTable::of(g);
  c.generator_dl = model_dl(g, code) + description_dl(g, code, desc);
  return c;
}

double episode_framed_generator_dl(const GrammarCorpus& corpus, std::size_t episode_len) {
  if (episode_len == 0) throw Error(ErrorCode::NonPositive, "episode length must be >= 1");
  ConceptGraph g(corpus.alphabet, Config{});
  auto top = build_generator_grammar(g, corpus);
  auto code = CodeTable::of(g);
  double bits = model_dl(g, code);
  const std::size_t n = corpus.tokens.size();
  std::size_t inst = 0;
  for (std::size_t begin = 0; begin < n; begin += episode_len) {
    const std::size_t end = std::min(n, begin + episode_len);
    Description d;
    auto blob = [&](std::size_t from, std::size_t to) {
      if (from >= to) return;
      TokenSeq part(corpus.tokens.begin() + static_cast<std::ptrdiff_t>(from),
                    corpus.tokens.begin() + static_cast<std::ptrdiff_t>(to));
      if (!d.nodes.empty() && std::holds_alternative<Blob>(d.nodes.back())) {
        auto& b = std::get<Blob>(d.nodes.back()).tokens;
        b.insert(b.end(), part.begin(), part.end());
      } else {
        d.nodes.push_back(Blob{std::move(part)});
      }
    };
    while (inst < corpus.instances.size() && corpus.instance_starts[inst] < end) {
      const std::size_t s = corpus.instance_starts[inst];
      const ConceptId rule = top[corpus.instances[inst]];
      const std::size_t e = s + g.expansion(rule).size();
      if (s >= begin && e <= end) {
        d.nodes.push_back(rule);
      } else {
        blob(std::max(s, begin), std::min(e, end));
      }
      if (e > end) break;  // continues into the next chunk
      ++inst;
    }
    bits += description_dl(g, code, d);
  }
  return bits;
}

FunctionEnsemble gen_function_ensemble(std::uint64_t seed, std::uint32_t examples_per_function,
                                       fn::Value max_input) {
  using fn::Value;
  using Args = std::span<const Value>;
  FunctionEnsemble e;
  e.functions = {
      {"plus", 1, 2, {}, [](Args a) { return a[0] + a[1]; }},
      {"dbl", 1, 1, {}, [](Args a) { return 2 * a[0]; }},
      {"times", 2, 2, {"plus"}, [](Args a) { return a[0] * a[1]; }},
      {"hex", 2, 1, {"dbl"}, [](Args a) { return 16 * a[0]; }},
      {"sumsq", 3, 2, {"times", "plus"}, [](Args a) { return a[0] * a[0] + a[1] * a[1]; }},
      {"hexplus", 3, 2, {"hex", "plus"}, [](Args a) { return 16 * a[0] + a[1]; }},
  };

  std::mt19937_64 rng(seed);
  for (const auto& f : e.functions) {
    fn::LabeledExamples set{f.name, {}};
    for (std::uint32_t i = 0; i < examples_per_function; ++i) {
      fn::FunctionExample ex{f.name, {}, 0};
      for (std::uint32_t k = 0; k < f.arity; ++k) {
        ex.inputs.push_back(static_cast<Value>(draw(rng, static_cast<std::uint64_t>(max_input) + 1)));
      }
      ex.output = f.truth(ex.inputs);
      set.examples.push_back(std::move(ex));
    }
    e.sets.push_back(std::move(set));
  }
  for (std::size_t i = e.sets.size(); i > 1; --i) {
    std::swap(e.sets[i - 1], e.sets[draw(rng, i)]);
  }
  return e;
}

}  // namespace cgraph
