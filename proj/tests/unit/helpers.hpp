#pragma once

#include <random>
#include <string>
#include <vector>

#include "cgraph/concept_graph.hpp"
#include "cgraph/error.hpp"

#define CHECK_THROWS_CODE(expr, expected)                      \
  do {                                                         \
    bool thrown_ = false;                                      \
    try {                                                      \
      (void)(expr);                                            \
    } catch (const cgraph::Error& e_) {                        \
      thrown_ = true;                                          \
      CHECK_MESSAGE(e_.code() == (expected), e_.what());       \
    }                                                          \
    CHECK_MESSAGE(thrown_, "expected " #expected " from " #expr); \
  } while (0)

namespace testing_util {

inline std::uint64_t draw(std::mt19937_64& rng, std::uint64_t n) { return rng() % n; }

inline cgraph::TokenSeq random_tokens(std::mt19937_64& rng, std::size_t len, std::size_t sigma) {
  cgraph::TokenSeq t(len);
  for (auto& x : t) x = static_cast<cgraph::Token>(draw(rng, sigma));
  return t;
}

// Seeded graph mixing every composable kind. Returns the graph; every id in
// it is reachable from itself, so any id is a valid teach/expansion root.
inline cgraph::ConceptGraph random_graph(std::uint64_t seed, std::size_t additions,
                                         const std::string& symbols = "abcd") {
  using namespace cgraph;
  std::mt19937_64 rng(seed);
  ConceptGraph g(Alphabet(symbols), Config{});
  std::vector<ConceptId> expanding;
  for (Token t = 0; t < symbols.size(); ++t) expanding.push_back(g.primitive(t));
  std::vector<ConceptId> templates;
  auto pick = [&] { return expanding[draw(rng, expanding.size())]; };
  for (std::size_t i = 0; i < additions; ++i) {
    ConceptId id;
    switch (draw(rng, 6)) {
      case 0:
      case 1: {
        std::vector<ConceptId> kids(2 + draw(rng, 2));
        for (auto& k : kids) k = pick();
        id = g.add_concept(Concat{kids});
        expanding.push_back(id);
        break;
      }
      case 2:
        id = g.add_concept(Repeat{pick(), static_cast<std::uint32_t>(2 + draw(rng, 3))});
        expanding.push_back(id);
        break;
      case 3: {
        Template t{{}, 1};
        const auto n = 2 + draw(rng, 2);
        const auto hole_at = draw(rng, n);
        for (std::uint64_t s = 0; s < n; ++s) {
          if (s == hole_at) {
            t.body.push_back(Hole{0});
          } else {
            t.body.push_back(pick());
          }
        }
        templates.push_back(g.add_concept(std::move(t)));
        break;
      }
      case 4:
        if (!templates.empty()) {
          id = g.add_concept(Apply{templates[draw(rng, templates.size())], {pick()}});
          expanding.push_back(id);
        }
        break;
      default:
        g.add_concept(Association{pick(), draw(rng, 2) ? g.pleasure() : pick(), std::nullopt});
        break;
    }
    if (draw(rng, 3) == 0) {
      const auto& all = g.concepts();
      g.set_weight(all[draw(rng, all.size())].id, static_cast<double>(draw(rng, 20)));
    }
  }
  return g;
}

}  // namespace testing_util
