#include <limits>
#include <random>

#include "cgraph/mdl.hpp"
#include "cgraph/parser.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace cgraph;

namespace {

// Exhaustive reference: minimum description_dl over every split of the input
// into references to parseable concepts and blobs of any length.
double exhaustive_min(const ConceptGraph& g, const TokenSeq& tokens) {
  const auto code = CodeTable::of(g);
  double best = std::numeric_limits<double>::infinity();
  Description cur;
  auto walk = [&](auto&& self, std::size_t pos) -> void {
    if (pos == tokens.size()) {
      best = std::min(best, description_dl(g, code, cur));
      return;
    }
    for (std::size_t end = pos + 1; end <= tokens.size(); ++end) {
      TokenSeq piece(tokens.begin() + pos, tokens.begin() + end);
      for (const auto& c : g.concepts()) {
        if (g.is_parseable(c.id) && g.expansion(c.id) == piece) {
          cur.nodes.push_back(c.id);
          self(self, end);
          cur.nodes.pop_back();
        }
      }
      cur.nodes.push_back(Blob{piece});
      self(self, end);
      cur.nodes.pop_back();
    }
  };
  walk(walk, 0);
  return best;
}

}  // namespace

TEST_SUITE("parser") {
  TEST_CASE("budget schedule") {
    Config cfg;
    CHECK(Budget{0}.beam(cfg) == 4);
    CHECK(Budget{0}.pool(cfg) == 64);
    CHECK(Budget{2}.beam(cfg) == 16);
    CHECK(Budget{2}.pool(cfg) == 256);
  }

  TEST_CASE("dominant pair parses as two references") {
    ConceptGraph g(Alphabet("ab"), Config{});
    auto p = g.add_concept(Concat{{ConceptId{0}, ConceptId{1}}});
    g.set_weight(p, 20.0);
    auto t = g.alphabet().encode("abab");
    auto d = parse(g, t, Budget{0});
    CHECK(d == Description{{p, p}});
    CHECK(description_dl(g, d) == doctest::Approx(exhaustive_min(g, t)));
  }

  TEST_CASE("fresh graph prefers primitive references over a blob") {
    ConceptGraph g(Alphabet("ab"), Config{});
    auto t = g.alphabet().encode("ab");
    auto d = parse(g, t, Budget{0});
    CHECK(d == Description{{ConceptId{0}, ConceptId{1}}});
    // 3 + 2 (log2 5 - 1) for the references vs 3 + log2 5 + 3 + 2 for a blob.
    CHECK(description_dl(g, d) == doctest::Approx(3 + 2 * (std::log2(5.0) - 1)));
    CHECK(description_dl(g, d) == doctest::Approx(exhaustive_min(g, t)));
  }

  TEST_CASE("edge inputs") {
    ConceptGraph g(Alphabet("ab"), Config{});
    CHECK(parse(g, TokenSeq{}, Budget{0}).empty());
    CHECK_THROWS_CODE(parse(g, TokenSeq{0, 5}, Budget{0}), ErrorCode::UnknownToken);
    ParseOptions bad;
    bad.extra_candidates.push_back(Description{{ConceptId{0}}});
    CHECK_THROWS_CODE(parse(g, TokenSeq{1}, Budget{0}, bad), ErrorCode::InvalidDescription);
  }

  TEST_CASE("extra candidates can only help") {
    ConceptGraph g(Alphabet("ab"), Config{});
    auto p = g.add_concept(Concat{{ConceptId{0}, ConceptId{1}}});
    auto q = g.add_concept(Repeat{p, 3});
    g.set_weight(q, 50.0);
    auto t = g.reconstruct(Description{{q}});
    ParseOptions opts;
    opts.extra_candidates.push_back(Description{{q}});
    CHECK(parse(g, t, Budget{0}, opts) == Description{{q}});
  }

  TEST_CASE("tie-break order") {
    CHECK(description_less(Description{{ConceptId{1}}}, Description{{Blob{{0}}}}));
    CHECK(description_less(Description{{ConceptId{1}}}, Description{{ConceptId{2}}}));
    CHECK(description_less(Description{{ConceptId{1}}}, Description{{ConceptId{1}, ConceptId{1}}}));
    CHECK_FALSE(description_less(Description{{ConceptId{1}}}, Description{{ConceptId{1}}}));
  }

  TEST_CASE("property: lossless and optimal against the exhaustive parse") {
    std::mt19937_64 rng(21);
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
      auto g = testing_util::random_graph(seed, 25, "abc");
      for (int i = 0; i < 5; ++i) {
        auto t = testing_util::random_tokens(rng, 1 + testing_util::draw(rng, 7), 3);
        // Also probe strings that a concept spells out.
        const auto& cs = g.concepts();
        const auto& c = cs[testing_util::draw(rng, cs.size())];
        if (i % 2 && g.is_parseable(c.id) && g.expansion(c.id).size() <= 8) t = g.expansion(c.id);
        auto d = parse(g, t, Budget{4});
        REQUIRE(g.reconstruct(d) == t);
        CHECK(description_dl(g, d) == doctest::Approx(exhaustive_min(g, t)).epsilon(1e-12));
      }
    }
  }

  TEST_CASE("property: fast-path index does not change results") {
    std::mt19937_64 rng(4);
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
      auto g = testing_util::random_graph(seed, 40, "abc");
      g.mutable_config().fast_path_threshold = 3.0;
      ParseOptions off;
      off.use_fast_path_index = false;
      for (int i = 0; i < 5; ++i) {
        auto t = testing_util::random_tokens(rng, testing_util::draw(rng, 40), 3);
        CHECK(parse(g, t, Budget{0}) == parse(g, t, Budget{0}, off));
      }
    }
  }

  TEST_CASE("fast-path index matches by expansion") {
    ConceptGraph g(Alphabet("ab"), Config{});
    auto p = g.add_concept(Concat{{ConceptId{0}, ConceptId{1}}});
    g.set_weight(p, 9.0);
    FastPathIndex idx(g);
    CHECK(idx.members() == std::vector<ConceptId>{p});
    std::vector<ConceptId> hits;
    idx.matches(g.alphabet().encode("abb"), 0, hits);
    CHECK(hits == std::vector<ConceptId>{p});
    hits.clear();
    idx.matches(g.alphabet().encode("abb"), 1, hits);
    CHECK(hits.empty());
  }
}
