#include <cmath>
#include <random>

#include "cgraph/concept_graph.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace cgraph;

namespace {

ConceptGraph fresh(const char* symbols = "ab") { return ConceptGraph(Alphabet(symbols), Config{}); }

TokenSeq enc(const ConceptGraph& g, const char* s) { return g.alphabet().encode(s); }

}  // namespace

TEST_SUITE("concept_graph") {
  TEST_CASE("initial layout: primitives then pleasure and pain") {
    auto g = fresh();
    CHECK(g.size() == 4);
    CHECK(g.pleasure() == ConceptId{2});
    CHECK(g.pain() == ConceptId{3});
    CHECK(std::holds_alternative<AffectPrimitive>(g.at(g.pleasure()).kind));
    CHECK(std::get<AffectPrimitive>(g.at(g.pain()).kind).sign == -1);
    CHECK(g.episode() == 0);
  }

  TEST_CASE("add_concept assigns the next id and deduplicates") {
    auto g = fresh();
    auto p = g.add_concept(Concat{{ConceptId{0}, ConceptId{1}}});
    CHECK(p == ConceptId{4});
    CHECK(g.add_concept(Concat{{ConceptId{0}, ConceptId{1}}}) == ConceptId{4});
    CHECK(g.size() == 5);
    CHECK(g.at(p).weight == 1.0);
    CHECK(g.at(p).created_at == 0);
  }

  TEST_CASE("payload validation") {
    auto g = fresh("abc");
    auto t = g.add_concept(Template{{ConceptId{0}, Hole{0}}, 1});
    CHECK_THROWS_CODE(g.add_concept(Apply{t, {ConceptId{0}, ConceptId{1}}}), ErrorCode::ArityMismatch);
    CHECK_THROWS_CODE(g.add_concept(Apply{ConceptId{0}, {ConceptId{1}}}), ErrorCode::ArityMismatch);
    CHECK_THROWS_CODE(g.add_concept(Repeat{ConceptId{0}, 1}), ErrorCode::InvalidCount);
    CHECK_THROWS_CODE(g.add_concept(Concat{{ConceptId{0}}}), ErrorCode::ArityMismatch);
    CHECK_THROWS_CODE(g.add_concept(Concat{{ConceptId{0}, ConceptId{99}}}), ErrorCode::DanglingReference);
    CHECK_THROWS_CODE(g.add_concept(Template{{ConceptId{0}}, 1}), ErrorCode::ArityMismatch);
    CHECK_THROWS_CODE(g.add_concept(Template{{Hole{1}}, 1}), ErrorCode::ArityMismatch);
    CHECK_THROWS_CODE(g.add_concept(Concat{{ConceptId{0}, g.pleasure()}}), ErrorCode::NonExpandingConcept);
  }

  TEST_CASE("expansion semantics") {
    auto g = fresh("abc");
    CHECK(g.expansion(ConceptId{0}) == enc(g, "a"));
    auto ab = g.add_concept(Concat{{ConceptId{0}, ConceptId{1}}});
    CHECK(g.expansion(g.add_concept(Repeat{ab, 3})) == enc(g, "ababab"));
    auto t = g.add_concept(Template{{ConceptId{0}, Hole{0}, ConceptId{2}}, 1});
    CHECK(g.expansion(g.add_concept(Apply{t, {ConceptId{1}}})) == enc(g, "abc"));
    CHECK_THROWS_CODE(g.expansion(ConceptId{500}), ErrorCode::UnknownConcept);
    CHECK_THROWS_CODE(g.expansion(g.pleasure()), ErrorCode::NonExpandingConcept);
    auto as = g.add_concept(Association{ConceptId{0}, ConceptId{1}, std::nullopt});
    CHECK_THROWS_CODE(g.expansion(as), ErrorCode::NonExpandingConcept);
    CHECK_FALSE(g.is_parseable(t));
    CHECK(g.is_codable(t));
    CHECK_FALSE(g.is_codable(as));
  }

  TEST_CASE("property: repeat length and idempotent add on random graphs") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      auto g = testing_util::random_graph(seed, 40);
      const std::size_t n0 = g.size();
      for (std::uint32_t i = 0; i < n0; ++i) {
        const ConceptId id{i};
        if (!g.is_parseable(id)) continue;
        const ConceptKind kind = g.at(id).kind;
        const auto before = g.size();
        CHECK(g.add_concept(kind) == id);
        CHECK(g.size() == before);
        for (std::uint32_t n = 2; n <= 4; ++n) {
          auto r = g.add_concept(Repeat{id, n});
          CHECK(g.expansion(r).size() == n * g.expansion(id).size());
        }
      }
    }
  }

  TEST_CASE("tick_weights: decay then increment, affect exempt") {
    auto g = fresh();
    auto p = g.add_concept(Concat{{ConceptId{0}, ConceptId{1}}});
    auto q = g.add_concept(Concat{{ConceptId{1}, ConceptId{0}}});
    g.set_weight(p, 5.0);
    g.set_weight(q, 5.0);
    const double affect = g.at(g.pleasure()).weight;
    g.tick_weights({q});
    CHECK(g.at(p).weight == doctest::Approx(4.5).epsilon(1e-12));
    CHECK(g.at(q).weight == doctest::Approx(5.5).epsilon(1e-12));
    CHECK(g.at(g.pleasure()).weight == affect);
  }

  TEST_CASE("tick_weights: closed form over idle ticks") {
    auto g = fresh();
    auto p = g.add_concept(Concat{{ConceptId{0}, ConceptId{1}}});
    for (int i = 0; i < 10; ++i) g.tick_weights({});
    CHECK(std::abs(g.at(p).weight - std::pow(0.9, 10)) <= 1e-9);
    CHECK(std::abs(g.at(p).weight - 0.348678) < 1e-6);
  }

  TEST_CASE("fast_path_set thresholds") {
    auto g = fresh();
    auto c1 = g.add_concept(Concat{{ConceptId{0}, ConceptId{1}}});
    auto c2 = g.add_concept(Concat{{ConceptId{1}, ConceptId{0}}});
    g.set_weight(c1, 9.0);
    g.set_weight(c2, 7.9);
    CHECK(g.fast_path_set() == std::vector<ConceptId>{c1});
    g.mutable_config().fast_path_threshold = 0.0;
    auto all = g.fast_path_set();
    CHECK(all == std::vector<ConceptId>{ConceptId{0}, ConceptId{1}, c1, c2});
  }

  TEST_CASE("fast_path_set on a fresh graph holds primitives only when heavy enough") {
    auto g = fresh();
    CHECK(g.fast_path_set().empty());
    g.set_weight(ConceptId{1}, 8.0);
    CHECK(g.fast_path_set() == std::vector<ConceptId>{ConceptId{1}});
  }

  TEST_CASE("rewrite must preserve expansion") {
    auto g = fresh("abc");
    auto x = g.add_concept(Concat{{ConceptId{0}, ConceptId{1}, ConceptId{2}}});
    auto t = g.add_concept(Template{{ConceptId{0}, Hole{0}, ConceptId{2}}, 1});
    g.rewrite(x, Apply{t, {ConceptId{1}}});
    CHECK(std::holds_alternative<Apply>(g.at(x).kind));
    CHECK(g.expansion(x) == enc(g, "abc"));
    CHECK_THROWS_CODE(g.rewrite(x, Apply{t, {ConceptId{0}}}), ErrorCode::InvalidDescription);
  }

  TEST_CASE("rollback drops trailing concepts and their keys") {
    auto g = fresh();
    auto p = g.add_concept(Concat{{ConceptId{0}, ConceptId{1}}});
    g.rollback_to(p.value);
    CHECK(g.size() == 4);
    CHECK_FALSE(g.find(Concat{{ConceptId{0}, ConceptId{1}}}).has_value());
    CHECK(g.add_concept(Concat{{ConceptId{0}, ConceptId{1}}}) == p);
  }

  TEST_CASE("labels") {
    auto g = fresh();
    auto p = g.add_concept(Concat{{ConceptId{0}, ConceptId{1}}}, "pair");
    CHECK(g.find_label("pair") == p);
    g.set_label(ConceptId{0}, "first");
    CHECK(g.find_label("first") == ConceptId{0});
    CHECK_FALSE(g.find_label("none").has_value());
  }

  TEST_CASE("config validation") {
    Config c;
    CHECK_NOTHROW(c.validate());
    c.decay = 0.0;
    CHECK_THROWS_CODE(c.validate(), ErrorCode::InvalidConfig);
    c = Config{};
    c.decay = 1.0;
    CHECK_NOTHROW(c.validate());
    c.valence_decay = 1.0;
    CHECK_THROWS_CODE(c.validate(), ErrorCode::InvalidConfig);
    CHECK_THROWS_CODE(ConceptGraph(Alphabet(""), Config{}), ErrorCode::InvalidConfig);
  }

  TEST_CASE("alphabet encode and decode") {
    Alphabet a("xyz");
    CHECK(a.encode("zyx") == TokenSeq{2, 1, 0});
    CHECK(a.decode(TokenSeq{0, 2}) == "xz");
    CHECK_THROWS_CODE(a.encode("xq"), ErrorCode::UnknownToken);
    CHECK_THROWS_CODE(Alphabet("aa"), ErrorCode::InvalidConfig);
  }

  TEST_CASE("descriptions validate and reconstruct") {
    auto g = fresh("abc");
    auto p = g.add_concept(Concat{{ConceptId{0}, ConceptId{1}}});
    Description d{{p, Blob{{2}}}};
    CHECK(g.reconstruct(d) == enc(g, "abc"));
    CHECK(g.reconstruct(Description{}).empty());
    CHECK_THROWS_CODE(g.validate(Description{{Blob{{}}}}), ErrorCode::InvalidDescription);
    CHECK_THROWS_CODE(g.validate(Description{{g.pain()}}), ErrorCode::InvalidDescription);
    CHECK_THROWS_CODE(g.validate(Description{{Blob{{7}}}}), ErrorCode::InvalidDescription);
  }

  TEST_CASE("copies are independent snapshots") {
    auto g = fresh();
    auto snap = g;
    g.add_concept(Concat{{ConceptId{0}, ConceptId{1}}});
    CHECK(snap.size() == 4);
    CHECK_FALSE(snap == g);
  }
}
