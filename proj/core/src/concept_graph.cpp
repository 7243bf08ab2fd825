#include "cgraph/concept_graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cgraph/error.hpp"
#include "cgraph/mdl.hpp"

namespace cgraph {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

std::vector<ConceptId> top_level_refs(const Description& desc) {
  std::vector<ConceptId> out;
  for (const auto& n : desc.nodes) {
    if (const auto* id = std::get_if<ConceptId>(&n)) out.push_back(*id);
  }
  return out;
}

std::string_view kind_name(const ConceptKind& kind) {
  return std::visit(
      overloaded{
          [](const Primitive&) { return std::string_view("prim"); },
          [](const Concat&) { return std::string_view("concat"); },
          [](const Repeat&) { return std::string_view("repeat"); },
          [](const Template&) { return std::string_view("template"); },
          [](const Apply&) { return std::string_view("apply"); },
          [](const Association&) { return std::string_view("assoc"); },
          [](const AffectPrimitive&) { return std::string_view("affect"); },
          [](const Relation&) { return std::string_view("relation"); },
      },
      kind);
}

std::vector<ConceptId> references(const ConceptKind& kind) {
  return std::visit(
      overloaded{
          [](const Primitive&) { return std::vector<ConceptId>{}; },
          [](const Concat& c) { return c.children; },
          [](const Repeat& r) { return std::vector<ConceptId>{r.child}; },
          [](const Template& t) {
            std::vector<ConceptId> out;
            for (const auto& s : t.body) {
              if (const auto* id = std::get_if<ConceptId>(&s)) out.push_back(*id);
            }
            return out;
          },
          [](const Apply& a) {
            std::vector<ConceptId> out{a.templ};
            out.insert(out.end(), a.fillers.begin(), a.fillers.end());
            return out;
          },
          [](const Association& a) {
            std::vector<ConceptId> out{a.first, a.second};
            if (a.relation) out.push_back(*a.relation);
            return out;
          },
          [](const AffectPrimitive&) { return std::vector<ConceptId>{}; },
          [](const Relation& r) { return r.instances; },
      },
      kind);
}

std::string structural_key(const ConceptKind& kind) {
  std::string key(kind_name(kind));
  auto put = [&key](std::uint64_t v) {
    key.push_back(' ');
    key += std::to_string(v);
  };
  std::visit(overloaded{
                 [&](const Primitive& p) { put(p.token); },
                 [&](const Concat& c) {
                   for (auto id : c.children) put(id.value);
                 },
                 [&](const Repeat& r) {
                   put(r.child.value);
                   put(r.count);
                 },
                 [&](const Template& t) {
                   put(t.holes);
                   for (const auto& s : t.body) {
                     if (const auto* h = std::get_if<Hole>(&s)) {
                       key += " ?";
                       key += std::to_string(h->index);
                     } else {
                       put(std::get<ConceptId>(s).value);
                     }
                   }
                 },
                 [&](const Apply& a) {
                   put(a.templ.value);
                   for (auto id : a.fillers) put(id.value);
                 },
                 // The relation link is not part of an association's identity.
                 [&](const Association& a) {
                   put(a.first.value);
                   put(a.second.value);
                 },
                 [&](const AffectPrimitive& a) { key += a.sign > 0 ? " +" : " -"; },
                 [&](const Relation& r) {
                   key.push_back(' ');
                   key += r.name;
                 },
             },
             kind);
  return key;
}

// ---------------------------------------------------------------------------

void Config::validate() const {
  auto fail = [](const char* what) { throw Error(ErrorCode::InvalidConfig, what); };
  if (!(contrast_threshold >= 0.0)) fail("contrast threshold must be >= 0");
  if (repeat_threshold < 1) fail("repeat threshold must be positive");
  if (!(decay > 0.0 && decay <= 1.0)) fail("decay must lie in (0,1]");
  if (!(fast_path_threshold >= 0.0)) fail("fast-path threshold must be >= 0");
  if (association_threshold < 1) fail("association threshold must be positive");
  if (generalization_threshold < 1) fail("generalization threshold must be positive");
  if (!(valence_decay > 0.0 && valence_decay < 1.0)) fail("valence decay must lie in (0,1)");
  if (valence_hops < 1) fail("valence hop cap must be positive");
  if (base_beam < 1 || base_pool < 1) fail("beam and pool must be positive");
  if (synth_size_cap < 1 || iter_cap < 1 || value_cap < 1) fail("caps must be positive");
  if (!(smoothness_threshold >= 0.0)) fail("smoothness threshold must be >= 0");
}

Alphabet::Alphabet(std::string symbols) : symbols_(std::move(symbols)) {
  lookup_.fill(-1);
  if (symbols_.empty()) throw Error(ErrorCode::InvalidConfig, "empty alphabet");
  if (symbols_.size() > 256) throw Error(ErrorCode::InvalidConfig, "alphabet too large");
  for (std::size_t i = 0; i < symbols_.size(); ++i) {
    auto& slot = lookup_[static_cast<unsigned char>(symbols_[i])];
    if (slot >= 0) {
      throw Error(ErrorCode::InvalidConfig,
                  std::string("duplicate alphabet symbol '") + symbols_[i] + "'");
    }
    slot = static_cast<std::int16_t>(i);
  }
}

char Alphabet::symbol(Token t) const {
  if (t >= symbols_.size()) throw Error(ErrorCode::UnknownToken, std::to_string(t));
  return symbols_[t];
}

std::optional<Token> Alphabet::token(char symbol) const {
  auto v = lookup_[static_cast<unsigned char>(symbol)];
  if (v < 0) return std::nullopt;
  return static_cast<Token>(v);
}

TokenSeq Alphabet::encode(std::string_view text) const {
  TokenSeq out;
  out.reserve(text.size());
  for (char c : text) {
    auto t = token(c);
    if (!t) throw Error(ErrorCode::UnknownToken, std::string("symbol '") + c + "' not in alphabet");
    out.push_back(*t);
  }
  return out;
}

std::string Alphabet::decode(std::span<const Token> tokens) const {
  std::string out;
  out.reserve(tokens.size());
  for (Token t : tokens) out.push_back(symbol(t));
  return out;
}

// ---------------------------------------------------------------------------

ConceptGraph::ConceptGraph(Alphabet alphabet, Config config)
    : alphabet_(std::move(alphabet)), config_(std::move(config)) {
  config_.validate();
  if (alphabet_.size() == 0) throw Error(ErrorCode::InvalidConfig, "empty alphabet");
  for (Token t = 0; t < alphabet_.size(); ++t) {
    add_concept(Primitive{t}, std::string(1, alphabet_.symbol(t)));
  }
  pleasure_ = add_concept(AffectPrimitive{+1}, "pleasure");
  pain_ = add_concept(AffectPrimitive{-1}, "pain");
}

const Concept& ConceptGraph::at(ConceptId id) const {
  if (!contains(id)) throw Error(ErrorCode::UnknownConcept, "id " + std::to_string(id.value));
  return concepts_[id.value];
}

bool ConceptGraph::is_parseable(ConceptId id) const {
  const auto& k = at(id).kind;
  return std::holds_alternative<Primitive>(k) || std::holds_alternative<Concat>(k) ||
         std::holds_alternative<Repeat>(k) || std::holds_alternative<Apply>(k);
}

bool ConceptGraph::is_codable(ConceptId id) const {
  return is_parseable(id) || std::holds_alternative<Template>(at(id).kind);
}

const TokenSeq& ConceptGraph::expansion(ConceptId id) const {
  if (!is_parseable(id)) {
    throw Error(ErrorCode::NonExpandingConcept,
                "concept " + std::to_string(id.value) + " (" +
                    std::string(kind_name(at(id).kind)) + ") has no expansion");
  }
  return expansions_[id.value];
}

void ConceptGraph::check_payload(const ConceptKind& kind) const {
  auto need = [this](ConceptId id) {
    if (!contains(id)) {
      throw Error(ErrorCode::DanglingReference, "reference to missing concept " +
                                                    std::to_string(id.value));
    }
  };
  auto need_expanding = [&](ConceptId id) {
    need(id);
    if (!is_parseable(id)) {
      throw Error(ErrorCode::NonExpandingConcept,
                  "concept " + std::to_string(id.value) + " cannot be composed");
    }
  };
  std::visit(
      overloaded{
          [&](const Primitive& p) {
            if (p.token >= alphabet_.size()) {
              throw Error(ErrorCode::UnknownToken, std::to_string(p.token));
            }
          },
          [&](const Concat& c) {
            if (c.children.size() < 2) {
              throw Error(ErrorCode::ArityMismatch, "concat needs at least 2 children");
            }
            for (auto id : c.children) need_expanding(id);
          },
          [&](const Repeat& r) {
            need_expanding(r.child);
            if (r.count < 2) throw Error(ErrorCode::InvalidCount, "repeat count must be >= 2");
          },
          [&](const Template& t) {
            if (t.holes < 1) throw Error(ErrorCode::ArityMismatch, "template needs a hole");
            if (t.body.empty()) throw Error(ErrorCode::ArityMismatch, "empty template body");
            std::vector<bool> seen(t.holes, false);
            for (const auto& s : t.body) {
              if (const auto* h = std::get_if<Hole>(&s)) {
                if (h->index >= t.holes) {
                  throw Error(ErrorCode::ArityMismatch, "hole index out of range");
                }
                seen[h->index] = true;
              } else {
                need_expanding(std::get<ConceptId>(s));
              }
            }
            if (std::find(seen.begin(), seen.end(), false) != seen.end()) {
              throw Error(ErrorCode::ArityMismatch, "template declares an unused hole");
            }
          },
          [&](const Apply& a) {
            need(a.templ);
            const auto* t = std::get_if<Template>(&at(a.templ).kind);
            if (t == nullptr) {
              throw Error(ErrorCode::ArityMismatch,
                          "apply target " + std::to_string(a.templ.value) + " is not a template");
            }
            if (a.fillers.size() != t->holes) {
              throw Error(ErrorCode::ArityMismatch,
                          "apply has " + std::to_string(a.fillers.size()) +
                              " fillers for a " + std::to_string(t->holes) + "-hole template");
            }
            for (auto id : a.fillers) need_expanding(id);
          },
          [&](const Association& a) {
            need(a.first);
            need(a.second);
            if (a.relation) need(*a.relation);
          },
          [&](const AffectPrimitive& a) {
            if (a.sign != 1 && a.sign != -1) {
              throw Error(ErrorCode::InvalidCount, "affect sign must be +1 or -1");
            }
          },
          [&](const Relation& r) {
            if (r.name.empty()) throw Error(ErrorCode::ArityMismatch, "unnamed relation");
            for (auto id : r.instances) need(id);
          },
      },
      kind);
}

TokenSeq ConceptGraph::compute_expansion(const ConceptKind& kind) const {
  return std::visit(
      overloaded{
          [](const Primitive& p) { return TokenSeq{p.token}; },
          [this](const Concat& c) {
            TokenSeq out;
            for (auto id : c.children) {
              const auto& e = expansions_[id.value];
              out.insert(out.end(), e.begin(), e.end());
            }
            return out;
          },
          [this](const Repeat& r) {
            const auto& e = expansions_[r.child.value];
            TokenSeq out;
            out.reserve(e.size() * r.count);
            for (std::uint32_t i = 0; i < r.count; ++i) out.insert(out.end(), e.begin(), e.end());
            return out;
          },
          [this](const Apply& a) {
            const auto& t = std::get<Template>(concepts_[a.templ.value].kind);
            TokenSeq out;
            for (const auto& s : t.body) {
              ConceptId src = std::holds_alternative<Hole>(s)
                                  ? a.fillers[std::get<Hole>(s).index]
                                  : std::get<ConceptId>(s);
              const auto& e = expansions_[src.value];
              out.insert(out.end(), e.begin(), e.end());
            }
            return out;
          },
          [](const auto&) { return TokenSeq{}; },
      },
      kind);
}

void ConceptGraph::index_concept(const Concept& c) {
  by_key_.emplace(structural_key(c.kind), c.id);
}

ConceptId ConceptGraph::add_concept(ConceptKind kind, std::string label) {
  if (auto existing = find(kind)) return *existing;
  check_payload(kind);
  if (concepts_.size() >= std::numeric_limits<std::uint32_t>::max()) {
    throw Error(ErrorCode::TooLarge, "concept id space exhausted");
  }
  Concept c;
  c.id = ConceptId{static_cast<std::uint32_t>(concepts_.size())};
  c.kind = std::move(kind);
  c.weight = 1.0;
  c.created_at = episode_;
  c.label = std::move(label);
  expansions_.push_back(compute_expansion(c.kind));
  index_concept(c);
  concepts_.push_back(std::move(c));
  return concepts_.back().id;
}

std::optional<ConceptId> ConceptGraph::find(const ConceptKind& kind) const {
  auto it = by_key_.find(structural_key(kind));
  if (it == by_key_.end()) return std::nullopt;
  return it->second;
}

void ConceptGraph::set_label(ConceptId id, std::string label) {
  at(id);
  concepts_[id.value].label = std::move(label);
}

std::optional<ConceptId> ConceptGraph::find_label(std::string_view label) const {
  for (const auto& c : concepts_) {
    if (c.label == label) return c.id;
  }
  return std::nullopt;
}

void ConceptGraph::rewrite(ConceptId id, ConceptKind kind) {
  const auto& old = at(id);
  check_payload(kind);
  for (auto ref : references(kind)) {
    if (ref == id) throw Error(ErrorCode::DanglingReference, "self reference");
  }
  const bool was_parseable = is_parseable(id);
  TokenSeq next = compute_expansion(kind);
  if (was_parseable && next != expansions_[id.value]) {
    throw Error(ErrorCode::InvalidDescription, "rewrite would change the expansion of concept " +
                                                   std::to_string(id.value));
  }
  auto it = by_key_.find(structural_key(old.kind));
  if (it != by_key_.end() && it->second == id) by_key_.erase(it);
  concepts_[id.value].kind = std::move(kind);
  by_key_.emplace(structural_key(concepts_[id.value].kind), id);
}

void ConceptGraph::rollback_to(std::size_t new_size) {
  while (concepts_.size() > new_size) {
    const auto& c = concepts_.back();
    auto it = by_key_.find(structural_key(c.kind));
    if (it != by_key_.end() && it->second == c.id) by_key_.erase(it);
    concepts_.pop_back();
    expansions_.pop_back();
  }
}

void ConceptGraph::set_weight(ConceptId id, double w) {
  at(id);
  if (!(w >= 0.0)) throw Error(ErrorCode::InvalidCount, "weight must be non-negative");
  concepts_[id.value].weight = w;
}

void ConceptGraph::tick_weights(const std::set<ConceptId>& used) {
  for (auto& c : concepts_) {
    if (std::holds_alternative<AffectPrimitive>(c.kind)) continue;
    c.weight *= config_.decay;
  }
  for (auto id : used) {
    if (!contains(id)) continue;
    auto& c = concepts_[id.value];
    if (std::holds_alternative<AffectPrimitive>(c.kind)) continue;
    c.weight += 1.0;
  }
}

std::vector<ConceptId> ConceptGraph::fast_path_set() const {
  std::vector<ConceptId> out;
  for (const auto& c : concepts_) {
    if (c.weight >= config_.fast_path_threshold && is_parseable(c.id)) out.push_back(c.id);
  }
  return out;
}

// ---------------------------------------------------------------------------

const RefinementChain& ConceptGraph::chain(std::uint64_t episode) const {
  auto it = chains_.find(episode);
  if (it == chains_.end()) {
    throw Error(ErrorCode::UnknownEpisode, "episode " + std::to_string(episode));
  }
  return it->second;
}

void ConceptGraph::tally_add(const Description& desc, int sign) {
  auto apply = [sign](std::uint64_t& slot, std::uint64_t v) {
    if (sign > 0) {
      slot += v;
    } else {
      slot -= v;
    }
  };
  apply(tally_.fixed_int_bits, gamma_len(desc.size() + 1));
  apply(tally_.coded_nodes, desc.size());
  for (const auto& n : desc.nodes) {
    if (const auto* id = std::get_if<ConceptId>(&n)) {
      auto& cnt = tally_.ref_counts[*id];
      apply(cnt, 1);
      if (cnt == 0) tally_.ref_counts.erase(*id);
    } else {
      const auto& b = std::get<Blob>(n);
      apply(tally_.fixed_int_bits, gamma_len(b.tokens.size()));
      apply(tally_.blob_tokens, b.tokens.size());
    }
  }
}

void ConceptGraph::store_chain(std::uint64_t episode, TokenSeq tokens, Description first) {
  validate(first);
  if (auto it = chains_.find(episode); it != chains_.end()) {
    tally_add(it->second.levels.back(), -1);
    chains_.erase(it);
  }
  tally_add(first, +1);
  RefinementChain chain;
  chain.tokens = std::move(tokens);
  chain.levels.push_back(std::move(first));
  chains_.emplace(episode, std::move(chain));
}

void ConceptGraph::append_level(std::uint64_t episode, Description desc) {
  validate(desc);
  auto it = chains_.find(episode);
  if (it == chains_.end()) {
    throw Error(ErrorCode::UnknownEpisode, "episode " + std::to_string(episode));
  }
  tally_add(it->second.levels.back(), -1);
  tally_add(desc, +1);
  it->second.levels.push_back(std::move(desc));
}

void ConceptGraph::replace_deepest_level(std::uint64_t episode, Description desc) {
  auto it = chains_.find(episode);
  if (it == chains_.end()) {
    throw Error(ErrorCode::UnknownEpisode, "episode " + std::to_string(episode));
  }
  if (reconstruct(desc) != it->second.tokens) {
    throw Error(ErrorCode::InvalidDescription, "replacement does not reconstruct the episode");
  }
  tally_add(it->second.levels.back(), -1);
  tally_add(desc, +1);
  it->second.levels.back() = std::move(desc);
}

void ConceptGraph::drop_deepest_level(std::uint64_t episode) {
  auto it = chains_.find(episode);
  if (it == chains_.end()) {
    throw Error(ErrorCode::UnknownEpisode, "episode " + std::to_string(episode));
  }
  auto& levels = it->second.levels;
  if (levels.size() < 2) return;
  tally_add(levels.back(), -1);
  levels.pop_back();
  tally_add(levels.back(), +1);
}

void ConceptGraph::validate(const Description& desc) const {
  for (const auto& n : desc.nodes) {
    if (const auto* id = std::get_if<ConceptId>(&n)) {
      if (!contains(*id) || !is_parseable(*id)) {
        throw Error(ErrorCode::InvalidDescription,
                    "reference to non-expanding concept " + std::to_string(id->value));
      }
    } else {
      const auto& b = std::get<Blob>(n);
      if (b.tokens.empty()) throw Error(ErrorCode::InvalidDescription, "empty blob");
      for (Token t : b.tokens) {
        if (t >= alphabet_.size()) {
          throw Error(ErrorCode::InvalidDescription, "blob token outside alphabet");
        }
      }
    }
  }
}

TokenSeq ConceptGraph::reconstruct(const Description& desc) const {
  validate(desc);
  TokenSeq out;
  for (const auto& n : desc.nodes) {
    if (const auto* id = std::get_if<ConceptId>(&n)) {
      const auto& e = expansions_[id->value];
      out.insert(out.end(), e.begin(), e.end());
    } else {
      const auto& b = std::get<Blob>(n).tokens;
      out.insert(out.end(), b.begin(), b.end());
    }
  }
  return out;
}

bool ConceptGraph::operator==(const ConceptGraph& other) const {
  if (!(alphabet_ == other.alphabet_) || !(config_ == other.config_)) return false;
  if (concepts_.size() != other.concepts_.size()) return false;
  for (std::size_t i = 0; i < concepts_.size(); ++i) {
    const auto& a = concepts_[i];
    const auto& b = other.concepts_[i];
    if (a.id != b.id || !(a.kind == b.kind) || a.weight != b.weight ||
        a.created_at != b.created_at || a.label != b.label) {
      return false;
    }
  }
  return pleasure_ == other.pleasure_ && pain_ == other.pain_ &&
         assoc_counts_ == other.assoc_counts_ && run_evidence_ == other.run_evidence_ &&
         episode_ == other.episode_ && chains_ == other.chains_;
}

ConceptGraph ConceptGraph::from_raw(Alphabet alphabet, Config config, RawState state) {
  ConceptGraph g(std::move(alphabet), std::move(config));
  const std::size_t builtin = g.concepts_.size();
  if (state.concepts.size() < builtin) {
    throw Error(ErrorCode::CorruptFile, "missing builtin concepts");
  }
  for (std::size_t i = 0; i < builtin; ++i) {
    const auto& c = state.concepts[i];
    if (c.id.value != i || !(c.kind == g.concepts_[i].kind)) {
      throw Error(ErrorCode::CorruptFile, "builtin concept mismatch at id " + std::to_string(i));
    }
    g.concepts_[i].weight = c.weight;
    g.concepts_[i].created_at = c.created_at;
    g.concepts_[i].label = c.label;
  }
  // Rewritten concepts may reference later ids (templates introduced by
  // abstraction), so insert everything first and compute expansions after.
  for (std::size_t i = builtin; i < state.concepts.size(); ++i) {
    auto c = state.concepts[i];
    if (c.id.value != i) throw Error(ErrorCode::CorruptFile, "ids must be dense and ascending");
    for (auto ref : references(c.kind)) {
      if (ref.value >= state.concepts.size() || ref.value == i) {
        throw Error(ErrorCode::CorruptFile, "dangling reference in concept " + std::to_string(i));
      }
    }
    g.concepts_.push_back(std::move(c));
    g.expansions_.emplace_back();
  }
  // Resolve expansions in dependency order; a cycle means a corrupt file.
  std::vector<int> state_mark(g.concepts_.size(), 0);
  std::vector<std::pair<std::uint32_t, std::size_t>> stack;
  for (std::uint32_t root = static_cast<std::uint32_t>(builtin); root < g.concepts_.size(); ++root) {
    if (state_mark[root] == 2) continue;
    stack.push_back({root, 0});
    state_mark[root] = 1;
    while (!stack.empty()) {
      auto& [cur, next] = stack.back();
      auto refs = references(g.concepts_[cur].kind);
      if (next < refs.size()) {
        auto child = refs[next++].value;
        if (state_mark[child] == 1) throw Error(ErrorCode::CorruptFile, "reference cycle");
        if (state_mark[child] == 0) {
          state_mark[child] = 1;
          stack.push_back({child, 0});
        }
        continue;
      }
      const auto& kind = g.concepts_[cur].kind;
      // Validate against the (now complete) referenced concepts.
      try {
        g.check_payload(kind);
      } catch (const Error& e) {
        throw Error(ErrorCode::CorruptFile, e.what());
      }
      g.expansions_[cur] = g.compute_expansion(kind);
      state_mark[cur] = 2;
      stack.pop_back();
    }
  }
  for (std::size_t i = builtin; i < g.concepts_.size(); ++i) g.index_concept(g.concepts_[i]);
  g.assoc_counts_ = std::move(state.assoc_counts);
  g.run_evidence_ = std::move(state.run_evidence);
  g.episode_ = state.episode;
  for (auto& [ep, chain] : state.chains) {
    if (chain.levels.empty()) throw Error(ErrorCode::CorruptFile, "empty refinement chain");
    for (const auto& level : chain.levels) {
      try {
        g.validate(level);
      } catch (const Error& e) {
        throw Error(ErrorCode::CorruptFile, e.what());
      }
      if (g.reconstruct(level) != chain.tokens) {
        throw Error(ErrorCode::CorruptFile, "stored description does not reconstruct its episode");
      }
    }
    g.tally_add(chain.levels.back(), +1);
    g.chains_.emplace(ep, std::move(chain));
  }
  return g;
}

}  // namespace cgraph
