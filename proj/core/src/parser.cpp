#include "cgraph/parser.hpp"

#include <algorithm>
#include <cstring>
#include <limits>

#include "cgraph/error.hpp"
#include "cgraph/mdl.hpp"

namespace cgraph {

std::size_t Budget::beam(const Config& cfg) const {
  return static_cast<std::size_t>(cfg.base_beam) << std::min<std::uint32_t>(level, 20);
}

std::size_t Budget::pool(const Config& cfg) const {
  return static_cast<std::size_t>(cfg.base_pool) << std::min<std::uint32_t>(level, 20);
}

namespace {

std::string bytes_of(const Token* data, std::size_t len) {
  std::string key(len * sizeof(Token), '\0');
  std::memcpy(key.data(), data, key.size());
  return key;
}

bool node_less(const DescNode& a, const DescNode& b) {
  const auto* ia = std::get_if<ConceptId>(&a);
  const auto* ib = std::get_if<ConceptId>(&b);
  if (ia && ib) return *ia < *ib;
  if (ia || ib) return ia != nullptr;
  return std::get<Blob>(a).tokens < std::get<Blob>(b).tokens;
}

}  // namespace

bool description_less(const Description& a, const Description& b) {
  return std::lexicographical_compare(a.nodes.begin(), a.nodes.end(), b.nodes.begin(),
                                      b.nodes.end(), node_less);
}

FastPathIndex::FastPathIndex(const ConceptGraph& g) : members_(g.fast_path_set()) {
  for (auto id : members_) {
    const auto& e = g.expansion(id);
    by_expansion_[bytes_of(e.data(), e.size())].push_back(id);
    lengths_.push_back(e.size());
  }
  std::sort(lengths_.begin(), lengths_.end());
  lengths_.erase(std::unique(lengths_.begin(), lengths_.end()), lengths_.end());
}

void FastPathIndex::matches(const TokenSeq& tokens, std::size_t pos,
                            std::vector<ConceptId>& out) const {
  for (auto len : lengths_) {
    if (pos + len > tokens.size()) break;
    auto it = by_expansion_.find(bytes_of(tokens.data() + pos, len));
    if (it != by_expansion_.end()) out.insert(out.end(), it->second.begin(), it->second.end());
  }
}

namespace {

constexpr std::uint32_t kBlobStart = std::numeric_limits<std::uint32_t>::max();
constexpr std::uint32_t kBlobExtend = kBlobStart - 1;

struct Step {
  std::int64_t parent;  // -1 for the root
  std::uint32_t what;   // concept id, kBlobStart or kBlobExtend
  std::uint32_t end;    // position after this step
};

struct State {
  double cost;  // excludes the gamma_len(k+1) node-count term
  std::uint32_t nodes;
  std::uint32_t blob_len;  // length of a trailing blob, 0 if last node is a ref
  std::int64_t step;
};

class BeamParser {
 public:
  BeamParser(const ConceptGraph& g, const TokenSeq& tokens, Budget budget,
             const ParseOptions& options)
      : g_(g),
        tokens_(tokens),
        options_(options),
        code_(CodeTable::of(g)),
        beam_(budget.beam(g.config())),
        sigma_(g.alphabet().size()) {
    build_candidates(budget.pool(g.config()));
  }

  Description run() {
    const std::size_t n = tokens_.size();
    std::vector<std::vector<State>> at(n + 1);
    at[0].push_back({0.0, 0, 0, -1});
    std::vector<ConceptId> cands;
    for (std::size_t pos = 0; pos < n; ++pos) {
      prune(at[pos]);
      if (at[pos].empty()) continue;
      candidates_at(pos, cands);
      for (const auto& s : at[pos]) {
        for (auto id : cands) {
          auto len = g_.expansion(id).size();
          steps_.push_back({s.step, id.value, static_cast<std::uint32_t>(pos + len)});
          at[pos + len].push_back({s.cost + ref_cost_[id.value], s.nodes + 1, 0,
                                   static_cast<std::int64_t>(steps_.size() - 1)});
        }
        if (s.blob_len == 0) {
          steps_.push_back({s.step, kBlobStart, static_cast<std::uint32_t>(pos + 1)});
          at[pos + 1].push_back({s.cost + blob_cost(code_, 1, sigma_), s.nodes + 1, 1,
                                 static_cast<std::int64_t>(steps_.size() - 1)});
        } else {
          double delta = blob_cost(code_, s.blob_len + 1, sigma_) -
                         blob_cost(code_, s.blob_len, sigma_);
          steps_.push_back({s.step, kBlobExtend, static_cast<std::uint32_t>(pos + 1)});
          at[pos + 1].push_back({s.cost + delta, s.nodes, s.blob_len + 1,
                                 static_cast<std::int64_t>(steps_.size() - 1)});
        }
      }
      at[pos].clear();
      at[pos].shrink_to_fit();
    }
    prune(at[n]);

    std::vector<Description> finals;
    for (const auto& s : at[n]) finals.push_back(materialize(s.step));
    if (n > 0) finals.push_back(Description{{Blob{tokens_}}});
    for (const auto& extra : options_.extra_candidates) {
      if (g_.reconstruct(extra) != tokens_) {
        throw Error(ErrorCode::InvalidDescription, "extra candidate does not reconstruct input");
      }
      finals.push_back(extra);
    }
    if (finals.empty()) return Description{};

    std::size_t best = 0;
    double best_cost = description_dl(g_, code_, finals[0]);
    for (std::size_t i = 1; i < finals.size(); ++i) {
      double c = description_dl(g_, code_, finals[i]);
      if (c < best_cost || (c == best_cost && better_tie(finals[i], finals[best]))) {
        best = i;
        best_cost = c;
      }
    }
    return finals[best];
  }

 private:
  static bool better_tie(const Description& a, const Description& b) {
    if (description_less(a, b)) return true;
    if (description_less(b, a)) return false;
    return a.size() < b.size();
  }

  void build_candidates(std::size_t pool_size) {
    ref_cost_.assign(g_.size(), 0.0);
    std::vector<ConceptId> parseable;
    for (const auto& c : g_.concepts()) {
      if (!g_.is_parseable(c.id)) continue;
      parseable.push_back(c.id);
      ref_cost_[c.id.value] = code_.ref_cost_for_weight(c.weight);
    }
    std::stable_sort(parseable.begin(), parseable.end(), [this](ConceptId a, ConceptId b) {
      double wa = g_.at(a).weight, wb = g_.at(b).weight;
      if (wa != wb) return wa > wb;
      return a < b;
    });
    if (parseable.size() > pool_size) parseable.resize(pool_size);
    by_first_.assign(sigma_, {});
    for (auto id : parseable) by_first_[g_.expansion(id).front()].push_back(id);

    if (options_.use_fast_path_index) {
      index_.emplace(g_);
    } else {
      fast_members_ = g_.fast_path_set();
    }
  }

  bool prefix_match(ConceptId id, std::size_t pos) const {
    const auto& e = g_.expansion(id);
    if (pos + e.size() > tokens_.size()) return false;
    return std::equal(e.begin(), e.end(), tokens_.begin() + static_cast<std::ptrdiff_t>(pos));
  }

  void candidates_at(std::size_t pos, std::vector<ConceptId>& out) const {
    out.clear();
    if (index_) {
      index_->matches(tokens_, pos, out);
    } else {
      for (auto id : fast_members_) {
        if (prefix_match(id, pos)) out.push_back(id);
      }
    }
    for (auto id : by_first_[tokens_[pos]]) {
      if (prefix_match(id, pos)) out.push_back(id);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
  }

  Description materialize(std::int64_t step) const {
    std::vector<const Step*> path;
    for (auto s = step; s >= 0; s = steps_[static_cast<std::size_t>(s)].parent) {
      path.push_back(&steps_[static_cast<std::size_t>(s)]);
    }
    Description d;
    for (auto it = path.rbegin(); it != path.rend(); ++it) {
      const Step& st = **it;
      if (st.what == kBlobStart) {
        d.nodes.push_back(Blob{{tokens_[st.end - 1]}});
      } else if (st.what == kBlobExtend) {
        std::get<Blob>(d.nodes.back()).tokens.push_back(tokens_[st.end - 1]);
      } else {
        d.nodes.push_back(ConceptId{st.what});
      }
    }
    return d;
  }

  // Same order as a stable sort on (cost, better_tie), but each tied state is
  // materialized once instead of once per comparison.
  void prune(std::vector<State>& states) const {
    if (states.size() <= 1) return;
    std::stable_sort(states.begin(), states.end(),
                     [](const State& a, const State& b) { return a.cost < b.cost; });
    std::size_t kept = 0;
    for (std::size_t i = 0; i < states.size() && kept < beam_;) {
      std::size_t j = i + 1;
      while (j < states.size() && states[j].cost == states[i].cost) ++j;
      if (j - i > 1) {
        std::vector<std::pair<Description, State>> tied;
        tied.reserve(j - i);
        for (std::size_t k = i; k < j; ++k) tied.emplace_back(materialize(states[k].step), states[k]);
        std::stable_sort(tied.begin(), tied.end(), [](const auto& a, const auto& b) {
          return better_tie(a.first, b.first);
        });
        for (std::size_t k = i; k < j; ++k) states[k] = tied[k - i].second;
      }
      kept += j - i;
      i = j;
    }
    if (states.size() > beam_) states.resize(beam_);
  }

  const ConceptGraph& g_;
  const TokenSeq& tokens_;
  const ParseOptions& options_;
  CodeTable code_;
  std::size_t beam_;
  std::size_t sigma_;
  std::vector<double> ref_cost_;
  std::vector<std::vector<ConceptId>> by_first_;
  std::optional<FastPathIndex> index_;
  std::vector<ConceptId> fast_members_;
  std::vector<Step> steps_;
};

}  // namespace

Description parse(const ConceptGraph& g, const TokenSeq& tokens, Budget budget,
                  const ParseOptions& options) {
  for (Token t : tokens) {
    if (t >= g.alphabet().size()) {
      throw Error(ErrorCode::UnknownToken, "token " + std::to_string(t) + " outside alphabet");
    }
  }
  if (tokens.empty()) return Description{};
  return BeamParser(g, tokens, budget, options).run();
}

}  // namespace cgraph
