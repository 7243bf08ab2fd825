#include "cgraph/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <unordered_map>
#include <vector>

#include "cgraph/concept_graph.hpp"
#include "cgraph/error.hpp"
#include "cgraph/mdl.hpp"

namespace cgraph {

namespace {

// With every weight at 1 the code table depends only on the number of rules,
// so a description's cost depends only on its shape and on the smallest
// grammar that can build its distinct multi-token references. The search
// therefore enumerates descriptions directly and prices each against the
// minimal closed rule set that supports it.

using Str = std::string;  // one char per token

struct Prices {
  double model = 0.0;  // model_dl of any grammar with this many binary rules
  double ref = 0.0;
  double escape = 0.0;
};

class Oracle {
 public:
  Oracle(const TokenSeq& tokens, std::size_t sigma) : sigma_(sigma) {
    for (Token t : tokens) text_.push_back(static_cast<char>(t));
    std::string symbols;
    for (std::size_t i = 0; i < sigma; ++i) symbols.push_back(static_cast<char>('a' + i));
    for (std::size_t r = 0; r <= kOracleMaxRules; ++r) {
      ConceptGraph g{Alphabet(symbols), Config{}};
      ConceptId last = g.primitive(0);
      for (std::size_t i = 0; i < r; ++i) last = g.add_concept(Concat{{last, g.primitive(0)}});
      auto code = CodeTable::of(g);
      prices_[r] = {model_dl(g, code), code.ref_cost_for_weight(1.0), code.escape_cost()};
    }
    lg_sigma_ = std::log2(static_cast<double>(sigma));
  }

  double run() {
    walk(0);
    return best_;
  }

 private:
  double blob_fixed(std::size_t len) const {
    return static_cast<double>(gamma_len(len)) + static_cast<double>(len) * lg_sigma_;
  }

  // Smallest set of rule expansions containing `used` in which every member
  // splits into two parts that are primitives or members.
  std::size_t closure_size(std::vector<Str> used) {
    std::sort(used.begin(), used.end());
    Str key;
    for (const auto& u : used) key += u + '\xff';
    if (auto it = closure_memo_.find(key); it != closure_memo_.end()) return it->second;
    std::size_t best = kInfeasible;
    close(used, 0, best);
    closure_memo_.emplace(key, best);
    return best;
  }

  void close(std::vector<Str>& set, std::size_t next, std::size_t& best) {
    if (set.size() > kOracleMaxRules || set.size() >= best) return;
    if (next == set.size()) {
      best = set.size();
      return;
    }
    const Str cur = set[next];
    for (std::size_t cut = 1; cut < cur.size(); ++cut) {
      const std::size_t before = set.size();
      for (Str part : {cur.substr(0, cut), cur.substr(cut)}) {
        if (part.size() >= 2 && std::find(set.begin(), set.end(), part) == set.end()) {
          set.push_back(std::move(part));
        }
      }
      close(set, next + 1, best);
      set.resize(before);
    }
  }

  void finish() {
    const std::size_t rules = closure_size(used_);
    if (rules == kInfeasible) return;
    const auto& p = prices_[rules];
    const double cost = p.model + static_cast<double>(gamma_len(nodes_ + 1)) +
                        static_cast<double>(refs_) * p.ref +
                        static_cast<double>(blobs_) * p.escape + blob_fixed_;
    best_ = std::min(best_, cost);
  }

  void walk(std::size_t pos) {
    if (pos == text_.size()) {
      finish();
      return;
    }
    for (std::size_t end = pos + 1; end <= text_.size(); ++end) {
      const std::size_t len = end - pos;
      // Reference.
      Str piece = text_.substr(pos, len);
      const bool fresh =
          len >= 2 && std::find(used_.begin(), used_.end(), piece) == used_.end();
      if (!fresh || used_.size() < kOracleMaxRules) {
        if (fresh) used_.push_back(piece);
        ++nodes_;
        ++refs_;
        last_blob_.push_back(false);
        walk(end);
        last_blob_.pop_back();
        --refs_;
        --nodes_;
        if (fresh) used_.pop_back();
      }
      // Blob; adjacent blobs are never better than one merged blob.
      if (last_blob_.empty() || !last_blob_.back()) {
        ++nodes_;
        ++blobs_;
        blob_fixed_ += blob_fixed(len);
        last_blob_.push_back(true);
        walk(end);
        last_blob_.pop_back();
        blob_fixed_ -= blob_fixed(len);
        --blobs_;
        --nodes_;
      }
    }
  }

  static constexpr std::size_t kInfeasible = std::numeric_limits<std::size_t>::max();

  std::size_t sigma_;
  double lg_sigma_ = 0.0;
  Str text_;
  std::array<Prices, kOracleMaxRules + 1> prices_{};
  std::unordered_map<Str, std::size_t> closure_memo_;

  std::vector<Str> used_;
  std::vector<bool> last_blob_;
  std::size_t nodes_ = 0, refs_ = 0, blobs_ = 0;
  double blob_fixed_ = 0.0;
  double best_ = std::numeric_limits<double>::infinity();
};

}  // namespace

double mdl_oracle(const TokenSeq& tokens, std::size_t sigma_size) {
  if (tokens.size() > kOracleMaxTokens || sigma_size > kOracleMaxSigma) {
    throw Error(ErrorCode::TooLarge, "oracle handles at most " + std::to_string(kOracleMaxTokens) +
                                         " tokens over " + std::to_string(kOracleMaxSigma) +
                                         " symbols");
  }
  if (sigma_size == 0) throw Error(ErrorCode::InvalidConfig, "empty alphabet");
  for (Token t : tokens) {
    if (t >= sigma_size) throw Error(ErrorCode::UnknownToken, "token outside alphabet");
  }
  if (tokens.empty()) return static_cast<double>(gamma_len(1));
  return Oracle(tokens, sigma_size).run();
}

}  // namespace cgraph
