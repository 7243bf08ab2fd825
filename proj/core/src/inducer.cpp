#include "cgraph/inducer.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <tuple>

#include "cgraph/error.hpp"

namespace cgraph {

namespace {

// Strict-decrease slack absorbing floating-point noise in re-summed costs.
constexpr double kGainEpsilon = 1e-9;
constexpr double kForgetWeight = 1.0 / (1 << 20);

using Pair = std::pair<ConceptId, ConceptId>;

struct Run {
  ConceptId unit;
  std::uint32_t length;
};

const ConceptId* ref_at(const Description& d, std::size_t i) {
  return std::get_if<ConceptId>(&d.nodes[i]);
}

// Non-overlapping occurrence counts of adjacent reference pairs.
std::map<Pair, std::uint32_t> count_digrams(const Description& d) {
  std::map<Pair, std::uint32_t> counts;
  std::map<Pair, std::size_t> last_end;
  for (std::size_t i = 0; i + 1 < d.size(); ++i) {
    const auto* a = ref_at(d, i);
    const auto* b = ref_at(d, i + 1);
    if (!a || !b) continue;
    Pair p{*a, *b};
    auto it = last_end.find(p);
    if (it != last_end.end() && it->second >= i) continue;
    ++counts[p];
    last_end[p] = i + 1;
  }
  return counts;
}

// Blobs spelled out as primitive references, so repeats hidden inside a blob
// can still be proposed. The re-parse after a rewrite folds them back.
Description explode(const Description& d) {
  Description out;
  for (const auto& n : d.nodes) {
    if (const auto* b = std::get_if<Blob>(&n)) {
      for (Token t : b->tokens) out.nodes.emplace_back(ConceptId{t});
    } else {
      out.nodes.push_back(n);
    }
  }
  return out;
}

std::vector<Run> maximal_runs(const Description& d) {
  std::vector<Run> runs;
  std::size_t i = 0;
  while (i < d.size()) {
    const auto* a = ref_at(d, i);
    std::size_t j = i + 1;
    if (a) {
      while (j < d.size() && ref_at(d, j) && *ref_at(d, j) == *a) ++j;
      if (j - i >= 2) runs.push_back({*a, static_cast<std::uint32_t>(j - i)});
    }
    i = j;
  }
  return runs;
}

Description rewrite_pairs(const Description& d, Pair p, ConceptId with) {
  Description out;
  std::size_t i = 0;
  while (i < d.size()) {
    if (i + 1 < d.size()) {
      const auto* a = ref_at(d, i);
      const auto* b = ref_at(d, i + 1);
      if (a && b && *a == p.first && *b == p.second) {
        out.nodes.emplace_back(with);
        i += 2;
        continue;
      }
    }
    out.nodes.push_back(d.nodes[i]);
    ++i;
  }
  return out;
}

Description rewrite_runs(const Description& d, Run run, ConceptId with) {
  Description out;
  std::size_t i = 0;
  while (i < d.size()) {
    const auto* a = ref_at(d, i);
    if (a && *a == run.unit) {
      std::size_t j = i + 1;
      while (j < d.size() && ref_at(d, j) && *ref_at(d, j) == run.unit) ++j;
      if (j - i == run.length) {
        out.nodes.emplace_back(with);
      } else {
        out.nodes.insert(out.nodes.end(), d.nodes.begin() + static_cast<std::ptrdiff_t>(i),
                         d.nodes.begin() + static_cast<std::ptrdiff_t>(j));
      }
      i = j;
      continue;
    }
    out.nodes.push_back(d.nodes[i]);
    ++i;
  }
  return out;
}

Template number_template(std::uint32_t k) {
  return Template{std::vector<Slot>(k, Slot{Hole{0}}), 1};
}

void notify(const InductionOptions& o, std::string_view rule, bool gated, double before,
            double after) {
  if (o.observer) o.observer(rule, gated, before, after);
}

// Stored episodes whose deepest level was rewritten by a tentative concept,
// with the description to put back if the concept is rejected.
using MemoryUndo = std::vector<std::pair<std::uint64_t, Description>>;

void rewrite_memory(ConceptGraph& g, Pair p, ConceptId with, MemoryUndo& undo) {
  std::vector<std::pair<std::uint64_t, Description>> changed;
  for (const auto& [ep, chain] : g.chains()) {
    const auto& tail = chain.levels.back();
    bool found = false;
    for (std::size_t i = 0; i + 1 < tail.size() && !found; ++i) {
      const auto* a = ref_at(tail, i);
      const auto* b = ref_at(tail, i + 1);
      found = a && b && *a == p.first && *b == p.second;
    }
    if (!found) continue;
    Description next = rewrite_pairs(tail, p, with);
    if (next.size() != tail.size()) changed.emplace_back(ep, std::move(next));
  }
  for (auto& [ep, next] : changed) {
    undo.emplace_back(ep, g.chain(ep).levels.back());
    g.replace_deepest_level(ep, std::move(next));
  }
}

void restore_memory(ConceptGraph& g, MemoryUndo& undo) {
  for (auto it = undo.rbegin(); it != undo.rend(); ++it) {
    g.replace_deepest_level(it->first, std::move(it->second));
  }
  undo.clear();
}

// Best level-0 parse of the same tokens, with desc itself as a candidate so
// the result is never worse.
Description reparse(const ConceptGraph& g, const Description& desc,
                    const InductionOptions& options) {
  ParseOptions popts;
  popts.use_fast_path_index = options.use_fast_path_index;
  popts.extra_candidates.push_back(desc);
  return parse(g, g.reconstruct(desc), Budget{0}, popts);
}

// Adds `kind`, rewrites the description with `rewrite`, and keeps both only if
// the objective strictly drops.
template <class Rewrite>
std::optional<ConceptId> try_candidate(ConceptGraph& g, Description& desc, ConceptKind kind,
                                       Rewrite rewrite, std::string_view rule,
                                       const InductionOptions& options,
                                       std::optional<Pair> memory_pair = std::nullopt) {
  const double before = induction_objective(g, desc);
  const std::size_t size0 = g.size();
  ConceptId id = g.add_concept(std::move(kind));
  MemoryUndo undo;
  if (memory_pair && id.value >= size0) rewrite_memory(g, *memory_pair, id, undo);
  Description next = reparse(g, rewrite(desc, id), options);
  const double after = induction_objective(g, next);
  if (after < before - kGainEpsilon) {
    desc = std::move(next);
    notify(options, rule, true, before, after);
    return id;
  }
  restore_memory(g, undo);
  g.rollback_to(size0);
  return std::nullopt;
}

// A digram that does not pay for itself may still pay together with the most
// frequent digram it then takes part in ("ab" then "(ab)c"). Both concepts are
// kept only if the pair lowers the objective.
bool try_digram_chain(ConceptGraph& g, Description& desc, Pair p, std::uint32_t r,
                      const InductionOptions& options) {
  const double before = induction_objective(g, desc);
  const std::size_t size0 = g.size();
  const ConceptId first = g.add_concept(Concat{{p.first, p.second}});
  MemoryUndo undo;
  if (first.value >= size0) rewrite_memory(g, p, first, undo);
  Description mid = rewrite_pairs(explode(desc), p, first);
  std::optional<std::pair<Pair, std::uint32_t>> next;
  for (const auto& [q, count] : count_digrams(mid)) {
    if (count < r || (q.first != first && q.second != first)) continue;
    if (!next || count > next->second) next.emplace(q, count);
  }
  if (next) {
    const std::size_t size1 = g.size();
    const ConceptId second = g.add_concept(Concat{{next->first.first, next->first.second}});
    if (second.value >= size1) rewrite_memory(g, next->first, second, undo);
    Description out = reparse(g, rewrite_pairs(mid, next->first, second), options);
    const double after = induction_objective(g, out);
    if (after < before - kGainEpsilon) {
      desc = std::move(out);
      notify(options, "digram-chain", true, before, after);
      return true;
    }
  }
  restore_memory(g, undo);
  g.rollback_to(size0);
  return false;
}

void record_run_evidence(ConceptGraph& g, const std::vector<Run>& runs) {
  for (const auto& r : runs) g.run_evidence()[r.length].try_emplace(r.unit, g.episode());
}

// Creates NUM_k once runs of length k have been seen for m distinct concepts
// in m distinct episodes; existing Repeat(c, k) concepts become
// Apply(NUM_k, [c]).
std::vector<ConceptId> generalize_numbers(ConceptGraph& g, const Description& desc,
                                          const InductionOptions& options) {
  std::vector<ConceptId> created;
  const auto m = g.config().generalization_threshold;
  for (const auto& [k, seen] : g.run_evidence()) {
    if (seen.size() < m || g.find(number_template(k))) continue;
    std::set<std::uint64_t> episodes;
    for (const auto& [c, ep] : seen) episodes.insert(ep);
    if (episodes.size() < m) continue;
    const double before = induction_objective(g, desc);
    ConceptId num = g.add_concept(number_template(k), number_label(k));
    created.push_back(num);
    for (std::uint32_t i = 0; i < num.value; ++i) {
      const auto* rep = std::get_if<Repeat>(&g.at(ConceptId{i}).kind);
      if (rep && rep->count == k) g.rewrite(ConceptId{i}, Apply{num, {rep->child}});
    }
    notify(options, "number", false, before, induction_objective(g, desc));
  }
  return created;
}

}  // namespace

std::string number_label(std::uint32_t k) { return "NUM_" + std::to_string(k); }

double induction_objective(const ConceptGraph& g, const Description& current) {
  auto code = CodeTable::of(g);
  return model_dl(g, code) + stored_dl(g, code) + description_dl(g, code, current);
}

std::vector<ConceptId> induce_repeats(ConceptGraph& g, Description& desc,
                                      const InductionOptions& options) {
  std::vector<ConceptId> created;
  const auto r = g.config().repeat_threshold;
  auto note = [&](ConceptId id, std::size_t size0) {
    if (id.value >= size0) created.push_back(id);
  };

  std::map<Pair, std::uint32_t> history;
  for (;;) {
    auto runs = maximal_runs(desc);
    record_run_evidence(g, runs);
    for (auto id : generalize_numbers(g, desc, options)) created.push_back(id);

    // Runs whose number template exists are rewritten unconditionally.
    bool forced = false;
    for (const auto& run : runs) {
      auto num = g.find(number_template(run.length));
      if (!num) continue;
      const double before = induction_objective(g, desc);
      const std::size_t size0 = g.size();
      ConceptId id = g.add_concept(Apply{*num, {run.unit}});
      note(id, size0);
      desc = rewrite_runs(desc, run, id);
      notify(options, "number-apply", false, before, induction_objective(g, desc));
      forced = true;
      break;
    }
    if (forced) continue;

    const Description view = explode(desc);
    std::vector<std::pair<Pair, std::uint32_t>> digrams;
    const auto current = count_digrams(view);
    for (const auto& [p, count] : current) {
      auto& h = history[p];
      h = std::max(h, count);
      if (count >= r) digrams.emplace_back(p, count);
    }
    std::stable_sort(digrams.begin(), digrams.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    // Pairs an earlier rewrite broke up are still worth a try: the re-parse
    // may realign the episode around them.
    std::vector<std::pair<Pair, std::uint32_t>> earlier;
    for (const auto& [p, count] : history) {
      if (count >= r && !current.count(p) && !g.find(Concat{{p.first, p.second}})) {
        earlier.emplace_back(p, count);
      }
    }
    std::stable_sort(earlier.begin(), earlier.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    digrams.insert(digrams.end(), earlier.begin(), earlier.end());

    bool accepted = false;
    for (const auto& [p, count] : digrams) {
      const std::size_t size0 = g.size();
      auto id = try_candidate(
          g, desc, Concat{{p.first, p.second}},
          [p](const Description& d, ConceptId with) { return rewrite_pairs(explode(d), p, with); },
          "digram", options, p);
      if (id) {
        note(*id, size0);
        accepted = true;
        break;
      }
    }
    if (accepted) continue;

    runs = maximal_runs(view);
    std::stable_sort(runs.begin(), runs.end(), [](const Run& a, const Run& b) {
      if (a.length != b.length) return a.length > b.length;
      return a.unit < b.unit;
    });
    for (const auto& run : runs) {
      const std::size_t size0 = g.size();
      auto id = try_candidate(
          g, desc, Repeat{run.unit, run.length},
          [run](const Description& d, ConceptId with) { return rewrite_runs(explode(d), run, with); },
          "run", options);
      if (id) {
        note(*id, size0);
        accepted = true;
        break;
      }
    }
    if (accepted) continue;

    for (const auto& [p, count] : digrams) {
      const std::size_t size0 = g.size();
      if (try_digram_chain(g, desc, p, r, options)) {
        for (std::size_t i = size0; i < g.size(); ++i) {
          created.push_back(ConceptId{static_cast<std::uint32_t>(i)});
        }
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
  }
  return created;
}

std::vector<ConceptId> abstract_common(ConceptGraph& g, const Description* current,
                                       const InductionOptions& options) {
  std::vector<ConceptId> created;
  const Description empty;
  const Description& desc = current ? *current : empty;
  const auto m = g.config().generalization_threshold;

  using GroupKey = std::tuple<std::size_t, std::size_t, std::vector<std::uint32_t>>;
  std::set<GroupKey> rejected;
  for (;;) {
    std::map<GroupKey, std::vector<ConceptId>> groups;
    for (const auto& c : g.concepts()) {
      const auto* cat = std::get_if<Concat>(&c.kind);
      if (!cat) continue;
      const auto n = cat->children.size();
      for (std::size_t i = 0; i < n; ++i) {
        std::vector<std::uint32_t> masked;
        masked.reserve(n);
        for (std::size_t j = 0; j < n; ++j) {
          masked.push_back(j == i ? std::numeric_limits<std::uint32_t>::max()
                                  : cat->children[j].value);
        }
        groups[{n, i, std::move(masked)}].push_back(c.id);
      }
    }

    bool accepted = false;
    for (const auto& [key, members] : groups) {
      if (members.size() < m || rejected.count(key)) continue;
      const auto& [n, hole_at, masked] = key;
      Template tpl;
      tpl.holes = 1;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == hole_at) {
          tpl.body.emplace_back(Hole{0});
        } else {
          tpl.body.emplace_back(ConceptId{masked[j]});
        }
      }
      const double before = induction_objective(g, desc);
      const std::size_t size0 = g.size();
      ConceptId t = g.add_concept(tpl);
      std::vector<std::pair<ConceptId, ConceptKind>> undo;
      for (auto id : members) {
        undo.emplace_back(id, g.at(id).kind);
        ConceptId differing = std::get<Concat>(g.at(id).kind).children[hole_at];
        g.rewrite(id, Apply{t, {differing}});
      }
      const double after = induction_objective(g, desc);
      if (after < before - kGainEpsilon) {
        if (t.value >= size0) created.push_back(t);
        notify(options, "abstract", true, before, after);
        accepted = true;
        break;
      }
      for (auto& [id, kind] : undo) g.rewrite(id, std::move(kind));
      g.rollback_to(size0);
      rejected.insert(key);
    }
    if (!accepted) break;
  }
  return created;
}

std::vector<std::pair<ConceptId, ConceptId>> record_associations(
    ConceptGraph& g, std::span<const ConceptId> sequence) {
  std::vector<Pair> reified;
  const auto& cfg = g.config();
  for (std::size_t i = 0; i + 1 < sequence.size(); ++i) {
    Pair p{sequence[i], sequence[i + 1]};
    g.at(p.first);
    g.at(p.second);
    auto& count = g.assoc_counts()[p];
    ++count;
    if (count != cfg.association_threshold) continue;
    auto follows = g.find(Relation{"follows", {}});
    Association a{p.first, p.second, follows};
    if (g.find(a)) continue;
    g.add_concept(a);
    reified.push_back(p);
  }

  if (!g.find(Relation{"follows", {}})) {
    std::vector<ConceptId> assocs;
    for (const auto& c : g.concepts()) {
      if (std::holds_alternative<Association>(c.kind)) assocs.push_back(c.id);
    }
    if (assocs.size() >= cfg.generalization_threshold) {
      g.add_concept(Relation{"follows", std::move(assocs)}, "FOLLOWS");
    }
  }
  return reified;
}

std::vector<std::pair<ConceptId, ConceptId>> record_associations(ConceptGraph& g,
                                                                 const Description& desc,
                                                                 std::optional<int> outcome) {
  std::vector<Pair> out;
  std::vector<ConceptId> run;
  auto flush = [&] {
    auto got = record_associations(g, run);
    out.insert(out.end(), got.begin(), got.end());
    run.clear();
  };
  for (const auto& n : desc.nodes) {
    if (const auto* id = std::get_if<ConceptId>(&n)) {
      run.push_back(*id);
    } else {
      flush();
    }
  }
  if (outcome && !run.empty()) run.push_back(*outcome > 0 ? g.pleasure() : g.pain());
  flush();
  return out;
}

namespace {

TokenSeq tokens_of(const ConceptGraph& g, const RawStream& s) {
  TokenSeq out;
  out.reserve(s.samples.size());
  for (auto v : s.samples) {
    if (v < 0 || static_cast<std::uint64_t>(v) >= g.alphabet().size()) {
      throw Error(ErrorCode::UnknownToken, "sample " + std::to_string(v) + " outside alphabet");
    }
    out.push_back(static_cast<Token>(v));
  }
  return out;
}

void append_merging(Description& into, const Description& part) {
  for (const auto& n : part.nodes) {
    if (!into.empty() && std::holds_alternative<Blob>(n) &&
        std::holds_alternative<Blob>(into.nodes.back())) {
      auto& dst = std::get<Blob>(into.nodes.back()).tokens;
      const auto& src = std::get<Blob>(n).tokens;
      dst.insert(dst.end(), src.begin(), src.end());
    } else {
      into.nodes.push_back(n);
    }
  }
}

std::set<ConceptId> refs_of(const Description& d) {
  auto v = top_level_refs(d);
  return {v.begin(), v.end()};
}

}  // namespace

IngestReport ingest(ConceptGraph& g, const RawStream& experience, const IngestOptions& options) {
  const TokenSeq tokens = tokens_of(g, experience);
  std::vector<Segment> segments;
  if (experience.kind == StreamKind::Scalar) {
    segments = segment_scalar(experience, g.config().contrast_threshold);
  } else {
    const auto& seps = g.config().separators;
    const auto& alphabet = g.alphabet();
    segments = segment_tokens(experience, [&](Token t) {
      return seps.find(alphabet.symbol(t)) == std::string::npos ? 0 : 1;
    });
  }

  const std::size_t size0 = g.size();
  IngestReport report;
  report.episode = g.episode();

  ParseOptions popts;
  popts.use_fast_path_index = options.induction.use_fast_path_index;
  Description desc;
  for (const auto& seg : segments) {
    TokenSeq part(tokens.begin() + static_cast<std::ptrdiff_t>(seg.begin),
                  tokens.begin() + static_cast<std::ptrdiff_t>(seg.end));
    append_merging(desc, parse(g, part, Budget{0}, popts));
  }

  induce_repeats(g, desc, options.induction);
  abstract_common(g, &desc, options.induction);
  report.new_associations = record_associations(g, desc, options.outcome);
  report.dl = make_report(g, tokens.size(), desc);

  g.tick_weights(refs_of(desc));
  g.store_chain(report.episode, tokens, desc);
  forget_details(g);
  g.advance_episode();

  for (std::size_t i = size0; i < g.size(); ++i) {
    report.new_concepts.push_back(ConceptId{static_cast<std::uint32_t>(i)});
  }
  report.description = std::move(desc);
  return report;
}

IngestReport ingest(ConceptGraph& g, const TokenSeq& tokens, const IngestOptions& options) {
  return ingest(g, RawStream::tokens(tokens), options);
}

Description refine(ConceptGraph& g, std::uint64_t episode, const InductionOptions& options) {
  const auto& chain = g.chain(episode);
  const TokenSeq tokens = chain.tokens;
  const Budget budget{static_cast<std::uint32_t>(chain.levels.size())};
  ParseOptions popts;
  popts.use_fast_path_index = options.use_fast_path_index;
  popts.extra_candidates.push_back(chain.levels.back());
  Description best = parse(g, tokens, budget, popts);

  // Blob residue gets one more look at this level.
  auto code = CodeTable::of(g);
  double best_cost = description_dl(g, code, best);
  for (std::size_t i = 0; i < best.size(); ++i) {
    const auto* blob = std::get_if<Blob>(&best.nodes[i]);
    if (!blob || blob->tokens.size() < 2) continue;
    ParseOptions sub_opts;
    sub_opts.use_fast_path_index = options.use_fast_path_index;
    Description sub = parse(g, blob->tokens, budget, sub_opts);
    Description spliced;
    spliced.nodes.assign(best.nodes.begin(), best.nodes.begin() + static_cast<std::ptrdiff_t>(i));
    append_merging(spliced, sub);
    Description rest;
    rest.nodes.assign(best.nodes.begin() + static_cast<std::ptrdiff_t>(i) + 1, best.nodes.end());
    append_merging(spliced, rest);
    double cost = description_dl(g, code, spliced);
    if (cost < best_cost) {
      best = std::move(spliced);
      best_cost = cost;
    }
  }
  g.append_level(episode, best);
  return best;
}

void forget_details(ConceptGraph& g) {
  std::vector<std::uint64_t> drop;
  for (const auto& [ep, chain] : g.chains()) {
    if (chain.levels.size() < 2) continue;
    std::set<ConceptId> shallower;
    for (std::size_t i = 0; i + 1 < chain.levels.size(); ++i) {
      auto r = refs_of(chain.levels[i]);
      shallower.insert(r.begin(), r.end());
    }
    bool any = false;
    bool all_faded = true;
    for (auto id : refs_of(chain.levels.back())) {
      if (shallower.count(id)) continue;
      any = true;
      if (g.at(id).weight >= kForgetWeight) all_faded = false;
    }
    if (any && all_faded) drop.push_back(ep);
  }
  for (auto ep : drop) g.drop_deepest_level(ep);
}

}  // namespace cgraph
