// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "cgraph/corpus.hpp"
#include "cgraph/fn_ensemble.hpp"
#include "cgraph/inducer.hpp"
#include "cgraph/mdl.hpp"
#include "cgraph/oracle.hpp"
#include "cgraph/parser.hpp"
#include "cgraph/teach.hpp"
#include "cgraph/valence.hpp"

using namespace cgraph;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool ok = true;
  std::string detail;
};

int failures = 0;

void report(int id, const char* name, double limit_s, const std::function<Outcome()>& body) {
  const auto t0 = Clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  const bool ok = o.ok && secs < limit_s;
  if (!ok) ++failures;
  std::printf("[%s] %2d %-28s %7.2fs (limit %.0fs)  %s\n", ok ? "PASS" : "FAIL", id, name, secs,
              limit_s, o.detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::string render(const Description& d) {
  std::string s;
  for (const auto& n : d.nodes) {
    if (const auto* id = std::get_if<ConceptId>(&n)) {
      s += "c" + std::to_string(id->value) + " ";
    } else {
      s += "[";
      for (Token t : std::get<Blob>(n).tokens) s += std::to_string(t) + ",";
      s += "] ";
    }
  }
  return s;
}

constexpr double kTol = 1e-9;

Outcome lossless() {
  std::mt19937_64 rng(1);
  ConceptGraph g(Alphabet("abcdefghijklmnop"), Config{});
  int ok = 0;
  for (int i = 0; i < 1000; ++i) {
    const std::size_t len = rng() % 257, sigma = 1 + rng() % 16;
    TokenSeq t(len);
    for (auto& x : t) x = static_cast<Token>(rng() % sigma);
    auto r = ingest(g, t);
    ok += g.reconstruct(r.description) == t;
  }
  return {ok == 1000, fmt("%d/1000 reconstructed, %zu concepts", ok, g.size())};
}

Outcome tiny_oracle() {
  double worst = 0;
  std::string worst_s;
  int fails = 0, count = 0;
  for (int n = 0; n <= 10; ++n) {
    for (int m = 0; m < (1 << n); ++m) {
      TokenSeq t;
      for (int i = 0; i < n; ++i) t.push_back(static_cast<Token>((m >> i) & 1));
      ConceptGraph g(Alphabet("ab"), Config{});
      auto r = ingest(g, t);
      const double engine = r.dl.model_bits + r.dl.described_bits;
      const double best = mdl_oracle(t, 2);
      if (engine / best > worst) {
        worst = engine / best;
        worst_s = g.alphabet().decode(t);
      }
      fails += engine > 1.25 * best + kTol;
      ++count;
    }
  }
  return {fails == 0, fmt("%d strings, worst ratio %.4f (\"%s\"), %d over 1.25", count, worst,
                          worst_s.c_str(), fails)};
}

Outcome hidden_grammar() {
  auto c = gen_grammar_corpus(7, 4, 10000);
  ConceptGraph g(c.alphabet, Config{});
  for (std::size_t i = 0; i < c.tokens.size(); i += 64) {
    TokenSeq ep(c.tokens.begin() + static_cast<std::ptrdiff_t>(i),
                c.tokens.begin() + static_cast<std::ptrdiff_t>(std::min(c.tokens.size(), i + 64)));
    ingest(g, ep);
  }
  const double total = two_part_total(g);
  const double raw = raw_dl(c.tokens.size(), c.alphabet.size());
  const double framed = episode_framed_generator_dl(c, 64);
  return {total <= 1.5 * c.generator_dl && total < raw,
          fmt("total %.2f, generator %.2f (ratio %.3f, limit 1.5), raw %.2f; framed generator %.2f",
              total, c.generator_dl, total / c.generator_dl, raw, framed)};
}

bool agrees(const fn::Term& t, const fn::Library& lib, fn::Value hi, std::uint32_t arity,
            const std::function<fn::Value(std::span<const fn::Value>)>& truth) {
  std::vector<fn::Value> in(arity, 0);
  std::function<bool(std::uint32_t)> go = [&](std::uint32_t k) {
    if (k == arity) {
      auto r = fn::eval_term(t, in, lib, fn::Caps{});
      return r.ok() && r.value == truth(in);
    }
    for (fn::Value v = 0; v <= hi; ++v) {
      in[k] = v;
      if (!go(k + 1)) return false;
    }
    return true;
  };
  return go(0);
}

std::vector<fn::FunctionExample> rows(const std::string& label,
                                      std::vector<std::pair<std::vector<fn::Value>, fn::Value>> r) {
  std::vector<fn::FunctionExample> out;
  for (auto& [in, o] : r) out.push_back({label, in, o});
  return out;
}

Outcome red_green() {
  auto red = rows("red", {{{1, 3}, 4}, {{2, 3}, 5}, {{5, 2}, 7}});
  auto green = rows("green", {{{2, 4}, 8}, {{3, 4}, 12}, {{2, 5}, 10}});
  auto r = fn::learn_all({{"red", red}, {"green", green}}, fn::Library::with_successor(), 7, {});
  auto plus = [](std::span<const fn::Value> a) { return a[0] + a[1]; };
  auto times = [](std::span<const fn::Value> a) { return a[0] * a[1]; };
  bool red_ok = false, green_ok = false;
  std::string terms;
  for (const auto& l : r.learned) {
    terms += l.label + "=" + fn::to_sexpr(*l.term, r.library) + " ";
    if (l.label == "red") red_ok = l.pass == 1 && agrees(*l.term, r.library, 20, 2, plus);
    if (l.label == "green") green_ok = l.pass == 2 && agrees(*l.term, r.library, 10, 2, times);
  }
  auto alone = fn::learn_all({{"green", green}}, fn::Library::with_successor(), 7, {});
  const bool withheld = alone.learned.empty() && alone.unsolved == std::vector<std::string>{"green"};
  return {red_ok && green_ok && withheld,
          terms + fmt("| green without red: %s", withheld ? "unlearnable" : "LEARNED")};
}

Outcome hierarchy() {
  auto e = gen_function_ensemble(5);
  auto r = fn::learn_all(e.sets, fn::Library::with_successor(), 7, {});
  std::map<std::string, const EnsembleFunction*> by_name;
  for (const auto& f : e.functions) by_name[f.name] = &f;
  std::size_t verified = 0;
  std::uint32_t max_pass = 0;
  for (const auto& l : r.learned) {
    const auto& f = *by_name.at(l.label);
    max_pass = std::max(max_pass, l.pass);
    verified += l.pass <= 3 && agrees(*l.term, r.library, 10, f.arity, f.truth);
  }
  std::string ablation;
  bool ablation_ok = true;
  for (const auto& f : e.functions) {
    if (f.level != 1) continue;
    std::vector<fn::LabeledExamples> without;
    for (const auto& s : e.sets) {
      if (s.label != f.name) without.push_back(s);
    }
    auto a = fn::learn_all(without, fn::Library::with_successor(), 7, {});
    ablation += " -" + f.name + ":" + std::to_string(a.unsolved.size()) + " unlearnable";
    bool dependent = false;
    for (const auto& u : a.unsolved) {
      for (const auto& dep : by_name.at(u)->uses) dependent |= dep == f.name;
    }
    ablation_ok &= dependent;
  }
  return {verified == 6 && r.unsolved.empty() && ablation_ok,
          fmt("%zu/6 verified, last pass %u;", verified, max_pass) + ablation};
}

Outcome closed_forms() {
  ConceptGraph g(Alphabet("ab"), Config{});
  auto p = g.add_concept(Concat{{g.primitive(0), g.primitive(1)}});
  const double w0 = g.at(p).weight;
  for (int i = 0; i < 10; ++i) g.tick_weights({});
  const double decay_err = std::abs(g.at(p).weight - w0 * std::pow(0.9, 10));

  ConceptGraph h(Alphabet("ab"), Config{});
  auto a = h.add_concept(Association{h.primitive(0), h.pleasure(), std::nullopt});
  auto v = propagate_valence(h);
  const bool valence_ok = v.at(a) == 0.5 && v.at(h.primitive(0)) == 0.25;

  double worst_kraft = 0;
  std::mt19937_64 rng(3);
  for (int i = 0; i < 100; ++i) {
    ConceptGraph r(Alphabet("abcd"), Config{});
    std::vector<ConceptId> pool{r.primitive(0), r.primitive(1), r.primitive(2), r.primitive(3)};
    const int adds = 1 + static_cast<int>(rng() % 40);
    for (int k = 0; k < adds; ++k) {
      auto id = r.add_concept(Concat{{pool[rng() % pool.size()], pool[rng() % pool.size()]}});
      pool.push_back(id);
      r.set_weight(id, static_cast<double>(rng() % 50) / 4.0);
    }
    worst_kraft = std::max(worst_kraft, kraft_sum(r));
  }
  return {decay_err <= kTol && valence_ok && worst_kraft <= 1 + kTol,
          fmt("decay error %.2e, valence {%.4f, %.4f}, max Kraft %.9f", decay_err, v.at(a),
              v.at(h.primitive(0)), worst_kraft)};
}

Outcome numbers() {
  ConceptGraph g(Alphabet("xozq"), Config{});
  for (const char* s : {"xx", "oo", "zz"}) ingest(g, g.alphabet().encode(s));
  std::vector<ConceptId> num2;
  for (const auto& c : g.concepts()) {
    if (const auto* t = std::get_if<Template>(&c.kind)) {
      if (t->holes == 1 && t->body == std::vector<Slot>{Hole{0}, Hole{0}}) num2.push_back(c.id);
    }
  }
  if (num2.size() != 1) return {false, fmt("%zu NUM_2 templates", num2.size())};
  auto r = ingest(g, g.alphabet().encode("qq"));
  bool single = false;
  if (r.description.size() == 1) {
    if (const auto* id = std::get_if<ConceptId>(&r.description.nodes[0])) {
      const auto* ap = std::get_if<Apply>(&g.at(*id).kind);
      single = ap && ap->templ == num2[0];
    }
  }
  return {single, fmt("one NUM_2 (c%u); \"qq\" -> %zu node(s)%s", num2[0].value,
                      r.description.size(), single ? ", Apply of NUM_2" : "")};
}

Outcome attention_order() {
  int wins = 0;
  std::string worst;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    ConceptGraph g(Alphabet("ab"), Config{});
    std::string ab;
    for (int i = 0; i < 50; ++i) ab += "ab";
    ingest(g, g.alphabet().encode(ab));
    auto att = [&](const TokenSeq& t) { return attention(g, t, parse(g, t, Budget{0})); };
    std::mt19937_64 rng(seed);
    TokenSeq noise(8);
    for (auto& x : noise) x = static_cast<Token>(rng() % 2);
    const double hi = att(g.alphabet().encode("abababab")), lo = att(noise);
    wins += hi > lo;
    if (seed == 1) worst = fmt("seed 1: %.3f vs %.3f", hi, lo);
  }
  return {wins == 10, fmt("%d/10 seeds; ", wins) + worst};
}

Outcome teach_roundtrip() {
  std::mt19937_64 rng(9);
  int ok = 0;
  for (int i = 0; i < 100; ++i) {
    ConceptGraph sender(Alphabet("abcd"), Config{});
    std::vector<ConceptId> pool;
    for (Token t = 0; t < 4; ++t) pool.push_back(sender.primitive(t));
    auto tmpl = sender.add_concept(Template{{Hole{0}, sender.primitive(1), Hole{0}}, 1});
    const int adds = 3 + static_cast<int>(rng() % 20);
    for (int k = 0; k < adds; ++k) {
      auto pick = [&] { return pool[rng() % pool.size()]; };
      switch (rng() % 3) {
        case 0: pool.push_back(sender.add_concept(Concat{{pick(), pick(), pick()}})); break;
        case 1: pool.push_back(sender.add_concept(Repeat{pick(), 2 + static_cast<std::uint32_t>(rng() % 3)})); break;
        default: pool.push_back(sender.add_concept(Apply{tmpl, {pick()}})); break;
      }
    }
    const ConceptId root = pool[4 + rng() % (pool.size() - 4)];
    const auto script = export_teach(sender, root);
    check_teach_script(script);
    ConceptGraph receiver(Alphabet("abcd"), Config{});
    ok += receiver.expansion(import_teach(receiver, script)) == sender.expansion(root);
  }
  return {ok == 100, fmt("%d/100 expansions preserved", ok)};
}

Outcome fast_path() {
  Config cfg;
  cfg.fast_path_threshold = 3.0;
  ConceptGraph g(Alphabet("abcdef"), cfg);
  std::mt19937_64 rng(21);
  for (int i = 0; i < 30; ++i) {
    std::string s;
    for (int k = 0; k < 10; ++k) s += std::string(1, "abc"[rng() % 3]) + (rng() % 2 ? "de" : "f");
    ingest(g, g.alphabet().encode(s));
  }
  const auto indexed = g.fast_path_set().size();
  ParseOptions off;
  off.use_fast_path_index = false;
  int same = 0;
  for (int i = 0; i < 200; ++i) {
    TokenSeq t(1 + rng() % 40);
    for (auto& x : t) x = static_cast<Token>(rng() % 6);
    const Budget b{static_cast<std::uint32_t>(rng() % 3)};
    same += render(parse(g, t, b)) == render(parse(g, t, b, off));
  }
  return {same == 200 && indexed > 0,
          fmt("%d/200 identical, %zu concepts on the fast path", same, indexed)};
}

#ifdef CGRAPH_CLI_PATH
std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

bool sh(const std::string& cmd) {
  const int st = std::system((cmd + " > /dev/null 2>&1").c_str());
  return WIFEXITED(st) && WEXITSTATUS(st) == 0;
}

Outcome cli_determinism() {
  namespace fs = std::filesystem;
  const auto root = fs::temp_directory_path() / "cgraph_acceptance";
  fs::remove_all(root);
  fs::create_directories(root);
  auto c = gen_grammar_corpus(7, 3, 2048);
  {
    std::ofstream lines(root / "corpus.txt");
    const auto text = c.alphabet.decode(c.tokens);
    for (std::size_t i = 0; i < text.size(); i += 64) lines << text.substr(i, 64) << "\n";
    std::ofstream ex(root / "fn.txt");
    ex << "red 2 1 3 4\nred 2 2 3 5\nred 2 5 2 7\ngreen 2 2 4 8\ngreen 2 3 4 12\ngreen 2 2 5 10\n";
  }
  const std::string cli = std::string("\"") + CGRAPH_CLI_PATH + "\"";
  std::vector<std::string> files;
  for (int run = 0; run < 2; ++run) {
    const auto g = (root / ("run" + std::to_string(run) + ".json")).string();
    const bool ok = sh(cli + " init --alphabet abcdefgh --out " + g) &&
                    sh(cli + " ingest --graph " + g + " --input " + (root / "corpus.txt").string()) &&
                    sh(cli + " refine --graph " + g + " --episode 3") &&
                    sh(cli + " learn-fn --graph " + g + " --examples " + (root / "fn.txt").string());
    if (!ok) return {false, "a CLI step failed"};
    files.push_back(slurp(g));
  }
  return {files[0] == files[1] && !files[0].empty(),
          fmt("graph files %zu and %zu bytes, %s", files[0].size(), files[1].size(),
              files[0] == files[1] ? "identical" : "DIFFERENT")};
}
#else
Outcome cli_determinism() { return {false, "built without the cgraph CLI"}; }
#endif

}  // namespace

int main() {
  report(1, "lossless roundtrip", 30, lossless);
  report(2, "tiny-scale MDL oracle", 60, tiny_oracle);
  report(3, "hidden-grammar compression", 60, hidden_grammar);
  report(4, "red/green functions", 120, red_green);
  report(5, "hierarchy scaling", 300, hierarchy);
  report(6, "closed forms", 10, closed_forms);
  report(7, "number concept", 10, numbers);
  report(8, "attention ordering", 10, attention_order);
  report(9, "teach roundtrip", 10, teach_roundtrip);
  report(10, "fast-path equivalence", 30, fast_path);
  report(11, "CLI determinism", 60, cli_determinism);
  std::printf("%d of 11 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
