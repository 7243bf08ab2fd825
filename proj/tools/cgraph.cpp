// cgraph: command line front end for the concept-graph learner.
//
// Exit codes: 0 success, 1 usage error, 2 data error.

#include <algorithm>
#include <cstdio>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cgraph/corpus.hpp"
#include "cgraph/dot_export.hpp"
#include "cgraph/error.hpp"
#include "cgraph/fn_ensemble.hpp"
#include "cgraph/graph_io.hpp"
#include "cgraph/inducer.hpp"
#include "cgraph/mdl.hpp"
#include "cgraph/parser.hpp"
#include "cgraph/segmenter.hpp"
#include "cgraph/teach.hpp"

namespace {

using namespace cgraph;

constexpr int kDataError = 2;

std::vector<std::string> read_lines(const std::string& path) {
  std::istringstream in(read_text_file(path));
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  return lines;
}

std::vector<std::int64_t> parse_levels(const std::string& line, std::size_t lineno) {
  std::istringstream in(line);
  std::vector<std::int64_t> out;
  std::string field;
  while (in >> field) {
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(field, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != field.size()) {
      throw Error(ErrorCode::CorruptFile,
                  "line " + std::to_string(lineno) + ": not an integer: " + field);
    }
    out.push_back(v);
  }
  return out;
}

// Scalar samples become alphabet levels by clamping into [0, |Σ|-1].
RawStream quantize(const std::vector<std::int64_t>& levels, std::size_t sigma) {
  std::vector<std::int64_t> q;
  q.reserve(levels.size());
  const auto top = static_cast<std::int64_t>(sigma) - 1;
  for (auto v : levels) q.push_back(std::clamp<std::int64_t>(v, 0, top));
  return RawStream::scalar(std::move(q));
}

std::string fmt9(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9f", v);
  return buf;
}

std::string describe(const ConceptGraph& g, const Description& d) {
  std::string s = "[";
  for (std::size_t i = 0; i < d.nodes.size(); ++i) {
    if (i) s += ' ';
    if (const auto* id = std::get_if<ConceptId>(&d.nodes[i])) {
      s += std::to_string(id->value);
    } else {
      s += '"' + g.alphabet().decode(std::get<Blob>(d.nodes[i]).tokens) + '"';
    }
  }
  return s + "]";
}

struct Args {
  std::string alphabet, out, graph, input, dot, examples, separators;
  std::string feel;
  std::uint64_t episode = 0;
  std::uint32_t concept_id = 0;
  double theta_c = 1.0;
  bool theta_c_set = false;
  bool scalar = false;
  bool report = false;
};

int cmd_init(const Args& a) {
  Config cfg;
  cfg.separators = a.separators;
  ConceptGraph g(Alphabet(a.alphabet), cfg);
  save(g, a.out);
  std::cout << "concepts=" << g.size() << " episode=" << g.episode() << "\n";
  return 0;
}

int cmd_ingest(const Args& a) {
  auto file = load(a.graph);
  auto& g = file.graph;
  const Config saved = g.config();
  if (a.theta_c_set) g.mutable_config().contrast_threshold = a.theta_c;
  IngestOptions opts;
  if (a.feel == "+") opts.outcome = +1;
  if (a.feel == "-") opts.outcome = -1;
  std::size_t lineno = 0;
  for (const auto& line : read_lines(a.input)) {
    ++lineno;
    IngestReport r;
    if (a.scalar) {
      r = ingest(g, quantize(parse_levels(line, lineno), g.alphabet().size()), opts);
    } else {
      r = ingest(g, g.alphabet().encode(line), opts);
    }
    std::cout << "episode=" << r.episode << " nodes=" << r.description.size()
              << " new_concepts=" << r.new_concepts.size()
              << " new_associations=" << r.new_associations.size() << " " << format_report(r.dl)
              << "\n";
  }
  g.mutable_config() = saved;
  save(g, a.graph, file.library);
  return 0;
}

int cmd_parse(const Args& a) {
  auto file = load(a.graph);
  const auto& g = file.graph;
  for (const auto& line : read_lines(a.input)) {
    auto tokens = g.alphabet().encode(line);
    auto d = parse(g, tokens, Budget{0});
    std::cout << describe(g, d);
    if (a.report) std::cout << " " << format_report(make_report(g, tokens.size(), d));
    std::cout << "\n";
  }
  return 0;
}

int cmd_refine(const Args& a) {
  auto file = load(a.graph);
  auto& g = file.graph;
  auto d = refine(g, a.episode);
  const auto& chain = g.chain(a.episode);
  std::cout << "episode=" << a.episode << " level=" << chain.levels.size() - 1 << " "
            << describe(g, d) << " "
            << format_report(make_report(g, chain.tokens.size(), d)) << "\n";
  save(g, a.graph, file.library);
  return 0;
}

int cmd_stats(const Args& a) {
  auto file = load(a.graph);
  const auto& g = file.graph;
  auto code = CodeTable::of(g);
  DLReport r;
  for (const auto& [ep, chain] : g.chains()) r.raw_bits += raw_dl(chain.tokens.size(), g.alphabet().size());
  r.described_bits = stored_dl(g, code);
  r.model_bits = model_dl(g, code);
  r.attention = r.raw_bits - r.described_bits;
  std::map<std::string, std::size_t> kinds;
  for (const auto& c : g.concepts()) ++kinds[std::string(kind_name(c.kind))];
  std::cout << format_report(r) << "\n";
  std::cout << "concepts=" << g.size() << " episode=" << g.episode()
            << " chains=" << g.chains().size() << " library=" << file.library.size() << "\n";
  for (const auto& [k, n] : kinds) std::cout << "kind " << k << "=" << n << "\n";
  std::cout << "two_part_total=" << fmt9(r.model_bits + r.described_bits) << "\n";
  return 0;
}

int cmd_export(const Args& a) {
  auto file = load(a.graph);
  export_dot(file.graph, a.dot);
  return 0;
}

int cmd_teach(const Args& a) {
  auto file = load(a.graph);
  write_text_file(a.out, export_teach(file.graph, ConceptId{a.concept_id}));
  return 0;
}

int cmd_learn_fn(const Args& a) {
  auto sets = fn::parse_examples(read_text_file(a.examples));
  fn::Library start = fn::Library::with_successor();
  std::optional<GraphFile> file;
  fn::Caps caps;
  std::uint32_t max_size = Config{}.synth_size_cap;
  if (!a.graph.empty()) {
    file.emplace(load(a.graph));
    start = file->library;
    caps.iter_cap = file->graph.config().iter_cap;
    caps.value_cap = file->graph.config().value_cap;
    max_size = file->graph.config().synth_size_cap;
  }
  auto result = fn::learn_all(sets, start, max_size, caps);
  for (const auto& l : result.learned) {
    std::cout << l.label << " pass=" << l.pass << " " << fn::to_sexpr(*l.term, result.library);
    if (a.report) std::cout << " size=" << fn::term_size(*l.term);
    std::cout << "\n";
  }
  for (const auto& u : result.unsolved) std::cout << u << " unlearnable\n";
  if (a.report) {
    std::cout << "learned=" << result.learned.size() << " unlearnable=" << result.unsolved.size()
              << " max_size=" << max_size << "\n";
    std::cout << fn::export_library(result.library);
  }
  if (file) save(file->graph, a.graph, result.library);
  return 0;
}

int cmd_segment(const Args& a) {
  std::size_t lineno = 0;
  const double theta = a.theta_c_set ? a.theta_c : Config{}.contrast_threshold;
  for (const auto& line : read_lines(a.input)) {
    ++lineno;
    auto stream = RawStream::scalar(parse_levels(line, lineno));
    std::cout << "line=" << lineno;
    for (const auto& s : segment_scalar(stream, theta)) {
      RawStream part = RawStream::scalar({s.payload.begin(), s.payload.end()});
      std::cout << " [" << s.begin << "," << s.end << ") "
                << (smoothness(part, Config{}.smoothness_threshold) == Smoothness::Smooth ? "smooth"
                                                                                          : "rough");
    }
    std::cout << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Concept-graph learner"};
  app.require_subcommand(1);
  Args a;

  auto* init = app.add_subcommand("init", "Create a fresh graph file");
  init->add_option("--alphabet", a.alphabet, "Alphabet symbols, e.g. ab")->required();
  init->add_option("--out", a.out, "Graph file to write")->required();
  init->add_option("--separators", a.separators, "Symbols that form their own contrast class");

  auto* ing = app.add_subcommand("ingest", "Ingest one episode per input line");
  ing->add_option("--graph", a.graph)->required();
  ing->add_option("--input", a.input)->required();
  ing->add_flag("--scalar", a.scalar, "Lines are whitespace-separated integer samples");
  ing->add_option("--theta-c", a.theta_c, "Contrast threshold for scalar segmentation")
      ->each([&](const std::string&) { a.theta_c_set = true; });
  ing->add_option("--feel", a.feel, "Affect following every episode")
      ->check(CLI::IsMember({"+", "-"}));

  auto* prs = app.add_subcommand("parse", "Parse input lines without learning");
  prs->add_option("--graph", a.graph)->required();
  prs->add_option("--input", a.input)->required();
  prs->add_flag("--report", a.report, "Print a DL report per line");

  auto* ref = app.add_subcommand("refine", "Add a refinement level to an episode");
  ref->add_option("--graph", a.graph)->required();
  ref->add_option("--episode", a.episode)->required();

  auto* st = app.add_subcommand("stats", "DL report and concept counts");
  st->add_option("--graph", a.graph)->required();

  auto* ex = app.add_subcommand("export", "Write the graph as DOT");
  ex->add_option("--graph", a.graph)->required();
  ex->add_option("--dot", a.dot)->required();

  auto* te = app.add_subcommand("teach", "Write a teach script for one concept");
  te->add_option("--graph", a.graph)->required();
  te->add_option("--concept", a.concept_id)->required();
  te->add_option("--out", a.out)->required();

  auto* lf = app.add_subcommand("learn-fn", "Learn functions from input/output examples");
  lf->add_option("--examples", a.examples)->required();
  lf->add_option("--graph", a.graph, "Graph file whose library is extended and saved");
  lf->add_flag("--report", a.report);

  auto* sg = app.add_subcommand("segment", "Segment scalar lines by contrast");
  sg->add_option("--input", a.input)->required();
  sg->add_option("--theta-c", a.theta_c)->each([&](const std::string&) { a.theta_c_set = true; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (*init) return cmd_init(a);
    if (*ing) return cmd_ingest(a);
    if (*prs) return cmd_parse(a);
    if (*ref) return cmd_refine(a);
    if (*st) return cmd_stats(a);
    if (*ex) return cmd_export(a);
    if (*te) return cmd_teach(a);
    if (*lf) return cmd_learn_fn(a);
    if (*sg) return cmd_segment(a);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDataError;
  }
  return 1;
}
