#include "cgraph/graph_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "cgraph/error.hpp"
#include "json.hpp"

namespace cgraph {

using nlohmann::json;

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

[[noreturn]] void corrupt(const std::string& what) { throw Error(ErrorCode::CorruptFile, what); }

std::string fixed9(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9f", v);
  return buf;
}

std::string hexfloat(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%a", v);
  return buf;
}

double parse_real(const json& j) {
  if (!j.is_string()) corrupt("expected a real encoded as a string");
  const auto& s = j.get_ref<const std::string&>();
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) corrupt("bad real " + s);
  return v;
}

json ids(const std::vector<ConceptId>& v) {
  json a = json::array();
  for (auto id : v) a.push_back(id.value);
  return a;
}

std::vector<ConceptId> ids_from(const json& j) {
  std::vector<ConceptId> v;
  for (const auto& x : j) v.push_back(ConceptId{x.get<std::uint32_t>()});
  return v;
}

json description_json(const Alphabet& a, const Description& d) {
  json nodes = json::array();
  for (const auto& n : d.nodes) {
    if (const auto* id = std::get_if<ConceptId>(&n)) {
      nodes.push_back(id->value);
    } else {
      nodes.push_back(a.decode(std::get<Blob>(n).tokens));
    }
  }
  return nodes;
}

Description description_from(const Alphabet& a, const json& j) {
  Description d;
  for (const auto& n : j) {
    if (n.is_string()) {
      d.nodes.push_back(Blob{a.encode(n.get<std::string>())});
    } else {
      d.nodes.push_back(ConceptId{n.get<std::uint32_t>()});
    }
  }
  return d;
}

json concept_json(const Alphabet& a, const Concept& c) {
  json j;
  j["id"] = c.id.value;
  j["kind"] = std::string(kind_name(c.kind));
  j["weight"] = fixed9(c.weight);
  j["weight_exact"] = hexfloat(c.weight);
  j["created_at"] = c.created_at;
  j["label"] = c.label;
  std::visit(overloaded{
                 [&](const Primitive& k) { j["symbol"] = std::string(1, a.symbol(k.token)); },
                 [&](const Concat& k) { j["children"] = ids(k.children); },
                 [&](const Repeat& k) {
                   j["child"] = k.child.value;
                   j["count"] = k.count;
                 },
                 [&](const Template& k) {
                   json body = json::array();
                   for (const auto& s : k.body) {
                     if (const auto* h = std::get_if<Hole>(&s)) {
                       body.push_back("?" + std::to_string(h->index));
                     } else {
                       body.push_back(std::get<ConceptId>(s).value);
                     }
                   }
                   j["body"] = body;
                   j["holes"] = k.holes;
                 },
                 [&](const Apply& k) {
                   j["template"] = k.templ.value;
                   j["fillers"] = ids(k.fillers);
                 },
                 [&](const Association& k) {
                   j["first"] = k.first.value;
                   j["second"] = k.second.value;
                   j["relation"] = k.relation ? json(k.relation->value) : json(nullptr);
                 },
                 [&](const AffectPrimitive& k) { j["sign"] = k.sign; },
                 [&](const Relation& k) {
                   j["name"] = k.name;
                   j["instances"] = ids(k.instances);
                 },
             },
             c.kind);
  return j;
}

Concept concept_from(const Alphabet& a, const json& j) {
  Concept c;
  c.id = ConceptId{j.at("id").get<std::uint32_t>()};
  c.weight = parse_real(j.at("weight_exact"));
  c.created_at = j.at("created_at").get<std::uint64_t>();
  c.label = j.at("label").get<std::string>();
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "prim") {
    auto s = j.at("symbol").get<std::string>();
    auto t = s.size() == 1 ? a.token(s[0]) : std::nullopt;
    if (!t) corrupt("unknown primitive symbol " + s);
    c.kind = Primitive{*t};
  } else if (kind == "concat") {
    c.kind = Concat{ids_from(j.at("children"))};
  } else if (kind == "repeat") {
    c.kind = Repeat{ConceptId{j.at("child").get<std::uint32_t>()},
                    j.at("count").get<std::uint32_t>()};
  } else if (kind == "template") {
    Template t{{}, j.at("holes").get<std::uint32_t>()};
    for (const auto& s : j.at("body")) {
      if (s.is_string()) {
        auto h = s.get<std::string>();
        if (h.size() < 2 || h[0] != '?') corrupt("bad template slot " + h);
        t.body.push_back(Hole{static_cast<std::uint32_t>(std::stoul(h.substr(1)))});
      } else {
        t.body.push_back(ConceptId{s.get<std::uint32_t>()});
      }
    }
    c.kind = std::move(t);
  } else if (kind == "apply") {
    c.kind = Apply{ConceptId{j.at("template").get<std::uint32_t>()}, ids_from(j.at("fillers"))};
  } else if (kind == "assoc") {
    Association as{ConceptId{j.at("first").get<std::uint32_t>()},
                   ConceptId{j.at("second").get<std::uint32_t>()}, std::nullopt};
    if (!j.at("relation").is_null()) as.relation = ConceptId{j.at("relation").get<std::uint32_t>()};
    c.kind = as;
  } else if (kind == "affect") {
    c.kind = AffectPrimitive{j.at("sign").get<int>()};
  } else if (kind == "relation") {
    c.kind = Relation{j.at("name").get<std::string>(), ids_from(j.at("instances"))};
  } else {
    corrupt("unknown concept kind " + kind);
  }
  return c;
}

json config_json(const Config& c) {
  json j;
  j["contrast_threshold"] = fixed9(c.contrast_threshold);
  j["repeat_threshold"] = c.repeat_threshold;
  j["decay"] = fixed9(c.decay);
  j["fast_path_threshold"] = fixed9(c.fast_path_threshold);
  j["association_threshold"] = c.association_threshold;
  j["generalization_threshold"] = c.generalization_threshold;
  j["valence_decay"] = fixed9(c.valence_decay);
  j["valence_hops"] = c.valence_hops;
  j["base_beam"] = c.base_beam;
  j["base_pool"] = c.base_pool;
  j["synth_size_cap"] = c.synth_size_cap;
  j["iter_cap"] = c.iter_cap;
  j["value_cap"] = c.value_cap;
  j["smoothness_threshold"] = fixed9(c.smoothness_threshold);
  j["separators"] = c.separators;
  return j;
}

Config config_from(const json& j) {
  Config c;
  c.contrast_threshold = parse_real(j.at("contrast_threshold"));
  c.repeat_threshold = j.at("repeat_threshold").get<std::uint32_t>();
  c.decay = parse_real(j.at("decay"));
  c.fast_path_threshold = parse_real(j.at("fast_path_threshold"));
  c.association_threshold = j.at("association_threshold").get<std::uint32_t>();
  c.generalization_threshold = j.at("generalization_threshold").get<std::uint32_t>();
  c.valence_decay = parse_real(j.at("valence_decay"));
  c.valence_hops = j.at("valence_hops").get<std::uint32_t>();
  c.base_beam = j.at("base_beam").get<std::uint32_t>();
  c.base_pool = j.at("base_pool").get<std::uint32_t>();
  c.synth_size_cap = j.at("synth_size_cap").get<std::uint32_t>();
  c.iter_cap = j.at("iter_cap").get<std::uint32_t>();
  c.value_cap = j.at("value_cap").get<std::int64_t>();
  c.smoothness_threshold = parse_real(j.at("smoothness_threshold"));
  c.separators = j.at("separators").get<std::string>();
  return c;
}

}  // namespace

std::string serialize(const ConceptGraph& g, const fn::Library& library) {
  const auto& a = g.alphabet();
  json root;
  root["version"] = std::string(kGraphFormatVersion);
  root["alphabet"] = a.symbols();
  root["config"] = config_json(g.config());
  root["episode"] = g.episode();

  json concepts = json::array();
  for (const auto& c : g.concepts()) concepts.push_back(concept_json(a, c));
  root["concepts"] = std::move(concepts);

  json assoc = json::array();
  for (const auto& [pair, count] : g.assoc_counts()) {
    assoc.push_back({pair.first.value, pair.second.value, count});
  }
  root["assoc_counts"] = std::move(assoc);

  json runs = json::array();
  for (const auto& [k, by_concept] : g.run_evidence()) {
    for (const auto& [id, ep] : by_concept) runs.push_back({k, id.value, ep});
  }
  root["run_evidence"] = std::move(runs);

  json chains = json::array();
  for (const auto& [ep, chain] : g.chains()) {
    json levels = json::array();
    for (const auto& d : chain.levels) levels.push_back(description_json(a, d));
    chains.push_back({{"episode", ep}, {"tokens", a.decode(chain.tokens)}, {"levels", levels}});
  }
  root["chains"] = std::move(chains);

  json lib = json::array();
  std::istringstream lines(fn::export_library(library));
  for (std::string line; std::getline(lines, line);) lib.push_back(line);
  root["library"] = std::move(lib);

  return root.dump(1) + "\n";
}

GraphFile deserialize(std::string_view text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::exception& e) {
    corrupt(std::string("not a graph file: ") + e.what());
  }
  if (!root.is_object() || !root.contains("version")) corrupt("missing version field");
  if (root["version"] != kGraphFormatVersion) {
    throw Error(ErrorCode::VersionMismatch,
                "graph file version " + root["version"].dump() + ", expected " +
                    std::string(kGraphFormatVersion));
  }
  try {
    Alphabet alphabet(root.at("alphabet").get<std::string>());
    Config config = config_from(root.at("config"));

    ConceptGraph::RawState state;
    state.episode = root.at("episode").get<std::uint64_t>();
    for (const auto& c : root.at("concepts")) state.concepts.push_back(concept_from(alphabet, c));
    for (const auto& e : root.at("assoc_counts")) {
      state.assoc_counts[{ConceptId{e.at(0).get<std::uint32_t>()},
                          ConceptId{e.at(1).get<std::uint32_t>()}}] = e.at(2).get<std::uint32_t>();
    }
    for (const auto& e : root.at("run_evidence")) {
      state.run_evidence[e.at(0).get<std::uint32_t>()][ConceptId{e.at(1).get<std::uint32_t>()}] =
          e.at(2).get<std::uint64_t>();
    }
    for (const auto& c : root.at("chains")) {
      RefinementChain chain;
      chain.tokens = alphabet.encode(c.at("tokens").get<std::string>());
      for (const auto& d : c.at("levels")) chain.levels.push_back(description_from(alphabet, d));
      state.chains[c.at("episode").get<std::uint64_t>()] = std::move(chain);
    }
    std::string lib_text;
    for (const auto& line : root.at("library")) lib_text += line.get<std::string>() + "\n";

    GraphFile file{ConceptGraph::from_raw(std::move(alphabet), std::move(config), std::move(state)),
                   fn::import_library(lib_text)};
    return file;
  } catch (const json::exception& e) {
    corrupt(std::string("malformed graph file: ") + e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::CorruptFile) throw;
    corrupt(e.what());
  }
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::IoFailure, "read failed for " + path.string());
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error(ErrorCode::IoFailure, "write failed for " + path.string());
}

void save(const ConceptGraph& g, const std::filesystem::path& path, const fn::Library& library) {
  write_text_file(path, serialize(g, library));
}

GraphFile load(const std::filesystem::path& path) { return deserialize(read_text_file(path)); }

}  // namespace cgraph
