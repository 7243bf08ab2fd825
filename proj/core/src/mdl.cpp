#include "cgraph/mdl.hpp"

#include <bit>
#include <cmath>
#include <cstdio>

#include "cgraph/error.hpp"

namespace cgraph {

namespace {

constexpr double kKindHeaderBits = 2.0;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

std::string format_report(const DLReport& r) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "raw_bits=%.9f described_bits=%.9f model_bits=%.9f attention=%.9f",
                r.raw_bits, r.described_bits, r.model_bits, r.attention);
  return buf;
}

std::uint64_t gamma_len(std::uint64_t k) {
  if (k == 0) throw Error(ErrorCode::NonPositive, "gamma code needs k >= 1");
  return 2 * static_cast<std::uint64_t>(std::bit_width(k) - 1) + 1;
}

double raw_dl(std::uint64_t n, std::size_t sigma_size) {
  return static_cast<double>(gamma_len(n + 1)) +
         static_cast<double>(n) * std::log2(static_cast<double>(sigma_size));
}

CodeTable CodeTable::of(const ConceptGraph& g) {
  CodeTable t;
  for (const auto& c : g.concepts()) {
    if (!g.is_codable(c.id)) continue;
    t.total_weight += c.weight;
    ++t.codable;
  }
  t.log2_denominator = std::log2(t.total_weight + static_cast<double>(t.codable) + 1.0);
  return t;
}

double CodeTable::ref_cost_for_weight(double w) const {
  return log2_denominator - std::log2(w + 1.0);
}

double ref_cost(const ConceptGraph& g, const CodeTable& code, ConceptId c) {
  if (!g.is_codable(c)) {
    throw Error(ErrorCode::NonExpandingConcept,
                "concept " + std::to_string(c.value) + " is not part of the reference code");
  }
  return code.ref_cost_for_weight(g.at(c).weight);
}

double ref_cost(const ConceptGraph& g, ConceptId c) { return ref_cost(g, CodeTable::of(g), c); }

double blob_cost(const CodeTable& code, std::uint64_t len, std::size_t sigma_size) {
  if (len == 0) throw Error(ErrorCode::NonPositive, "blob length must be >= 1");
  return code.escape_cost() + static_cast<double>(gamma_len(len)) +
         static_cast<double>(len) * std::log2(static_cast<double>(sigma_size));
}

double blob_cost(const ConceptGraph& g, std::uint64_t len) {
  return blob_cost(CodeTable::of(g), len, g.alphabet().size());
}

double description_dl(const ConceptGraph& g, const CodeTable& code, const Description& desc) {
  g.validate(desc);
  double bits = static_cast<double>(gamma_len(desc.size() + 1));
  for (const auto& n : desc.nodes) {
    if (const auto* id = std::get_if<ConceptId>(&n)) {
      bits += ref_cost(g, code, *id);
    } else {
      bits += blob_cost(code, std::get<Blob>(n).tokens.size(), g.alphabet().size());
    }
  }
  return bits;
}

double description_dl(const ConceptGraph& g, const Description& desc) {
  return description_dl(g, CodeTable::of(g), desc);
}

double definition_cost(const ConceptGraph& g, const CodeTable& code, ConceptId c) {
  auto ref = [&](ConceptId id) { return ref_cost(g, code, id); };
  auto gl = [](std::uint64_t k) { return static_cast<double>(gamma_len(k)); };
  return std::visit(
      overloaded{
          [](const Primitive&) { return 0.0; },
          [&](const Concat& k) {
            double bits = kKindHeaderBits + gl(k.children.size());
            for (auto id : k.children) bits += ref(id);
            return bits;
          },
          [&](const Repeat& k) {
            return kKindHeaderBits + gl(1) + ref(k.child) + gl(k.count);
          },
          [&](const Template& k) {
            // One flag bit per slot distinguishes holes from references.
            double bits = kKindHeaderBits + gl(k.body.size());
            for (const auto& s : k.body) {
              if (const auto* h = std::get_if<Hole>(&s)) {
                bits += 1.0 + gl(h->index + 1);
              } else {
                bits += 1.0 + ref(std::get<ConceptId>(s));
              }
            }
            return bits;
          },
          [&](const Apply& k) {
            double bits = kKindHeaderBits + gl(k.fillers.size()) + ref(k.templ);
            for (auto id : k.fillers) bits += ref(id);
            return bits;
          },
          [](const auto&) { return 0.0; },
      },
      g.at(c).kind);
}

double model_dl(const ConceptGraph& g, const CodeTable& code) {
  double bits = 0.0;
  for (const auto& c : g.concepts()) bits += definition_cost(g, code, c.id);
  return bits;
}

double model_dl(const ConceptGraph& g) { return model_dl(g, CodeTable::of(g)); }

double stored_dl(const ConceptGraph& g, const CodeTable& code) {
  const auto& t = g.stored_tally();
  double bits = static_cast<double>(t.fixed_int_bits) +
                static_cast<double>(t.blob_tokens) *
                    std::log2(static_cast<double>(g.alphabet().size())) +
                static_cast<double>(t.coded_nodes) * code.log2_denominator;
  for (const auto& [id, count] : t.ref_counts) {
    bits -= static_cast<double>(count) * std::log2(g.at(id).weight + 1.0);
  }
  return bits;
}

double stored_dl(const ConceptGraph& g) { return stored_dl(g, CodeTable::of(g)); }

double two_part_total(const ConceptGraph& g) {
  auto code = CodeTable::of(g);
  return model_dl(g, code) + stored_dl(g, code);
}

double attention(const ConceptGraph& g, const TokenSeq& tokens, const Description& desc) {
  if (g.reconstruct(desc) != tokens) {
    throw Error(ErrorCode::ReconstructionMismatch, "description does not reproduce the input");
  }
  return raw_dl(tokens.size(), g.alphabet().size()) - description_dl(g, desc);
}

DLReport make_report(const ConceptGraph& g, std::uint64_t n_tokens, const Description& desc) {
  auto code = CodeTable::of(g);
  DLReport r;
  r.raw_bits = raw_dl(n_tokens, g.alphabet().size());
  r.described_bits = description_dl(g, code, desc);
  r.model_bits = model_dl(g, code);
  r.attention = r.raw_bits - r.described_bits;
  return r;
}

double kraft_sum(const ConceptGraph& g) {
  auto code = CodeTable::of(g);
  double sum = std::exp2(-code.escape_cost());
  for (const auto& c : g.concepts()) {
    if (g.is_codable(c.id)) sum += std::exp2(-ref_cost(g, code, c.id));
  }
  return sum;
}

}  // namespace cgraph
