#include "cgraph/valence.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <vector>

namespace cgraph {

namespace {

constexpr std::uint32_t kUnreached = std::numeric_limits<std::uint32_t>::max();

std::vector<std::uint32_t> bfs(const std::vector<std::vector<std::uint32_t>>& adj,
                               std::uint32_t source, std::uint32_t cap) {
  std::vector<std::uint32_t> dist(adj.size(), kUnreached);
  std::deque<std::uint32_t> queue{source};
  dist[source] = 0;
  while (!queue.empty()) {
    auto u = queue.front();
    queue.pop_front();
    if (dist[u] == cap) continue;
    for (auto v : adj[u]) {
      if (dist[v] != kUnreached) continue;
      dist[v] = dist[u] + 1;
      queue.push_back(v);
    }
  }
  return dist;
}

}  // namespace

ValenceMap propagate_valence(const ConceptGraph& g) {
  const auto n = g.size();
  std::vector<std::vector<std::uint32_t>> adj(n);
  for (const auto& c : g.concepts()) {
    for (auto ref : references(c.kind)) {
      adj[c.id.value].push_back(ref.value);
      adj[ref.value].push_back(c.id.value);
    }
  }
  const auto& cfg = g.config();
  auto plus = bfs(adj, g.pleasure().value, cfg.valence_hops);
  auto minus = bfs(adj, g.pain().value, cfg.valence_hops);
  auto term = [&](std::uint32_t d) {
    return d == kUnreached ? 0.0 : std::pow(cfg.valence_decay, static_cast<double>(d));
  };

  ValenceMap out;
  out.reserve(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    out[ConceptId{i}] = std::clamp(term(plus[i]) - term(minus[i]), -1.0, 1.0);
  }
  out[g.pleasure()] = 1.0;
  out[g.pain()] = -1.0;
  return out;
}

}  // namespace cgraph
