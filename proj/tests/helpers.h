// Glue between the library types and the oracles.
#ifndef MINE_TESTS_HELPERS_H_
#define MINE_TESTS_HELPERS_H_

#include <algorithm>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "mine/embedding.h"
#include "mine/engine.h"
#include "mine/graph.h"
#include "mine/pattern.h"
#include "oracles.h"

namespace testing {

inline mine::InputGraph parse(const std::string& text) {
  std::istringstream in(text);
  return mine::parse_graph(in);
}

inline mine::InputGraph two_colors() { return mine::load_graph(oracle::fixture("two_colors.graph")); }

inline mine::InputGraph complete_graph(std::uint32_t n) {
  std::vector<mine::Edge> edges;
  for (std::uint32_t a = 0; a < n; ++a) {
    for (std::uint32_t b = a + 1; b < n; ++b) edges.push_back({a, b, 0});
  }
  return mine::InputGraph::FromEdges(std::vector<mine::Label>(n, 0), edges);
}

inline oracle::Small small(const mine::Pattern& p) {
  oracle::Small s;
  s.labels.assign(p.labels().begin(), p.labels().end());
  s.adj.assign(p.size(), std::vector<long>(p.size(), -1));
  for (const auto& e : p.edges()) s.adj[e.a][e.b] = s.adj[e.b][e.a] = e.label;
  return s;
}

inline std::string certificate(const mine::Pattern& p) { return oracle::certificate(small(p)); }

// Words as an ascending id set.
inline oracle::IdSet id_set(const mine::Embedding& e) {
  oracle::IdSet s(e.words().begin(), e.words().end());
  std::sort(s.begin(), s.end());
  return s;
}

inline std::vector<oracle::IdSet> id_sets(const std::vector<mine::Embedding>& es) {
  std::vector<oracle::IdSet> out;
  for (const auto& e : es) out.push_back(id_set(e));
  std::sort(out.begin(), out.end());
  return out;
}

struct Run {
  mine::RunResult result;
  std::vector<std::string> lines;
};

inline Run run(const mine::InputGraph& g, const mine::Application& app,
               mine::EngineConfig config = {}) {
  if (config.workers == 0) config.workers = 2;
  mine::MemorySink sink;
  Run r;
  r.result = mine::run(g, app, config, sink);
  r.lines = sink.lines();
  return r;
}

// Some connected visit order of a connected id set (breadth-first from the
// first id).
inline mine::Embedding visit_order(const mine::InputGraph& g, mine::ExplorationMode mode,
                                   const oracle::IdSet& set) {
  auto touch = [&](std::uint32_t a, std::uint32_t b) {
    return mode == mine::ExplorationMode::kVertexInduced ? g.are_adjacent(a, b)
                                                         : g.edges_touch(a, b);
  };
  std::vector<mine::Embedding::Word> order{set.front()};
  std::vector<bool> used(set.size(), false);
  used[0] = true;
  for (std::size_t head = 0; head < order.size(); ++head) {
    for (std::size_t i = 0; i < set.size(); ++i) {
      if (!used[i] && touch(order[head], set[i])) {
        used[i] = true;
        order.push_back(set[i]);
      }
    }
  }
  return mine::Embedding(mode, std::move(order));
}

inline mine::Embedding vertices(std::vector<mine::Embedding::Word> w) {
  return mine::Embedding(mine::ExplorationMode::kVertexInduced, std::move(w));
}

inline mine::Embedding edges(std::vector<mine::Embedding::Word> w) {
  return mine::Embedding(mine::ExplorationMode::kEdgeInduced, std::move(w));
}

}  // namespace testing

#endif  // MINE_TESTS_HELPERS_H_
