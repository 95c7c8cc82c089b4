#include "mine/embedding.h"

#include <algorithm>

namespace mine {

const char* to_string(ExplorationMode mode) {
  return mode == ExplorationMode::kVertexInduced ? "vertex" : "edge";
}

bool Embedding::contains(Word w) const {
  return std::find(words_.begin(), words_.end(), w) != words_.end();
}

std::vector<Embedding> initial_candidates(const InputGraph& g, ExplorationMode mode) {
  const std::size_t count = mode == ExplorationMode::kVertexInduced
                                ? g.num_vertices()
                                : g.num_edges();
  std::vector<Embedding> out;
  out.reserve(count);
  for (Embedding::Word id = 0; id < count; ++id) out.emplace_back(mode, std::vector{id});
  return out;
}

void embedding_vertices(const InputGraph& g, const Embedding& e,
                        std::vector<VertexId>& out) {
  out.clear();
  if (e.mode() == ExplorationMode::kVertexInduced) {
    out.assign(e.words().begin(), e.words().end());
    return;
  }
  for (EdgeId id : e.words()) {
    const Edge& edge = g.edge(id);
    for (VertexId v : {edge.a, edge.b}) {
      if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
    }
  }
}

std::vector<VertexId> embedding_vertices(const InputGraph& g, const Embedding& e) {
  std::vector<VertexId> out;
  embedding_vertices(g, e, out);
  return out;
}

std::size_t num_vertices(const InputGraph& g, const Embedding& e) {
  if (e.mode() == ExplorationMode::kVertexInduced) return e.size();
  std::vector<VertexId> vertices;
  embedding_vertices(g, e, vertices);
  return vertices.size();
}

std::vector<EdgeId> embedding_edges(const InputGraph& g, const Embedding& e) {
  std::vector<EdgeId> out;
  if (e.mode() == ExplorationMode::kEdgeInduced) {
    out.assign(e.words().begin(), e.words().end());
  } else {
    for (std::size_t i = 0; i < e.size(); ++i) {
      for (std::size_t j = i + 1; j < e.size(); ++j) {
        if (auto id = g.edge_between(e[i], e[j])) out.push_back(*id);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

void extend_candidates(const InputGraph& g, const Embedding& e,
                       std::vector<Embedding::Word>& out) {
  out.clear();
  if (e.mode() == ExplorationMode::kVertexInduced) {
    for (VertexId v : e.words()) {
      for (const Neighbor& n : g.neighbors(v)) {
        if (!e.contains(n.vertex)) out.push_back(n.vertex);
      }
    }
  } else {
    std::vector<VertexId> vertices;
    embedding_vertices(g, e, vertices);
    for (VertexId v : vertices) {
      for (const Neighbor& n : g.neighbors(v)) {
        if (!e.contains(n.edge)) out.push_back(n.edge);
      }
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
}

std::vector<Embedding::Word> extend_candidates(const InputGraph& g, const Embedding& e) {
  std::vector<Embedding::Word> out;
  extend_candidates(g, e, out);
  return out;
}

bool is_connected_visit_order(const InputGraph& g, const Embedding& e) {
  const bool vertex_mode = e.mode() == ExplorationMode::kVertexInduced;
  const std::size_t bound = vertex_mode ? g.num_vertices() : g.num_edges();
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (e[i] >= bound) return false;
    bool linked = i == 0;
    for (std::size_t j = 0; j < i; ++j) {
      if (e[j] == e[i]) return false;
      linked = linked || (vertex_mode ? g.are_adjacent(e[j], e[i])
                                      : g.edges_touch(e[j], e[i]));
    }
    if (!linked) return false;
  }
  return true;
}

std::string render(const InputGraph& g, const Embedding& e) {
  std::string out;
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (i > 0) out += ' ';
    if (e.mode() == ExplorationMode::kVertexInduced) {
      out += std::to_string(e[i]);
    } else {
      const Edge& edge = g.edge(e[i]);
      out += '(' + std::to_string(edge.a) + ',' + std::to_string(edge.b) + ')';
    }
  }
  return out;
}

}  // namespace mine
