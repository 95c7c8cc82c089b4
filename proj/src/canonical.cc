#include "mine/canonical.h"

#include <algorithm>

namespace mine {

namespace {

template <class Words, class IsNeighbor>
bool CheckExtension(const Words& parent, Embedding::Word v, IsNeighbor is_neighbor) {
  if (parent.empty()) return true;
  if (parent[0] > v) return false;
  bool found_neighbor = false;
  for (Embedding::Word w : parent) {
    if (!found_neighbor && is_neighbor(w)) {
      found_neighbor = true;
    } else if (found_neighbor && w > v) {
      return false;
    }
  }
  return true;
}

}  // namespace

bool is_canonical_extension(const InputGraph& g, std::span<const VertexId> parent,
                            VertexId v) {
  return CheckExtension(parent, v, [&](VertexId u) { return g.are_adjacent(u, v); });
}

bool is_canonical_extension_edges(const InputGraph& g, std::span<const EdgeId> parent,
                                  EdgeId x) {
  return CheckExtension(parent, x, [&](EdgeId y) { return g.edges_touch(y, x); });
}

bool is_canonical_extension(const InputGraph& g, const Embedding& parent,
                            Embedding::Word w) {
  return parent.mode() == ExplorationMode::kVertexInduced
             ? is_canonical_extension(g, parent.words(), w)
             : is_canonical_extension_edges(g, parent.words(), w);
}

bool is_canonical(const InputGraph& g, const Embedding& e) {
  if (!is_connected_visit_order(g, e)) return false;
  const bool vertex_mode = e.mode() == ExplorationMode::kVertexInduced;
  for (std::size_t i = 1; i < e.size(); ++i) {
    auto prefix = e.words().first(i);
    if (!(vertex_mode ? is_canonical_extension(g, prefix, e[i])
                      : is_canonical_extension_edges(g, prefix, e[i]))) {
      return false;
    }
  }
  return true;
}

Embedding canonical_form(const InputGraph& g, ExplorationMode mode,
                         std::vector<Embedding::Word> ids) {
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  Embedding out(mode);
  if (ids.empty()) return out;

  const bool vertex_mode = mode == ExplorationMode::kVertexInduced;
  std::vector<bool> visited(ids.size(), false);
  out.push_back(ids[0]);
  visited[0] = true;
  while (out.size() < ids.size()) {
    // ids is sorted, so the first connected unvisited id is the smallest.
    bool grew = false;
    for (std::size_t i = 0; i < ids.size() && !grew; ++i) {
      if (visited[i]) continue;
      for (Embedding::Word w : out.words()) {
        if (vertex_mode ? g.are_adjacent(w, ids[i]) : g.edges_touch(w, ids[i])) {
          out.push_back(ids[i]);
          visited[i] = true;
          grew = true;
          break;
        }
      }
    }
    if (!grew) throw DisconnectedError("id set does not induce a connected subgraph");
  }
  return out;
}

}  // namespace mine
