#ifndef MINE_EMBEDDING_H_
#define MINE_EMBEDDING_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mine/graph.h"

namespace mine {

enum class ExplorationMode { kVertexInduced, kEdgeInduced };

const char* to_string(ExplorationMode mode);

// A connected subgraph of the input graph, stored as the ordered sequence of
// visited ids: vertex ids in vertex-induced mode, edge ids in edge-induced
// mode. Two embeddings are equal iff their sequences are equal; automorphic
// embeddings in different visit orders compare unequal.
class Embedding {
 public:
  using Word = std::uint32_t;

  explicit Embedding(ExplorationMode mode = ExplorationMode::kVertexInduced)
      : mode_(mode) {}
  Embedding(ExplorationMode mode, std::vector<Word> words)
      : mode_(mode), words_(std::move(words)) {}

  ExplorationMode mode() const { return mode_; }
  std::span<const Word> words() const { return words_; }
  std::size_t size() const { return words_.size(); }
  bool empty() const { return words_.empty(); }
  Word operator[](std::size_t i) const { return words_[i]; }
  Word back() const { return words_.back(); }

  void push_back(Word w) { words_.push_back(w); }
  void pop_back() { words_.pop_back(); }
  void clear() { words_.clear(); }

  bool contains(Word w) const;

  bool operator==(const Embedding&) const = default;
  auto operator<=>(const Embedding& other) const {
    return words_ <=> other.words_;
  }

 private:
  ExplorationMode mode_;
  std::vector<Word> words_;
};

// Expansion of the "undefined" embedding: every vertex or every edge of g, in
// ascending id order.
std::vector<Embedding> initial_candidates(const InputGraph& g, ExplorationMode mode);

// Ids that extend e by one neighboring vertex (vertex mode) or one incident
// edge (edge mode), each once, ascending. An edge joining two vertices that
// are already in e counts as incident. `out` is cleared first.
void extend_candidates(const InputGraph& g, const Embedding& e,
                       std::vector<Embedding::Word>& out);
std::vector<Embedding::Word> extend_candidates(const InputGraph& g,
                                               const Embedding& e);

// Vertices in visit order. In edge mode each edge contributes its endpoints
// (lower id first) the first time they are seen.
std::vector<VertexId> embedding_vertices(const InputGraph& g, const Embedding& e);
void embedding_vertices(const InputGraph& g, const Embedding& e,
                        std::vector<VertexId>& out);

// Edge ids of the subgraph, ascending. Vertex mode includes every graph edge
// with both endpoints in the embedding.
std::vector<EdgeId> embedding_edges(const InputGraph& g, const Embedding& e);

std::size_t num_vertices(const InputGraph& g, const Embedding& e);

// True when the words are distinct and every prefix is connected.
bool is_connected_visit_order(const InputGraph& g, const Embedding& e);

// "v0 v1 ... vk" in vertex mode, "(a,b) (c,d) ..." in edge mode.
std::string render(const InputGraph& g, const Embedding& e);

}  // namespace mine

#endif  // MINE_EMBEDDING_H_
