#ifndef MINE_CANONICAL_H_
#define MINE_CANONICAL_H_

#include <span>
#include <stdexcept>
#include <vector>

#include "mine/embedding.h"
#include "mine/graph.h"

namespace mine {

// Embedding canonicality.
//
// A visit order <v1..vn> is canonical when it starts at the smallest id and
// each later id is the smallest unvisited neighbor of the prefix. Exactly one
// ordering of every connected id set is canonical, and dropping the last word
// of a canonical embedding leaves a canonical embedding, so the engine can
// discard automorphic duplicates locally without coordination.

// Incremental check for appending vertex `v` to a canonical vertex-mode
// parent: reject if v is smaller than the first word, otherwise scan the
// parent and reject if any word after the first neighbor of v exceeds v.
// Assumes v is adjacent to some parent word and not already in the parent.
bool is_canonical_extension(const InputGraph& g, std::span<const VertexId> parent,
                            VertexId v);

// Edge-mode analogue: "neighbor" means "shares an endpoint".
bool is_canonical_extension_edges(const InputGraph& g, std::span<const EdgeId> parent,
                                  EdgeId x);

// Dispatches on the parent's mode.
bool is_canonical_extension(const InputGraph& g, const Embedding& parent,
                            Embedding::Word w);

// Chains the incremental check over every prefix. Also verifies that the
// words are distinct and each one is connected to its prefix.
bool is_canonical(const InputGraph& g, const Embedding& e);

class DisconnectedError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Greedy construction of the canonical ordering of an unordered id set.
// Throws DisconnectedError if the ids do not induce a connected subgraph.
Embedding canonical_form(const InputGraph& g, ExplorationMode mode,
                         std::vector<Embedding::Word> ids);

}  // namespace mine

#endif  // MINE_CANONICAL_H_
