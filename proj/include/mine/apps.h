#ifndef MINE_APPS_H_
#define MINE_APPS_H_

#include <cstddef>
#include <optional>
#include <vector>

#include "mine/aggregation.h"
#include "mine/embedding.h"
#include "mine/engine.h"
#include "mine/graph.h"
#include "mine/pattern.h"

namespace mine {

// Frequent subgraphs under minimum image support. Outputs every embedding
// of a frequent pattern and one "pattern\tsupport" line per frequent pattern.
// max_size caps the number of words (edges in edge mode).
Application fsm_app(std::size_t support_threshold,
                    std::optional<std::size_t> max_size = std::nullopt,
                    ExplorationMode mode = ExplorationMode::kEdgeInduced);

// Per-pattern counts of the embeddings with at most max_size vertices.
// Labels are ignored unless `labeled`.
Application motifs_app(std::size_t max_size, bool labeled = false,
                       ExplorationMode mode = ExplorationMode::kVertexInduced);

// Every clique with at most max_size vertices.
Application cliques_app(std::size_t max_size);

// Last word adjacent to every earlier word.
bool is_clique(const InputGraph& g, const Embedding& e);

// Slot i of the quick pattern holds the i-th visited vertex; each
// automorphism of the quick pattern adds its image slots too.
Domain embedding_domain(const InputGraph& g, const Embedding& e,
                        const std::vector<std::vector<Slot>>& automorphisms);

}  // namespace mine

#endif  // MINE_APPS_H_
