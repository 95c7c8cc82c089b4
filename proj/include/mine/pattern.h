#ifndef MINE_PATTERN_H_
#define MINE_PATTERN_H_

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "mine/embedding.h"
#include "mine/graph.h"

namespace mine {

using Slot = std::uint8_t;

struct PatternEdge {
  Slot a = 0;  // a < b
  Slot b = 0;
  Label label = 0;

  auto operator<=>(const PatternEdge&) const = default;
};

enum class PatternKind {
  kQuick,      // slots follow an embedding's visit order
  kCanonical,  // slots follow the canonization order
};

// Small labeled template graph over slots 0..k-1.
class Pattern {
 public:
  Pattern() = default;
  // Normalizes and sorts the edge list. Throws std::invalid_argument on
  // out-of-range slots, self-loops or duplicate edges.
  Pattern(std::vector<Label> labels, std::vector<PatternEdge> edges,
          PatternKind kind = PatternKind::kQuick);

  std::size_t size() const { return labels_.size(); }
  std::size_t num_edges() const { return edges_.size(); }
  const std::vector<Label>& labels() const { return labels_; }
  const std::vector<PatternEdge>& edges() const { return edges_; }
  PatternKind kind() const { return kind_; }

  bool has_edge(Slot a, Slot b) const { return matrix_[a * size() + b] >= 0; }
  // -1 when there is no edge, otherwise the edge label.
  std::int64_t edge_code(Slot a, Slot b) const { return matrix_[a * size() + b]; }
  std::size_t degree(Slot s) const;

  bool connected() const;

  // Aggregation key. Little-endian bytes: u8 k, k x u32 slot labels,
  // u16 edge count, then per edge (sorted) u8 a, u8 b, u32 label.
  std::string key() const;

  // "k=<k>; labels=<l0,...>; edges=<(a,b,l)...>"
  std::string to_string() const;

  // Structural equality; the kind flag is ignored.
  bool operator==(const Pattern& other) const {
    return labels_ == other.labels_ && edges_ == other.edges_;
  }

 private:
  std::vector<Label> labels_;
  std::vector<PatternEdge> edges_;
  std::vector<std::int64_t> matrix_;
  PatternKind kind_ = PatternKind::kQuick;
};

// Bijection from quick-pattern slots to canonical-pattern slots.
struct SlotMapping {
  std::vector<Slot> to_canonical;

  bool operator==(const SlotMapping&) const = default;
};

class PatternTooLargeError : public std::length_error {
 public:
  using std::length_error::length_error;
};

inline constexpr std::size_t kDefaultMaxPatternSize = 10;

// Reads the labels off e in visit order; linear in the embedding size. With
// use_labels false every vertex and edge label is replaced by 0.
Pattern quick_pattern(const InputGraph& g, const Embedding& e, bool use_labels = true);

struct CanonicalPattern {
  Pattern pattern;
  SlotMapping mapping;
};

// Label-preserving canonical form: two patterns get byte-identical results
// iff they are isomorphic. Uses colour refinement on (label, degree) followed
// by a search over refinement-respecting orders for the smallest adjacency
// code. Throws PatternTooLargeError past max_size slots.
CanonicalPattern canonical_pattern(const Pattern& p,
                                   std::size_t max_size = kDefaultMaxPatternSize);

// Applies a slot mapping: slot i of p becomes slot mapping.to_canonical[i].
Pattern relabel(const Pattern& p, const SlotMapping& mapping, PatternKind kind);

// Brute-force backtracking; does not share code with canonical_pattern.
bool patterns_isomorphic(const Pattern& p1, const Pattern& p2);

// Every label-preserving isomorphism from p1 onto p2, as slot maps.
std::vector<std::vector<Slot>> isomorphisms(const Pattern& p1, const Pattern& p2);
std::vector<std::vector<Slot>> automorphisms(const Pattern& p);

}  // namespace mine

#endif  // MINE_PATTERN_H_
