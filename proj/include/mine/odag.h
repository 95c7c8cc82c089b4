#ifndef MINE_ODAG_H_
#define MINE_ODAG_H_

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "mine/embedding.h"

namespace mine {

// Overapproximating DAG over same-length id sequences.
//
// Array i holds every id seen at position i; an element of array i links to
// an element of array i+1 when some stored sequence has them at positions i
// and i+1. Every stored sequence is a root-to-leaf path, but the path
// language can contain extra (spurious) sequences, which extraction removes
// with a caller-supplied prefix pruner.

class OdagError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class Odag;

class OdagBuilder {
 public:
  explicit OdagBuilder(std::size_t depth, std::string key = {});
  static OdagBuilder From(const Odag& odag);

  std::size_t depth() const { return elements_.size(); }
  const std::string& key() const { return key_; }
  void set_key(std::string key) { key_ = std::move(key); }
  bool empty() const { return elements_.empty() || elements_[0].empty(); }

  // Idempotent. Throws OdagError when the length differs from depth().
  void insert(std::span<const std::uint32_t> words);

  // Positionwise union. Throws OdagError on depth or key mismatch.
  void merge(const OdagBuilder& other);
  // Union of array `level` (and its outgoing links) only, so different
  // levels of one target can be merged concurrently.
  void merge_level(std::size_t level, const OdagBuilder& other);

  Odag build() const;

 private:
  std::string key_;
  std::vector<std::unordered_set<std::uint32_t>> elements_;
  // links_[i] holds (id at i) << 32 | (id at i + 1).
  std::vector<std::unordered_set<std::uint64_t>> links_;
};

struct PathRange {
  std::uint64_t begin = 0;
  std::uint64_t end = 0;

  std::uint64_t size() const { return end - begin; }
  bool operator==(const PathRange&) const = default;
};

// Paths of one worker. Path indices follow depth-first order over the ODAG,
// so a range is a contiguous run of the decoded language.
struct WorkPartition {
  std::vector<PathRange> ranges;
  std::uint64_t cost = 0;
  std::uint64_t block_size = 1;
};

class Odag {
 public:
  Odag() = default;

  std::size_t depth() const { return arrays_.size(); }
  const std::string& key() const { return key_; }
  bool empty() const { return arrays_.empty() || arrays_[0].empty(); }

  std::span<const std::uint32_t> array(std::size_t level) const { return arrays_[level]; }
  // Indices into array(level + 1).
  std::span<const std::uint32_t> successors(std::size_t level, std::size_t index) const;

  // Number of root-to-leaf paths below an element; 1 on the last array.
  // Saturates at UINT64_MAX.
  std::uint64_t cost(std::size_t level, std::size_t index) const {
    return costs_[level][index];
  }
  const std::vector<std::vector<std::uint64_t>>& costs() const { return costs_; }
  // Size of the decoded language, spurious paths included.
  std::uint64_t total_cost() const { return total_cost_; }

  std::size_t num_links() const;

  // Element index per level of the path with the given depth-first index.
  std::vector<std::uint32_t> locate(std::uint64_t path_index) const;

  // Depth-first decode of the paths in `range`. `prune(prefix)` is called
  // after each id is appended (leaf included); returning false abandons the
  // prefix and every path below it. `visit(words)` receives surviving paths.
  template <class Prune, class Visit>
  void extract(PathRange range, Prune&& prune, Visit&& visit) const;

  template <class Prune, class Visit>
  void extract(Prune&& prune, Visit&& visit) const {
    extract(PathRange{0, total_cost_}, prune, visit);
  }

  // Every path, unpruned.
  std::vector<std::vector<std::uint32_t>> decode_all() const;

  // Little-endian: "ODAG", u8 version, u16 depth, u32 key length, key bytes;
  // then per array: u32 length, u32 ids, then per element u32 successor
  // count and u32 successor indices (count 0 on the last array).
  std::string serialize() const;
  static Odag deserialize(std::string_view bytes);
  std::size_t serialized_size() const;

  bool operator==(const Odag& other) const {
    return key_ == other.key_ && arrays_ == other.arrays_ &&
           offsets_ == other.offsets_ && links_ == other.links_;
  }

 private:
  friend class OdagBuilder;
  void ComputeCosts();

  template <class Prune, class Visit>
  void Descend(std::size_t level, std::uint32_t index, std::uint64_t offset,
               PathRange range, std::vector<std::uint32_t>& prefix, Prune& prune,
               Visit& visit) const;

  std::string key_;
  std::vector<std::vector<std::uint32_t>> arrays_;
  // CSR successor lists for levels 0..depth-2.
  std::vector<std::vector<std::uint32_t>> offsets_;
  std::vector<std::vector<std::uint32_t>> links_;
  std::vector<std::vector<std::uint64_t>> costs_;
  std::uint64_t total_cost_ = 0;
};

inline constexpr std::uint8_t kOdagFormatVersion = 1;

// Size of the same set stored as a plain list: u32 count, then depth u32 ids
// per sequence.
std::size_t embedding_list_serialized_size(std::size_t count, std::size_t depth);

// Free-function forms of the builder and decoder operations.
void odag_insert(OdagBuilder& odag, const Embedding& e);
Odag odag_merge(const Odag& a, const Odag& b);
std::vector<std::vector<std::uint64_t>> odag_costs(const Odag& odag);

// W+1 ascending cut points splitting [0, total) into `workers` contiguous
// shares. Each interior cut is the ideal w*total/workers rounded to the
// nearest multiple of block_size, so every share is within one block of the
// mean.
std::vector<std::uint64_t> balanced_cuts(std::uint64_t total, std::size_t workers,
                                         std::uint64_t block_size);

// Splits the decoded language of one ODAG across workers by estimated cost.
// Cut points that land inside an element's subtree descend into its
// successors, and so on down the arrays.
std::vector<WorkPartition> odag_partition(const Odag& odag, std::size_t workers,
                                          std::uint64_t block_size);

// --- template definitions -------------------------------------------------

template <class Prune, class Visit>
void Odag::extract(PathRange range, Prune&& prune, Visit&& visit) const {
  if (empty() || range.begin >= range.end) return;
  std::vector<std::uint32_t> prefix;
  prefix.reserve(depth());
  std::uint64_t offset = 0;
  for (std::uint32_t j = 0; j < arrays_[0].size(); ++j) {
    const std::uint64_t c = costs_[0][j];
    if (offset >= range.end) break;
    if (offset + c > range.begin) Descend(0, j, offset, range, prefix, prune, visit);
    offset += c;
  }
}

template <class Prune, class Visit>
void Odag::Descend(std::size_t level, std::uint32_t index, std::uint64_t offset,
                   PathRange range, std::vector<std::uint32_t>& prefix, Prune& prune,
                   Visit& visit) const {
  prefix.push_back(arrays_[level][index]);
  if (prune(std::span<const std::uint32_t>(prefix))) {
    if (level + 1 == depth()) {
      visit(std::span<const std::uint32_t>(prefix));
    } else {
      for (std::uint32_t next : successors(level, index)) {
        const std::uint64_t c = costs_[level + 1][next];
        if (offset >= range.end) break;
        if (offset + c > range.begin) {
          Descend(level + 1, next, offset, range, prefix, prune, visit);
        }
        offset += c;
      }
    }
  }
  prefix.pop_back();
}

}  // namespace mine

#endif  // MINE_ODAG_H_
