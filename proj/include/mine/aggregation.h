#ifndef MINE_AGGREGATION_H_
#define MINE_AGGREGATION_H_

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "mine/graph.h"
#include "mine/pattern.h"

namespace mine {

// Per-slot sets of graph vertices, the carrier of minimum image support.
struct Domain {
  std::vector<std::vector<VertexId>> slots;  // each sorted, distinct

  Domain() = default;
  explicit Domain(std::size_t k) : slots(k) {}

  // Slot-wise union. Throws std::invalid_argument on a slot-count mismatch.
  void merge(const Domain& other);
  // Slot i moves to mapping.to_canonical[i].
  Domain reindexed(const SlotMapping& mapping) const;

  bool operator==(const Domain&) const = default;
};

// Minimum slot-set size; 0 for an empty domain.
std::size_t support(const Domain& d);

// Aggregation values are plain counters or slot-indexed domains. Domains are
// re-indexed when a quick-pattern group is re-keyed to its canonical pattern.
using AggregateValue = std::variant<std::int64_t, Domain>;

// Integer keys aggregate as-is. Pattern keys are quick patterns at the call
// site and trigger two-level aggregation.
using AggregationKey = std::variant<std::int64_t, Pattern>;

// reduce(key, values) -> value. Must be associative and commutative: the
// engine applies it to partial groups and then to the partial results.
using Reducer =
    std::function<AggregateValue(const AggregationKey&, std::span<const AggregateValue>)>;

AggregateValue sum_values(const AggregationKey&, std::span<const AggregateValue> values);
AggregateValue union_domains(const AggregationKey&, std::span<const AggregateValue> values);

AggregateValue reindex(const AggregateValue& value, const SlotMapping& mapping);

std::string render_key(const AggregationKey& key);
// Counters print as numbers, domains as their support.
std::string render_value(const AggregateValue& value);

// Worker-private write side of one aggregation channel for one step.
// Values are buffered per key and folded every kFoldThreshold calls.
class LocalAggregates {
 public:
  static constexpr std::size_t kFoldThreshold = 64;

  void add(AggregationKey key, AggregateValue value, const Reducer& reduce);
  // Pattern-key form for callers that already hold quick.key().
  void add_pattern(const std::string& quick_key, const Pattern& quick,
                   AggregateValue value, const Reducer& reduce);
  bool empty() const { return by_int_.empty() && by_pattern_.empty(); }
  void clear() {
    by_int_.clear();
    by_pattern_.clear();
  }

  struct PatternGroup {
    Pattern pattern;
    std::vector<AggregateValue> values;
  };

  const std::unordered_map<std::int64_t, std::vector<AggregateValue>>& by_int() const {
    return by_int_;
  }
  // Keyed by Pattern::key() of the quick pattern.
  const std::unordered_map<std::string, PatternGroup>& by_pattern() const {
    return by_pattern_;
  }

 private:
  std::unordered_map<std::int64_t, std::vector<AggregateValue>> by_int_;
  std::unordered_map<std::string, PatternGroup> by_pattern_;
};

// Quick-pattern key -> canonical form. Built at the step barrier with one
// canonization per distinct quick pattern, then read-only.
class QuickPatternTable {
 public:
  // Canonizes p unless its key is already present. Returns the entry.
  const CanonicalPattern& add(const std::string& quick_key, const Pattern& p,
                              std::size_t max_size);
  const CanonicalPattern* find(const std::string& quick_key) const;
  std::size_t size() const { return entries_.size(); }
  const std::unordered_map<std::string, CanonicalPattern>& entries() const {
    return entries_;
  }
  std::size_t canonizations() const { return canonizations_; }
  void reset_counter() { canonizations_ = 0; }

 private:
  std::unordered_map<std::string, CanonicalPattern> entries_;
  std::size_t canonizations_ = 0;
};

// Reduced, immutable read side. Pattern entries are keyed by the canonical
// pattern's key() and hold values in canonical slot order.
class AggregateStore {
 public:
  struct PatternEntry {
    Pattern pattern;
    AggregateValue value;
  };

  const AggregateValue* find(std::int64_t key) const;
  const AggregateValue* find_canonical(const std::string& canonical_key) const;

  const std::map<std::int64_t, AggregateValue>& by_int() const { return by_int_; }
  const std::map<std::string, PatternEntry>& by_pattern() const { return by_pattern_; }
  bool empty() const { return by_int_.empty() && by_pattern_.empty(); }

  void set(std::int64_t key, AggregateValue value);
  void set(const std::string& canonical_key, Pattern pattern, AggregateValue value);

  // Folds `other` into this store with `reduce`.
  void absorb(const AggregateStore& other, const Reducer& reduce);

  bool operator==(const AggregateStore& other) const;

 private:
  std::map<std::int64_t, AggregateValue> by_int_;
  std::map<std::string, PatternEntry> by_pattern_;
};

// Reduces worker-local groups by quick pattern, canonizes each distinct quick
// pattern once through `table`, re-indexes the partial values and reduces
// again by canonical pattern.
AggregateStore two_level_reduce(std::span<const LocalAggregates* const> workers,
                                const Reducer& reduce, QuickPatternTable& table,
                                std::size_t max_pattern_size = kDefaultMaxPatternSize);

// Reference path: canonizes the key of every single call. Used to check
// two_level_reduce. Reports the number of canonizations when asked.
AggregateStore one_level_reduce(
    std::span<const std::pair<AggregationKey, AggregateValue>> calls,
    const Reducer& reduce, std::size_t max_pattern_size = kDefaultMaxPatternSize,
    std::size_t* canonizations = nullptr);

}  // namespace mine

#endif  // MINE_AGGREGATION_H_
