#include "mine/aggregation.h"

#include <algorithm>
#include <iterator>
#include <stdexcept>

namespace mine {

void Domain::merge(const Domain& other) {
  if (slots.empty()) {
    slots = other.slots;
    return;
  }
  if (other.slots.empty()) return;
  if (other.slots.size() != slots.size()) {
    throw std::invalid_argument("cannot merge domains of different pattern sizes");
  }
  for (std::size_t s = 0; s < slots.size(); ++s) {
    const auto& theirs = other.slots[s];
    if (theirs.empty()) continue;
    std::vector<VertexId> merged;
    merged.reserve(slots[s].size() + theirs.size());
    std::set_union(slots[s].begin(), slots[s].end(), theirs.begin(), theirs.end(),
                   std::back_inserter(merged));
    slots[s] = std::move(merged);
  }
}

Domain Domain::reindexed(const SlotMapping& mapping) const {
  if (mapping.to_canonical.size() != slots.size()) {
    throw std::invalid_argument("slot mapping does not match domain size");
  }
  Domain out(slots.size());
  for (std::size_t s = 0; s < slots.size(); ++s) out.slots[mapping.to_canonical[s]] = slots[s];
  return out;
}

std::size_t support(const Domain& d) {
  if (d.slots.empty()) return 0;
  std::size_t best = d.slots[0].size();
  for (const auto& slot : d.slots) best = std::min(best, slot.size());
  return best;
}

AggregateValue sum_values(const AggregationKey&, std::span<const AggregateValue> values) {
  std::int64_t total = 0;
  for (const AggregateValue& v : values) total += std::get<std::int64_t>(v);
  return total;
}

AggregateValue union_domains(const AggregationKey&, std::span<const AggregateValue> values) {
  Domain merged;
  for (const AggregateValue& v : values) merged.merge(std::get<Domain>(v));
  return merged;
}

AggregateValue reindex(const AggregateValue& value, const SlotMapping& mapping) {
  if (const auto* domain = std::get_if<Domain>(&value)) return domain->reindexed(mapping);
  return value;
}

std::string render_key(const AggregationKey& key) {
  if (const auto* p = std::get_if<Pattern>(&key)) return p->to_string();
  return std::to_string(std::get<std::int64_t>(key));
}

std::string render_value(const AggregateValue& value) {
  if (const auto* d = std::get_if<Domain>(&value)) return std::to_string(support(*d));
  return std::to_string(std::get<std::int64_t>(value));
}

namespace {

void Fold(std::vector<AggregateValue>& values, const AggregationKey& key,
          const Reducer& reduce) {
  if (values.size() < 2) return;
  AggregateValue folded = reduce(key, values);
  values.clear();
  values.push_back(std::move(folded));
}

}  // namespace

void LocalAggregates::add(AggregationKey key, AggregateValue value, const Reducer& reduce) {
  if (const auto* p = std::get_if<Pattern>(&key)) {
    add_pattern(p->key(), *p, std::move(value), reduce);
    return;
  }
  auto& values = by_int_[std::get<std::int64_t>(key)];
  values.push_back(std::move(value));
  if (values.size() >= kFoldThreshold) Fold(values, key, reduce);
}

void LocalAggregates::add_pattern(const std::string& quick_key, const Pattern& quick,
                                  AggregateValue value, const Reducer& reduce) {
  auto it = by_pattern_.find(quick_key);
  if (it == by_pattern_.end()) {
    it = by_pattern_.emplace(quick_key, PatternGroup{quick, {}}).first;
  }
  auto& values = it->second.values;
  values.push_back(std::move(value));
  if (values.size() >= kFoldThreshold) {
    Fold(values, AggregationKey(it->second.pattern), reduce);
  }
}

const CanonicalPattern& QuickPatternTable::add(const std::string& quick_key,
                                               const Pattern& p, std::size_t max_size) {
  auto it = entries_.find(quick_key);
  if (it != entries_.end()) return it->second;
  ++canonizations_;
  return entries_.emplace(quick_key, canonical_pattern(p, max_size)).first->second;
}

const CanonicalPattern* QuickPatternTable::find(const std::string& quick_key) const {
  auto it = entries_.find(quick_key);
  return it == entries_.end() ? nullptr : &it->second;
}

const AggregateValue* AggregateStore::find(std::int64_t key) const {
  auto it = by_int_.find(key);
  return it == by_int_.end() ? nullptr : &it->second;
}

const AggregateValue* AggregateStore::find_canonical(const std::string& canonical_key) const {
  auto it = by_pattern_.find(canonical_key);
  return it == by_pattern_.end() ? nullptr : &it->second.value;
}

void AggregateStore::set(std::int64_t key, AggregateValue value) {
  by_int_.insert_or_assign(key, std::move(value));
}

void AggregateStore::set(const std::string& canonical_key, Pattern pattern,
                         AggregateValue value) {
  by_pattern_.insert_or_assign(canonical_key,
                               PatternEntry{std::move(pattern), std::move(value)});
}

void AggregateStore::absorb(const AggregateStore& other, const Reducer& reduce) {
  for (const auto& [key, value] : other.by_int_) {
    auto it = by_int_.find(key);
    if (it == by_int_.end()) {
      by_int_.emplace(key, value);
    } else {
      const AggregateValue pair[] = {it->second, value};
      it->second = reduce(AggregationKey(key), pair);
    }
  }
  for (const auto& [key, entry] : other.by_pattern_) {
    auto it = by_pattern_.find(key);
    if (it == by_pattern_.end()) {
      by_pattern_.emplace(key, entry);
    } else {
      const AggregateValue pair[] = {it->second.value, entry.value};
      it->second.value = reduce(AggregationKey(entry.pattern), pair);
    }
  }
}

bool AggregateStore::operator==(const AggregateStore& other) const {
  if (by_int_ != other.by_int_ || by_pattern_.size() != other.by_pattern_.size()) {
    return false;
  }
  auto it = other.by_pattern_.begin();
  for (const auto& [key, entry] : by_pattern_) {
    if (key != it->first || !(entry.pattern == it->second.pattern) ||
        entry.value != it->second.value) {
      return false;
    }
    ++it;
  }
  return true;
}

AggregateStore two_level_reduce(std::span<const LocalAggregates* const> workers,
                                const Reducer& reduce, QuickPatternTable& table,
                                std::size_t max_pattern_size) {
  AggregateStore out;

  std::map<std::int64_t, std::vector<AggregateValue>> ints;
  // First level: group by quick pattern across workers.
  std::map<std::string, LocalAggregates::PatternGroup> quick;
  for (const LocalAggregates* local : workers) {
    for (const auto& [key, values] : local->by_int()) {
      auto& bucket = ints[key];
      bucket.insert(bucket.end(), values.begin(), values.end());
    }
    for (const auto& [key, group] : local->by_pattern()) {
      auto [it, inserted] = quick.try_emplace(key, LocalAggregates::PatternGroup{group.pattern, {}});
      it->second.values.insert(it->second.values.end(), group.values.begin(),
                               group.values.end());
    }
  }
  for (auto& [key, values] : ints) out.set(key, reduce(AggregationKey(key), values));

  // Second level: canonize each quick pattern once and re-key.
  std::map<std::string, LocalAggregates::PatternGroup> canonical;
  for (auto& [quick_key, group] : quick) {
    AggregateValue partial = reduce(AggregationKey(group.pattern), group.values);
    const CanonicalPattern& canon = table.add(quick_key, group.pattern, max_pattern_size);
    auto [it, inserted] = canonical.try_emplace(
        canon.pattern.key(), LocalAggregates::PatternGroup{canon.pattern, {}});
    it->second.values.push_back(reindex(partial, canon.mapping));
  }
  for (auto& [key, group] : canonical) {
    AggregateValue value = reduce(AggregationKey(group.pattern), group.values);
    out.set(key, group.pattern, std::move(value));
  }
  return out;
}

AggregateStore one_level_reduce(
    std::span<const std::pair<AggregationKey, AggregateValue>> calls,
    const Reducer& reduce, std::size_t max_pattern_size, std::size_t* canonizations) {
  AggregateStore out;
  std::map<std::int64_t, std::vector<AggregateValue>> ints;
  std::map<std::string, LocalAggregates::PatternGroup> canonical;
  std::size_t count = 0;
  for (const auto& [key, value] : calls) {
    if (const auto* p = std::get_if<Pattern>(&key)) {
      CanonicalPattern canon = canonical_pattern(*p, max_pattern_size);
      ++count;
      auto [it, inserted] = canonical.try_emplace(
          canon.pattern.key(), LocalAggregates::PatternGroup{canon.pattern, {}});
      it->second.values.push_back(reindex(value, canon.mapping));
    } else {
      ints[std::get<std::int64_t>(key)].push_back(value);
    }
  }
  for (auto& [key, values] : ints) out.set(key, reduce(AggregationKey(key), values));
  for (auto& [key, group] : canonical) {
    out.set(key, group.pattern, reduce(AggregationKey(group.pattern), group.values));
  }
  if (canonizations) *canonizations = count;
  return out;
}

}  // namespace mine
