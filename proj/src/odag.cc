#include "mine/odag.h"

#include <algorithm>
#include <limits>

namespace mine {

OdagBuilder::OdagBuilder(std::size_t depth, std::string key)
    : key_(std::move(key)),
      elements_(depth),
      links_(depth > 0 ? depth - 1 : 0) {}

OdagBuilder OdagBuilder::From(const Odag& odag) {
  OdagBuilder builder(odag.depth(), odag.key());
  for (std::size_t level = 0; level < odag.depth(); ++level) {
    auto ids = odag.array(level);
    builder.elements_[level].insert(ids.begin(), ids.end());
    if (level + 1 == odag.depth()) continue;
    auto next = odag.array(level + 1);
    for (std::size_t j = 0; j < ids.size(); ++j) {
      for (std::uint32_t s : odag.successors(level, j)) {
        builder.links_[level].insert((std::uint64_t{ids[j]} << 32) | next[s]);
      }
    }
  }
  return builder;
}

void OdagBuilder::insert(std::span<const std::uint32_t> words) {
  if (words.size() != depth()) {
    throw OdagError("embedding of size " + std::to_string(words.size()) +
                    " inserted into ODAG of depth " + std::to_string(depth()));
  }
  for (std::size_t i = 0; i < words.size(); ++i) {
    elements_[i].insert(words[i]);
    if (i + 1 < words.size()) {
      links_[i].insert((std::uint64_t{words[i]} << 32) | words[i + 1]);
    }
  }
}

void OdagBuilder::merge_level(std::size_t level, const OdagBuilder& other) {
  if (other.depth() != depth() || other.key_ != key_) {
    throw OdagError("cannot merge ODAGs with different depth or pattern");
  }
  elements_[level].insert(other.elements_[level].begin(), other.elements_[level].end());
  if (level < links_.size()) {
    links_[level].insert(other.links_[level].begin(), other.links_[level].end());
  }
}

void OdagBuilder::merge(const OdagBuilder& other) {
  if (other.depth() != depth() || other.key_ != key_) {
    throw OdagError("cannot merge ODAGs with different depth or pattern");
  }
  for (std::size_t level = 0; level < depth(); ++level) merge_level(level, other);
}

Odag OdagBuilder::build() const {
  Odag odag;
  odag.key_ = key_;
  const std::size_t depth = this->depth();
  odag.arrays_.resize(depth);
  for (std::size_t level = 0; level < depth; ++level) {
    auto& ids = odag.arrays_[level];
    ids.assign(elements_[level].begin(), elements_[level].end());
    std::sort(ids.begin(), ids.end());
  }
  odag.offsets_.resize(links_.size());
  odag.links_.resize(links_.size());
  for (std::size_t level = 0; level < links_.size(); ++level) {
    std::vector<std::uint64_t> pairs(links_[level].begin(), links_[level].end());
    std::sort(pairs.begin(), pairs.end());
    const auto& from = odag.arrays_[level];
    const auto& to = odag.arrays_[level + 1];
    auto& offsets = odag.offsets_[level];
    auto& targets = odag.links_[level];
    offsets.assign(from.size() + 1, 0);
    targets.reserve(pairs.size());
    std::size_t j = 0;
    for (std::uint64_t pair : pairs) {
      const auto source = static_cast<std::uint32_t>(pair >> 32);
      const auto target = static_cast<std::uint32_t>(pair);
      while (from[j] != source) offsets[++j] = static_cast<std::uint32_t>(targets.size());
      targets.push_back(static_cast<std::uint32_t>(
          std::lower_bound(to.begin(), to.end(), target) - to.begin()));
    }
    while (j < from.size()) offsets[++j] = static_cast<std::uint32_t>(targets.size());
  }
  odag.ComputeCosts();
  return odag;
}

std::span<const std::uint32_t> Odag::successors(std::size_t level,
                                                std::size_t index) const {
  const auto& offsets = offsets_[level];
  return {links_[level].data() + offsets[index], links_[level].data() + offsets[index + 1]};
}

namespace {

std::uint64_t SaturatingAdd(std::uint64_t a, std::uint64_t b) {
  return a > std::numeric_limits<std::uint64_t>::max() - b
             ? std::numeric_limits<std::uint64_t>::max()
             : a + b;
}

}  // namespace

void Odag::ComputeCosts() {
  costs_.assign(depth(), {});
  total_cost_ = 0;
  if (empty()) return;
  costs_.back().assign(arrays_.back().size(), 1);
  for (std::size_t level = depth() - 1; level-- > 0;) {
    auto& costs = costs_[level];
    costs.assign(arrays_[level].size(), 0);
    for (std::size_t j = 0; j < costs.size(); ++j) {
      for (std::uint32_t s : successors(level, j)) {
        costs[j] = SaturatingAdd(costs[j], costs_[level + 1][s]);
      }
    }
  }
  for (std::uint64_t c : costs_[0]) total_cost_ = SaturatingAdd(total_cost_, c);
}

std::size_t Odag::num_links() const {
  std::size_t n = 0;
  for (const auto& l : links_) n += l.size();
  return n;
}

std::vector<std::uint32_t> Odag::locate(std::uint64_t path_index) const {
  if (path_index >= total_cost_) throw std::out_of_range("path index past the ODAG end");
  std::vector<std::uint32_t> path;
  std::uint64_t remaining = path_index;
  auto pick = [&](std::size_t level, auto candidates) {
    for (std::uint32_t j : candidates) {
      const std::uint64_t c = costs_[level][j];
      if (remaining < c) return j;
      remaining -= c;
    }
    throw std::logic_error("inconsistent ODAG costs");
  };
  std::vector<std::uint32_t> roots(arrays_[0].size());
  for (std::uint32_t j = 0; j < roots.size(); ++j) roots[j] = j;
  path.push_back(pick(0, roots));
  for (std::size_t level = 1; level < depth(); ++level) {
    path.push_back(pick(level, successors(level - 1, path.back())));
  }
  return path;
}

std::vector<std::vector<std::uint32_t>> Odag::decode_all() const {
  std::vector<std::vector<std::uint32_t>> out;
  extract([](std::span<const std::uint32_t>) { return true; },
          [&](std::span<const std::uint32_t> words) {
            out.emplace_back(words.begin(), words.end());
          });
  return out;
}

namespace {

void PutU32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

class Reader {
 public:
  explicit Reader(std::string_view bytes) : bytes_(bytes) {}

  std::uint32_t Uint(std::size_t width) {
    if (pos_ + width > bytes_.size()) throw OdagError("truncated ODAG serialization");
    std::uint32_t v = 0;
    for (std::size_t i = 0; i < width; ++i) {
      v |= std::uint32_t{static_cast<unsigned char>(bytes_[pos_ + i])} << (8 * i);
    }
    pos_ += width;
    return v;
  }
  std::string_view Bytes(std::size_t n) {
    if (pos_ + n > bytes_.size()) throw OdagError("truncated ODAG serialization");
    auto out = bytes_.substr(pos_, n);
    pos_ += n;
    return out;
  }
  bool done() const { return pos_ == bytes_.size(); }

 private:
  std::string_view bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string Odag::serialize() const {
  std::string out = "ODAG";
  out.push_back(static_cast<char>(kOdagFormatVersion));
  out.push_back(static_cast<char>(depth() & 0xff));
  out.push_back(static_cast<char>((depth() >> 8) & 0xff));
  PutU32(out, static_cast<std::uint32_t>(key_.size()));
  out += key_;
  for (std::size_t level = 0; level < depth(); ++level) {
    PutU32(out, static_cast<std::uint32_t>(arrays_[level].size()));
    for (std::uint32_t id : arrays_[level]) PutU32(out, id);
    for (std::size_t j = 0; j < arrays_[level].size(); ++j) {
      if (level + 1 == depth()) {
        PutU32(out, 0);
        continue;
      }
      auto next = successors(level, j);
      PutU32(out, static_cast<std::uint32_t>(next.size()));
      for (std::uint32_t s : next) PutU32(out, s);
    }
  }
  return out;
}

std::size_t Odag::serialized_size() const {
  std::size_t size = 4 + 1 + 2 + 4 + key_.size();
  for (std::size_t level = 0; level < depth(); ++level) {
    size += 4 + 8 * arrays_[level].size();
    if (level < links_.size()) size += 4 * links_[level].size();
  }
  return size;
}

Odag Odag::deserialize(std::string_view bytes) {
  Reader in(bytes);
  if (in.Bytes(4) != "ODAG") throw OdagError("bad ODAG magic");
  if (in.Uint(1) != kOdagFormatVersion) throw OdagError("unsupported ODAG version");
  const std::size_t depth = in.Uint(2);
  Odag odag;
  odag.key_ = std::string(in.Bytes(in.Uint(4)));
  odag.arrays_.resize(depth);
  odag.offsets_.resize(depth > 0 ? depth - 1 : 0);
  odag.links_.resize(odag.offsets_.size());
  std::vector<std::vector<std::vector<std::uint32_t>>> successors(depth);
  for (std::size_t level = 0; level < depth; ++level) {
    auto& ids = odag.arrays_[level];
    ids.resize(in.Uint(4));
    for (auto& id : ids) id = in.Uint(4);
    if (!std::is_sorted(ids.begin(), ids.end())) throw OdagError("unsorted ODAG array");
    for (std::size_t j = 0; j < ids.size(); ++j) {
      std::size_t count = in.Uint(4);
      if (level + 1 == depth) {
        if (count != 0) throw OdagError("successors on the last ODAG array");
        continue;
      }
      auto& offsets = odag.offsets_[level];
      auto& links = odag.links_[level];
      if (offsets.empty()) offsets.push_back(0);
      for (std::size_t c = 0; c < count; ++c) links.push_back(in.Uint(4));
      offsets.push_back(static_cast<std::uint32_t>(links.size()));
    }
    if (level + 1 < depth && ids.empty()) odag.offsets_[level].push_back(0);
  }
  if (!in.done()) throw OdagError("trailing bytes after ODAG");
  for (std::size_t level = 0; level + 1 < depth; ++level) {
    for (std::uint32_t s : odag.links_[level]) {
      if (s >= odag.arrays_[level + 1].size()) throw OdagError("successor index out of range");
    }
  }
  odag.ComputeCosts();
  return odag;
}

std::size_t embedding_list_serialized_size(std::size_t count, std::size_t depth) {
  return 4 + 4 * count * depth;
}

void odag_insert(OdagBuilder& odag, const Embedding& e) { odag.insert(e.words()); }

Odag odag_merge(const Odag& a, const Odag& b) {
  if (a.depth() != b.depth() || a.key() != b.key()) {
    throw OdagError("cannot merge ODAGs with different depth or pattern");
  }
  OdagBuilder merged = OdagBuilder::From(a);
  merged.merge(OdagBuilder::From(b));
  return merged.build();
}

std::vector<std::vector<std::uint64_t>> odag_costs(const Odag& odag) {
  return odag.costs();
}

std::vector<std::uint64_t> balanced_cuts(std::uint64_t total, std::size_t workers,
                                         std::uint64_t block_size) {
  if (workers == 0) throw std::invalid_argument("workers must be at least 1");
  if (block_size == 0) block_size = 1;
  std::vector<std::uint64_t> cuts(workers + 1, 0);
  cuts[workers] = total;
  for (std::size_t w = 1; w < workers; ++w) {
    const auto ideal = static_cast<unsigned __int128>(total) * w / workers;
    auto rounded = (ideal + block_size / 2) / block_size * block_size;
    if (rounded > total) rounded = total;
    cuts[w] = std::max(cuts[w - 1], static_cast<std::uint64_t>(rounded));
  }
  return cuts;
}

std::vector<WorkPartition> odag_partition(const Odag& odag, std::size_t workers,
                                          std::uint64_t block_size) {
  auto cuts = balanced_cuts(odag.total_cost(), workers, block_size);
  std::vector<WorkPartition> out(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    out[w].block_size = block_size;
    if (cuts[w + 1] > cuts[w]) {
      out[w].ranges.push_back({cuts[w], cuts[w + 1]});
      out[w].cost = cuts[w + 1] - cuts[w];
    }
  }
  return out;
}

}  // namespace mine
