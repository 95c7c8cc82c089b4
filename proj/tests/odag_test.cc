#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "helpers.h"
#include "mine/canonical.h"
#include "mine/odag.h"

using mine::Odag;
using mine::OdagBuilder;
using mine::PathRange;
using Seq = std::vector<std::uint32_t>;
using Seqs = std::vector<Seq>;

namespace {

Odag build(std::size_t depth, const Seqs& seqs, std::string key = {}) {
  OdagBuilder b(depth, std::move(key));
  for (const auto& s : seqs) b.insert(s);
  return b.build();
}

Seqs sorted(Seqs s) {
  std::sort(s.begin(), s.end());
  return s;
}

auto accept_all = [](std::span<const std::uint32_t>) { return true; };

Seqs extract(const Odag& o, PathRange range) {
  Seqs out;
  o.extract(range, accept_all, [&](std::span<const std::uint32_t> w) {
    out.emplace_back(w.begin(), w.end());
  });
  return out;
}

// Canonical size-k vertex embeddings of g grouped by nothing.
Seqs canonical_embeddings(const mine::InputGraph& g, std::size_t k) {
  Seqs out;
  for (const auto& set : oracle::connected_vertex_sets(g, k)) {
    if (set.size() != k) continue;
    auto e = mine::canonical_form(g, mine::ExplorationMode::kVertexInduced, set);
    out.emplace_back(e.words().begin(), e.words().end());
  }
  return sorted(out);
}

// Canonicality-only pruner for vertex embeddings.
auto canonical_pruner(const mine::InputGraph& g) {
  return [&g](std::span<const std::uint32_t> prefix) {
    const std::size_t n = prefix.size();
    if (n == 1) return true;
    auto parent = prefix.first(n - 1);
    bool touches = false;
    for (auto w : parent) {
      if (w == prefix.back()) return false;
      touches = touches || g.are_adjacent(w, prefix.back());
    }
    return touches && mine::is_canonical_extension(g, parent, prefix.back());
  };
}

}  // namespace

TEST_CASE("insert shares prefixes and is idempotent") {
  OdagBuilder b(3);
  b.insert(Seq{1, 2, 3});
  b.insert(Seq{1, 2, 4});
  Odag o = b.build();
  CHECK(Seq(o.array(0).begin(), o.array(0).end()) == Seq{1});
  CHECK(Seq(o.array(1).begin(), o.array(1).end()) == Seq{2});
  CHECK(Seq(o.array(2).begin(), o.array(2).end()) == Seq{3, 4});
  b.insert(Seq{1, 2, 3});
  CHECK(b.build() == o);
  CHECK_THROWS_AS(b.insert(Seq{1, 2}), mine::OdagError);

  OdagBuilder via_embedding(2);
  mine::odag_insert(via_embedding, testing::vertices({5, 6}));
  CHECK(via_embedding.build().decode_all() == Seqs{{5, 6}});
}

TEST_CASE("merge is a positionwise union") {
  Odag a = build(2, {{2, 3}}), b = build(2, {{2, 4}});
  Odag m = mine::odag_merge(a, b);
  REQUIRE(m.array(0).size() == 1);
  CHECK(m.successors(0, 0).size() == 2);
  CHECK(sorted(m.decode_all()) == Seqs{{2, 3}, {2, 4}});
  CHECK(mine::odag_merge(a, build(2, {})) == a);
  CHECK(mine::odag_merge(a, a) == a);
  CHECK_THROWS_AS(mine::odag_merge(a, build(2, {{1, 2}}, "other")), mine::OdagError);
  CHECK_THROWS_AS(mine::odag_merge(a, build(3, {{1, 2, 3}})), mine::OdagError);
}

TEST_CASE("merge is commutative and associative on random sets") {
  std::mt19937_64 rng(3);
  for (int round = 0; round < 50; ++round) {
    auto random_set = [&] {
      Seqs s;
      for (int i = 0; i < 6; ++i) s.push_back({std::uint32_t(rng() % 5), std::uint32_t(rng() % 5), std::uint32_t(rng() % 5)});
      return s;
    };
    Odag a = build(3, random_set()), b = build(3, random_set()), c = build(3, random_set());
    CHECK(mine::odag_merge(a, b) == mine::odag_merge(b, a));
    CHECK(mine::odag_merge(mine::odag_merge(a, b), c) == mine::odag_merge(a, mine::odag_merge(b, c)));
    Seqs da = a.decode_all(), db = b.decode_all(), dm = mine::odag_merge(a, b).decode_all();
    std::set<Seq> in_m(dm.begin(), dm.end());
    for (const auto& s : da) CHECK(in_m.count(s) == 1);
    for (const auto& s : db) CHECK(in_m.count(s) == 1);

    // merge_level over all levels equals merge
    OdagBuilder x = OdagBuilder::From(a), y = OdagBuilder::From(a);
    x.merge(OdagBuilder::From(b));
    for (std::size_t l = 0; l < 3; ++l) y.merge_level(l, OdagBuilder::From(b));
    CHECK(x.build() == y.build());
  }
}

TEST_CASE("spurious path is decoded, then rejected by the canonicality pruner") {
  auto g = mine::load_graph(oracle::fixture("spurious_path.graph"));
  Seqs s = canonical_embeddings(g, 3);
  CHECK(s == Seqs{{1, 4, 2}, {1, 4, 3}, {1, 4, 5}, {2, 3, 4}, {2, 4, 5}, {3, 4, 5}});
  Odag o = build(3, s);
  Seqs decoded = sorted(o.decode_all());
  CHECK(std::binary_search(decoded.begin(), decoded.end(), Seq{3, 4, 2}));
  CHECK(decoded.size() > s.size());
  CHECK(o.total_cost() == decoded.size());

  Seqs extracted;
  o.extract(canonical_pruner(g), [&](std::span<const std::uint32_t> w) {
    extracted.emplace_back(w.begin(), w.end());
  });
  CHECK(sorted(extracted) == s);
  // 3 is the first neighbor of 2 and 4 > 2 follows it.
  CHECK_FALSE(mine::is_canonical_extension(g, Seq{3, 4}, 2));
}

TEST_CASE("extraction basics") {
  Odag one = build(3, {{7, 8, 9}});
  CHECK(extract(one, {0, one.total_cost()}) == Seqs{{7, 8, 9}});
  Seqs none;
  one.extract([](std::span<const std::uint32_t>) { return false; },
              [&](std::span<const std::uint32_t> w) { none.emplace_back(w.begin(), w.end()); });
  CHECK(none.empty());
  CHECK(Odag().empty());
}

TEST_CASE("costs") {
  Odag path = build(3, {{1, 2, 3}});
  CHECK(path.total_cost() == 1);
  CHECK(path.cost(0, 0) == 1);
  Odag fork = build(3, {{1, 2, 4}, {1, 3, 5}});
  CHECK(fork.cost(0, 0) == 2);
  CHECK(mine::odag_costs(fork)[2] == std::vector<std::uint64_t>{1, 1});
}

TEST_CASE("partitioning") {
  Odag two = build(2, {{1, 3}, {2, 4}});
  auto p1 = mine::odag_partition(two, 1, 1);
  REQUIRE(p1.size() == 1);
  CHECK(p1[0].cost == 2);
  auto p2 = mine::odag_partition(two, 2, 1);
  CHECK(extract(two, p2[0].ranges.at(0)) == Seqs{{1, 3}});
  CHECK(extract(two, p2[1].ranges.at(0)) == Seqs{{2, 4}});

  Seqs ten;
  for (std::uint32_t i = 0; i < 10; ++i) ten.push_back({0, 10 + i});
  Odag star = build(2, ten);
  CHECK(star.array(0).size() == 1);
  CHECK(star.cost(0, 0) == 10);
  auto halves = mine::odag_partition(star, 2, 1);
  CHECK(halves[0].cost == 5);
  CHECK(halves[1].cost == 5);
  CHECK(extract(star, halves[0].ranges[0]).size() == 5);
  CHECK(star.locate(7) == std::vector<std::uint32_t>{0, 7});
}

TEST_CASE("partitions are disjoint and exhaustive, shares within one block") {
  std::mt19937_64 rng(4);
  for (int round = 0; round < 30; ++round) {
    Seqs s;
    const std::size_t depth = 2 + rng() % 3;
    for (int i = 0; i < 200; ++i) {
      Seq q;
      for (std::size_t l = 0; l < depth; ++l) q.push_back(std::uint32_t(rng() % 12));
      s.push_back(q);
    }
    Odag o = build(depth, s);
    const std::size_t workers = 1 + rng() % 8;
    const std::uint64_t block = 1 + rng() % 16;
    auto parts = mine::odag_partition(o, workers, block);
    Seqs all;
    const double mean = double(o.total_cost()) / workers;
    for (const auto& p : parts) {
      CHECK(std::abs(double(p.cost) - mean) <= double(block));
      for (const auto& r : p.ranges) {
        Seqs part = extract(o, r);
        CHECK(part.size() == r.size());
        all.insert(all.end(), part.begin(), part.end());
      }
    }
    CHECK(all == o.decode_all());  // ranges are in depth-first order
  }
}

TEST_CASE("serialization is bit-exact") {
  Odag o = build(2, {{1, 2}, {1, 3}}, "K");
  const std::string bytes = o.serialize();
  const std::string expected = std::string("ODAG") + '\x01' + std::string("\x02\x00", 2) +
      std::string("\x01\x00\x00\x00", 4) + "K" +
      // array 0: length 1, id 1, element 0 has successors {0, 1}
      std::string("\x01\x00\x00\x00", 4) + std::string("\x01\x00\x00\x00", 4) +
      std::string("\x02\x00\x00\x00", 4) + std::string("\x00\x00\x00\x00", 4) +
      std::string("\x01\x00\x00\x00", 4) +
      // array 1: length 2, ids 2 and 3, no successors
      std::string("\x02\x00\x00\x00", 4) + std::string("\x02\x00\x00\x00", 4) +
      std::string("\x03\x00\x00\x00", 4) + std::string("\x00\x00\x00\x00", 4) +
      std::string("\x00\x00\x00\x00", 4);
  CHECK(bytes == expected);
  CHECK(o.serialized_size() == bytes.size());
  CHECK(Odag::deserialize(bytes) == o);
  CHECK_THROWS_AS(Odag::deserialize(bytes.substr(0, bytes.size() - 1)), mine::OdagError);
  CHECK_THROWS_AS(Odag::deserialize("XXXX" + bytes.substr(4)), mine::OdagError);
  CHECK(mine::embedding_list_serialized_size(2, 2) == 20);
}

TEST_CASE("round trip, size bound and compression on random graphs") {
  std::mt19937_64 rng(5);
  for (int round = 0; round < 12; ++round) {
    const std::size_t n = 10 + rng() % 41;
    auto g = oracle::random_graph(rng, n, 0.12, 2);
    for (std::size_t k = 2; k <= 3; ++k) {
      // Group canonical embeddings by quick pattern's canonical form.
      std::map<std::string, Seqs> groups;
      for (const auto& s : canonical_embeddings(g, k)) {
        auto p = mine::quick_pattern(g, testing::vertices(s));
        groups[mine::canonical_pattern(p).pattern.key()].push_back(s);
      }
      for (const auto& [key, s] : groups) {
        Odag o = build(k, s, key);
        auto prune = [&](std::span<const std::uint32_t> prefix) {
          if (!canonical_pruner(g)(prefix)) return false;
          if (prefix.size() < k) return true;
          auto p = mine::quick_pattern(g, testing::vertices(Seq(prefix.begin(), prefix.end())));
          return mine::canonical_pattern(p).pattern.key() == key;
        };
        Seqs out;
        o.extract(prune, [&](std::span<const std::uint32_t> w) { out.emplace_back(w.begin(), w.end()); });
        CHECK(sorted(out) == s);
        CHECK(o.num_links() <= k * n * n);
        if (s.size() > k * n) {
          CHECK(o.serialized_size() <= mine::embedding_list_serialized_size(s.size(), k));
        }
      }
    }
  }
}
