// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits nonzero if any hard criterion fails.
#include <chrono>
#include <cstdio>
#include <functional>
#include <iomanip>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>

#include "helpers.h"
#include "mine/apps.h"
#include "mine/canonical.h"
#include "mine/odag.h"

using mine::Application;
using mine::EngineConfig;
using mine::ExplorationMode;
using oracle::IdSet;

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Verdict {
  bool ok = true;
  std::ostringstream why;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) why << what;
    ok = ok && cond;
  }
};

int failures = 0;

void report(int n, const Verdict& v, const std::string& detail) {
  std::printf("criterion %d: %s  %s%s%s\n", n, v.ok ? "PASS" : "FAIL", detail.c_str(),
              v.ok ? "" : "  failed: ", v.ok ? "" : v.why.str().c_str());
  std::fflush(stdout);
  if (!v.ok) ++failures;
}

bool adjacent_words(const mine::InputGraph& g, ExplorationMode mode, std::uint32_t a,
                    std::uint32_t b) {
  if (mode == ExplorationMode::kVertexInduced) return g.are_adjacent(a, b);
  const auto& x = g.edge(a);
  const auto& y = g.edge(b);
  return x.a == y.a || x.a == y.b || x.b == y.a || x.b == y.b;
}

// Smallest start, then repeatedly the smallest unvisited neighbor.
IdSet greedy_order(const mine::InputGraph& g, ExplorationMode mode, const IdSet& set) {
  IdSet order{set.front()};
  std::vector<bool> used(set.size(), false);
  used[0] = true;
  while (order.size() < set.size()) {
    for (std::size_t i = 0; i < set.size(); ++i) {
      if (used[i]) continue;
      bool touches = false;
      for (auto w : order) touches = touches || adjacent_words(g, mode, w, set[i]);
      if (touches) {
        used[i] = true;
        order.push_back(set[i]);
        break;
      }
    }
  }
  return order;
}

// ---------------------------------------------------------------------------

void criterion1() {
  auto t0 = Clock::now();
  Verdict v;
  std::mt19937_64 rng(101);
  std::size_t subsets = 0, orders = 0;
  for (int round = 0; round < 100; ++round) {
    const std::size_t n = 1 + rng() % 9;
    auto g = oracle::random_graph(rng, n, 0.2 + 0.6 * double(rng() % 100) / 100, 2);
    for (const IdSet& set : oracle::connected_vertex_sets(g, n)) {
      ++subsets;
      // Every connected ordering whose prefixes all pass the incremental check.
      std::vector<IdSet> accepted;
      IdSet prefix;
      std::vector<bool> used(set.size(), false);
      auto rec = [&](auto&& self) -> void {
        if (prefix.size() == set.size()) {
          accepted.push_back(prefix);
          return;
        }
        for (std::size_t i = 0; i < set.size(); ++i) {
          if (used[i]) continue;
          const auto v = set[i];
          bool touches = prefix.empty();
          for (auto w : prefix) touches = touches || g.are_adjacent(w, v);
          if (!touches) continue;
          ++orders;
          if (!prefix.empty() && !mine::is_canonical_extension(g, prefix, v)) continue;
          used[i] = true;
          prefix.push_back(v);
          self(self);
          prefix.pop_back();
          used[i] = false;
        }
      };
      rec(rec);
      v.require(accepted.size() == 1, "subset with " + std::to_string(accepted.size()) +
                                          " accepted orders; ");
      if (accepted.size() != 1) continue;
      v.require(accepted[0] == greedy_order(g, ExplorationMode::kVertexInduced, set),
                "accepted order differs from the greedy order; ");
      for (std::size_t k = 1; k <= accepted[0].size(); ++k) {
        v.require(mine::is_canonical(g, testing::vertices(IdSet(accepted[0].begin(),
                                                                 accepted[0].begin() + k))),
                  "non-canonical prefix; ");
      }
    }
  }
  const double s = since(t0);
  v.require(s < 10, "took longer than 10 s; ");
  std::ostringstream d;
  d << subsets << " connected subsets of 100 graphs, " << orders << " order steps checked, "
    << std::fixed << std::setprecision(2) << s << " s";
  report(1, v, d.str());
}

// ---------------------------------------------------------------------------

struct Crit2Totals {
  std::size_t runs = 0;
  std::size_t storage_steps = 0;
  std::uint64_t storage_mismatches = 0;
  std::size_t two_level_steps = 0;
  std::size_t two_level_mismatches = 0;
  std::size_t canonization_mismatches = 0;
  std::size_t canonizations = 0;
};

void absorb(Crit2Totals& t, const mine::RunResult& r) {
  ++t.runs;
  for (const auto& s : r.steps) {
    if (s.storage_checked) ++t.storage_steps;
    t.storage_mismatches += s.storage_mismatches;
    if (s.two_level_checked) {
      ++t.two_level_steps;
      if (!s.two_level_matches) ++t.two_level_mismatches;
    }
    if (s.canonizations != s.quick_patterns) ++t.canonization_mismatches;
    t.canonizations += s.canonizations;
  }
}

Crit2Totals criterion2() {
  auto t0 = Clock::now();
  Verdict v;
  Crit2Totals totals;
  std::mt19937_64 rng(202);
  std::size_t compared = 0;
  for (int round = 0; round < 50; ++round) {
    const std::size_t n = 4 + rng() % 17;
    const double density = 0.1 + 0.4 * double(rng() % 101) / 100;
    const std::size_t labels = 1 + rng() % 3;
    auto g = oracle::random_graph(rng, n, density, labels);
    const std::size_t theta = 1 + rng() % 3;

    EngineConfig config;
    config.workers = 1 + rng() % 3;
    config.block_size = 1 + rng() % 8;
    config.record_processed = true;
    config.verify_storage = true;
    config.verify_two_level = true;

    auto check = [&](const std::string& app, const mine::RunResult& r,
                     const std::vector<IdSet>& want) {
      absorb(totals, r);
      ++compared;
      v.require(testing::id_sets(r.processed) == want,
                app + " processed set differs on graph " + std::to_string(round) + "; ");
    };

    // motifs: every connected vertex set of at most ms vertices
    const std::size_t ms = 3 + rng() % 3;
    const auto vsets = oracle::connected_vertex_sets(g, ms);
    check("motifs", testing::run(g, mine::motifs_app(ms, rng() % 2), config).result, vsets);

    // cliques
    std::vector<IdSet> cliques;
    for (const auto& s : vsets) {
      if (oracle::is_clique(g, s)) cliques.push_back(s);
    }
    check("cliques", testing::run(g, mine::cliques_app(ms), config).result, cliques);

    // fsm: a set is processed iff every proper prefix of its canonical order
    // has a frequent pattern
    const std::size_t fms = g.num_edges() <= 40 ? 4 : 3;
    const auto patterns = oracle::edge_patterns(g, fms);
    std::vector<IdSet> frequent_prefixes;
    for (const IdSet& s : oracle::connected_edge_sets(g, fms)) {
      const IdSet order = greedy_order(g, ExplorationMode::kEdgeInduced, s);
      bool ok = true;
      for (std::size_t k = 1; ok && k < order.size(); ++k) {
        IdSet p(order.begin(), order.begin() + k);
        std::sort(p.begin(), p.end());
        ok = patterns.at(oracle::certificate(oracle::edge_induced(g, p))).support >= theta;
      }
      if (ok) frequent_prefixes.push_back(s);
    }
    check("fsm", testing::run(g, mine::fsm_app(theta, fms), config).result, frequent_prefixes);
  }
  const double s = since(t0);
  v.require(s < 60, "took longer than 60 s; ");
  std::ostringstream d;
  d << compared << " runs (3 apps x 50 graphs) equal to brute force, " << std::fixed
    << std::setprecision(2) << s << " s";
  report(2, v, d.str());
  return totals;
}

// ---------------------------------------------------------------------------

void criterion3() {
  auto t0 = Clock::now();
  Verdict v;
  auto g = mine::load_graph(oracle::fixture("all_motifs4.graph"));
  auto r = testing::run(g, mine::motifs_app(4)).result;
  std::size_t q3 = 0, c3 = 0, q4 = 0, c4 = 0;
  for (const auto& s : r.steps) {
    if (s.step == 3) q3 = s.quick_patterns, c3 = s.canonical_patterns;
    if (s.step == 4) q4 = s.quick_patterns, c4 = s.canonical_patterns;
  }
  // the fixture must contain every connected shape of 3 and 4 vertices
  std::set<std::string> shapes3, shapes4;
  for (const auto& s : oracle::connected_vertex_sets(g, 4)) {
    if (s.size() < 3) continue;
    auto cert = oracle::certificate(oracle::induced(g, s, false));
    (s.size() == 3 ? shapes3 : shapes4).insert(cert);
  }
  v.require(shapes3.size() == 2 && shapes4.size() == 6, "fixture lacks some motif shape; ");
  v.require(q3 <= 3, "too many size-3 quick patterns; ");
  v.require(c3 == 2, "size-3 canonical patterns != 2; ");
  v.require(q4 <= 21, "too many size-4 quick patterns; ");
  v.require(c4 == 6, "size-4 canonical patterns != 6; ");
  const double s = since(t0);
  v.require(s < 5, "took longer than 5 s; ");
  std::ostringstream d;
  d << "size 3: " << q3 << " quick / " << c3 << " canonical; size 4: " << q4 << " quick / "
    << c4 << " canonical";
  report(3, v, d.str());
}

// ---------------------------------------------------------------------------

void criterion4() {
  Verdict v;
  auto g = testing::two_colors();

  auto fsm = testing::run(g, mine::fsm_app(1, 1));
  std::size_t support = 0;
  for (const auto& [key, entry] : fsm.result.output_aggregates.by_pattern()) {
    const auto& p = entry.pattern;
    if (p.size() == 2 && p.labels()[0] != p.labels()[1]) {
      support = mine::support(std::get<mine::Domain>(entry.value));
    }
  }
  v.require(support == 2, "blue-yellow support " + std::to_string(support) + "; ");

  auto cliques = testing::run(g, mine::cliques_app(5)).lines;
  std::map<std::size_t, std::size_t> by_size;
  for (const auto& l : cliques) ++by_size[std::count(l.begin(), l.end(), ' ') + 1];
  v.require(by_size == std::map<std::size_t, std::size_t>{{1, 4}, {2, 4}, {3, 1}},
            "clique sizes differ; ");
  v.require(std::find(cliques.begin(), cliques.end(), "0 1 2") != cliques.end(),
            "triangle missing; ");

  auto edges = mine::embedding_edges(g, testing::vertices({0, 1, 2}));
  auto closing = g.edge_between(0, 2);
  v.require(closing && std::find(edges.begin(), edges.end(), *closing) != edges.end(),
            "induced edge (0,2) missing; ");
  report(4, v,
         "blue-yellow support " + std::to_string(support) + ", cliques " +
             std::to_string(by_size[1]) + "/" + std::to_string(by_size[2]) + "/" +
             std::to_string(by_size[3]) + ", vertex set {0,1,2} induces 3 edges");
}

// ---------------------------------------------------------------------------

void criterion5(const Crit2Totals& t) {
  Verdict v;
  v.require(t.storage_steps > 0, "no step was checked; ");
  v.require(t.storage_mismatches == 0, "decoded frontier differs from stored; ");

  // <3,4,2> is a path of the ODAG but not a stored embedding
  auto g = mine::load_graph(oracle::fixture("spurious_path.graph"));
  std::vector<IdSet> stored;
  for (const auto& s : oracle::connected_vertex_sets(g, 3)) {
    if (s.size() == 3) stored.push_back(greedy_order(g, ExplorationMode::kVertexInduced, s));
  }
  std::sort(stored.begin(), stored.end());
  mine::OdagBuilder b(3);
  for (const auto& s : stored) b.insert(s);
  mine::Odag odag = b.build();
  const IdSet spurious{3, 4, 2};
  auto all = odag.decode_all();
  v.require(std::find(all.begin(), all.end(), spurious) != all.end(), "<3,4,2> not decoded; ");
  v.require(std::find(stored.begin(), stored.end(), spurious) == stored.end(),
            "<3,4,2> was stored; ");
  bool rejected = false;
  std::vector<IdSet> extracted;
  odag.extract(
      [&](std::span<const std::uint32_t> prefix) {
        if (prefix.size() == 1) return true;
        const auto parent = prefix.first(prefix.size() - 1);
        bool touches = false, repeated = false;
        for (auto w : parent) {
          repeated = repeated || w == prefix.back();
          touches = touches || g.are_adjacent(w, prefix.back());
        }
        const bool ok = !repeated && touches &&
                        mine::is_canonical_extension(g, parent, prefix.back());
        if (!ok && IdSet(prefix.begin(), prefix.end()) == spurious) rejected = true;
        return ok;
      },
      [&](std::span<const std::uint32_t> w) { extracted.emplace_back(w.begin(), w.end()); });
  std::sort(extracted.begin(), extracted.end());
  v.require(rejected, "<3,4,2> not rejected at the leaf; ");
  v.require(extracted == stored, "extracted set differs from stored; ");

  EngineConfig config;
  config.verify_storage = true;
  Application explore;
  explore.filter = [](mine::Context&, const mine::Embedding& e) { return e.size() <= 3; };
  explore.process = [](mine::Context&, const mine::Embedding&) {};
  auto r = testing::run(g, explore, config).result;
  std::uint64_t pruned = 0, mismatches = 0;
  for (const auto& s : r.steps) pruned += s.pruned_prefixes, mismatches += s.storage_mismatches;
  v.require(pruned > 0 && mismatches == 0, "engine did not prune spurious prefixes; ");

  std::ostringstream d;
  d << t.storage_steps << " stored frontiers over " << t.runs << " runs decoded exactly; "
    << all.size() << " ODAG paths for " << stored.size()
    << " stored embeddings, <3,4,2> decoded then rejected";
  report(5, v, d.str());
}

// ---------------------------------------------------------------------------

void criterion6(const Crit2Totals& t) {
  Verdict v;
  v.require(t.two_level_steps > 0, "no step was checked; ");
  v.require(t.two_level_mismatches == 0, "two-level result differs from one-level; ");
  v.require(t.canonization_mismatches == 0, "canonizations != distinct quick patterns; ");
  std::ostringstream d;
  d << t.two_level_steps << " steps match the one-level reduce, " << t.canonizations
    << " canonizations, one per distinct quick pattern";
  report(6, v, d.str());
}

// ---------------------------------------------------------------------------

mine::InputGraph big_graph() {
  std::mt19937_64 rng(707);
  return oracle::random_graph(rng, 200, 0.15, 1);
}

void criterion7() {
  auto t0 = Clock::now();
  Verdict v;
  std::mt19937_64 rng(77);
  auto small = oracle::random_graph(rng, 20, 0.3, 3);
  for (const Application& app : {mine::motifs_app(4), mine::cliques_app(5),
                                 mine::fsm_app(2, 3)}) {
    std::vector<std::string> reference;
    for (std::size_t w : {1, 2, 8}) {
      EngineConfig config;
      config.workers = w;
      auto lines = testing::run(small, app, config).lines;
      std::sort(lines.begin(), lines.end());
      if (w == 1) reference = lines;
      v.require(lines == reference, app.name + " output depends on worker count; ");
    }
  }

  auto g = big_graph();
  auto timed = [&](std::size_t workers, std::vector<std::string>& lines) {
    EngineConfig config;
    config.workers = workers;
    auto r = testing::run(g, mine::motifs_app(4), config);
    lines = r.lines;
    return r.result.seconds;
  };
  std::vector<std::string> l1, l8;
  const double t1 = timed(1, l1);
  const double t8 = timed(8, l8);
  v.require(l1 == l8, "200-vertex motifs output depends on worker count; ");
  const double speedup = t1 / t8;
  const double total = since(t0);
  v.require(total < 300, "took longer than 5 min; ");

  std::ostringstream d;
  d << "workers 1/2/8 identical; 200-vertex motifs: 1 worker " << std::fixed
    << std::setprecision(2) << t1 << " s, 8 workers " << t8 << " s, speedup " << speedup
    << "x";
  if (speedup < 3) {
    d << "  WARN: below 3x (" << std::thread::hardware_concurrency()
      << " hardware threads available)";
  }
  report(7, v, d.str());
}

// ---------------------------------------------------------------------------

void criterion8() {
  Verdict v;
  std::mt19937_64 rng(808);
  double worst = 0;
  for (int round = 0; round < 20; ++round) {
    auto g = oracle::random_graph(rng, 10 + rng() % 8, 0.25 + 0.05 * (round % 4), 1);
    const std::size_t depth = 3 + rng() % 2;
    mine::OdagBuilder b(depth);
    for (const auto& s : oracle::connected_vertex_sets(g, depth)) {
      if (s.size() == depth) b.insert(greedy_order(g, ExplorationMode::kVertexInduced, s));
    }
    mine::Odag odag = b.build();
    const std::size_t workers = 2 + rng() % 7;
    const std::uint64_t block = 1 + rng() % 32;
    auto parts = mine::odag_partition(odag, workers, block);
    const double mean = double(odag.total_cost()) / double(workers);
    std::uint64_t covered = 0;
    for (const auto& p : parts) {
      const double dev = std::abs(double(p.cost) - mean);
      worst = std::max(worst, dev / (0.1 * mean + double(block)));
      v.require(dev <= 0.1 * mean + double(block), "share outside tolerance; ");
      for (const auto& r : p.ranges) covered += r.size();
    }
    v.require(parts.size() == workers && covered == odag.total_cost(),
              "partition does not cover the ODAG; ");
  }
  std::ostringstream d;
  d << "20 ODAGs, worst share deviation " << std::fixed << std::setprecision(2) << worst
    << " of the 10% + b allowance";
  report(8, v, d.str());
}

// ---------------------------------------------------------------------------

void criterion9() {
  Verdict v;
  auto g = big_graph();
  const std::size_t workers = 2;
  // Depth-4 canonical embeddings, grouped by canonical pattern as the
  // engine stores frontiers.
  std::vector<std::map<std::string, mine::OdagBuilder>> builders(workers);
  std::vector<std::map<std::string, std::size_t>> counts(workers);
  Application app = mine::motifs_app(4);
  auto process = app.process;
  app.process = [&, process](mine::Context& ctx, const mine::Embedding& e) {
    process(ctx, e);
    if (e.size() != 4) return;
    const std::string& key = ctx.canonical(ctx.pattern(e)).pattern.key();
    auto it = builders[ctx.worker()].try_emplace(key, 4, key).first;
    it->second.insert(e.words());
    ++counts[ctx.worker()][key];
  };
  EngineConfig config;
  config.workers = workers;
  testing::run(g, app, config);

  std::map<std::string, mine::OdagBuilder> merged;
  std::map<std::string, std::size_t> merged_counts;
  for (std::size_t w = 0; w < workers; ++w) {
    for (auto& [key, b] : builders[w]) {
      auto [it, fresh] = merged.try_emplace(key, 4, key);
      it->second.merge(b);
      merged_counts[key] += counts[w][key];
    }
  }
  std::size_t odag_bytes = 0, list_bytes = 0, total = 0;
  for (const auto& [key, b] : merged) {
    odag_bytes += b.build().serialized_size();
    list_bytes += mine::embedding_list_serialized_size(merged_counts[key], 4);
    total += merged_counts[key];
  }
  v.require(total > 0, "no depth-4 embeddings; ");
  v.require(odag_bytes < list_bytes, "ODAG is not smaller; ");
  std::ostringstream d;
  d << total << " depth-4 embeddings in " << merged.size() << " patterns: ODAG "
    << odag_bytes << " bytes vs list " << list_bytes << " bytes ("
    << std::fixed << std::setprecision(1) << double(list_bytes) / double(odag_bytes) << "x)";
  report(9, v, d.str());
}

}  // namespace

int main() {
  auto guarded = [](int n, const std::function<void()>& f) {
    try {
      f();
    } catch (const std::exception& e) {
      std::printf("criterion %d: FAIL  exception: %s\n", n, e.what());
      ++failures;
    }
  };
  Crit2Totals totals;
  guarded(1, criterion1);
  guarded(2, [&] { totals = criterion2(); });
  guarded(3, criterion3);
  guarded(4, criterion4);
  guarded(5, [&] { criterion5(totals); });
  guarded(6, [&] { criterion6(totals); });
  guarded(7, criterion7);
  guarded(8, criterion8);
  guarded(9, criterion9);
  return failures == 0 ? 0 : 1;
}
