#include "mine/engine.h"

#include <algorithm>
#include <chrono>
#include <map>
#include <memory>
#include <optional>
#include <thread>

#include "mine/canonical.h"
#include "mine/odag.h"
#include "mine/worker_pool.h"

namespace mine {

const char* to_string(StorageKind storage) {
  return storage == StorageKind::kOdag ? "odag" : "list";
}

std::size_t default_workers() {
  const unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : n;
}

FileSink::FileSink(const std::string& path) : out_(path), path_(path) {
  if (!out_) throw std::runtime_error("cannot open " + path + " for writing");
}

void FileSink::write(std::span<const std::string> lines) {
  for (const std::string& line : lines) out_ << line << '\n';
  out_.flush();
  if (!out_) throw std::runtime_error("write failed: " + path_);
}

namespace detail {

using Word = Embedding::Word;
using Sequences = std::vector<std::vector<Word>>;

struct FrontierGroup {
  Pattern quick;
  std::optional<OdagBuilder> odag;
  std::vector<Word> words;  // flat, for list storage or verification
  std::uint64_t count = 0;
};

// Quick-pattern table and reduced aggregates of one finished step.
struct Snapshot {
  QuickPatternTable table;
  AggregateStore store;
};

struct StoredGroup {
  std::string key;
  Odag odag;
  std::vector<Word> words;  // list storage, sorted
  std::uint64_t count = 0;
  Sequences expected;  // verify_storage

  std::uint64_t paths(StorageKind storage) const {
    return storage == StorageKind::kOdag ? odag.total_cost() : count;
  }
};

struct WorkerState {
  Context ctx;
  LocalAggregates aggregates;
  LocalAggregates output_aggregates;
  std::vector<std::pair<AggregationKey, AggregateValue>> raw_map;
  std::vector<std::pair<AggregationKey, AggregateValue>> raw_output;
  std::vector<std::string> outputs;
  std::unordered_map<std::string, FrontierGroup> frontier;
  std::vector<Embedding> terminal;
  std::vector<Embedding> processed;
  std::vector<Sequences> decoded;  // per stored group, verify_storage
  StepStats stats;
  std::size_t lookup_canonizations = 0;
  std::uint64_t samples = 0;
  std::mt19937_64 rng;

  std::vector<Word> candidates;
  Embedding scratch;

  void Reset() {
    aggregates.clear();
    output_aggregates.clear();
    raw_map.clear();
    raw_output.clear();
    outputs.clear();
    frontier.clear();
    terminal.clear();
    processed.clear();
    decoded.clear();
    stats = StepStats{};
    lookup_canonizations = 0;
  }
};

namespace {

bool Touches(const InputGraph& g, ExplorationMode mode, Word a, Word b) {
  return mode == ExplorationMode::kVertexInduced ? g.are_adjacent(a, b)
                                                 : g.edges_touch(a, b);
}

// Random visit order of the same id set in which every prefix is connected.
std::vector<Word> RandomConnectedOrder(const InputGraph& g, const Embedding& e,
                                       std::mt19937_64& rng) {
  std::vector<Word> rest(e.words().begin(), e.words().end());
  std::vector<Word> order;
  order.reserve(rest.size());
  std::size_t first = std::uniform_int_distribution<std::size_t>(0, rest.size() - 1)(rng);
  order.push_back(rest[first]);
  rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(first));
  std::vector<std::size_t> open;
  while (!rest.empty()) {
    open.clear();
    for (std::size_t i = 0; i < rest.size(); ++i) {
      for (Word w : order) {
        if (Touches(g, e.mode(), w, rest[i])) {
          open.push_back(i);
          break;
        }
      }
    }
    if (open.empty()) break;
    std::size_t pick = open[std::uniform_int_distribution<std::size_t>(0, open.size() - 1)(rng)];
    order.push_back(rest[pick]);
    rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(pick));
  }
  return order;
}

Sequences Split(const std::vector<Word>& flat, std::size_t depth) {
  Sequences out;
  if (depth == 0) return out;
  out.reserve(flat.size() / depth);
  for (std::size_t i = 0; i + depth <= flat.size(); i += depth) {
    out.emplace_back(flat.begin() + static_cast<std::ptrdiff_t>(i),
                     flat.begin() + static_cast<std::ptrdiff_t>(i + depth));
  }
  return out;
}

std::uint64_t SymmetricDifference(Sequences a, Sequences b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  Sequences diff;
  std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(),
                                std::back_inserter(diff));
  return diff.size();
}

void Accumulate(StepStats& into, const StepStats& from) {
  into.extracted += from.extracted;
  into.aggregation_passed += from.aggregation_passed;
  into.candidates += from.candidates;
  into.canonical += from.canonical;
  into.processed += from.processed;
  into.frontier += from.frontier;
  into.terminated += from.terminated;
  into.pruned_prefixes += from.pruned_prefixes;
  into.outputs += from.outputs;
  into.invariance_checks += from.invariance_checks;
  into.invariance_violations += from.invariance_violations;
}

}  // namespace

class Engine {
 public:
  Engine(const InputGraph& g, const Application& app, const EngineConfig& config,
         OutputSink& sink)
      : g_(g),
        app_(app),
        config_(config),
        sink_(sink),
        pool_(config.workers == 0 ? default_workers() : config.workers) {
    if (!app.filter || !app.process) {
      throw std::invalid_argument("application needs filter and process callbacks");
    }
    keep_terminal_ = static_cast<bool>(app.aggregation_filter) ||
                     static_cast<bool>(app.aggregation_process);
    for (std::size_t w = 0; w < pool_.size(); ++w) {
      auto state = std::make_unique<WorkerState>();
      state->ctx.graph_ = &g;
      state->ctx.app_ = &app;
      state->ctx.engine_ = this;
      state->ctx.state_ = state.get();
      state->ctx.worker_ = w;
      state->rng.seed(config.seed + 7919 * w);
      state->scratch = Embedding(app.mode);
      workers_.push_back(std::move(state));
    }
  }

  RunResult Run();

  const Snapshot* snapshot(std::size_t step) const {
    if (step == 0 || step > history_.size()) return nullptr;
    return history_[step - 1].get();
  }
  std::size_t max_pattern_size() const { return config_.max_pattern_size; }
  bool recording() const { return config_.verify_two_level; }

 private:
  void Work(std::size_t w);
  void Expand(WorkerState& ws, const Embedding& e);
  void AggregateOnly(WorkerState& ws, const Embedding& e);
  void Handle(WorkerState& ws, Embedding& child);
  void HandleImpl(WorkerState& ws, Embedding& child);
  void Decode(WorkerState& ws, std::size_t group, PathRange range);
  bool Prune(WorkerState& ws, const StoredGroup& group, std::span<const Word> prefix);
  void CheckFilterInvariance(WorkerState& ws, const Embedding& e, bool expected);
  void CheckAggregationInvariance(WorkerState& ws, const Embedding& e, bool expected);
  void Barrier(StepStats& st);
  void MergeFrontier(QuickPatternTable& table, StepStats& st);
  std::vector<std::string> AggregateLines() const;
  template <class F>
  void Guard(const Embedding& e, F&& f);

  const InputGraph& g_;
  const Application& app_;
  const EngineConfig& config_;
  OutputSink& sink_;
  WorkerPool pool_;
  std::vector<std::unique_ptr<WorkerState>> workers_;
  bool keep_terminal_ = false;

  std::size_t step_ = 0;
  std::size_t depth_ = 0;  // size of the stored embeddings
  std::vector<StoredGroup> groups_;
  std::vector<Embedding> terminal_;
  std::vector<std::unique_ptr<Snapshot>> history_;
  AggregateStore output_store_;
  RunResult result_;
};

RunResult Engine::Run() {
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  result_.workers = pool_.size();
  const std::size_t initial =
      app_.mode == ExplorationMode::kVertexInduced ? g_.num_vertices() : g_.num_edges();
  for (step_ = 1; step_ == 1 ? initial > 0 : !(groups_.empty() && terminal_.empty());
       ++step_) {
    const auto step_start = Clock::now();
    StepStats st;
    st.step = step_;
    for (auto& ws : workers_) {
      ws->Reset();
      ws->ctx.step_ = step_;
      ws->ctx.read_step_ = step_ - 1;
      ws->decoded.resize(config_.verify_storage ? groups_.size() : 0);
    }
    pool_.run([this](std::size_t w) { Work(w); });
    Barrier(st);
    st.seconds = std::chrono::duration<double>(Clock::now() - step_start).count();
    result_.steps.push_back(std::move(st));
  }
  result_.aggregate_lines = AggregateLines();
  sink_.write(result_.aggregate_lines);
  result_.output_aggregates = output_store_;
  std::sort(result_.processed.begin(), result_.processed.end());
  result_.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return std::move(result_);
}

void Engine::Work(std::size_t w) {
  WorkerState& ws = *workers_[w];
  const std::size_t n = pool_.size();
  try {
    if (step_ == 1) {
      const std::uint64_t total =
          app_.mode == ExplorationMode::kVertexInduced ? g_.num_vertices() : g_.num_edges();
      const auto cuts = balanced_cuts(total, n, config_.block_size);
      Embedding child(app_.mode);
      for (std::uint64_t id = cuts[w]; id < cuts[w + 1]; ++id) {
        ++ws.stats.candidates;
        ++ws.stats.canonical;
        child.clear();
        child.push_back(static_cast<Word>(id));
        Handle(ws, child);
      }
      return;
    }

    std::uint64_t total = 0;
    for (const StoredGroup& group : groups_) total += group.paths(config_.storage);
    const auto cuts = balanced_cuts(total, n, config_.block_size);
    std::uint64_t offset = 0;
    for (std::size_t i = 0; i < groups_.size(); ++i) {
      const std::uint64_t size = groups_[i].paths(config_.storage);
      const std::uint64_t begin = std::max(cuts[w], offset);
      const std::uint64_t end = std::min(cuts[w + 1], offset + size);
      if (begin < end) Decode(ws, i, PathRange{begin - offset, end - offset});
      offset += size;
    }

    const auto tcuts = balanced_cuts(terminal_.size(), n, 1);
    for (std::uint64_t i = tcuts[w]; i < tcuts[w + 1]; ++i) AggregateOnly(ws, terminal_[i]);
  } catch (const EngineError&) {
    throw;
  } catch (const PatternTooLargeError&) {
    throw;
  } catch (const std::exception& ex) {
    throw EngineError("step " + std::to_string(step_) + ": " + ex.what());
  }
}

// Adds step and embedding context to an exception escaping a callback.
template <class F>
void Engine::Guard(const Embedding& e, F&& f) {
  try {
    f();
  } catch (const EngineError&) {
    throw;
  } catch (const PatternTooLargeError&) {
    throw;
  } catch (const std::exception& ex) {
    throw EngineError("step " + std::to_string(step_) + ", embedding [" + render(g_, e) +
                      "]: " + ex.what());
  }
}

void Engine::Decode(WorkerState& ws, std::size_t index, PathRange range) {
  const StoredGroup& group = groups_[index];
  auto visit = [&](std::span<const Word> words) {
    if (config_.verify_storage) ws.decoded[index].emplace_back(words.begin(), words.end());
    Embedding e(app_.mode, std::vector<Word>(words.begin(), words.end()));
    Expand(ws, e);
  };
  if (config_.storage == StorageKind::kOdag) {
    group.odag.extract(
        range, [&](std::span<const Word> prefix) { return Prune(ws, group, prefix); }, visit);
  } else {
    for (std::uint64_t i = range.begin; i < range.end; ++i) {
      visit(std::span<const Word>(group.words).subspan(i * depth_, depth_));
    }
  }
}

// Removes decoded paths that are not in the stored set. A path survives iff
// it is a canonical, connected, duplicate-free sequence whose every prefix
// passed the filters that let it be extended, and whose pattern is the
// group's pattern.
bool Engine::Prune(WorkerState& ws, const StoredGroup& group, std::span<const Word> prefix) {
  const std::size_t n = prefix.size();
  const Word last = prefix.back();
  bool ok = true;
  if (n > 1) {
    const auto parent = prefix.first(n - 1);
    bool touches = false;
    for (Word w : parent) {
      if (w == last) {
        ok = false;
        break;
      }
      touches = touches || Touches(g_, app_.mode, w, last);
    }
    ok = ok && touches;
    if (ok) {
      ok = app_.mode == ExplorationMode::kVertexInduced
               ? is_canonical_extension(g_, parent, last)
               : is_canonical_extension_edges(g_, parent, last);
    }
  }
  Embedding& e = ws.scratch;
  if (ok) {
    e.clear();
    for (Word w : prefix) e.push_back(w);
    Guard(e, [&] {
      ok = app_.filter(ws.ctx, e) &&
           (!app_.termination_filter || app_.termination_filter(ws.ctx, e));
      if (ok && n < depth_ && app_.aggregation_filter) {
        // The prefix was in the frontier of step n + 1 and passed α there.
        Context& ctx = ws.ctx;
        ctx.step_ = n + 1;
        ctx.read_step_ = n;
        ok = app_.aggregation_filter(ctx, e);
        ctx.step_ = step_;
        ctx.read_step_ = step_ - 1;
      }
    });
  }
  if (ok && n == depth_) {
    const Snapshot* snap = snapshot(step_ - 1);
    const CanonicalPattern* canon =
        snap == nullptr ? nullptr : snap->table.find(ws.ctx.PatternKey(e));
    ok = canon != nullptr && canon->pattern.key() == group.key;
  }
  if (!ok) ++ws.stats.pruned_prefixes;
  return ok;
}

void Engine::Expand(WorkerState& ws, const Embedding& e) {
  ++ws.stats.extracted;
  bool pass = true;
  Guard(e, [&] {
    if (app_.aggregation_filter) {
      pass = app_.aggregation_filter(ws.ctx, e);
      if (config_.debug_checks) CheckAggregationInvariance(ws, e, pass);
    }
    if (pass && app_.aggregation_process) app_.aggregation_process(ws.ctx, e);
  });
  if (!pass) return;
  ++ws.stats.aggregation_passed;

  extend_candidates(g_, e, ws.candidates);
  Embedding child = e;
  for (Word w : ws.candidates) {
    ++ws.stats.candidates;
    if (!is_canonical_extension(g_, e, w)) continue;
    ++ws.stats.canonical;
    child.push_back(w);
    Handle(ws, child);
    child.pop_back();
  }
}

void Engine::AggregateOnly(WorkerState& ws, const Embedding& e) {
  Guard(e, [&] {
    if (app_.aggregation_filter && !app_.aggregation_filter(ws.ctx, e)) return;
    if (app_.aggregation_process) app_.aggregation_process(ws.ctx, e);
  });
}

void Engine::Handle(WorkerState& ws, Embedding& child) {
  Guard(child, [&] { HandleImpl(ws, child); });
}

void Engine::HandleImpl(WorkerState& ws, Embedding& child) {
  const bool pass = app_.filter(ws.ctx, child);
  if (config_.debug_checks) CheckFilterInvariance(ws, child, pass);
  if (!pass) return;
  ++ws.stats.processed;
  if (config_.record_processed) ws.processed.push_back(child);
  app_.process(ws.ctx, child);
  if (app_.termination_filter && !app_.termination_filter(ws.ctx, child)) {
    ++ws.stats.terminated;
    if (keep_terminal_) ws.terminal.push_back(child);
    return;
  }
  ++ws.stats.frontier;
  const std::string& key = ws.ctx.PatternKey(child);
  auto it = ws.frontier.find(key);
  if (it == ws.frontier.end()) {
    it = ws.frontier.emplace(key, FrontierGroup{ws.ctx.cached_pattern_, std::nullopt, {}, 0})
             .first;
    if (config_.storage == StorageKind::kOdag) it->second.odag.emplace(child.size());
  }
  FrontierGroup& group = it->second;
  if (group.odag) group.odag->insert(child.words());
  if (config_.storage == StorageKind::kList || config_.verify_storage) {
    group.words.insert(group.words.end(), child.words().begin(), child.words().end());
  }
  ++group.count;
}

void Engine::CheckFilterInvariance(WorkerState& ws, const Embedding& e, bool expected) {
  if (e.size() < 2 || ws.samples++ % config_.debug_sample_every != 0) return;
  ++ws.stats.invariance_checks;
  Embedding permuted(e.mode(), RandomConnectedOrder(g_, e, ws.rng));
  bool ok = permuted.size() == e.size();
  if (ok) {
    std::vector<Word> ids(permuted.words().begin(), permuted.words().end());
    ok = canonical_form(g_, e.mode(), std::move(ids)) == e;
  }
  if (ok) {
    // filter may assume its parent passed, so it is applied along the prefixes
    // of the permuted order just as the exploration applies it.
    bool chained = true;
    Embedding prefix(e.mode());
    for (std::size_t i = 0; chained && i < permuted.size(); ++i) {
      prefix.push_back(permuted[i]);
      chained = app_.filter(ws.ctx, prefix);
    }
    ok = chained == expected;
  }
  if (!ok) ++ws.stats.invariance_violations;
}

void Engine::CheckAggregationInvariance(WorkerState& ws, const Embedding& e, bool expected) {
  if (e.size() < 2 || ws.samples++ % config_.debug_sample_every != 0) return;
  ++ws.stats.invariance_checks;
  Embedding permuted(e.mode(), RandomConnectedOrder(g_, e, ws.rng));
  if (app_.aggregation_filter(ws.ctx, permuted) != expected) ++ws.stats.invariance_violations;
}

void Engine::Barrier(StepStats& st) {
  for (auto& ws : workers_) {
    Accumulate(st, ws->stats);
    st.lookup_canonizations += ws->lookup_canonizations;
    st.worker_load.push_back(ws->stats.extracted);
  }

  // Decoded frontier against the stored one.
  if (config_.verify_storage && !groups_.empty()) {
    st.storage_checked = true;
    for (std::size_t i = 0; i < groups_.size(); ++i) {
      Sequences decoded;
      for (auto& ws : workers_) {
        decoded.insert(decoded.end(), ws->decoded[i].begin(), ws->decoded[i].end());
      }
      st.storage_mismatches += SymmetricDifference(std::move(decoded), groups_[i].expected);
    }
  }

  auto snap = std::make_unique<Snapshot>();
  std::vector<const LocalAggregates*> locals, outputs;
  bool any_map = false, any_output = false;
  for (auto& ws : workers_) {
    locals.push_back(&ws->aggregates);
    outputs.push_back(&ws->output_aggregates);
    any_map = any_map || !ws->aggregates.empty();
    any_output = any_output || !ws->output_aggregates.empty();
  }
  const std::size_t max = config_.max_pattern_size;
  if (any_map) snap->store = two_level_reduce(locals, app_.reduce, snap->table, max);
  AggregateStore step_output;
  if (any_output) step_output = two_level_reduce(outputs, app_.reduce_output, snap->table, max);

  if (config_.verify_two_level) {
    st.two_level_checked = true;
    std::vector<std::pair<AggregationKey, AggregateValue>> calls, output_calls;
    for (auto& ws : workers_) {
      calls.insert(calls.end(), ws->raw_map.begin(), ws->raw_map.end());
      output_calls.insert(output_calls.end(), ws->raw_output.begin(), ws->raw_output.end());
    }
    std::size_t c1 = 0, c2 = 0;
    if (!calls.empty()) {
      st.two_level_matches = one_level_reduce(calls, app_.reduce, max, &c1) == snap->store;
    }
    if (!output_calls.empty()) {
      st.two_level_matches = st.two_level_matches &&
          one_level_reduce(output_calls, app_.reduce_output, max, &c2) == step_output;
    }
    st.one_level_canonizations = c1 + c2;
  }
  if (any_output) output_store_.absorb(step_output, app_.reduce_output);

  MergeFrontier(snap->table, st);

  st.quick_patterns = snap->table.size();
  st.canonizations = snap->table.canonizations();
  {
    std::vector<std::string> keys;
    for (const auto& [quick, canon] : snap->table.entries()) keys.push_back(canon.pattern.key());
    std::sort(keys.begin(), keys.end());
    st.canonical_patterns =
        static_cast<std::size_t>(std::unique(keys.begin(), keys.end()) - keys.begin());
  }
  history_.push_back(std::move(snap));

  terminal_.clear();
  std::vector<std::string> lines;
  for (auto& ws : workers_) {
    terminal_.insert(terminal_.end(), ws->terminal.begin(), ws->terminal.end());
    lines.insert(lines.end(), std::make_move_iterator(ws->outputs.begin()),
                 std::make_move_iterator(ws->outputs.end()));
    result_.processed.insert(result_.processed.end(), ws->processed.begin(),
                             ws->processed.end());
  }
  std::sort(terminal_.begin(), terminal_.end());
  std::sort(lines.begin(), lines.end());
  st.outputs = lines.size();
  result_.output_lines += lines.size();
  sink_.write(lines);
}

void Engine::MergeFrontier(QuickPatternTable& table, StepStats& st) {
  std::map<std::string, std::vector<FrontierGroup*>> by_canonical;
  for (auto& ws : workers_) {
    for (auto& [quick_key, group] : ws->frontier) {
      const CanonicalPattern& canon = table.add(quick_key, group.quick, config_.max_pattern_size);
      std::string key = canon.pattern.key();
      if (group.odag) group.odag->set_key(key);
      by_canonical[std::move(key)].push_back(&group);
    }
  }

  depth_ = step_;
  std::vector<StoredGroup> next(by_canonical.size());
  std::vector<std::vector<FrontierGroup*>*> sources;
  {
    std::size_t i = 0;
    for (auto& [key, srcs] : by_canonical) {
      next[i++].key = key;
      sources.push_back(&srcs);
    }
  }

  if (config_.storage == StorageKind::kOdag) {
    // Keyed reduction: one task per (pattern, array level).
    std::vector<OdagBuilder> merged;
    merged.reserve(next.size());
    for (const StoredGroup& group : next) merged.emplace_back(depth_, group.key);
    const std::size_t tasks = next.size() * depth_;
    pool_.parallel_for(tasks, [&](std::size_t t) {
      const std::size_t i = t / depth_, level = t % depth_;
      for (FrontierGroup* src : *sources[i]) merged[i].merge_level(level, *src->odag);
    });
    pool_.parallel_for(next.size(), [&](std::size_t i) { next[i].odag = merged[i].build(); });
  }

  pool_.parallel_for(next.size(), [&](std::size_t i) {
    StoredGroup& group = next[i];
    for (FrontierGroup* src : *sources[i]) group.count += src->count;
    if (config_.storage == StorageKind::kList || config_.verify_storage) {
      std::vector<Word> flat;
      for (FrontierGroup* src : *sources[i]) {
        flat.insert(flat.end(), src->words.begin(), src->words.end());
      }
      Sequences seqs = Split(flat, depth_);
      std::sort(seqs.begin(), seqs.end());
      if (config_.storage == StorageKind::kList) {
        for (const auto& s : seqs) group.words.insert(group.words.end(), s.begin(), s.end());
      }
      if (config_.verify_storage) group.expected = std::move(seqs);
    }
  });

  st.stored_groups = next.size();
  for (const StoredGroup& group : next) {
    if (config_.storage == StorageKind::kOdag) st.odag_bytes += group.odag.serialized_size();
    st.list_bytes += embedding_list_serialized_size(group.count, depth_);
  }
  groups_ = std::move(next);
}

std::vector<std::string> Engine::AggregateLines() const {
  std::vector<std::string> lines;
  auto emit = [&](const AggregationKey& key, const AggregateValue& value) {
    if (app_.format_output) {
      if (auto line = app_.format_output(key, value)) lines.push_back(std::move(*line));
    } else {
      lines.push_back(render_key(key) + "\t" + render_value(value));
    }
  };
  for (const auto& [key, value] : output_store_.by_int()) emit(AggregationKey(key), value);
  for (const auto& [key, entry] : output_store_.by_pattern()) {
    emit(AggregationKey(entry.pattern), entry.value);
  }
  return lines;
}

}  // namespace detail

// --- Context ----------------------------------------------------------------

void Context::output(std::string line) { state_->outputs.push_back(std::move(line)); }

void Context::output(const Embedding& e) { output(render(*graph_, e)); }

void Context::AddPattern(LocalAggregates& into, const Pattern& p, AggregateValue value,
                         const Reducer& reduce) {
  if (cache_valid_ && p == cached_pattern_) {
    into.add_pattern(cached_key_, p, std::move(value), reduce);
  } else {
    into.add_pattern(p.key(), p, std::move(value), reduce);
  }
}

void Context::map(AggregationKey key, AggregateValue value) {
  if (!app_->reduce) throw std::logic_error("map() called but the application has no reduce");
  if (engine_->recording()) state_->raw_map.emplace_back(key, value);
  if (const auto* p = std::get_if<Pattern>(&key)) {
    AddPattern(state_->aggregates, *p, std::move(value), app_->reduce);
  } else {
    state_->aggregates.add(std::move(key), std::move(value), app_->reduce);
  }
}

void Context::map_output(AggregationKey key, AggregateValue value) {
  if (!app_->reduce_output) {
    throw std::logic_error("map_output() called but the application has no reduce_output");
  }
  if (engine_->recording()) state_->raw_output.emplace_back(key, value);
  if (const auto* p = std::get_if<Pattern>(&key)) {
    AddPattern(state_->output_aggregates, *p, std::move(value), app_->reduce_output);
  } else {
    state_->output_aggregates.add(std::move(key), std::move(value), app_->reduce_output);
  }
}

const AggregateValue* Context::read_aggregate(const AggregationKey& key) {
  const detail::Snapshot* snap = engine_->snapshot(read_step_);
  if (snap == nullptr) return nullptr;
  if (const auto* i = std::get_if<std::int64_t>(&key)) return snap->store.find(*i);
  const Pattern& p = std::get<Pattern>(key);
  const std::string quick_key = (cache_valid_ && p == cached_pattern_) ? cached_key_ : p.key();
  if (const CanonicalPattern* canon = snap->table.find(quick_key)) {
    return snap->store.find_canonical(canon->pattern.key());
  }
  return snap->store.find_canonical(canonical(p).pattern.key());
}

const Pattern& Context::pattern(const Embedding& e) {
  PatternKey(e);
  return cached_pattern_;
}

const std::string& Context::PatternKey(const Embedding& e) {
  const auto words = e.words();
  if (!cache_valid_ || !std::ranges::equal(words, cached_words_)) {
    cached_pattern_ = quick_pattern(*graph_, e, app_->pattern_labels);
    cached_key_ = cached_pattern_.key();
    cached_words_.assign(words.begin(), words.end());
    cache_valid_ = true;
  }
  return cached_key_;
}

const CanonicalPattern& Context::canonical(const Pattern& quick) {
  const std::string key = (cache_valid_ && quick == cached_pattern_) ? cached_key_ : quick.key();
  if (const detail::Snapshot* snap = engine_->snapshot(read_step_)) {
    if (const CanonicalPattern* canon = snap->table.find(key)) return *canon;
  }
  auto it = canonical_memo_.find(key);
  if (it == canonical_memo_.end()) {
    ++state_->lookup_canonizations;
    it = canonical_memo_.emplace(key, canonical_pattern(quick, engine_->max_pattern_size()))
             .first;
  }
  return it->second;
}

const std::vector<std::vector<Slot>>& Context::automorphisms(const Pattern& quick) {
  const std::string key = (cache_valid_ && quick == cached_pattern_) ? cached_key_ : quick.key();
  auto it = automorphism_memo_.find(key);
  if (it == automorphism_memo_.end()) {
    it = automorphism_memo_.emplace(key, mine::automorphisms(quick)).first;
  }
  return it->second;
}

RunResult run(const InputGraph& g, const Application& app, const EngineConfig& config,
              OutputSink& sink) {
  detail::Engine engine(g, app, config, sink);
  return engine.Run();
}

}  // namespace mine
