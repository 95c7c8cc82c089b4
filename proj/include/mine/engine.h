#ifndef MINE_ENGINE_H_
#define MINE_ENGINE_H_

#include <cstdint>
#include <fstream>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "mine/aggregation.h"
#include "mine/embedding.h"
#include "mine/graph.h"
#include "mine/pattern.h"

namespace mine {

class Context;

using EmbeddingPredicate = std::function<bool(Context&, const Embedding&)>;
using EmbeddingAction = std::function<void(Context&, const Embedding&)>;
// Renders one final output aggregate; nullopt suppresses the line.
using OutputFormatter =
    std::function<std::optional<std::string>(const AggregationKey&, const AggregateValue&)>;

// Callback bundle of a mining application. filter and process are required;
// the rest are optional.
//
// filter and aggregation_filter must be anti-monotonic, and every callback
// must give the same answer for automorphic embeddings. filter,
// aggregation_filter and termination_filter are re-evaluated on prefixes
// while decoding stored frontiers, so they must not have side effects.
struct Application {
  std::string name;
  ExplorationMode mode = ExplorationMode::kVertexInduced;
  bool pattern_labels = true;  // false: quick patterns ignore labels

  EmbeddingPredicate filter;
  EmbeddingAction process;
  EmbeddingPredicate aggregation_filter;
  EmbeddingAction aggregation_process;
  EmbeddingPredicate termination_filter;  // false: do not extend further

  Reducer reduce;         // for map()
  Reducer reduce_output;  // for map_output()
  OutputFormatter format_output;
};

enum class StorageKind { kOdag, kList };

const char* to_string(StorageKind storage);

struct EngineConfig {
  std::size_t workers = 0;  // 0: hardware concurrency
  std::uint64_t block_size = 1024;
  StorageKind storage = StorageKind::kOdag;
  std::size_t max_pattern_size = kDefaultMaxPatternSize;

  // Sampled automorphism-invariance checks of filter/aggregation_filter.
  bool debug_checks = false;
  std::size_t debug_sample_every = 7;
  std::uint64_t seed = 1;

  // Compares each decoded frontier with the set that was stored.
  bool verify_storage = false;
  // Compares two-level aggregation with a one-level reference.
  bool verify_two_level = false;
  // Keeps every processed embedding in RunResult::processed.
  bool record_processed = false;
};

std::size_t default_workers();

class OutputSink {
 public:
  virtual ~OutputSink() = default;
  virtual void write(std::span<const std::string> lines) = 0;
};

class MemorySink : public OutputSink {
 public:
  void write(std::span<const std::string> lines) override {
    lines_.insert(lines_.end(), lines.begin(), lines.end());
  }
  const std::vector<std::string>& lines() const { return lines_; }

 private:
  std::vector<std::string> lines_;
};

class FileSink : public OutputSink {
 public:
  explicit FileSink(const std::string& path);
  void write(std::span<const std::string> lines) override;

 private:
  std::ofstream out_;
  std::string path_;
};

struct StepStats {
  std::size_t step = 0;  // size of the embeddings generated in this step
  std::uint64_t extracted = 0;
  std::uint64_t aggregation_passed = 0;
  std::uint64_t candidates = 0;
  std::uint64_t canonical = 0;
  std::uint64_t processed = 0;
  std::uint64_t frontier = 0;
  std::uint64_t terminated = 0;
  std::uint64_t pruned_prefixes = 0;
  std::uint64_t outputs = 0;

  std::size_t quick_patterns = 0;
  std::size_t canonical_patterns = 0;
  std::size_t canonizations = 0;
  std::size_t lookup_canonizations = 0;

  std::size_t stored_groups = 0;
  std::size_t odag_bytes = 0;
  std::size_t list_bytes = 0;

  bool storage_checked = false;
  std::uint64_t storage_mismatches = 0;
  bool two_level_checked = false;
  bool two_level_matches = true;
  std::size_t one_level_canonizations = 0;
  std::uint64_t invariance_checks = 0;
  std::uint64_t invariance_violations = 0;

  std::vector<std::uint64_t> worker_load;  // decoded embeddings per worker
  double seconds = 0;
};

struct RunResult {
  std::vector<StepStats> steps;
  AggregateStore output_aggregates;
  std::vector<std::string> aggregate_lines;
  std::uint64_t output_lines = 0;
  std::vector<Embedding> processed;  // with record_processed, sorted
  std::size_t workers = 0;
  double seconds = 0;
};

class EngineError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {
class Engine;
struct WorkerState;
}  // namespace detail

// Per-worker handle passed to every callback.
class Context {
 public:
  const InputGraph& graph() const { return *graph_; }
  std::size_t step() const { return step_; }
  std::size_t worker() const { return worker_; }

  void output(std::string line);
  void output(const Embedding& e);

  void map(AggregationKey key, AggregateValue value);
  void map_output(AggregationKey key, AggregateValue value);
  // Value reduced at the end of the previous step, nullptr when absent.
  // Pattern keys are canonized; slot-indexed values follow canonical slots.
  const AggregateValue* read_aggregate(const AggregationKey& key);

  // Quick pattern of e; the last result is cached.
  const Pattern& pattern(const Embedding& e);
  const CanonicalPattern& canonical(const Pattern& quick);
  const std::vector<std::vector<Slot>>& automorphisms(const Pattern& quick);

 private:
  friend class detail::Engine;
  friend struct detail::WorkerState;

  const std::string& PatternKey(const Embedding& e);
  void AddPattern(LocalAggregates& into, const Pattern& p, AggregateValue value,
                  const Reducer& reduce);

  const InputGraph* graph_ = nullptr;
  const Application* app_ = nullptr;
  detail::Engine* engine_ = nullptr;
  detail::WorkerState* state_ = nullptr;
  std::size_t step_ = 0;
  std::size_t read_step_ = 0;  // aggregates reduced at the end of this step
  std::size_t worker_ = 0;

  std::vector<Embedding::Word> cached_words_;
  bool cache_valid_ = false;
  Pattern cached_pattern_;
  std::string cached_key_;

  std::unordered_map<std::string, CanonicalPattern> canonical_memo_;
  std::unordered_map<std::string, std::vector<std::vector<Slot>>> automorphism_memo_;
};

// Runs the exploration to completion. Embedding outputs are written to
// `sink` at each step barrier, sorted; final aggregate lines follow.
RunResult run(const InputGraph& g, const Application& app, const EngineConfig& config,
              OutputSink& sink);

}  // namespace mine

#endif  // MINE_ENGINE_H_
