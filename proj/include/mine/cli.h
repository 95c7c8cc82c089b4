#ifndef MINE_CLI_H_
#define MINE_CLI_H_

#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "mine/engine.h"

namespace mine {

struct RunConfig {
  std::string app;  // fsm | motifs | cliques
  std::string input;
  std::string out = "out";
  std::optional<ExplorationMode> mode;
  std::optional<std::size_t> support;
  std::optional<std::size_t> max_size;
  std::size_t workers = 0;
  std::uint64_t block_size = 1024;
  StorageKind storage = StorageKind::kOdag;
  bool debug_checks = false;
  bool labeled = false;  // motifs only
};

// Bad command line. exit_code is 0 for --help.
class UsageError : public std::runtime_error {
 public:
  UsageError(const std::string& message, int exit_code = 2)
      : std::runtime_error(message), exit_code_(exit_code) {}
  int exit_code() const { return exit_code_; }

 private:
  int exit_code_;
};

// Reads MINE_WORKERS when --workers is absent.
RunConfig parse_args(const std::vector<std::string>& args);

Application make_app(const RunConfig& config);
EngineConfig make_engine_config(const RunConfig& config);

// Per-step table written to summary.txt.
std::string format_summary(const RunConfig& config, const RunResult& result);

// Loads the graph, runs, writes <out>/output.txt and <out>/summary.txt.
int execute(const RunConfig& config, std::ostream& log);

int run_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mine

#endif  // MINE_CLI_H_
