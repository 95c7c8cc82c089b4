#include "mine/cli.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "CLI11.hpp"
#include "mine/apps.h"
#include "mine/graph.h"

namespace mine {

namespace {

struct RawFlags {
  std::string input;
  std::string out = "out";
  std::string mode;
  std::optional<long long> support;
  std::optional<long long> max_size;
  std::optional<long long> workers;
  long long block_size = 1024;
  std::string storage = "odag";
  bool debug_checks = false;
  bool labeled = false;
};

void AddFlags(CLI::App* cmd, RawFlags& f) {
  cmd->add_option("--input", f.input, "graph file")->required();
  cmd->add_option("--out", f.out, "output directory")->capture_default_str();
  cmd->add_option("--mode", f.mode, "exploration mode")
      ->check(CLI::IsMember({"vertex", "edge"}));
  cmd->add_option("--support", f.support, "minimum image support threshold (fsm)");
  cmd->add_option("--max-size", f.max_size, "maximum embedding size");
  cmd->add_option("--workers", f.workers, "worker threads (default: MINE_WORKERS or all cores)");
  cmd->add_option("--block-size", f.block_size, "partitioning block size")
      ->capture_default_str();
  cmd->add_option("--storage", f.storage, "frontier storage")
      ->check(CLI::IsMember({"odag", "list"}))
      ->capture_default_str();
  cmd->add_flag("--debug-checks", f.debug_checks, "sample automorphism-invariance checks");
  cmd->add_flag("--labeled", f.labeled, "use labels in motif patterns");
}

std::size_t Positive(long long value, const char* flag) {
  if (value < 1) throw UsageError(std::string(flag) + " must be at least 1");
  return static_cast<std::size_t>(value);
}

}  // namespace

RunConfig parse_args(const std::vector<std::string>& args) {
  CLI::App cli{"Subgraph mining engine", "mine"};
  cli.require_subcommand(1);
  RawFlags flags;
  for (const char* name : {"fsm", "motifs", "cliques"}) {
    const char* help = name == std::string("fsm")       ? "frequent subgraph mining"
                       : name == std::string("motifs") ? "motif counting"
                                                        : "clique finding";
    AddFlags(cli.add_subcommand(name, help), flags);
  }

  std::vector<const char*> argv;
  argv.push_back("mine");
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    cli.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    throw UsageError(cli.help(), 0);
  } catch (const CLI::ParseError& e) {
    std::string message = e.what();
    for (CLI::App* sub : cli.get_subcommands()) {
      if (sub->parsed()) message += "\n" + sub->help();
    }
    throw UsageError(message);
  }

  RunConfig config;
  config.app = cli.get_subcommands().front()->get_name();
  config.input = flags.input;
  config.out = flags.out;
  if (!flags.mode.empty()) {
    config.mode =
        flags.mode == "edge" ? ExplorationMode::kEdgeInduced : ExplorationMode::kVertexInduced;
  }
  config.block_size = Positive(flags.block_size, "--block-size");
  config.storage = flags.storage == "list" ? StorageKind::kList : StorageKind::kOdag;
  config.debug_checks = flags.debug_checks;
  config.labeled = flags.labeled;

  if (flags.workers) {
    config.workers = Positive(*flags.workers, "--workers");
  } else if (const char* env = std::getenv("MINE_WORKERS"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const long long n = std::strtoll(env, &end, 10);
    if (*end != '\0' || n < 1) throw UsageError("MINE_WORKERS must be a positive integer");
    config.workers = static_cast<std::size_t>(n);
  }
  if (flags.max_size) config.max_size = Positive(*flags.max_size, "--max-size");

  if (config.app == "fsm") {
    if (!flags.support) throw UsageError("fsm requires --support");
    config.support = Positive(*flags.support, "--support");
    if (config.labeled) throw UsageError("--labeled applies to motifs only");
  } else {
    if (flags.support) throw UsageError("--support applies to fsm only");
    if (config.app == "cliques") {
      if (config.labeled) throw UsageError("--labeled applies to motifs only");
      if (config.mode == ExplorationMode::kEdgeInduced) {
        throw UsageError("cliques requires vertex mode");
      }
    }
    if (!config.max_size) config.max_size = config.app == "motifs" ? 4 : 5;
  }
  return config;
}

Application make_app(const RunConfig& config) {
  if (config.app == "fsm") {
    return fsm_app(*config.support, config.max_size,
                   config.mode.value_or(ExplorationMode::kEdgeInduced));
  }
  if (config.app == "motifs") {
    return motifs_app(*config.max_size, config.labeled,
                      config.mode.value_or(ExplorationMode::kVertexInduced));
  }
  if (config.app == "cliques") return cliques_app(*config.max_size);
  throw UsageError("unknown application: " + config.app);
}

EngineConfig make_engine_config(const RunConfig& config) {
  EngineConfig ec;
  ec.workers = config.workers;
  ec.block_size = config.block_size;
  ec.storage = config.storage;
  ec.debug_checks = config.debug_checks;
  return ec;
}

std::string format_summary(const RunConfig& config, const RunResult& result) {
  std::ostringstream out;
  out << "app\t" << config.app << "\n";
  out << "input\t" << config.input << "\n";
  out << "workers\t" << result.workers << "\n";
  out << "storage\t" << to_string(config.storage) << "\n";
  out << "block_size\t" << config.block_size << "\n";
  if (config.support) out << "support\t" << *config.support << "\n";
  if (config.max_size) out << "max_size\t" << *config.max_size << "\n";
  out << "output_lines\t" << result.output_lines << "\n";
  out << "aggregate_lines\t" << result.aggregate_lines.size() << "\n";
  out << "seconds\t" << std::fixed << std::setprecision(3) << result.seconds << "\n";
  std::uint64_t violations = 0;
  for (const StepStats& s : result.steps) violations += s.invariance_violations;
  if (config.debug_checks) out << "invariance_violations\t" << violations << "\n";
  out << "\n";
  out << "depth\tdecoded\tpassed_aggregation\tcandidates\tcanonical\tprocessed\tfrontier"
         "\toutputs\tquick_patterns\tcanonical_patterns\tcanonizations\todag_bytes"
         "\tlist_bytes\tseconds\n";
  for (const StepStats& s : result.steps) {
    out << s.step << "\t" << s.extracted << "\t" << s.aggregation_passed << "\t"
        << s.candidates << "\t" << s.canonical << "\t" << s.processed << "\t" << s.frontier
        << "\t" << s.outputs << "\t" << s.quick_patterns << "\t" << s.canonical_patterns
        << "\t" << s.canonizations << "\t" << s.odag_bytes << "\t" << s.list_bytes << "\t"
        << std::fixed << std::setprecision(3) << s.seconds << "\n";
  }
  return out.str();
}

int execute(const RunConfig& config, std::ostream& log) {
  const InputGraph g = load_graph(config.input);
  std::filesystem::create_directories(config.out);
  const std::filesystem::path dir(config.out);
  const Application app = make_app(config);
  const EngineConfig ec = make_engine_config(config);
  RunResult result;
  {
    FileSink sink((dir / "output.txt").string());
    result = run(g, app, ec, sink);
  }
  std::ofstream summary(dir / "summary.txt");
  summary << format_summary(config, result);
  if (!summary) throw std::runtime_error("cannot write " + (dir / "summary.txt").string());
  log << config.app << ": " << result.output_lines << " output lines, "
      << result.aggregate_lines.size() << " aggregate lines, " << result.steps.size()
      << " steps, " << std::fixed << std::setprecision(3) << result.seconds << " s\n";
  if (config.debug_checks) {
    std::uint64_t violations = 0;
    for (const StepStats& s : result.steps) violations += s.invariance_violations;
    if (violations > 0) log << "warning: " << violations << " invariance violations\n";
  }
  return 0;
}

int run_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args(argv + 1, argv + argc);
  RunConfig config;
  try {
    config = parse_args(args);
  } catch (const UsageError& e) {
    (e.exit_code() == 0 ? out : err) << e.what() << "\n";
    return e.exit_code();
  }
  try {
    return execute(config, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace mine
