// falsify: run a falsification problem described by a JSON config.
//
// Exit codes: 0 all runs completed without a violation, 10 some run found a
// falsifying sample, 1 invalid configuration or options, 2 a simulation
// failed under the abort-run policy.

#include "config.hpp"
#include "output.hpp"

#include "falsify/bench.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitAborted = 2;
constexpr int kExitFalsified = 10;

struct RunFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> iterations;
  std::optional<std::size_t> runs;
  std::optional<std::string> optimizer;
  std::optional<std::string> out;
  std::optional<std::string> format;
  bool quiet = false;
};

int run(const RunFlags& flags) {
  using namespace falsify;
  cli::RunConfig cfg = cli::load_config(flags.config);
  if (flags.seed) cfg.options.seed = *flags.seed;
  if (flags.iterations) cfg.options.iterations = *flags.iterations;
  if (flags.runs) cfg.options.runs = *flags.runs;
  if (flags.optimizer) {
    if (*flags.optimizer != cfg.optimizer) cfg.optimizer_options = nlohmann::json::object();
    cfg.optimizer = *flags.optimizer;
  }
  if (flags.out) cfg.output_path = *flags.out;
  if (flags.format) cfg.format = cli::parse_format(*flags.format);

  cfg.options.validate();
  auto optimizer = cli::make_optimizer(cfg.optimizer, cfg.optimizer_options);
  const auto spec = StlSpecification::parse(cfg.requirement, cfg.predicates);
  auto model = cli::make_model(cfg);

  const auto results = staliro(spec, *model, *optimizer, cfg.options);

  std::ofstream file;
  if (cfg.output_path) {
    file.open(*cfg.output_path);
    if (!file) throw cli::ConfigError("cannot write output file '" + cfg.output_path->string() + "'");
  }
  std::ostream& out = cfg.output_path ? file : std::cout;
  if (cfg.format == cli::OutputFormat::Csv) {
    cli::write_csv(out, results);
  } else {
    cli::write_json(out, results);
  }
  out.flush();
  if (!out) throw cli::ConfigError("failed writing results");

  bool aborted = false;
  bool falsified = false;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& r = results[i];
    aborted = aborted || r.aborted;
    falsified = falsified || r.falsified;
    if (flags.quiet) continue;
    std::cerr << "run " << i << ": " << r.history.size() << " evaluations, ";
    if (r.best) {
      std::cerr << "best robustness " << format_real(r.best->robustness);
    } else {
      std::cerr << "no evaluation";
    }
    if (r.falsified) std::cerr << ", falsified";
    if (r.aborted) std::cerr << ", aborted: " << (r.failures.empty() ? "" : r.failures.back().message);
    std::cerr << '\n';
  }
  if (aborted) return kExitAborted;
  return falsified ? kExitFalsified : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Search for inputs that violate an STL requirement"};
  app.require_subcommand(1);

  RunFlags flags;
  auto* run_cmd = app.add_subcommand("run", "Run the search described by a JSON config");
  run_cmd->add_option("config", flags.config, "Config file")->required();
  run_cmd->add_option("--seed", flags.seed, "Base seed; run i uses seed + i");
  run_cmd->add_option("--iterations", flags.iterations, "Objective evaluations per run");
  run_cmd->add_option("--runs", flags.runs, "Independent runs");
  run_cmd->add_option("--optimizer", flags.optimizer, "uniform-random, simulated-annealing or basinhopping");
  run_cmd->add_option("--out", flags.out, "Output file (stdout when absent)");
  run_cmd->add_option("--format", flags.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  run_cmd->add_flag("-q,--quiet", flags.quiet, "No per-run summary on stderr");

  auto* list_cmd = app.add_subcommand("list", "List built-in benchmarks and optimizers");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  if (list_cmd->parsed()) {
    std::cout << "benchmarks:\n";
    for (const auto& name : falsify::bench::names()) std::cout << "  " << name << '\n';
    std::cout << "optimizers:\n";
    for (const auto& name : falsify::cli::optimizer_names()) std::cout << "  " << name << '\n';
    return kExitOk;
  }

  try {
    return run(flags);
  } catch (const falsify::ParseError& e) {
    std::cerr << "error: requirement: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const falsify::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const falsify::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitAborted;
  }
}
