#include "arp_cli/commands.hpp"

#include "arp/harness.hpp"
#include "arp/trace_io.hpp"
#include "arp_cli/run_config.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <ostream>
#include <thread>

namespace arp::cli {
namespace {

namespace fs = std::filesystem;

int exit_code_for(SolveStatus status) {
  switch (status) {
    case SolveStatus::ConvergedAtStart:
    case SolveStatus::Converged: return kExitOk;
    case SolveStatus::IterationLimit: return kExitIterationLimit;
    case SolveStatus::SubsolverFailureLimit: return kExitSubsolverFailure;
  }
  return kExitUsage;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(fmt::format("cannot write {}", path.string()));
  out << text;
}

fs::path prepare_output(const std::string& directory) {
  fs::path dir(directory);
  fs::create_directories(dir);
  return dir;
}

void print_failure(std::ostream& out, const InvariantVerdict& v) {
  if (v.iteration) {
    fmt::print(out, "FAIL {} ({}) at iteration {}: {}\n", v.id, v.description, *v.iteration, v.detail);
  } else {
    fmt::print(out, "FAIL {} ({}): {}\n", v.id, v.description, v.detail);
  }
}

}  // namespace

int cmd_solve(const std::string& config_path, std::ostream& out, std::ostream& err) {
  RunConfig config;
  try {
    config = load_run_config(config_path);
  } catch (const ConfigError& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitUsage;
  }
  const auto& entry = config.entry;
  const SolveReport report = run(*entry.problem, entry.meta, config.set, config.start, config.solve);
  for (const auto& w : report.warnings) fmt::print(err, "warning: {}\n", w);

  const fs::path dir = prepare_output(config.output_directory);
  write_trace_file((dir / "trace.jsonl").string(), report);
  write_text(dir / "summary.csv", summary_csv_header() + summary_csv_row(report));

  fmt::print(out, "problem            {}\n", report.problem);
  fmt::print(out, "status             {}\n", to_string(report.status));
  fmt::print(out, "iterations         {} ({} successful)\n", report.iterations.size(), report.successful_count);
  fmt::print(out, "final criticality  {:.6g}\n", report.final_criticality);
  fmt::print(out, "final value        {:.6g}\n", report.final_value);
  fmt::print(out, "wrote              {}\n", (dir / "trace.jsonl").string());
  return exit_code_for(report.status);
}

int cmd_sweep(const std::string& config_path, int jobs, std::ostream& out, std::ostream& err) {
  RunConfig config;
  try {
    config = load_run_config(config_path);
    if (!config.sweep) throw ConfigError(fmt::format("{}: a [sweep] section is required", config_path));
  } catch (const ConfigError& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitUsage;
  }
  // Sweeps always start from the configured point and set.
  CorpusEntry entry = config.entry;
  entry.default_start = config.start;
  entry.default_set = config.set;
  const auto grid = config.sweep->epsilons();

  SweepResult result;
  try {
    result = run_sweep(entry, config.solve.p, config.solve.r, grid, config.solve, jobs);
  } catch (const std::invalid_argument& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitUsage;
  }

  const fs::path dir = prepare_output(config.output_directory);
  write_text(dir / "sweep.csv", sweep_csv(result));
  write_text(dir / "sweep_summary.json", sweep_summary_json(result));
  fs::create_directories(dir / "traces");
  std::string summary = summary_csv_header();
  for (size_t i = 0; i < grid.size(); ++i) {
    write_trace_file((dir / "traces" / fmt::format("trace_{:02d}_eps_{:.0e}.jsonl", i, grid[i])).string(),
                     result.reports[i]);
    summary += summary_csv_row(result.reports[i]);
  }
  write_text(dir / "summary.csv", summary);

  fmt::print(out, "problem      {} (p = {}, r = {}, beta = {})\n", result.problem, result.p, result.r, result.beta);
  for (size_t i = 0; i < grid.size(); ++i) {
    fmt::print(out, "  eps {:<8.1e} {:>8} iterations  {:>7} successful  {}\n", grid[i],
               result.total_evaluations[i], result.successful_counts[i],
               to_string(result.reports[i].status));
  }
  if (std::isfinite(result.fitted_slope)) {
    fmt::print(out, "slope        {:.4f}\n", result.fitted_slope);
  } else {
    fmt::print(out, "slope        n/a\n");
  }
  if (result.theoretical) {
    fmt::print(out, "exponent     {:.4f} ({})\n", result.theoretical->exponent, to_string(result.theoretical->regime));
    fmt::print(out, "within bound {}\n", result.slope_within(kSlopeTolerance) ? "yes" : "no");
  }

  if (!result.all_converged) {
    for (size_t i = 0; i < grid.size(); ++i) {
      const auto status = result.reports[i].status;
      if (status != SolveStatus::Converged) {
        fmt::print(err, "error: run at eps = {:.1e} ended with {}\n", grid[i], to_string(status));
        const int code = exit_code_for(status);
        return code == kExitOk ? kExitUsage : code;
      }
    }
  }
  if (!result.all_invariants_passed) {
    for (size_t i = 0; i < grid.size(); ++i) {
      for (const auto& v : result.failures[i]) {
        fmt::print(err, "eps {:.1e}: ", grid[i]);
        print_failure(err, v);
      }
    }
    return kExitInvariantFailure;
  }
  return kExitOk;
}

int cmd_verify(const std::string& trace_path, std::ostream& out, std::ostream& err) {
  SolveReport report;
  try {
    report = read_trace_file(trace_path);
  } catch (const std::exception& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitUsage;
  }
  const auto verdicts = check_trace(report);
  for (const auto& v : verdicts) {
    if (v.passed) {
      fmt::print(out, "PASS {} ({})\n", v.id, v.description);
    } else {
      print_failure(out, v);
    }
  }
  return all_passed(verdicts) ? kExitOk : kExitInvariantFailure;
}

int cmd_list_problems(bool json, std::ostream& out) {
  const auto corpus = list_corpus();
  if (json) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& e : corpus) {
      nlohmann::json orders = nlohmann::json::array();
      for (const auto& s : e.meta.smoothness) {
        orders.push_back({{"order", s.order},
                          {"beta", s.beta},
                          {"L", s.holder_constant_unscaled},
                          {"certified", s.certified}});
      }
      const auto& top = e.top_smoothness();
      rows.push_back({{"name", e.name},
                      {"family", e.family},
                      {"n", e.dimension()},
                      {"p_max", e.supported_orders()},
                      {"beta", top.beta},
                      {"L", top.holder_constant_unscaled},
                      {"f_low", e.meta.f_low},
                      {"smoothness", orders}});
    }
    out << rows.dump(2) << "\n";
    return kExitOk;
  }
  fmt::print(out, "{:<22} {:>3} {:>5} {:>6} {:>12} {:>10}\n", "name", "n", "p_max", "beta", "L", "f_low");
  for (const auto& e : corpus) {
    const auto& top = e.top_smoothness();
    fmt::print(out, "{:<22} {:>3} {:>5} {:>6.3g} {:>12.6g} {:>10.6g}\n", e.name, e.dimension(),
               e.supported_orders(), top.beta, top.holder_constant_unscaled, e.meta.f_low);
  }
  return kExitOk;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Adaptive regularization (ARp) solver and complexity harness", "arp"};
  app.require_subcommand(1);

  std::string config_path;
  auto* solve = app.add_subcommand("solve", "Run one solve from a configuration file");
  solve->add_option("config", config_path, "Run configuration (INI)")->required();

  int jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  auto* sweep = app.add_subcommand("sweep", "Run an epsilon sweep and fit the complexity slope");
  sweep->add_option("config", config_path, "Run configuration with a [sweep] section")->required();
  sweep->add_option("-j,--jobs", jobs, "Parallel solves")->check(CLI::PositiveNumber);

  std::string trace_path;
  auto* verify = app.add_subcommand("verify", "Check the trace invariants of a trace.jsonl file");
  verify->add_option("trace", trace_path, "Trace written by solve or sweep")->required();

  bool json = false;
  auto* list = app.add_subcommand("list-problems", "Print the problem catalog");
  list->add_flag("--json", json, "Machine-readable output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    fmt::print(err, "error: {}\n\n", e.what());
    const auto* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
    err << sub->help();
    return kExitUsage;
  }

  try {
    if (*solve) return cmd_solve(config_path, out, err);
    if (*sweep) return cmd_sweep(config_path, jobs, out, err);
    if (*verify) return cmd_verify(trace_path, out, err);
    if (*list) return cmd_list_problems(json, out);
  } catch (const std::exception& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace arp::cli
