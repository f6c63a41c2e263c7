#include "cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "csv_output.hpp"
#include "dlms/claims.hpp"
#include "dlms/error.hpp"
#include "dlms/runner.hpp"

namespace dlms::cli {
namespace {

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> iterations;
  std::optional<std::size_t> ensemble;
  std::optional<std::string> w_opt;
  std::vector<std::string> sets;

  void attach(CLI::App& cmd) {
    cmd.add_option("--seed", seed, "Base seed of the ensemble");
    cmd.add_option("--iterations", iterations, "Horizon L");
    cmd.add_option("--ensemble", ensemble, "Number of independent runs");
    cmd.add_option("--w-opt", w_opt, "True parameter vector, comma-separated");
    cmd.add_option("--set", sets,
                   "Override as key=value: <agent>.<field>, trust.<from>.<to> or a network key")
        ->allow_extra_args(false);
  }

  Scenario resolve(std::string_view ref) const {
    Scenario s = load_scenario(ref);
    if (seed) s.seed = *seed;
    if (iterations) s.iterations = *iterations;
    if (ensemble) s.ensemble = *ensemble;
    if (w_opt) apply_override(s, "w_opt", *w_opt);
    for (const auto& kv : sets) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
      apply_override(s, std::string_view(kv).substr(0, eq), std::string_view(kv).substr(eq + 1));
    }
    validate(s);
    return s;
  }
};

int cmd_list(std::ostream& out) {
  for (const auto& info : builtin_catalog()) {
    out << info.name << "  " << info.description << "\n";
  }
  return kSuccess;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw ConfigError("cannot write '" + path.string() + "'");
  return f;
}

int cmd_run(const std::string& ref, const Overrides& overrides, std::string out_path,
            std::ostream& out, std::ostream& err) {
  const Scenario scenario = overrides.resolve(ref);
  if (out_path.empty()) {
    out_path = (scenario.name.empty() ? std::string("trajectory") : scenario.name) + ".csv";
  }
  const std::filesystem::path trajectory_path(out_path);
  const auto metrics_path = sibling_path(trajectory_path, "metrics");
  const auto errors_path = sibling_path(trajectory_path, "errors");

  const EnsembleResult result = run_ensemble(scenario);
  {
    auto f = open_output(trajectory_path);
    write_trajectory_csv(f, result.records);
  }
  if (!result.records.empty()) {
    MetricsOptions options;
    options.band = default_band(scenario);
    const MetricsReport report = summarize(result.records, options);
    auto f = open_output(metrics_path);
    write_metrics_csv(f, report, options.band, options.window_fraction);
  }

  if (!result.failures.empty()) {
    auto f = open_output(errors_path);
    write_error_manifest(f, result.failures);
    err << "error: " << result.failures.size() << " of " << scenario.ensemble
        << " runs diverged; first: " << result.failures.front().what() << "\n"
        << "error manifest written to " << errors_path.string() << "\n";
    return kDivergence;
  }
  std::error_code ignored;
  std::filesystem::remove(errors_path, ignored);
  out << "wrote " << trajectory_path.string() << " and " << metrics_path.string() << " ("
      << result.records.size() << " runs x " << scenario.iterations << " iterations)\n";
  return kSuccess;
}

int cmd_verify(const std::string& ref, const std::string& claim_name, const Overrides& overrides,
               std::ostream& out) {
  const Claim claim = parse_claim(claim_name);
  const Scenario scenario = overrides.resolve(ref);
  const ClaimResult result = verify_claim(scenario, claim);
  out << (result.pass ? "PASS" : "FAIL") << " " << to_string(claim) << " on "
      << (scenario.name.empty() ? ref : scenario.name) << " (" << scenario.ensemble
      << " runs)\n";
  out << "  predicate: " << result.predicate << "\n";
  for (const auto& q : result.quantities) {
    out << "  " << q.name << " = " << format_real(q.value) << "\n";
  }
  return result.pass ? kSuccess : kFailure;
}

}  // namespace

Scenario load_scenario(std::string_view ref) {
  for (const auto& info : builtin_catalog()) {
    if (info.name == ref) return builtin(ref);
  }
  const std::filesystem::path path(ref);
  std::ifstream f(path, std::ios::binary);
  if (!f) {
    throw ConfigError("'" + path.string() + "' is neither a builtin scenario nor a readable file");
  }
  std::stringstream buffer;
  buffer << f.rdbuf();
  try {
    Scenario s = parse_unvalidated(buffer.str());
    if (s.name.empty()) s.name = path.stem().string();
    return s;
  } catch (const ParseError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Diffusion LMS network simulator"};
  app.require_subcommand(1);

  auto* list = app.add_subcommand("list", "List builtin scenarios");

  std::string run_ref, run_out;
  Overrides run_overrides;
  auto* run_cmd = app.add_subcommand("run", "Simulate a scenario and write trajectory/metrics CSV");
  run_cmd->add_option("scenario", run_ref, "Builtin name or scenario file")->required();
  run_cmd->add_option("--out", run_out, "Trajectory CSV path (default <scenario>.csv)");
  run_overrides.attach(*run_cmd);

  std::string verify_ref, verify_claim_name;
  Overrides verify_overrides;
  auto* verify_cmd = app.add_subcommand("verify", "Check a claim statistically over the ensemble");
  verify_cmd->add_option("scenario", verify_ref, "Builtin name or scenario file")->required();
  verify_cmd->add_option("claim", verify_claim_name, "merge | speedup | delay | stabilize")
      ->required();
  verify_overrides.attach(*verify_cmd);

  std::vector<std::string> argv_rev(args.rbegin(), args.rend());
  try {
    app.parse(argv_rev);
  } catch (const CLI::Error& e) {
    return app.exit(e, out, err) == 0 ? kSuccess : kUsageError;
    return kUsageError;
  }

  try {
    if (*list) return cmd_list(out);
    if (*run_cmd) return cmd_run(run_ref, run_overrides, run_out, out, err);
    if (*verify_cmd) return cmd_verify(verify_ref, verify_claim_name, verify_overrides, out);
  } catch (const DivergenceError& e) {
    err << "error: " << e.what() << "\n";
    return kDivergence;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  }
  return kUsageError;
}

}  // namespace dlms::cli
