// rabi: command-line front end for the predictors, fits and figure runs.
//
// Exit codes: 0 success, 1 I/O failure, 2 configuration or usage error,
// 3 numerical failure (including a failed oracle check).

#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rabi/config.hpp"
#include "rabi/experiments.hpp"
#include "rabi/fitting.hpp"
#include "rabi/output.hpp"

namespace {

constexpr int kExitIo = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct CommonArgs {
  std::string config_path;
  std::string experiment;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> formats;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "JSON experiment config");
  cmd->add_option("--experiment", args.experiment,
                  "experiment name when running defaults without a config file");
  cmd->add_option("--out", args.out_dir, "output directory");
  cmd->add_option("--seed", args.seed, "random seed (u64)");
  cmd->add_option("--format", args.formats, "csv|json|svg, repeatable")->take_all();
}

rabi::ExperimentConfig resolve_config(const CommonArgs& args,
                                      std::optional<rabi::ExperimentKind> forced = {}) {
  rabi::ExperimentConfig cfg;
  if (!args.config_path.empty()) {
    cfg = rabi::load_config(args.config_path);
  } else {
    rabi::ExperimentKind kind = forced.value_or(rabi::ExperimentKind::Fig2Distinguishable);
    if (!args.experiment.empty()) {
      bool found = false;
      for (auto k : {rabi::ExperimentKind::Fig2Distinguishable,
                     rabi::ExperimentKind::Fig3Indistinguishable,
                     rabi::ExperimentKind::Fig5GammaRatio, rabi::ExperimentKind::MasterEqBaseline,
                     rabi::ExperimentKind::OracleCrossCheck}) {
        if (rabi::to_string(k) == args.experiment) {
          kind = k;
          found = true;
        }
      }
      if (!found) {
        throw rabi::ConfigError({{"--experiment", 0, "unknown experiment '" + args.experiment + "'"}});
      }
    } else if (!forced) {
      throw rabi::ConfigError({{"--config", 0, "either --config or --experiment is required"}});
    }
    cfg = rabi::default_config(kind);
  }
  if (!args.out_dir.empty()) cfg.output.dir = args.out_dir;
  if (args.seed) cfg.seed = *args.seed;
  if (!args.formats.empty()) {
    cfg.output.formats.clear();
    for (const auto& f : args.formats) {
      auto parsed = rabi::output_format_from_string(f);
      if (!parsed) throw rabi::ConfigError({{"--format", 0, "unknown format '" + f + "'"}});
      cfg.output.formats.push_back(*parsed);
    }
  }
  rabi::validate_config(cfg);
  return cfg;
}

void print_targets(const rabi::ExperimentResult& result) {
  std::visit(
      [](const auto& r) {
        for (const auto& t : r.targets) {
          std::cout << (t.pass() ? "PASS " : "FAIL ") << t.name << ": " << t.value
                    << " (target " << t.target << " +/- " << t.tolerance << ")\n";
        }
      },
      result);
}

int run_simulate(const CommonArgs& args) {
  auto cfg = resolve_config(args);
  const auto series = rabi::simulate_series(cfg);
  const std::filesystem::path base = std::filesystem::path(cfg.output.dir) / cfg.file_prefix();
  for (auto f : cfg.output.formats) {
    auto path = base;
    path += ".series." + std::string(rabi::to_string(f));
    switch (f) {
      case rabi::OutputFormat::Csv:
        rabi::write_text_file(path, rabi::to_csv(rabi::csv_table(series)));
        break;
      case rabi::OutputFormat::Json: {
        nlohmann::json j{{"parameters", rabi::config_json(cfg)},
                         {"source", series.source},
                         {"n_points", series.size()},
                         {"series_params", series.params}};
        rabi::write_text_file(path, j.dump(2) + "\n");
        break;
      }
      case rabi::OutputFormat::Svg:
        throw rabi::ConfigError({{"--format", 0, "simulate writes csv or json only"}});
    }
    std::cout << path.string() << "\n";
  }
  return 0;
}

int run_fit(const std::string& input, double omega_hint, const std::vector<std::string>& free,
            const std::string& out_dir) {
  rabi::FitOptions opts;
  if (!free.empty()) {
    opts.free_params.clear();
    for (const auto& name : free) {
      try {
        opts.free_params.insert(rabi::fit_param_from_string(name));
      } catch (const std::invalid_argument& e) {
        throw rabi::ConfigError({{"--free", 0, e.what()}});
      }
    }
  }
  if (!(omega_hint > 0.0)) throw rabi::ConfigError({{"--omega-hint", 0, "must be positive"}});
  const auto series = rabi::read_series_csv(input);
  rabi::DampedSinusoidFit fit;
  try {
    fit = rabi::fit_damped_sinusoid(series, omega_hint, opts);
  } catch (const std::invalid_argument& e) {
    throw rabi::ConfigError({{"--input", 0, e.what()}});
  }
  const auto j = rabi::fit_json(fit).dump(2) + "\n";
  if (!out_dir.empty()) {
    rabi::write_text_file(std::filesystem::path(out_dir) / "fit.json", j);
  }
  std::cout << j;
  return 0;
}

int run_experiment_cmd(const CommonArgs& args) {
  const auto cfg = resolve_config(args);
  const auto result = rabi::run_experiment(cfg);
  for (const auto& p : rabi::emit_outputs(result, cfg)) std::cout << p.string() << "\n";
  print_targets(result);
  return 0;
}

int run_oracle_cmd(const CommonArgs& args) {
  auto cfg = resolve_config(args, rabi::ExperimentKind::OracleCrossCheck);
  cfg.experiment = rabi::ExperimentKind::OracleCrossCheck;
  const rabi::ExperimentResult result = rabi::run_oracle_check(cfg);
  for (const auto& p : rabi::emit_outputs(result, cfg)) std::cout << p.string() << "\n";
  print_targets(result);
  return rabi::all_targets_pass(result) ? 0 : kExitNumerical;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decoherence predictors for two-level Rabi oscillations"};
  app.require_subcommand(1);

  CommonArgs sim_args, exp_args, oracle_args;
  auto* simulate = app.add_subcommand("simulate", "sample a predictor series (no fit)");
  add_common(simulate, sim_args);
  auto* experiment = app.add_subcommand("experiment", "run a figure pipeline and write outputs");
  add_common(experiment, exp_args);
  auto* oracle = app.add_subcommand("oracle-check", "Monte Carlo cross-check of the predictors");
  add_common(oracle, oracle_args);

  auto* fit = app.add_subcommand("fit", "fit the damped sinusoid to a (t, p) CSV");
  std::string fit_input, fit_out;
  double omega_hint = 1.0;
  std::vector<std::string> fit_free;
  fit->add_option("--input", fit_input, "CSV with header; first two columns t, p")->required();
  fit->add_option("--omega-hint", omega_hint, "initial oscillation frequency");
  fit->add_option("--free", fit_free, "free parameters (gamma omega amplitude offset phase)")
      ->delimiter(',');
  fit->add_option("--out", fit_out, "directory for fit.json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*simulate) return run_simulate(sim_args);
    if (*experiment) return run_experiment_cmd(exp_args);
    if (*oracle) return run_oracle_cmd(oracle_args);
    if (*fit) return run_fit(fit_input, omega_hint, fit_free, fit_out);
  } catch (const rabi::ConfigError& e) {
    std::cerr << e.what() << "\n";
    return kExitConfig;
  } catch (const rabi::IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitConfig;
}
