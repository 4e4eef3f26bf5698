// Command-line front end for extremal correlation estimation on curve samples.

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "ecc/ecc.hpp"
#include "ecc/report_json.hpp"

namespace {

constexpr int exit_internal = 1;
constexpr int exit_parse = 2;
constexpr int exit_domain = 3;

int exit_code_for(ecc::error_kind kind) {
  switch (kind) {
  case ecc::error_kind::parse:
  case ecc::error_kind::empty_input:
  case ecc::error_kind::grid_mismatch:
  case ecc::error_kind::shape:
    return exit_parse;
  case ecc::error_kind::range:
  case ecc::error_kind::domain:
  case ecc::error_kind::degenerate_tail:
  case ecc::error_kind::degenerate_sample:
    return exit_domain;
  }
  return exit_internal;
}

void emit(const std::optional<std::string> &path, const std::string &text) {
  if (path) {
    ecc::write_text_file(*path, text);
  } else {
    std::cout << text;
  }
}

unsigned resolve_threads(std::optional<unsigned> flag, unsigned configured) {
  if (flag) {
    return *flag;
  }
  if (configured != 0) {
    return configured;
  }
  if (const char *env = std::getenv("ECC_THREADS")) {
    try {
      return static_cast<unsigned>(std::stoul(env));
    } catch (const std::exception &) {
      throw ecc::error(ecc::error_kind::parse, "ECC_THREADS",
                       std::string("not an integer: ") + env);
    }
  }
  return 0;
}

// Flags shared by estimate and pairwise.
struct EstimateFlags {
  std::optional<std::size_t> k;
  std::string kselect = "mindist";
  double alpha_target = 3.0;
  double tau = 0.5;
  bool no_center = false;
  std::size_t hill_kmax = 0;

  void attach(CLI::App &cmd) {
    auto *k_opt = cmd.add_option("--k", k, "Fixed number of exceedances");
    cmd.add_option("--kselect", kselect, "Data-driven k selection")
        ->check(CLI::IsMember({"mindist", "ks"}))
        ->excludes(k_opt);
    cmd.add_option("--alpha-target", alpha_target, "Common tail index after transformation");
    cmd.add_option("--tau", tau, "Tail-index gap that triggers the transformation");
    cmd.add_flag("--no-center", no_center, "Skip centering by the sample mean curve");
    cmd.add_option("--hill-kmax", hill_kmax, "Largest k of the attached Hill plots");
  }

  ecc::PipelineOptions options() const {
    ecc::PipelineOptions o;
    o.k_selection = k ? ecc::KSelection::fixed(*k) : ecc::parse_k_selection(kselect);
    o.alpha_target = alpha_target;
    o.tau = tau;
    o.center = !no_center;
    o.hill_k_max = hill_kmax;
    return o;
  }
};

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Extremal correlation of paired curve samples"};
  app.require_subcommand(1);
  std::string failing_command = "ecc";

  // estimate ---------------------------------------------------------------
  auto *estimate = app.add_subcommand("estimate", "Run the full estimation pipeline on one pair");
  std::string est_x, est_y;
  EstimateFlags est_flags;
  estimate->add_option("--x", est_x, "Curve file for the first margin")->required();
  estimate->add_option("--y", est_y, "Curve file for the second margin")->required();
  est_flags.attach(*estimate);

  // pairwise ---------------------------------------------------------------
  auto *pairwise = app.add_subcommand("pairwise", "Pairwise extremal correlation matrix");
  std::vector<std::string> pw_inputs;
  EstimateFlags pw_flags;
  std::optional<std::string> pw_json;
  std::optional<unsigned> pw_threads;
  pairwise->add_option("--inputs", pw_inputs, "Curve files, one per sample")->required();
  pw_flags.attach(*pairwise);
  pairwise->add_option("--json", pw_json, "Write JSON metadata to this path");
  pairwise->add_option("--threads", pw_threads, "Worker threads (0 = all cores)");

  // hill -------------------------------------------------------------------
  auto *hill_cmd = app.add_subcommand("hill", "Hill plot series of curve norms");
  std::string hill_input;
  std::optional<std::size_t> hill_kmax;
  bool hill_no_center = false;
  hill_cmd->add_option("--input", hill_input, "Curve file")->required();
  hill_cmd->add_option("--kmax", hill_kmax, "Largest k (default n/2)");
  hill_cmd->add_flag("--no-center", hill_no_center, "Skip centering");

  // chi --------------------------------------------------------------------
  auto *chi_cmd = app.add_subcommand("chi", "chi(q) and chibar(q) of the curve norms");
  std::string chi_x, chi_y, chi_qgrid = "0.5:0.98:0.01";
  bool chi_no_center = false;
  chi_cmd->add_option("--x", chi_x, "Curve file for the first margin")->required();
  chi_cmd->add_option("--y", chi_y, "Curve file for the second margin")->required();
  chi_cmd->add_option("--qgrid", chi_qgrid, "start:stop:step");
  chi_cmd->add_flag("--no-center", chi_no_center, "Skip centering");

  // simulate ---------------------------------------------------------------
  auto *simulate = app.add_subcommand("simulate", "Simulate a paired curve sample");
  double sim_rho_xy = 0.0, sim_alpha = 3.0, sim_noise = 0.25;
  std::size_t sim_n = 0, sim_grid = 100;
  std::uint64_t sim_seed = 0;
  std::string sim_variant = "base", sim_out;
  simulate->add_option("--rho-xy", sim_rho_xy, "Target extremal correlation");
  simulate->add_option("--alpha", sim_alpha, "Tail index (> 2)");
  simulate->add_option("--n", sim_n, "Number of pairs")->required();
  simulate->add_option("--J", sim_grid, "Grid size");
  simulate->add_option("--seed", sim_seed, "Random seed")->required();
  simulate->add_option("--variant", sim_variant,
                       "base | bernoulli:pA,pB | phase:delta | shared | nine:c");
  simulate->add_option("--noise-variance", sim_noise, "Variance of the Gaussian components");
  simulate->add_option("--out", sim_out, "Output prefix (writes <prefix>_x.csv, <prefix>_y.csv)")
      ->required();

  // experiment -------------------------------------------------------------
  auto *experiment = app.add_subcommand("experiment", "Monte Carlo bias table");
  std::string exp_config;
  std::optional<unsigned> exp_threads;
  std::optional<std::string> exp_json, exp_csv;
  experiment->add_option("--config", exp_config, "Experiment configuration file")->required();
  experiment->add_option("--threads", exp_threads, "Worker threads (0 = all cores)");
  experiment->add_option("--json", exp_json, "Write the full table as JSON to this path");
  experiment->add_option("--csv", exp_csv, "Write the CSV table here instead of stdout");

  // transform --------------------------------------------------------------
  auto *transform = app.add_subcommand("transform", "Tail-equivalence power transformation");
  std::string tr_input;
  double tr_source = 0.0, tr_target = 0.0;
  std::optional<std::string> tr_out;
  transform->add_option("--input", tr_input, "Curve file")->required();
  transform->add_option("--alpha-source", tr_source, "Current tail index")->required();
  transform->add_option("--alpha-target", tr_target, "Desired tail index")->required();
  transform->add_option("--out", tr_out, "Output curve file (default stdout)");

  // resample ---------------------------------------------------------------
  auto *resample = app.add_subcommand("resample", "Linear resampling onto a regular grid");
  std::string rs_input;
  std::size_t rs_grid = 0;
  std::optional<std::string> rs_out;
  resample->add_option("--input", rs_input, "Curve file")->required();
  resample->add_option("--J", rs_grid, "Target grid size")->required();
  resample->add_option("--out", rs_out, "Output curve file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    const ecc::error wrapped(ecc::error_kind::parse, "command_line", e.what());
    std::cerr << ecc::error_json(wrapped).dump() << '\n';
    return exit_parse;
  }

  try {
    if (estimate->parsed()) {
      failing_command = "estimate";
      const ecc::PairedSample pairs(ecc::parse_curve_file(est_x), ecc::parse_curve_file(est_y));
      const auto report = ecc::estimate_pipeline(pairs, est_flags.options());
      std::cout << ecc::to_json(report).dump(2) << '\n';
    } else if (pairwise->parsed()) {
      failing_command = "pairwise";
      std::vector<ecc::FunctionalSample> samples;
      std::vector<std::string> labels;
      for (const auto &path : pw_inputs) {
        samples.push_back(ecc::parse_curve_file(path));
        labels.push_back(std::filesystem::path(path).stem().string());
      }
      auto options = pw_flags.options();
      options.threads = resolve_threads(pw_threads, 0);
      const auto matrix = ecc::pairwise_matrix(samples, options);
      std::cout << ecc::format_pairwise_csv(matrix, labels);
      if (pw_json) {
        ecc::write_text_file(*pw_json, ecc::to_json(matrix, labels, options).dump(2) + "\n");
      }
    } else if (hill_cmd->parsed()) {
      failing_command = "hill";
      auto sample = ecc::parse_curve_file(hill_input);
      if (!hill_no_center) {
        sample = ecc::center(sample);
      }
      const auto values = ecc::norms(sample);
      const std::size_t n = values.size();
      const std::size_t kmax =
          hill_kmax ? *hill_kmax : std::min(n > 0 ? n - 1 : 0, std::max<std::size_t>(2, n / 2));
      std::cout << ecc::format_hill_csv(ecc::hill_series(values, kmax));
    } else if (chi_cmd->parsed()) {
      failing_command = "chi";
      auto x = ecc::parse_curve_file(chi_x);
      auto y = ecc::parse_curve_file(chi_y);
      const ecc::PairedSample pairs(x, y);
      if (!chi_no_center) {
        x = ecc::center(x);
        y = ecc::center(y);
      }
      const auto parts = ecc::split(chi_qgrid, ':');
      if (parts.size() != 3) {
        throw ecc::error(ecc::error_kind::parse, "chi", "--qgrid expects start:stop:step");
      }
      const auto grid = ecc::parse_real_list("qgrid", chi_qgrid);
      std::cout << ecc::format_chi_csv(ecc::chi_curve(ecc::norms(x), ecc::norms(y), grid));
    } else if (simulate->parsed()) {
      failing_command = "simulate";
      nlohmann::json summary = {{"schema_version", ecc::json_schema_version},
                                {"seed", sim_seed},
                                {"n", sim_n},
                                {"J", sim_grid},
                                {"alpha", sim_alpha},
                                {"variant", sim_variant}};
      if (sim_variant.starts_with("nine:")) {
        const auto heavy = ecc::detail::config_unsigned("variant", sim_variant.substr(5));
        const auto x =
            ecc::generate_nine_component(heavy, sim_alpha, sim_n, sim_grid, sim_seed, sim_noise);
        ecc::write_curve_file(sim_out + "_x.csv", x);
        summary["files"] = {sim_out + "_x.csv"};
      } else {
        ecc::DgpConfig cfg;
        cfg.alpha = sim_alpha;
        cfg.n = sim_n;
        cfg.grid_size = sim_grid;
        cfg.seed = sim_seed;
        cfg.noise_variance = sim_noise;
        cfg.variant = ecc::parse_variant(sim_variant);
        const bool from_target = std::holds_alternative<ecc::BaseDgp>(cfg.variant) ||
                                 std::holds_alternative<ecc::PhaseShiftDgp>(cfg.variant);
        if (from_target) {
          cfg.rho = ecc::invert_oracle(sim_rho_xy, sim_alpha);
        }
        const auto pairs = ecc::generate_paired(cfg);
        ecc::write_curve_file(sim_out + "_x.csv", pairs.x());
        ecc::write_curve_file(sim_out + "_y.csv", pairs.y());
        summary["rho"] = cfg.rho;
        summary["rho_xy"] = ecc::oracle_for(cfg);
        summary["files"] = {sim_out + "_x.csv", sim_out + "_y.csv"};
      }
      std::cout << summary.dump(2) << '\n';
    } else if (experiment->parsed()) {
      failing_command = "experiment";
      auto cfg = ecc::parse_experiment_config(ecc::read_text_file(exp_config, "parse_config"));
      cfg.threads = resolve_threads(exp_threads, cfg.threads);
      const auto table = ecc::bias_experiment(cfg);
      emit(exp_csv, ecc::format_experiment_csv(table));
      if (exp_json) {
        ecc::write_text_file(*exp_json, ecc::to_json(table).dump(2) + "\n");
      }
    } else if (transform->parsed()) {
      failing_command = "transform";
      const auto sample = ecc::parse_curve_file(tr_input);
      emit(tr_out, ecc::format_curves(ecc::power_transform(sample, tr_source, tr_target)));
    } else if (resample->parsed()) {
      failing_command = "resample";
      const auto sample = ecc::parse_curve_file(rs_input);
      emit(rs_out, ecc::format_curves(ecc::resample_linear(sample, rs_grid)));
    }
  } catch (const ecc::error &e) {
    std::cerr << ecc::error_json(e).dump() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception &e) {
    const nlohmann::json j = {{"schema_version", ecc::json_schema_version},
                              {"error",
                               {{"code", "internal"},
                                {"operation", failing_command},
                                {"message", e.what()}}}};
    std::cerr << j.dump() << '\n';
    return exit_internal;
  }
  return 0;
}
