// Command-line front end: simulate heralded SPDC homodyne datasets,
// reconstruct states from quadrature CSVs, sweep cavity designs, and report
// herald rates. All outputs are plot-ready CSV/JSON artifacts.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "spdcsim/config.hpp"
#include "spdcsim/errors.hpp"
#include "spdcsim/io.hpp"
#include "spdcsim/pipeline.hpp"

namespace {

constexpr int kExitConfigError = 2;
constexpr int kExitNumericError = 3;

struct GlobalOptions {
  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::int64_t> seed;
  bool quiet = false;
};

spdcsim::SimulationConfig load_config(const GlobalOptions& options) {
  if (options.config_path.empty()) {
    throw spdcsim::ConfigError("--config", "required for this subcommand");
  }
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(spdcsim::read_file(options.config_path));
  } catch (const nlohmann::json::parse_error& e) {
    throw spdcsim::ConfigError(options.config_path, e.what());
  }
  spdcsim::SimulationConfig config = spdcsim::parse_config(j);
  if (options.seed) {
    config.sampling.seed = static_cast<std::uint64_t>(*options.seed);
  }
  return config;
}

std::filesystem::path out_path(const GlobalOptions& options,
                               const std::string& name) {
  std::filesystem::create_directories(options.out_dir);
  return std::filesystem::path(options.out_dir) / name;
}

void note(const GlobalOptions& options, const std::string& message) {
  if (!options.quiet) std::cout << message << "\n";
}

int cmd_simulate(const GlobalOptions& options) {
  const spdcsim::SimulationConfig config = load_config(options);
  const spdcsim::SimulateArtifacts artifacts = spdcsim::run_simulate(config);
  if (!artifacts.warning.empty() && !options.quiet) {
    std::cerr << "warning: " << artifacts.warning << "\n";
  }

  spdcsim::write_file_atomic(
      out_path(options, "truth_state.json"),
      spdcsim::density_matrix_to_json(artifacts.truth).dump(2) + "\n");
  spdcsim::write_file_atomic(out_path(options, "dataset.csv"),
                             spdcsim::dataset_to_csv(artifacts.dataset));
  spdcsim::write_file_atomic(
      out_path(options, "dataset_meta.json"),
      spdcsim::dataset_meta_to_json(artifacts.dataset.meta).dump(2) + "\n");
  spdcsim::write_file_atomic(out_path(options, "herald_report.json"),
                             artifacts.rate_report.dump(2) + "\n");

  note(options, "simulate: wrote truth_state.json, dataset.csv, "
                "dataset_meta.json, herald_report.json to " +
                    options.out_dir);
  return 0;
}

int cmd_reconstruct(const GlobalOptions& options, const std::string& data_path,
                    const spdcsim::TomoConfig& cfg) {
  spdcsim::QuadratureDataset data =
      spdcsim::dataset_from_csv(spdcsim::read_file(data_path));
  const spdcsim::ReconstructArtifacts artifacts =
      spdcsim::run_reconstruct(data, cfg);

  spdcsim::write_file_atomic(
      out_path(options, "rho.json"),
      spdcsim::density_matrix_to_json(artifacts.rho_hat).dump(2) + "\n");
  spdcsim::write_file_atomic(
      out_path(options, "diagnostics.json"),
      spdcsim::diagnostics_to_json(artifacts.info).dump(2) + "\n");
  spdcsim::write_file_atomic(out_path(options, "wigner.csv"),
                             spdcsim::wigner_to_csv(artifacts.wigner));
  spdcsim::write_file_atomic(
      out_path(options, "negativity.json"),
      spdcsim::negativity_to_json(artifacts.negativity).dump(2) + "\n");

  note(options,
       "reconstruct: " + std::to_string(artifacts.info.iterations) +
           " iterations, loglik " + std::to_string(artifacts.info.loglik) +
           (artifacts.info.converged ? " (converged)" : " (iteration cap)"));
  note(options, "negativity: min " +
                    spdcsim::format_sig9(artifacts.negativity.min_value) +
                    " at r=" +
                    spdcsim::format_sig9(artifacts.negativity.min_radius));
  return 0;
}

int cmd_cavity_design(const GlobalOptions& options,
                      const std::vector<double>& r_in_list, double rm_min,
                      double rm_max, double rm_step, double baseline_r1,
                      double baseline_r2) {
  if (rm_step <= 0.0 || rm_max < rm_min) {
    throw spdcsim::ConfigError("--rm", "empty sweep range");
  }
  std::vector<double> r_loop_range;
  for (double r = rm_min; r <= rm_max + 1e-12; r += rm_step) {
    r_loop_range.push_back(r);
  }
  const std::vector<spdcsim::RatePoint> rows = spdcsim::rate_curves(
      r_in_list, r_loop_range, baseline_r1, baseline_r2);
  spdcsim::write_file_atomic(out_path(options, "cavity_design.csv"),
                             spdcsim::rate_table_to_csv(rows));

  // Flag the rows closest to the measured and the impedance-matched designs.
  auto nearest = [&rows](double r_m, double r_i) {
    std::size_t best = 0;
    double best_dist = 1e300;
    for (std::size_t k = 0; k < rows.size(); ++k) {
      const double dist = std::abs(rows[k].r_m - r_m) + std::abs(rows[k].r_i - r_i);
      if (dist < best_dist) {
        best_dist = dist;
        best = k;
      }
    }
    return best;
  };
  auto row_json = [&rows](std::size_t k) {
    return nlohmann::json{{"row", k},
                          {"r_m", rows[k].r_m},
                          {"r_i", rows[k].r_i},
                          {"enhancement", rows[k].enhancement},
                          {"rate1_gain", rows[k].rate1_gain},
                          {"rate2_gain", rows[k].rate2_gain}};
  };
  const nlohmann::json markers = {
      {"measured", row_json(nearest(0.93, 0.90))},
      {"impedance_matched", row_json(nearest(0.99, 0.99))}};
  spdcsim::write_file_atomic(out_path(options, "cavity_markers.json"),
                             markers.dump(2) + "\n");

  note(options, "cavity-design: " + std::to_string(rows.size()) +
                    " rows; markers in cavity_markers.json");
  return 0;
}

int cmd_rates(const GlobalOptions& options) {
  const spdcsim::SimulationConfig config = load_config(options);
  const nlohmann::json report = spdcsim::run_rates(config);
  spdcsim::write_file_atomic(out_path(options, "rates.json"),
                             report.dump(2) + "\n");
  note(options, report.dump(2));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cavity-enhanced pulsed SPDC simulator and homodyne tomography"};
  app.require_subcommand(1);

  GlobalOptions options;
  app.add_option("--config", options.config_path, "JSON simulation config");
  app.add_option("--out", options.out_dir, "output directory");
  app.add_option("--seed", options.seed, "override sampling seed");
  app.add_flag("--quiet", options.quiet, "suppress progress output");

  auto* simulate = app.add_subcommand(
      "simulate", "generate heralded state, rates, and quadrature dataset");
  simulate->fallthrough();

  auto* reconstruct = app.add_subcommand(
      "reconstruct", "maximum-likelihood state reconstruction from a dataset");
  reconstruct->fallthrough();
  std::string data_path;
  spdcsim::TomoConfig tomo_cfg;
  std::string mode = "full";
  reconstruct->add_option("--data", data_path, "quadrature CSV (theta,x)")
      ->required();
  reconstruct->add_option("--eta-d", tomo_cfg.eta_d,
                          "detection efficiency correction");
  reconstruct->add_option("--dim", tomo_cfg.dim, "Fock cutoff");
  reconstruct->add_option("--tol", tomo_cfg.tol, "convergence tolerance");
  reconstruct->add_option("--max-iter", tomo_cfg.max_iter, "iteration cap");
  reconstruct->add_option("--bins", tomo_cfg.histogram_bins,
                          "histogram bins (0 = unbinned)");
  reconstruct->add_option("--mode", mode, "full | diagonal");

  auto* cavity_design = app.add_subcommand(
      "cavity-design", "enhancement and rate table over reflectivity sweeps");
  cavity_design->fallthrough();
  std::vector<double> r_in_list{0.90, 0.99};
  double rm_min = 0.80;
  double rm_max = 0.999;
  double rm_step = 1e-3;
  double baseline_r1 = 1.0;
  double baseline_r2 = 1.0;
  cavity_design->add_option("--ri", r_in_list, "input-coupler reflectivities");
  cavity_design->add_option("--rm-min", rm_min, "sweep start");
  cavity_design->add_option("--rm-max", rm_max, "sweep end");
  cavity_design->add_option("--rm-step", rm_step, "sweep step");
  cavity_design->add_option("--baseline-r1", baseline_r1,
                            "single-pass single-photon rate (Hz)");
  cavity_design->add_option("--baseline-r2", baseline_r2,
                            "single-pass two-photon rate (Hz)");

  auto* rates =
      app.add_subcommand("rates", "herald rate predictions and rate-law check");
  rates->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitConfigError;
  }

  try {
    if (simulate->parsed()) return cmd_simulate(options);
    if (reconstruct->parsed()) {
      tomo_cfg.mode = spdcsim::tomo_mode_from_string(mode);
      return cmd_reconstruct(options, data_path, tomo_cfg);
    }
    if (cavity_design->parsed()) {
      return cmd_cavity_design(options, r_in_list, rm_min, rm_max, rm_step,
                               baseline_r1, baseline_r2);
    }
    if (rates->parsed()) return cmd_rates(options);
  } catch (const spdcsim::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const spdcsim::DomainError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const spdcsim::HeraldError& e) {
    std::cerr << "herald error: " << e.what() << "\n";
    return kExitNumericError;
  } catch (const spdcsim::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumericError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumericError;
  }
  return kExitConfigError;
}
