// telegraphnet: simulation, weighted-inequality diagnostics and coefficient
// reconstruction on tree-shaped transmission-line networks.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <random>

#include "telegraphnet/energy.hpp"
#include "telegraphnet/estimate.hpp"
#include "telegraphnet/io.hpp"
#include "telegraphnet/least_squares.hpp"
#include "telegraphnet/manufactured.hpp"
#include "telegraphnet/stability.hpp"
#include "telegraphnet/svg.hpp"

namespace {

using nlohmann::json;
using namespace tgn;

struct Cli {
  std::string config_path;
  std::string out_dir = ".";
  bool plot = false;
  int threads = 1;
};

struct Loaded {
  json config;
  NetworkTopology topology;
  CoefficientProfiles coefficients;
  GridSpec grid;
};

Loaded load_common(const Cli& cli) {
  Loaded l;
  l.config = io::load_json_file(cli.config_path);
  const json& net = l.config.at("network");
  if (net.is_string()) {
    // Paths are taken relative to the config file.
    const auto dir = std::filesystem::path(cli.config_path).parent_path();
    l.topology = io::network_from_json(io::load_json_file((dir / net.get<std::string>()).string()));
  } else {
    l.topology = io::network_from_json(net);
  }
  l.coefficients = io::coefficients_from_json(l.topology, l.config.at("coefficients"));
  if (l.config.contains("grid")) l.grid = io::grid_from_json(l.config.at("grid"));
  return l;
}

std::string out_path(const Cli& cli, const std::string& name) {
  std::filesystem::create_directories(cli.out_dir);
  return (std::filesystem::path(cli.out_dir) / name).string();
}

void report_warnings(const FieldTrajectory& traj) {
  for (const std::string& w : traj.warnings) std::cout << "warning: " << w << "\n";
}

ExperimentPair experiments_from_config(const Loaded& l) {
  const json& doc = l.config.at("experiments");
  return {io::problem_from_json(l.topology, doc.at("first")),
          io::problem_from_json(l.topology, doc.at("second"))};
}

int run_simulate(const Cli& cli) {
  Loaded l = load_common(cli);
  const ProblemData data = io::problem_from_json(l.topology, l.config.at("data"));
  const auto grids = make_edge_grids(l.topology, l.grid);
  const CoefficientField p = sample_coefficients(l.topology, grids, l.coefficients);
  const TimeGrid time = make_time_grid(l.grid, grids, p);
  const std::string dir_name = l.config.value("direction", "both");
  const SolveDirection dir = dir_name == "forward"  ? SolveDirection::Forward
                             : dir_name == "backward" ? SolveDirection::Backward
                                                      : SolveDirection::Both;

  const FieldTrajectory traj = solve(l.topology, p, data, grids, time, dir);
  report_warnings(traj);

  const KirchhoffResiduals kr = kirchhoff_residuals(l.topology, traj);
  std::cout << "vertex residuals: current imbalance " << kr.max_current_imbalance
            << ", voltage jump " << kr.max_voltage_jump << "\n";

  const int stride = l.config.value("output_time_stride", 1);
  io::write_trajectory_csv(out_path(cli, "trajectory.csv"), l.topology, traj, stride);
  const Eigen::MatrixX2d hist = energy_history(traj, p);
  io::write_energy_csv(out_path(cli, "energy.csv"), hist);
  std::cout << "wrote trajectory.csv, energy.csv\n";

  if (cli.plot) {
    svg::write_plot(out_path(cli, "energy.svg"), "Energy",
                    {{"E(t)", hist.col(0).array(), hist.col(1).array()}});
    std::cout << "wrote energy.svg\n";
  }
  return 0;
}

int run_energy_check(const Cli& cli) {
  Loaded l = load_common(cli);
  const ProblemData data = io::problem_from_json(l.topology, l.config.at("data"));
  const auto grids = make_edge_grids(l.topology, l.grid);
  const CoefficientField p = sample_coefficients(l.topology, grids, l.coefficients);
  const TimeGrid time = make_time_grid(l.grid, grids, p);

  const FieldTrajectory traj = solve(l.topology, p, data, grids, time, SolveDirection::Both);
  report_warnings(traj);

  const Eigen::MatrixX2d hist = energy_history(traj, p);
  io::write_energy_csv(out_path(cli, "energy.csv"), hist);

  const EnergyBoundReport bound = energy_bound_report(traj, p);
  std::vector<std::vector<double>> rows;
  for (Eigen::Index i = 0; i < bound.times.size(); ++i) {
    rows.push_back({bound.times[i], bound.per_time[i]});
  }
  io::write_series_csv(out_path(cli, "derivative_bound.csv"), {"t", "sum_sq_derivatives"}, rows);

  const double e0 = energy(traj, p, 0.0);
  std::cout << "energy at t=0: " << e0 << "\n"
            << "max energy over [-T, T]: " << hist.col(1).maxCoeff() << "\n"
            << "derivative bound (orders 0..3): " << bound.bound << " at t = " << bound.argmax_t
            << "\n"
            << "wrote energy.csv, derivative_bound.csv\n";
  if (cli.plot) {
    svg::write_plot(out_path(cli, "energy.svg"), "Energy",
                    {{"E(t)", hist.col(0).array(), hist.col(1).array()},
                     {"derivative bound", bound.times, bound.per_time}},
                    true);
    std::cout << "wrote energy.svg\n";
  }
  return 0;
}

int run_carleman_check(const Cli& cli) {
  Loaded l = load_common(cli);
  const json wcfg = l.config.value("weights", json::object());
  const double T = l.grid.T;
  const WeightFamily weights =
      build_weights(l.topology, wcfg.value("root_alpha", 1.0), wcfg.value("root_xstar", -1.0),
                    wcfg.value("beta", 1.0), T);

  const WeightCompatibility compat = check_weight_compatibility(l.topology, weights);
  std::cout << "weight compatibility: value mismatch " << compat.max_value_mismatch
            << ", slope mismatch " << compat.max_slope_mismatch << "\n";
  const WeightGap gap = check_weight_gap(l.topology, weights);
  std::cout << "weight gap: min phi(., 0) = " << gap.d1 << ", max phi(., +-T) = "
            << gap.boundary_max << (gap.ok ? " (separated)" : " (NOT separated)") << "\n";

  const auto grids = make_edge_grids(l.topology, l.grid);
  const CoefficientField p = sample_coefficients(l.topology, grids, l.coefficients);
  const TimeGrid time = make_time_grid(l.grid, grids, p);

  const Assumption1Result a1 = check_assumption1(l.topology, weights, p, grids, time);
  std::cout << "sign-definiteness: " << (a1.pass ? "holds" : "FAILS") << ", min |D| = "
            << a1.min_abs << " at edge " << a1.edge_id << ", x = " << a1.x << ", t = " << a1.t
            << "\n";

  const AnalyticField field = manufacture_homogeneous_field(l.topology, T);
  const AnalyticSource source = analytic_operator(field, l.coefficients);
  const FieldTrajectory sampled = sample_field(field, grids, time);
  const SampledSource f = sample_source(source, grids, time);

  std::vector<double> s_values;
  if (wcfg.contains("s")) {
    s_values = wcfg.at("s").get<std::vector<double>>();
  } else {
    s_values = default_s_grid(l.topology, weights);
  }
  const CarlemanReport report =
      evaluate_estimate(l.topology, weights, p, sampled, f.f1, f.f2, s_values);
  for (const std::string& w : report.warnings) std::cout << "warning: " << w << "\n";
  for (const CarlemanRow& row : report.rows) {
    std::cout << "s = " << row.s << ": ratio = " << row.ratio << "\n";
  }
  std::cout << "empirical constant (max ratio): " << report.c_hat << "\n";
  io::write_carleman_csv(out_path(cli, "carleman.csv"), report);
  std::cout << "wrote carleman.csv\n";

  if (cli.plot) {
    Eigen::ArrayXd xs(static_cast<Eigen::Index>(report.rows.size()));
    Eigen::ArrayXd ys(xs.size());
    for (Eigen::Index i = 0; i < xs.size(); ++i) {
      xs[i] = report.rows[static_cast<std::size_t>(i)].s;
      ys[i] = report.rows[static_cast<std::size_t>(i)].ratio;
    }
    svg::write_plot(out_path(cli, "carleman.svg"), "Estimate ratio vs s", {{"ratio", xs, ys}});
    std::cout << "wrote carleman.svg\n";
  }
  return 0;
}

int run_reconstruct_direct(const Cli& cli) {
  Loaded l = load_common(cli);
  const ExperimentPair experiments = experiments_from_config(l);
  const CoefficientProfiles rho_profiles =
      io::coefficients_from_json(l.topology, l.config.at("perturbation"));
  const double eps = l.config.value("eps", 0.05);

  const auto grids = make_edge_grids(l.topology, l.grid);
  const CoefficientField p = sample_coefficients(l.topology, grids, l.coefficients);
  const TimeGrid time = make_time_grid(l.grid, grids, p);

  const Assumption2Result a2 = check_assumption2(l.topology, grids, experiments);
  std::cout << "determinant assumption: " << (a2.pass ? "holds" : "FAILS") << ", min |det| = "
            << a2.min_abs_det << " at edge " << a2.edge_id << ", x = " << a2.x << "\n";

  const CoefficientField q = perturb_coefficients(l.topology, grids, p, rho_profiles, eps);
  std::array<FieldTrajectory, 2> w;
  for (int m = 0; m < 2; ++m) {
    const FieldTrajectory u =
        solve(l.topology, p, experiments.get(m), grids, time, SolveDirection::Both);
    const FieldTrajectory v =
        solve(l.topology, q, experiments.get(m), grids, time, SolveDirection::Both);
    report_warnings(u);
    w[static_cast<std::size_t>(m)] = difference_field(u, v, p, q).w;
  }

  const TimeDerivativeData data = time_derivative_from_simulation(w[0], w[1]);
  const DirectReconstruction rec =
      direct_reconstruct_t0(l.topology, grids, data, experiments, q, p);
  const SampledPerturbation truth = sample_perturbation(grids, rho_profiles, eps);
  const double err = perturbation_relative_error(grids, rec.rho, truth);
  std::cout << "flagged near-singular nodes: " << rec.flagged_points << "\n"
            << "relative reconstruction error: " << err << "\n";

  std::vector<std::vector<double>> rows;
  for (std::size_t e = 0; e < grids.size(); ++e) {
    for (Eigen::Index i = 0; i < grids[e].x.size(); ++i) {
      rows.push_back({static_cast<double>(l.topology.edges[e].id), grids[e].x[i],
                      rec.rho[e][0][i], rec.rho[e][1][i], rec.rho[e][2][i], rec.rho[e][3][i],
                      truth[e][0][i], truth[e][1][i], truth[e][2][i], truth[e][3][i]});
    }
  }
  io::write_series_csv(out_path(cli, "reconstruction.csv"),
                       {"edge", "x", "rho1", "rho2", "rho3", "rho4", "true1", "true2", "true3",
                        "true4"},
                       rows);
  std::cout << "wrote reconstruction.csv\n";

  if (cli.plot) {
    std::vector<svg::Series> series;
    for (std::size_t e = 0; e < grids.size(); ++e) {
      series.push_back({"edge " + std::to_string(l.topology.edges[e].id) + " rho3", grids[e].x,
                        rec.rho[e][2]});
    }
    svg::write_plot(out_path(cli, "reconstruction.svg"), "Recovered rho3", series);
    std::cout << "wrote reconstruction.svg\n";
  }
  return 0;
}

int run_reconstruct_lsq(const Cli& cli) {
  Loaded l = load_common(cli);
  const ExperimentPair experiments = experiments_from_config(l);
  const json lsq = l.config.value("lsq", json::object());

  // True per-edge constants, {"<edge id>": [four values]}.
  Eigen::VectorXd rho_true = Eigen::VectorXd::Zero(4 * l.topology.edge_count);
  for (const auto& [key, value] : l.config.at("perturbation_true").items()) {
    const int e = l.topology.edge_index(std::stoi(key));
    const auto v = value.get<std::vector<double>>();
    if (v.size() != 4) throw ConfigError("perturbation_true entries need four values");
    for (int c = 0; c < 4; ++c) rho_true[4 * e + c] = v[static_cast<std::size_t>(c)];
  }

  std::array<MeasurementSet, 2> measured =
      synthesize_measurements(l.topology, l.coefficients, rho_true, experiments, l.grid);
  const double sigma = lsq.value("noise_sigma", 0.0);
  if (sigma > 0.0) {
    std::mt19937_64 rng(l.config.value("seed", 1234ULL));
    for (MeasurementSet& set : measured) add_trace_noise(set, sigma, rng);
    std::cout << "added trace noise, sigma = " << sigma << "\n";
  }

  LsqOptions options;
  options.lambda = lsq.value("lambda", options.lambda);
  options.max_iterations = lsq.value("max_iterations", options.max_iterations);
  options.fd_step = lsq.value("fd_step", options.fd_step);
  options.threads = cli.threads;

  const LsqResult result = least_squares_reconstruct(l.topology, l.coefficients, experiments,
                                                     measured, l.grid, options);
  std::cout << "iterations: " << result.iterations << ", "
            << (result.converged ? "converged" : "stopped") << " (" << result.message << ")\n"
            << "relative error: "
            << (result.rho - rho_true).norm() / std::max(rho_true.norm(), 1e-300) << "\n";

  std::vector<std::vector<double>> conv;
  for (std::size_t i = 0; i < result.misfit_history.size(); ++i) {
    conv.push_back({static_cast<double>(i), result.misfit_history[i]});
  }
  io::write_series_csv(out_path(cli, "convergence.csv"), {"iteration", "misfit"}, conv);

  std::vector<std::vector<double>> rows;
  for (int e = 0; e < l.topology.edge_count; ++e) {
    rows.push_back({static_cast<double>(l.topology.edges[static_cast<std::size_t>(e)].id),
                    result.rho[4 * e], result.rho[4 * e + 1], result.rho[4 * e + 2],
                    result.rho[4 * e + 3], rho_true[4 * e], rho_true[4 * e + 1],
                    rho_true[4 * e + 2], rho_true[4 * e + 3]});
  }
  io::write_series_csv(out_path(cli, "recovered.csv"),
                       {"edge", "rho1", "rho2", "rho3", "rho4", "true1", "true2", "true3",
                        "true4"},
                       rows);
  std::cout << "wrote convergence.csv, recovered.csv\n";

  if (cli.plot) {
    Eigen::ArrayXd xs(static_cast<Eigen::Index>(conv.size()));
    Eigen::ArrayXd ys(xs.size());
    for (Eigen::Index i = 0; i < xs.size(); ++i) {
      xs[i] = conv[static_cast<std::size_t>(i)][0];
      ys[i] = conv[static_cast<std::size_t>(i)][1];
    }
    svg::write_plot(out_path(cli, "convergence.svg"), "Misfit", {{"misfit", xs, ys}}, true);
    std::cout << "wrote convergence.svg\n";
  }
  return 0;
}

int run_stability(const Cli& cli) {
  Loaded l = load_common(cli);
  const ExperimentPair experiments = experiments_from_config(l);
  const CoefficientProfiles rho_profiles =
      io::coefficients_from_json(l.topology, l.config.at("perturbation"));
  const auto eps = l.config.at("eps").get<std::vector<double>>();

  StabilityOptions options;
  options.threads = cli.threads;
  const StabilityTable table = stability_experiment(l.topology, l.coefficients, rho_profiles, eps,
                                                    experiments, l.grid, options);
  for (const StabilityRow& row : table.rows) {
    std::cout << "eps = " << row.eps << ": ratio = " << row.ratio
              << (row.flags.empty() ? "" : " [" + row.flags + "]") << "\n";
  }
  std::cout << "max ratio (empirical stability constant): " << table.max_ratio << "\n";
  io::write_stability_csv(out_path(cli, "stability.csv"), table);
  std::cout << "wrote stability.csv\n";

  if (cli.plot) {
    std::vector<double> xs_v, ys_v;
    for (const StabilityRow& row : table.rows) {
      if (row.flags.empty()) {
        xs_v.push_back(row.eps);
        ys_v.push_back(row.ratio);
      }
    }
    const Eigen::Map<const Eigen::ArrayXd> xs(xs_v.data(),
                                              static_cast<Eigen::Index>(xs_v.size()));
    const Eigen::Map<const Eigen::ArrayXd> ys(ys_v.data(),
                                              static_cast<Eigen::Index>(ys_v.size()));
    svg::write_plot(out_path(cli, "stability.svg"), "Stability ratio vs eps",
                    {{"ratio", xs, ys}});
    std::cout << "wrote stability.svg\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Telegrapher networks: simulation, weighted estimates, reconstruction"};
  app.require_subcommand(1);

  Cli cli;
  if (const char* env = std::getenv("TELEGRAPHNET_THREADS")) cli.threads = std::atoi(env);

  std::map<std::string, int (*)(const Cli&)> runners;
  for (const auto& [name, desc, fn] :
       std::initializer_list<std::tuple<const char*, const char*, int (*)(const Cli&)>>{
           {"simulate", "Integrate the network system and dump the trajectory", run_simulate},
           {"energy-check", "Energy history and derivative-bound diagnostics", run_energy_check},
           {"carleman-check", "Evaluate the weighted inequality on a manufactured field",
            run_carleman_check},
           {"reconstruct-direct", "Pointwise t=0 reconstruction from simulated data",
            run_reconstruct_direct},
           {"reconstruct-lsq", "Gauss-Newton reconstruction of per-edge constants",
            run_reconstruct_lsq},
           {"stability", "Lipschitz stability ratio over an eps grid", run_stability}}) {
    CLI::App* sub = app.add_subcommand(name, desc);
    sub->add_option("--config", cli.config_path, "JSON run configuration")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--out", cli.out_dir, "Output directory (created if missing)");
    sub->add_flag("--plot", cli.plot, "Also write SVG plots");
    sub->add_option("--threads", cli.threads, "Worker threads for embarrassingly parallel parts");
    runners[name] = fn;
  }

  CLI11_PARSE(app, argc, argv);

  try {
    return runners.at(app.get_subcommands().front()->get_name())(cli);
  } catch (const StructuralError& e) {
    std::cerr << "network error: " << e.what() << "\n";
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
  }
  return 1;
}
