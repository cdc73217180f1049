// Command-line driver for the resonance-DFT laboratory.
//
// Verbs: solve-1e, solve-2e, theta-scan, ensemble, invert, jump, figures,
// all.  Each takes --config PATH (flat key=value file) and an optional
// --out DIR override.  Exit code is 0 only when every built-in target
// check evaluated by the verb passes, unless --no-verify is given.

#include <CLI11.hpp>
#include <cstdio>
#include <iostream>

#include "dfrt/experiment.hpp"

namespace {

void print_checks(const std::vector<dfrt::TargetCheck>& checks) {
  for (const auto& c : checks)
    std::printf("%-12s value = % .6f %+.6fi  target = % .3f %+.3fi  [%s]\n", c.name.c_str(),
                c.value.real(), c.value.imag(), c.target.real(), c.target.imag(),
                c.pass ? "pass" : "FAIL");
}

int finish(const std::vector<dfrt::TargetCheck>& checks, bool verify) {
  print_checks(checks);
  if (!verify) return 0;
  for (const auto& c : checks)
    if (!c.pass) return 1;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"complex-scaled ensemble DFT laboratory"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  bool no_verify = false;
  app.add_option("--config", config_path, "flat key=value config file");
  app.add_option("--out", out_dir, "output directory override");
  app.add_flag("--no-verify", no_verify, "always exit 0, skip target checks");

  for (const char* verb : {"solve-1e", "solve-2e", "theta-scan", "ensemble", "invert", "jump",
                           "figures", "all"})
    app.add_subcommand(verb)->fallthrough();

  CLI11_PARSE(app, argc, argv);
  const std::string verb = app.get_subcommands().front()->get_name();

  try {
    dfrt::Config cfg =
        config_path.empty() ? dfrt::Config() : dfrt::Config::from_file(config_path);
    dfrt::ExperimentConfig ec = dfrt::ExperimentConfig::from_config(cfg);
    if (!out_dir.empty()) ec.out_dir = out_dir;
    if (no_verify) ec.verify = false;

    if (verb == "solve-1e") {
      dfrt::ScaledHamiltonian h1 = dfrt::build_hamiltonian_1e(ec.system);
      auto spec = dfrt::solve_dense(h1, 4, std::max<Eigen::Index>(ec.dense_limit, h1.dimension()));
      std::printf("E1 = %.12f %+.12fi\n", spec.front().value.real(), spec.front().value.imag());
      dfrt::ExperimentResult r;
      r.states.E1 = spec.front().value;
      auto checks = dfrt::builtin_checks(ec.preset_name, r);
      if (!checks.empty()) checks.resize(1);  // only E1 is known here
      return finish(checks, ec.verify);
    }

    if (verb == "solve-2e") {
      dfrt::ExperimentResult r;
      r.states = dfrt::solve_integer_states(ec);
      r.epsilon_h2 = r.states.E2 - r.states.E1;
      std::printf("E1 = %.12f %+.12fi\n", r.states.E1.real(), r.states.E1.imag());
      std::printf("E2 = %.12f %+.12fi\n", r.states.E2.real(), r.states.E2.imag());
      return finish(dfrt::builtin_checks(ec.preset_name, r), ec.verify);
    }

    if (verb == "theta-scan") {
      if (ec.theta_scan.empty()) throw dfrt::Error("theta-scan: config has no scan.theta list");
      dfrt::ThetaTrajectory traj = dfrt::theta_trajectory(
          ec.system, 2, ec.theta_scan, ec.shift_2e, 8,
          dfrt::ShiftInvertOptions{ec.krylov_dim, 6, 1e-9, 12345});
      std::filesystem::create_directories(ec.out_dir);
      std::vector<std::vector<double>> rows;
      for (size_t i = 0; i < traj.thetas.size(); ++i)
        rows.push_back({traj.thetas[i], traj.energies[i].real(), traj.energies[i].imag()});
      dfrt::write_csv((std::filesystem::path(ec.out_dir) / "theta_scan.csv").string(),
                      {"theta", "re_E", "im_E"}, rows);
      std::printf("optimal theta = %.4f, |dE/dtheta| = %.3e\n", traj.optimal_theta,
                  traj.stationarity);
      return 0;
    }

    if (verb == "ensemble") {
      dfrt::IntegerStates st = dfrt::solve_integer_states(ec);
      std::filesystem::create_directories(ec.out_dir);
      for (double N : ec.N_scan) {
        const dfrt::ComplexDensity n = dfrt::ensemble_density_at(st, N);
        std::vector<std::vector<double>> rows;
        for (int i = 0; i < n.grid.n_points; ++i)
          rows.push_back({n.grid.x(i), n.values[static_cast<size_t>(i)].real(),
                          n.values[static_cast<size_t>(i)].imag()});
        dfrt::write_csv((std::filesystem::path(ec.out_dir) /
                         ("density_N=" + dfrt::detail::format_n(N) + ".csv"))
                            .string(),
                        {"x", "re_n", "im_n"}, rows);
      }
      std::printf("wrote %zu ensemble densities\n", ec.N_scan.size());
      return 0;
    }

    if (verb == "invert" || verb == "jump" || verb == "figures" || verb == "all") {
      if (verb != "all") {
        // narrow the pipeline to what the verb needs
        if (verb == "invert") ec.delta = 0.0;
        if (verb == "jump" || verb == "figures") ec.N_scan.clear();
        ec.theta_scan.clear();
      }
      dfrt::ExperimentResult r = dfrt::run_experiment(ec);
      std::printf("E1 = %.12f %+.12fi\n", r.states.E1.real(), r.states.E1.imag());
      std::printf("E2 = %.12f %+.12fi\n", r.states.E2.real(), r.states.E2.imag());
      if (r.jump) {
        std::printf("delta_mu (measured)  = %.6f %+.6fi\n", r.jump->delta_mu.real(),
                    r.jump->delta_mu.imag());
        std::printf("delta_mu (predicted) = %.6f %+.6fi\n", r.jump->delta_mu_predicted.real(),
                    r.jump->delta_mu_predicted.imag());
        for (const auto& [d, rad] : r.jump->plateau_radii)
          std::printf("plateau radius (delta = %g) = %.3f bohr\n", d, rad);
      }
      return finish(r.checks, ec.verify);
    }

    throw dfrt::Error("unknown verb: " + verb);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
