#pragma once

// Command-line front end.  run_cli() takes the arguments after the program
// name and writes to the given streams, so it can be driven from tests.
//
// Exit codes: 0 success, 2 invalid input, 3 numerical non-convergence.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "sigrho/sigrho.hpp"

namespace sigrho::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNonConvergence = 3;

namespace detail {

inline const char* pass_fail(bool ok) { return ok ? "pass" : "fail"; }

// Computed values are printed with enough digits to round-trip.
inline std::string num(double x) { return numerics::shortest_repr(x); }

inline bool all_subconvolutive(const IntrinsicVolumeSequence& seq) {
  for (int m = 1; 2 * m <= seq.n_max(); ++m) {
    for (int n = m; m + n <= seq.n_max(); ++n) {
      if (!subconv::check_subconvolutive(seq, m, n)) return false;
    }
  }
  return true;
}

inline bool all_alexandrov_fenchel(const IntrinsicVolumeSequence& seq) {
  for (int n = 2; n <= seq.n_max(); ++n) {
    if (!subconv::check_alexandrov_fenchel(seq, n)) return false;
  }
  return true;
}

}  // namespace detail

inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Capacity bounds for the (sigma, rho)-power-constrained Gaussian channel"};
  app.require_subcommand(1);
  app.name("sigrho");

  // v1
  double v1_sigma = 0.0;
  double v1_gamma = kDefaultGamma;
  double v1_tol = 1e-4;
  auto* v1_cmd = app.add_subcommand("v1", "Volume growth rate v1(sigma) at rho = 1 (nats)");
  v1_cmd->add_option("--sigma", v1_sigma, "Battery capacity sigma >= 0")->required();
  v1_cmd->add_option("--gamma", v1_gamma, "Small-symbol truncation gamma in [0, 1)");
  v1_cmd->add_option("--tol", v1_tol, "Grid-ladder convergence tolerance");

  // growth
  double g_sigma = 0.0;
  double g_rho = 1.0;
  double g_gamma = kDefaultGamma;
  auto* growth_cmd = app.add_subcommand("growth", "Volume growth rate v(sigma, rho) (nats)");
  growth_cmd->add_option("--sigma", g_sigma, "Battery capacity sigma >= 0")->required();
  growth_cmd->add_option("--rho", g_rho, "Recharge rate rho > 0")->required();
  growth_cmd->add_option("--gamma", g_gamma, "Small-symbol truncation gamma in [0, 1)");

  // bounds
  double b_sigma = 0.0;
  double b_rho = 1.0;
  double b_nu_min = 0.0;
  double b_nu_max = 0.0;
  int b_nu_steps = 0;
  bool b_log_grid = false;
  std::string b_units = "bits";
  auto* bounds_cmd = app.add_subcommand("bounds", "CSV sweep of capacity bounds over a noise grid");
  bounds_cmd->add_option("--sigma", b_sigma, "Battery capacity sigma >= 0")->required();
  bounds_cmd->add_option("--rho", b_rho, "Recharge rate rho > 0")->required();
  bounds_cmd->add_option("--nu-min", b_nu_min, "Smallest noise power")->required();
  bounds_cmd->add_option("--nu-max", b_nu_max, "Largest noise power")->required();
  bounds_cmd->add_option("--nu-steps", b_nu_steps, "Number of grid points")->required();
  bounds_cmd->add_flag("--log-grid", b_log_grid, "Log-spaced noise grid");
  bounds_cmd->add_option("--units", b_units, "bits or nats")->check(CLI::IsMember({"bits", "nats"}));

  // cube-ell
  double c_amplitude = 1.0;
  double c_nu = 1.0;
  auto* cube_cmd = app.add_subcommand("cube-ell", "Amplitude-constrained case: theta*, ell(nu) and bounds (nats)");
  cube_cmd->add_option("--amplitude", c_amplitude, "Amplitude A > 0")->required();
  cube_cmd->add_option("--nu", c_nu, "Noise power nu > 0")->required();

  // mc-volume
  double m_sigma = 0.0;
  double m_rho = 1.0;
  int m_n = 0;
  std::uint64_t m_samples = 0;
  std::uint64_t m_seed = 0;
  auto* mc_cmd = app.add_subcommand("mc-volume", "Monte-Carlo estimate of (1/n) ln Vol(S_n) (nats)");
  mc_cmd->add_option("--sigma", m_sigma, "Battery capacity sigma >= 0")->required();
  mc_cmd->add_option("--rho", m_rho, "Recharge rate rho > 0")->required();
  mc_cmd->add_option("--n", m_n, "Block length")->required();
  mc_cmd->add_option("--samples", m_samples, "Number of samples")->required();
  mc_cmd->add_option("--seed", m_seed, "Random seed");

  // subconv
  std::string s_input;
  std::string s_check = "all";
  std::optional<double> s_ell_nu;
  auto* subconv_cmd = app.add_subcommand("subconv", "Checks and ell(nu) for an intrinsic-volume sequence file");
  subconv_cmd->add_option("--input", s_input, "Sequence JSON file")->required();
  subconv_cmd->add_option("--check", s_check, "all, af or subc")->check(CLI::IsMember({"all", "af", "subc"}));
  subconv_cmd->add_option("--ell-nu", s_ell_nu, "Noise power for ell(nu) via the rate-function estimate");

  // bpsk
  double p_amplitude = 1.0;
  double p_nu = 1.0;
  auto* bpsk_cmd = app.add_subcommand("bpsk", "Binary-input capacity by quadrature and its small-amplitude series (nats)");
  bpsk_cmd->add_option("--amplitude", p_amplitude, "Amplitude A > 0")->required();
  bpsk_cmd->add_option("--nu", p_nu, "Noise power nu > 0")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::Success& e) {
    // --help and friends
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitValidation;
  }

  try {
    if (*v1_cmd) {
      const auto result = growth::v1(v1_sigma, v1_gamma, ToleranceConfig{v1_tol, 0.0, 1});
      out << "sigma=" << v1_sigma << " gamma=" << v1_gamma << " v1=" << detail::num(result.value);
      if (!result.grid_sizes_used.empty()) out << " grid=" << result.grid_sizes_used.back();
      out << '\n';
    } else if (*growth_cmd) {
      const SigmaRhoParams params(g_sigma, g_rho);
      const auto result = growth::v(params, g_gamma);
      out << "sigma=" << g_sigma << " rho=" << g_rho << " gamma=" << g_gamma << " v=" << detail::num(result.value) << '\n';
    } else if (*bounds_cmd) {
      const SigmaRhoParams params(b_sigma, b_rho);
      const auto grid = bounds::nu_grid(b_nu_min, b_nu_max, b_nu_steps, b_log_grid);
      bounds::write_csv(out, bounds::bounds_sweep(params, grid), parse_units(b_units));
    } else if (*cube_cmd) {
      const auto ell = cube::ell_cube(c_amplitude, c_nu);
      const auto row = bounds::cube_capacity_bounds(c_amplitude, c_nu);
      out << "theta_star=" << detail::num(ell.theta_star) << '\n'
          << "ell=" << detail::num(ell.ell) << '\n'
          << "minkowski_upper=" << detail::num(*row.minkowski_upper) << '\n'
          << "variance_upper=" << detail::num(row.awgn_upper) << '\n'
          << "epi_lower=" << detail::num(row.epi_lower) << '\n'
          << "active_upper=" << row.active_upper << '\n';
    } else if (*mc_cmd) {
      const SigmaRhoParams params(m_sigma, m_rho);
      const auto est = growth::mc_log_volume(params, m_n, m_samples, m_seed);
      out << "estimate=" << detail::num(est.estimate) << " std_error=" << detail::num(est.std_error) << '\n';
    } else if (*subconv_cmd) {
      const auto seq = sequence_io::read_file(s_input);
      out << "n_max=" << seq.n_max() << '\n';
      if (s_check == "all" || s_check == "subc") {
        out << "subconvolutive=" << detail::pass_fail(detail::all_subconvolutive(seq)) << '\n';
      }
      if (s_check == "all" || s_check == "af") {
        out << "alexandrov_fenchel=" << detail::pass_fail(detail::all_alexandrov_fenchel(seq)) << '\n';
      }
      if (s_check == "all" && seq.n_max() >= 2) {
        std::vector<double> t_grid;
        for (int k = 0; k <= 100; ++k) t_grid.push_back(-5.0 + 0.1 * k);
        out << "lambda_sandwich=" << detail::pass_fail(subconv::lambda_sandwich_check(seq, t_grid)) << '\n';
      }
      if (s_ell_nu) {
        const auto lambda_star = subconv::lambda_star_estimate(seq);
        const auto ell = subconv::ell_general(lambda_star, *s_ell_nu);
        out << "ell_nu=" << *s_ell_nu << '\n' << "ell=" << detail::num(ell.ell) << '\n' << "theta=" << detail::num(ell.theta) << '\n';
      }
    } else if (*bpsk_cmd) {
      if (!(p_nu > 0.0) || !(p_amplitude > 0.0)) {
        throw ValidationError("bpsk: amplitude and nu must be > 0");
      }
      const double alpha = p_amplitude / std::sqrt(p_nu);
      const double quadrature = cube::bpsk_high_noise_capacity(p_amplitude, p_nu);
      const double series = cube::high_noise_series(alpha);
      out << "alpha=" << detail::num(alpha) << '\n'
          << "capacity_quadrature=" << detail::num(quadrature) << '\n'
          << "capacity_series=" << detail::num(series) << '\n'
          << "difference=" << detail::num(quadrature - series) << '\n';
    }
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const ConvergenceError& e) {
    err << "error: " << e.what() << '\n';
    return kExitNonConvergence;
  }
  return kExitOk;
}

}  // namespace sigrho::cli
