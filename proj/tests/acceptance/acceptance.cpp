// Acceptance suite: one PASS/FAIL line per criterion, with the measured
// quantities and runtime.  Usage: sigrho_acceptance [criterion numbers...]
// (no arguments runs all).  Exit status is non-zero if any selected
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "sigrho/sigrho.hpp"

namespace {

using namespace sigrho;

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Criterion {
  int id;
  std::string title;
  double budget_seconds;
  std::function<Outcome()> run;
};

// Appends "name=value" and folds `ok` into the outcome.
void note(Outcome& o, const std::string& text, bool ok) {
  if (!o.detail.empty()) o.detail += "; ";
  o.detail += text + (ok ? "" : " [violated]");
  o.pass = o.pass && ok;
}

std::string fmt(double x, int digits = 6) {
  std::ostringstream s;
  s << std::setprecision(digits) << x;
  return s.str();
}

Outcome endpoint_exactness() {
  Outcome o;
  const double v = growth::v1(0.0).value;
  note(o, "v1(0)=" + fmt(v, 17), v == std::log(2.0));
  for (double a : {0.5, 1.0, 3.0}) {
    const double ell = cube::ell_cube(a, 0.0).ell;
    note(o, "ell_cube(" + fmt(a) + ",0)=" + fmt(ell, 17), ell == std::log(2.0 * a));
  }
  return o;
}

Outcome spectral_vs_monte_carlo() {
  Outcome o;
  const auto spectral = growth::v1(1.0, 1e-6);
  note(o, "v1(1)=" + fmt(spectral.value, 8) + " at grid " + std::to_string(spectral.grid_sizes_used.back()), true);
  const SigmaRhoParams params(1.0, 1.0);
  double estimate_12 = 0.0;
  for (int n : {8, 10, 12}) {
    const auto mc = growth::mc_log_volume(params, n, 1'000'000, 0);
    note(o, "mc(n=" + std::to_string(n) + ")=" + fmt(mc.estimate, 8) + "+-" + fmt(mc.std_error, 3),
         spectral.value <= mc.estimate + 2.0 * mc.std_error);
    if (n == 12) estimate_12 = mc.estimate;
  }
  note(o, "|v1 - mc(12)|=" + fmt(std::abs(spectral.value - estimate_12), 4) + " <= 0.05",
       std::abs(spectral.value - estimate_12) <= 0.05);
  return o;
}

Outcome range_and_shape() {
  Outcome o;
  const double ceiling = 0.5 * std::log(2.0 * kPi * kE);
  const std::vector<double> sigmas = {0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0};
  std::vector<double> values;
  std::string listing = "v1=";
  for (double sigma : sigmas) {
    values.push_back(growth::v1(sigma).value);
    listing += fmt(values.back(), 6) + (sigma < 32.0 ? "," : "");
  }
  note(o, listing, true);
  bool in_range = true;
  for (double v : values) in_range = in_range && v >= std::log(2.0) && v < ceiling;
  note(o, "all in [ln2, 1/2 ln 2pi e)", in_range);
  bool increasing = true;
  for (std::size_t i = 1; i < values.size(); ++i) increasing = increasing && values[i] > values[i - 1];
  note(o, "strictly increasing", increasing);
  // Concavity in sigma on the non-uniform grid: second divided differences.
  // The plain index differences are reported too; on a doubling grid they
  // measure curvature in log(sigma), not in sigma.
  double worst_divided = -INFINITY;
  double worst_index = -INFINITY;
  for (std::size_t i = 1; i + 1 < values.size(); ++i) {
    const double right = (values[i + 1] - values[i]) / (sigmas[i + 1] - sigmas[i]);
    const double left = (values[i] - values[i - 1]) / (sigmas[i] - sigmas[i - 1]);
    worst_divided = std::max(worst_divided, 2.0 * (right - left) / (sigmas[i + 1] - sigmas[i - 1]));
    worst_index = std::max(worst_index, values[i + 1] - 2.0 * values[i] + values[i - 1]);
  }
  note(o, "index second difference max=" + fmt(worst_index, 4) + " (informational)", true);
  note(o, "max second divided difference=" + fmt(worst_divided, 4) + " <= 5e-3", worst_divided <= 5e-3);
  note(o, "v1(32)=" + fmt(values.back(), 6) + " > 1.30", values.back() > 1.30);
  return o;
}

Outcome cubic_exactness() {
  Outcome o;
  const double t = cube::theta_star(1.0, 1.0 / kPi);
  note(o, "theta*(1,1/pi)-0.5=" + fmt(t - 0.5, 3), std::abs(t - 0.5) <= 1e-8);
  double worst = 0.0;
  for (int k = 0; k < 50; ++k) {
    const double nu = std::pow(10.0, -9.0 + 12.0 * k / 49.0);
    worst = std::max(worst, std::abs(cube::cubic_residual(1.0, nu, cube::theta_star(1.0, nu))));
  }
  note(o, "max residual=" + fmt(worst, 3) + " < 1e-10", worst < 1e-10);
  return o;
}

Outcome steiner_convergence() {
  Outcome o;
  const double finite = cube::log_parallel_volume_cube(1.0, 1.0, 2000);
  const double limit = cube::ell_cube(1.0, 1.0).ell;
  note(o, "|V_2000 - ell|=" + fmt(std::abs(finite - limit), 4) + " <= 5e-3", std::abs(finite - limit) <= 5e-3);
  for (int n : {10, 100, 2000}) {
    double max_term = -INFINITY;
    for (int j = 0; j <= n; ++j) max_term = std::max(max_term, cube::steiner_term_exponent(1.0, 1.0, n, j));
    const double total = cube::log_parallel_volume_cube(1.0, 1.0, n);
    note(o, "sandwich n=" + std::to_string(n),
         max_term <= total && total <= max_term + std::log(n + 1.0) / n);
  }
  return o;
}

Outcome low_noise_asymptote() {
  Outcome o;
  const double nu = 1e-9;
  // Gap between the parallel-body capacity bound and ln 2A - 0.5 ln(2 pi e nu).
  const double upper = bounds::minkowski_upper_bound(cube::ell_cube(1.0, nu).ell, nu);
  const double ratio = (upper - (std::log(2.0) - 0.5 * std::log(2.0 * kPi * kE * nu))) / std::cbrt(nu);
  const double target = 1.5 * std::cbrt(kPi / 2.0);
  note(o, "ratio/target=" + fmt(ratio / target, 6) + " in [0.95,1.05]", ratio >= 0.95 * target && ratio <= 1.05 * target);
  return o;
}

Outcome high_noise_series() {
  Outcome o;
  const double d2 = std::abs(cube::bpsk_high_noise_capacity(0.2, 1.0) - cube::high_noise_series(0.2));
  const double d5 = std::abs(cube::bpsk_high_noise_capacity(0.5, 1.0) - cube::high_noise_series(0.5));
  note(o, "alpha=0.2: |diff|=" + fmt(d2, 3) + " <= " + fmt(5.0 * std::pow(0.2, 10), 3), d2 <= 5.0 * std::pow(0.2, 10));
  note(o, "alpha=0.5: |diff|=" + fmt(d5, 3) + " <= " + fmt(10.0 * std::pow(0.5, 10), 3), d5 <= 10.0 * std::pow(0.5, 10));
  return o;
}

Outcome rate_function_consistency() {
  Outcome o;
  const auto closed = subconv::cube_lambda_star(1.0);
  const auto estimate = subconv::lambda_star_estimate(subconv::cube_intrinsic_sequence(1.0, 512));
  double worst_closed = 0.0;
  double worst_estimate = 0.0;
  for (double nu : {0.01, 0.1, 1.0, 10.0}) {
    const double reference = cube::ell_cube(1.0, nu).ell;
    worst_closed = std::max(worst_closed, std::abs(subconv::ell_general(closed, nu).ell - reference));
    worst_estimate = std::max(worst_estimate, std::abs(subconv::ell_general(estimate, nu).ell - reference));
  }
  note(o, "closed form max|diff|=" + fmt(worst_closed, 3) + " <= 1e-3", worst_closed <= 1e-3);
  note(o, "n_max=512 estimate max|diff|=" + fmt(worst_estimate, 3) + " <= 1e-2", worst_estimate <= 1e-2);
  return o;
}

Outcome entropy_bound() {
  Outcome o;
  for (double nu : {0.05, 0.25, 1.0, 5.0}) {
    const double h = cube::entropy_of_sum(DensitySpec::uniform(1.0), DensitySpec::gaussian(nu)).entropy;
    const double ell = cube::ell_cube(1.0, nu).ell;
    note(o, "nu=" + fmt(nu) + ": h=" + fmt(h, 7) + " ell=" + fmt(ell, 7), h <= ell + 1e-6);
  }
  return o;
}

Outcome feasibility_equivalence() {
  Outcome o;
  RandomStream rng(0, 0);
  int mismatches = 0;
  int feasible = 0;
  int padded = 0;
  int padded_infeasible = 0;
  const int cases = 100'000;
  for (int c = 0; c < cases; ++c) {
    const double sigma = rng.uniform() < 0.1 ? 0.0 : rng.uniform(0.0, 5.0);
    const double rho = rng.uniform(0.1, 3.0);
    const SigmaRhoParams params(sigma, rho);
    const int n = 1 + static_cast<int>(rng.uniform() * 64);
    // Amplitudes straddle the boundary so both outcomes are common.
    const double scale = std::sqrt(rho + sigma / n) * rng.uniform(0.9, 1.9);
    Codeword cw(n);
    for (auto& x : cw) x = rng.uniform(-scale, scale);
    const bool a = geometry::is_feasible(params, cw);
    const bool b = geometry::window_check(params, cw);
    mismatches += (a != b);
    feasible += a;
    if (c % 10 == 0) {
      std::vector<Codeword> blocks;
      for (int k = 0; k < 3; ++k) {
        Codeword block(1 + static_cast<int>(rng.uniform() * 8));
        for (auto& x : block) x = rng.uniform(-1.0, 1.0) * std::sqrt(rho);
        blocks.push_back(block);  // |x| <= sqrt(rho): always feasible on its own
      }
      const auto out = geometry::pad_and_concat(params, blocks);
      ++padded;
      padded_infeasible += !(geometry::is_feasible(params, out) && geometry::window_check(params, out));
    }
  }
  note(o, "cases=" + std::to_string(cases) + " feasible=" + std::to_string(feasible), true);
  note(o, "mismatches=" + std::to_string(mismatches), mismatches == 0);
  note(o, "padded=" + std::to_string(padded) + " infeasible=" + std::to_string(padded_infeasible),
       padded_infeasible == 0);
  return o;
}

Outcome subconvolutive_suite() {
  Outcome o;
  const auto cube64 = subconv::cube_intrinsic_sequence(1.0, 64);
  bool subc = true;
  for (int m = 1; m < 64; ++m)
    for (int n = 1; m + n <= 64; ++n) subc = subc && subconv::check_subconvolutive(cube64, m, n);
  note(o, "cube sub-convolutive (m+n<=64)", subc);
  bool af = true;
  for (int n = 2; n <= 64; ++n) af = af && subconv::check_alexandrov_fenchel(cube64, n);
  note(o, "cube Alexandrov-Fenchel (n<=64)", af);
  const auto degenerate = subconv::degenerate_sequence(512);
  const auto rate = subconv::lambda_star_estimate(degenerate);
  double worst = 0.0;
  for (double v : rate.values) worst = std::max(worst, std::abs(v));
  note(o, "degenerate max|Lambda*|=" + fmt(worst, 3) + " <= 2e-2", worst <= 2e-2);
  std::vector<double> t_grid;
  for (int k = 0; k <= 100; ++k) t_grid.push_back(-5.0 + 0.1 * k);
  note(o, "sandwich cube", subconv::lambda_sandwich_check(subconv::cube_intrinsic_sequence(1.0, 512), t_grid));
  note(o, "sandwich degenerate", subconv::lambda_sandwich_check(degenerate, t_grid));
  return o;
}

Outcome ldp_upper_bound() {
  Outcome o;
  const auto seq = subconv::cube_intrinsic_sequence(1.0, 256);
  const auto rate = subconv::lambda_star_estimate(seq);
  const auto r = subconv::ldp_upper_check(seq, 0.4, 0.6, 256, rate, 1e-2);
  const double slack = std::log(257.0) / 256.0 + 1e-2;
  note(o, "lhs=" + fmt(r.lhs, 8) + " rhs=" + fmt(r.rhs, 8) + " slack=" + fmt(slack, 6), r.lhs <= r.rhs + slack);
  return o;
}

Outcome bounds_shape() {
  Outcome o;
  const auto grid = bounds::nu_grid(1e-3, 10.0, 40, true);
  std::vector<std::vector<BoundsRow>> runs;
  for (double sigma : {0.0, 1.0, 5.0, 10.0}) runs.push_back(bounds::bounds_sweep(SigmaRhoParams(sigma, 1.0), grid));
  bool ordered = true;
  bool increasing = true;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    for (std::size_t s = 0; s < runs.size(); ++s) {
      const auto& row = runs[s][k];
      ordered = ordered && row.epi_lower <= row.awgn_upper;
      if (row.minkowski_upper) ordered = ordered && row.epi_lower <= *row.minkowski_upper;
      if (s > 0) increasing = increasing && row.epi_lower > runs[s - 1][k].epi_lower;
    }
  }
  note(o, "epi_lower <= every upper", ordered);
  note(o, "epi_lower increasing in sigma", increasing);
  const auto& first = runs[0].front();
  const double awgn_gap = first.awgn_upper - first.epi_lower;
  const double minkowski_gap = *first.minkowski_upper - first.epi_lower;
  note(o, "sigma=0 nu=1e-3: awgn-epi=" + fmt(awgn_gap, 5) + " (0.7258+-0.01)", std::abs(awgn_gap - 0.7258) <= 0.01);
  note(o, "minkowski-epi=" + fmt(minkowski_gap, 5) + " <= 0.15", minkowski_gap <= 0.15);
  return o;
}

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all = {
      {1, "endpoint exactness", 1e-3, endpoint_exactness},
      {2, "spectral growth rate vs Monte-Carlo volume", 120.0, spectral_vs_monte_carlo},
      {3, "growth-rate range and shape", 60.0, range_and_shape},
      {4, "stationarity cubic exactness", 1.0, cubic_exactness},
      {5, "Steiner sum convergence", 10.0, steiner_convergence},
      {6, "low-noise asymptote", 1.0, low_noise_asymptote},
      {7, "high-noise series vs quadrature", 5.0, high_noise_series},
      {8, "rate-function ell vs closed-form ell", 30.0, rate_function_consistency},
      {9, "entropy of sum below ell", 30.0, entropy_bound},
      {10, "feasibility equivalence", 10.0, feasibility_equivalence},
      {11, "sub-convolutive suite", 60.0, subconvolutive_suite},
      {12, "large-deviation upper bound", 5.0, ldp_upper_bound},
      {13, "bounds ordering and shape", 300.0, bounds_shape},
  };
  return all;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));
  bool all_pass = true;
  for (const auto& c : criteria()) {
    if (!selected.empty() && std::find(selected.begin(), selected.end(), c.id) == selected.end()) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = c.run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = seconds < c.budget_seconds;
    const bool pass = outcome.pass && in_time;
    all_pass = all_pass && pass;
    std::cout << (pass ? "PASS" : "FAIL") << " criterion " << c.id << " (" << c.title << "): " << outcome.detail
              << "; runtime=" << fmt(seconds, 3) << "s < " << fmt(c.budget_seconds) << "s"
              << (in_time ? "" : " [violated]") << std::endl;
  }
  return all_pass ? 0 : 1;
}
