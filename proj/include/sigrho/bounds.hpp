#pragma once

// Capacity bounds for the (sigma, rho)-constrained Gaussian channel with noise
// power nu:
//
//   lower      0.5 ln(1 + e^{2 v(sigma,rho)} / (2 pi e nu))     (entropy power)
//   upper      0.5 ln(1 + rho / nu)                              (average power)
//   upper      ell(nu) - 0.5 ln(2 pi e nu)                       (parallel body)
//
// The parallel-body bound needs ell(nu): available in closed form when
// sigma = 0 (the cube of side 2 sqrt(rho)), or through a supplied rate
// function for general sigma.

#include <cmath>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "sigrho/constraint_geometry.hpp"
#include "sigrho/numerics.hpp"
#include "sigrho/steiner_cube.hpp"
#include "sigrho/subconvolutive.hpp"
#include "sigrho/volume_growth.hpp"

namespace sigrho {

enum class Units { nats, bits };

inline const char* units_name(Units u) { return u == Units::bits ? "bits" : "nats"; }

inline Units parse_units(const std::string& name) {
  if (name == "bits") return Units::bits;
  if (name == "nats") return Units::nats;
  throw ValidationError("units must be 'bits' or 'nats'");
}

struct BoundsRow {
  double sigma = 0.0;
  double rho = 0.0;
  double nu = 0.0;
  double epi_lower = 0.0;
  double awgn_upper = 0.0;
  std::optional<double> minkowski_upper;
  std::string active_upper;  // "awgn" or "minkowski"
  Units units = Units::nats;
};

namespace bounds {

inline void require_nu(double nu) {
  if (!(nu > 0.0) || !std::isfinite(nu)) {
    throw ValidationError("noise power nu must be finite and > 0");
  }
}

inline double epi_lower_bound(double v, double nu) {
  if (!std::isfinite(v)) {
    throw ValidationError("epi_lower_bound: v must be finite");
  }
  require_nu(nu);
  return 0.5 * std::log1p(std::exp(2.0 * v) / (2.0 * kPi * kE * nu));
}

inline double awgn_upper_bound(double rho, double nu) {
  if (!(rho > 0.0) || !std::isfinite(rho)) {
    throw ValidationError("awgn_upper_bound: rho must be finite and > 0");
  }
  require_nu(nu);
  return 0.5 * std::log1p(rho / nu);
}

inline double minkowski_upper_bound(double ell, double nu) {
  require_nu(nu);
  return ell - 0.5 * std::log(2.0 * kPi * kE * nu);
}

inline void set_active(BoundsRow& row) {
  row.active_upper = (row.minkowski_upper && *row.minkowski_upper < row.awgn_upper) ? "minkowski" : "awgn";
}

/// Amplitude constraint |x| <= A: lower bound from v = ln 2A, uppers from the
/// variance bound 0.5 ln(1 + A^2/nu) and the cube parallel body.
inline BoundsRow cube_capacity_bounds(double amplitude, double nu) {
  require_nu(nu);
  const CubeEllResult cube_ell = cube::ell_cube(amplitude, nu);
  BoundsRow row;
  row.sigma = 0.0;
  row.rho = amplitude * amplitude;
  row.nu = nu;
  row.epi_lower = epi_lower_bound(std::log(2.0 * amplitude), nu);
  row.awgn_upper = 0.5 * std::log1p(amplitude * amplitude / nu);
  row.minkowski_upper = minkowski_upper_bound(cube_ell.ell, nu);
  set_active(row);
  return row;
}

/// `steps` points from nu_min to nu_max inclusive, linear or log spaced.
inline std::vector<double> nu_grid(double nu_min, double nu_max, int steps, bool log_spaced) {
  if (!(nu_min > 0.0) || !std::isfinite(nu_max) || !(nu_min <= nu_max)) {
    throw ValidationError("nu grid: need 0 < nu_min <= nu_max < inf");
  }
  if (steps < 1) {
    throw ValidationError("nu grid: need at least one step");
  }
  if (steps == 1) return {nu_min};
  std::vector<double> grid(steps);
  for (int k = 0; k < steps; ++k) {
    const double w = static_cast<double>(k) / (steps - 1);
    grid[k] = log_spaced ? std::pow(10.0, std::log10(nu_min) + w * (std::log10(nu_max) - std::log10(nu_min)))
                         : nu_min + w * (nu_max - nu_min);
  }
  grid.front() = nu_min;
  grid.back() = nu_max;
  return grid;
}

/// One row per nu; v(sigma, rho) is computed once.  The parallel-body column
/// is present for sigma = 0, or when a rate function for the feasible sets is
/// supplied.
inline std::vector<BoundsRow> bounds_sweep(const SigmaRhoParams& params, const std::vector<double>& nu_values,
                                           double gamma = kDefaultGamma, const ToleranceConfig& tol = {1e-4, 0.0, 1},
                                           const std::optional<ConjugateFunction>& lambda_star = std::nullopt) {
  for (double nu : nu_values) require_nu(nu);
  std::vector<BoundsRow> rows;
  if (nu_values.empty()) return rows;
  const double v = growth::v(params, gamma, tol).value;
  rows.reserve(nu_values.size());
  for (double nu : nu_values) {
    BoundsRow row;
    row.sigma = params.sigma();
    row.rho = params.rho();
    row.nu = nu;
    row.epi_lower = epi_lower_bound(v, nu);
    row.awgn_upper = awgn_upper_bound(params.rho(), nu);
    if (params.sigma() == 0.0) {
      row.minkowski_upper = minkowski_upper_bound(cube::ell_cube(std::sqrt(params.rho()), nu).ell, nu);
    } else if (lambda_star) {
      row.minkowski_upper = minkowski_upper_bound(subconv::ell_general(*lambda_star, nu).ell, nu);
    }
    set_active(row);
    rows.push_back(std::move(row));
  }
  return rows;
}

/// Re-expresses a row in the requested units (bits = nats / ln 2).
inline BoundsRow convert_units(BoundsRow row, Units target) {
  if (row.units == target) return row;
  const double ln2 = std::log(2.0);
  const auto convert = [&](double x) { return target == Units::bits ? x / ln2 : x * ln2; };
  row.epi_lower = convert(row.epi_lower);
  row.awgn_upper = convert(row.awgn_upper);
  if (row.minkowski_upper) *row.minkowski_upper = convert(*row.minkowski_upper);
  row.units = target;
  return row;
}

inline constexpr const char* kCsvHeader = "sigma,rho,nu,epi_lower,awgn_upper,minkowski_upper,active_upper,units";

inline void write_csv(std::ostream& out, const std::vector<BoundsRow>& rows, Units units) {
  using numerics::shortest_repr;
  out << kCsvHeader << '\n';
  for (const auto& raw : rows) {
    const BoundsRow row = convert_units(raw, units);
    out << shortest_repr(row.sigma) << ',' << shortest_repr(row.rho) << ',' << shortest_repr(row.nu) << ','
        << shortest_repr(row.epi_lower) << ',' << shortest_repr(row.awgn_upper) << ',';
    if (row.minkowski_upper) out << shortest_repr(*row.minkowski_upper);
    out << ',' << row.active_upper << ',' << units_name(row.units) << '\n';
  }
}

}  // namespace bounds
}  // namespace sigrho
