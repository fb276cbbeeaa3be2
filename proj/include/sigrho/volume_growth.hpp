#pragma once

// Exponential volume growth rate v(sigma, rho) of the feasible set S_n.
//
// With rho = 1 the battery state after each symbol evolves on
// [0, sigma + 1 - gamma], and the (unnormalized) state density is pushed
// forward by the integral operator
//
//     (A f)(t) = int A(x, t) f(x) dx,
//     A(x, t) = 1/sqrt(x + 1 - t)      for 0 <= x < sigma,  0 <= t <= x + 1 - gamma
//             = 1/sqrt(sigma + 1 - t)  for sigma <= x,      0 <= t <= sigma + 1 - gamma
//             = 0                      otherwise.
//
// Vol(S_n) grows like r(A)^n, so v1(sigma) = ln r(A) as gamma -> 0.  Here gamma
// removes symbols with x^2 < gamma; the truncated rate v_{1,gamma} satisfies
//
//     v1(sigma/(1-eta)) + 0.5 ln(1-eta) <= v_{1,gamma}(sigma) <= v1(sigma),
//     eta = gamma + 2 sqrt(sigma + 1) sqrt(gamma).
//
// The operator is discretized on an (n+1)-point grid with step
// h = (sigma + 1 - gamma)/n and matrix entry (i, j) tied to A(x_i, t_j).  Two
// rules are available:
//
//   left_endpoint       M(i, j) = h * A(x_i, t_j).
//   product_integration M(i, j) = int A(x_i, t) phi_j(t) dt with phi_j the hat
//                       function at t_j; the 1/sqrt singularity is integrated
//                       in closed form, so gamma = 0 is admissible.
//
// The left-endpoint rule samples the kernel at its 1/sqrt(gamma) peak on the
// grid column t = sigma + 1 - gamma and only converges once h << sqrt(gamma);
// growth rates therefore default to product integration.

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "sigrho/constraint_geometry.hpp"
#include "sigrho/numerics.hpp"
#include "sigrho/random.hpp"

namespace sigrho {

struct KernelSpec {
  double sigma = 0.0;
  double gamma = 1e-6;

  void validate() const {
    if (!std::isfinite(sigma) || sigma < 0.0) {
      throw ValidationError("KernelSpec: sigma must be finite and >= 0");
    }
    if (!(gamma >= 0.0 && gamma < 1.0)) {
      throw ValidationError("KernelSpec: gamma must lie in [0, 1)");
    }
  }
  double domain_length() const { return sigma + 1.0 - gamma; }
};

enum class QuadratureRule { left_endpoint, product_integration };

struct DiscretizedOperator {
  double grid_step = 0.0;
  std::size_t size = 0;  // grid_n + 1
  QuadratureRule rule = QuadratureRule::product_integration;
  numerics::SquareMatrix matrix;
};

struct GrowthRateResult {
  double value = 0.0;  // nats per symbol
  std::vector<int> grid_sizes_used;
  std::vector<double> per_grid_values;
  double gamma = 0.0;
  double eta = 0.0;
  // Bounds on v_{1,gamma}(sigma) from the gamma-truncation sandwich, evaluated
  // with the gamma = 0 operator.  Absent when the sandwich was not requested.
  std::optional<double> sandwich_lower;
  std::optional<double> sandwich_upper;
};

struct GammaSandwich {
  double lower;
  double upper;
};

struct VolumeEstimate {
  double estimate;   // (1/n) ln Vol
  double std_error;  // on the same (1/n) ln scale
};

inline constexpr double kDefaultGamma = 1e-6;
inline const std::vector<int> kGridLadder = {128, 256, 512, 1024};

namespace growth {

inline double kernel_eval(const KernelSpec& spec, double x, double t) {
  spec.validate();
  const double length = spec.domain_length();
  if (!(x >= 0.0 && x <= length && t >= 0.0 && t <= length)) {
    throw ValidationError("kernel_eval: (x, t) outside [0, sigma + 1 - gamma]^2");
  }
  const double gap = (x < spec.sigma ? x : spec.sigma) + 1.0 - t;
  if (gap < spec.gamma) return 0.0;
  return 1.0 / std::sqrt(gap);
}

namespace detail {

// sqrt(a) - sqrt(b) without cancellation.
inline double sqrt_diff(double a, double b) {
  const double s = std::sqrt(a) + std::sqrt(b);
  return s > 0.0 ? (a - b) / s : 0.0;
}

// a^{3/2} - b^{3/2} without cancellation.
inline double pow32_diff(double a, double b) {
  const double sa = std::sqrt(a);
  const double sb = std::sqrt(b);
  const double s = sa + sb;
  return s > 0.0 ? (a - b) * (a + sa * sb + b) / s : 0.0;
}

// Row i of the product-integration matrix for a kernel 1/sqrt(c - t) supported
// on t in [0, upper].
inline void product_row(numerics::SquareMatrix& m, std::size_t i, double c, double upper, double h, int grid_n) {
  for (int k = 0; k < grid_n; ++k) {
    const double p = k * h;
    const double q_cell = (k + 1) * h;
    const double q = std::min(q_cell, upper);
    if (!(q > p)) break;
    const double i0 = 2.0 * sqrt_diff(c - p, c - q);                // int (c-t)^{-1/2}
    const double i1 = c * i0 - (2.0 / 3.0) * pow32_diff(c - p, c - q);  // int t (c-t)^{-1/2}
    m(i, k) += (q_cell * i0 - i1) / h;
    m(i, k + 1) += (i1 - p * i0) / h;
  }
}

}  // namespace detail

inline DiscretizedOperator discretize_operator(const KernelSpec& spec, int grid_n,
                                               QuadratureRule rule = QuadratureRule::left_endpoint) {
  spec.validate();
  if (grid_n < 8) {
    throw ValidationError("discretize_operator: grid_n must be >= 8");
  }
  if (rule == QuadratureRule::left_endpoint && spec.gamma == 0.0) {
    throw ValidationError("discretize_operator: left-endpoint rule needs gamma > 0 (kernel is unbounded)");
  }
  DiscretizedOperator op;
  op.size = static_cast<std::size_t>(grid_n) + 1;
  op.grid_step = spec.domain_length() / grid_n;
  op.rule = rule;
  op.matrix = numerics::SquareMatrix(op.size);
  const double h = op.grid_step;
  for (std::size_t i = 0; i < op.size; ++i) {
    const double x = std::min(static_cast<double>(i) * h, spec.domain_length());
    if (rule == QuadratureRule::left_endpoint) {
      for (std::size_t j = 0; j < op.size; ++j) {
        op.matrix(i, j) = h * kernel_eval(spec, x, std::min(static_cast<double>(j) * h, spec.domain_length()));
      }
    } else {
      const double c = std::min(x, spec.sigma) + 1.0;
      detail::product_row(op.matrix, i, c, c - spec.gamma, h, grid_n);
    }
  }
  return op;
}

inline ToleranceConfig default_eigen_tolerance() { return {1e-13, 1e-12, 200000}; }

/// ln of the dominant eigenvalue of the discretized operator.
inline double spectral_growth_rate(const KernelSpec& spec, int grid_n,
                                   const ToleranceConfig& eigen_tol = default_eigen_tolerance(),
                                   QuadratureRule rule = QuadratureRule::product_integration) {
  const auto op = discretize_operator(spec, grid_n, rule);
  return std::log(numerics::power_iteration(op.matrix, eigen_tol).eigenvalue);
}

/// Dominant eigenpair of the transposed operator: the eigenvector is the
/// discretized stationary state-density direction (unit 2-norm).
inline numerics::EigenPair state_density_direction(const KernelSpec& spec, int grid_n,
                                                   const ToleranceConfig& eigen_tol = default_eigen_tolerance()) {
  const auto op = discretize_operator(spec, grid_n, QuadratureRule::product_integration);
  return numerics::power_iteration(op.matrix.transposed(), eigen_tol);
}

inline double truncation_eta(double sigma, double gamma) {
  return gamma + 2.0 * std::sqrt(sigma + 1.0) * std::sqrt(gamma);
}

/// Lower and upper bounds on v_{1,gamma}(sigma) in terms of the untruncated
/// rate function v1_fn.
inline GammaSandwich gamma_sandwich(double sigma, double gamma, const std::function<double(double)>& v1_fn) {
  if (!(sigma >= 0.0) || !(gamma >= 0.0)) {
    throw ValidationError("gamma_sandwich: need sigma >= 0 and gamma >= 0");
  }
  const double eta = truncation_eta(sigma, gamma);
  if (!(eta < 1.0)) {
    throw ValidationError("gamma_sandwich: eta = gamma + 2 sqrt((sigma+1) gamma) must be < 1");
  }
  const double upper = v1_fn(sigma);
  if (eta == 0.0) return {upper, upper};
  return {v1_fn(sigma / (1.0 - eta)) + 0.5 * std::log1p(-eta), upper};
}

namespace detail {

inline double ladder(const KernelSpec& spec, const ToleranceConfig& tol, GrowthRateResult* record) {
  double previous = std::numeric_limits<double>::quiet_NaN();
  for (int grid_n : kGridLadder) {
    const double value = spectral_growth_rate(spec, grid_n);
    if (record) {
      record->grid_sizes_used.push_back(grid_n);
      record->per_grid_values.push_back(value);
    }
    if (std::abs(value - previous) < tol.abs_tol) return value;
    previous = value;
  }
  throw ConvergenceError("v1: grid ladder did not converge to abs_tol");
}

}  // namespace detail

/// v1(sigma) = growth rate at rho = 1.  sigma = 0 is the cube [-1, 1]^n and
/// returns ln 2 exactly.  Otherwise the grid ladder 128..1024 runs until two
/// successive values differ by less than tol.abs_tol.
inline GrowthRateResult v1(double sigma, double gamma = kDefaultGamma, const ToleranceConfig& tol = {1e-4, 0.0, 1},
                           bool with_sandwich = false) {
  const KernelSpec spec{sigma, gamma};
  spec.validate();
  tol.validate();
  GrowthRateResult result;
  result.gamma = gamma;
  result.eta = truncation_eta(sigma, gamma);
  if (sigma == 0.0) {
    result.value = std::log(2.0);
    if (with_sandwich) {
      result.sandwich_lower = result.value;
      result.sandwich_upper = result.value;
    }
    return result;
  }
  result.value = detail::ladder(spec, tol, &result);
  if (with_sandwich && result.eta < 1.0) {
    const auto exact = [&](double s) { return detail::ladder(KernelSpec{s, 0.0}, tol, nullptr); };
    const auto sandwich = gamma_sandwich(sigma, gamma, exact);
    result.sandwich_lower = sandwich.lower;
    result.sandwich_upper = sandwich.upper;
  }
  return result;
}

/// v(sigma, rho) = 0.5 ln rho + v1(sigma / rho).
inline GrowthRateResult v(const SigmaRhoParams& params, double gamma = kDefaultGamma,
                          const ToleranceConfig& tol = {1e-4, 0.0, 1}, bool with_sandwich = false) {
  GrowthRateResult result = v1(params.sigma() / params.rho(), gamma, tol, with_sandwich);
  const double shift = 0.5 * std::log(params.rho());
  result.value += shift;
  for (double& x : result.per_grid_values) x += shift;
  if (result.sandwich_lower) *result.sandwich_lower += shift;
  if (result.sandwich_upper) *result.sandwich_upper += shift;
  return result;
}

/// Rejection-sampling estimate of (1/n) ln Vol(S_n(sigma, rho)) from the box
/// [-sqrt(sigma+rho), sqrt(sigma+rho)]^n, with a delta-method standard error.
inline VolumeEstimate mc_log_volume(const SigmaRhoParams& params, int n, std::uint64_t samples, std::uint64_t seed) {
  if (n < 1 || samples < 1) {
    throw ValidationError("mc_log_volume: need n >= 1 and samples >= 1");
  }
  const double half_width = std::sqrt(params.sigma() + params.rho());
  const double sigma = params.sigma();
  const double rho = params.rho();
  const std::uint64_t hits = sharded_count(samples, seed, [=](RandomStream& rng, std::uint64_t count) {
    std::uint64_t local = 0;
    for (std::uint64_t s = 0; s < count; ++s) {
      double state = sigma;
      bool ok = true;
      for (int i = 0; i < n; ++i) {
        const double x = rng.uniform(-half_width, half_width);
        state = std::min(sigma, state + rho - x * x);
        if (state < 0.0) {
          ok = false;
          break;
        }
      }
      if (ok) ++local;
    }
    return local;
  });
  if (hits == 0) {
    throw ConvergenceError("mc_log_volume: zero feasible samples; increase samples");
  }
  const double p = static_cast<double>(hits) / static_cast<double>(samples);
  const double estimate = std::log(2.0 * half_width) + std::log(p) / n;
  const double std_error = std::sqrt((1.0 - p) / (static_cast<double>(samples) * p)) / n;
  return {estimate, std_error};
}

}  // namespace growth
}  // namespace sigrho
