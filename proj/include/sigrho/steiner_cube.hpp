#pragma once

// Amplitude-constrained case (sigma = 0): the feasible set is the cube
// [-A, A]^n and Steiner's formula gives the parallel-body volume exactly,
//
//     Vol([-A,A]^n + B_n(sqrt(n nu))) = sum_j C(n,j) (2A)^{n-j} eps_j (n nu)^{j/2}.
//
// Its per-dimension log converges to
//
//     ell(nu) = max_theta  H(theta) + (1-theta) ln 2A + (theta/2) ln(2 pi e nu / theta),
//
// attained at the unique root theta* in (0,1) of (1-theta)^2/theta^3 = 2A^2/(pi nu).
// All quantities are in nats.

#include <cmath>
#include <vector>

#include "sigrho/numerics.hpp"

namespace sigrho {

struct CubeEllResult {
  double amplitude = 0.0;
  double noise_power = 0.0;
  double theta_star = 0.0;
  double ell = 0.0;
};

/// Input/noise laws for the entropy-of-sum check.  Amplitude-bounded inputs are
/// uniform on [-A, A] or equiprobable on {-A, +A}; noise is Gaussian.
struct DensitySpec {
  enum class Kind { uniform, two_point, gaussian };
  Kind kind = Kind::gaussian;
  double parameter = 0.0;  // A for uniform/two_point, variance for gaussian

  static DensitySpec uniform(double amplitude) { return {Kind::uniform, amplitude}; }
  static DensitySpec two_point(double amplitude) { return {Kind::two_point, amplitude}; }
  static DensitySpec gaussian(double variance) { return {Kind::gaussian, variance}; }
};

struct EntropyResult {
  double entropy = 0.0;  // h(X + Z), nats
  double amplitude = 0.0;
  double noise_power = 0.0;
  int convolution_points = 0;
};

namespace cube {

namespace detail {
inline void require_amplitude(double amplitude) {
  if (!(amplitude > 0.0) || !std::isfinite(amplitude)) {
    throw ValidationError("amplitude must be finite and > 0");
  }
}
}  // namespace detail

/// (1/n) ln of the Steiner term j: f_n^nu(j/n).
inline double steiner_term_exponent(double amplitude, double nu, int n, int j) {
  detail::require_amplitude(amplitude);
  if (n < 1 || j < 0 || j > n) {
    throw ValidationError("steiner_term_exponent: need n >= 1 and 0 <= j <= n");
  }
  if (!(nu > 0.0)) {
    throw ValidationError("steiner_term_exponent: nu must be > 0");
  }
  const double log_term = numerics::log_binomial(n, j) + (n - j) * std::log(2.0 * amplitude) +
                          numerics::log_unit_ball_volume(j) + 0.5 * j * std::log(n * nu);
  return log_term / n;
}

/// (1/n) ln Vol([-A,A]^n + B_n(sqrt(n nu))), summed in the log domain.
inline double log_parallel_volume_cube(double amplitude, double nu, int n) {
  detail::require_amplitude(amplitude);
  if (n < 1 || !(nu >= 0.0)) {
    throw ValidationError("log_parallel_volume_cube: need n >= 1 and nu >= 0");
  }
  if (nu == 0.0) return std::log(2.0 * amplitude);
  std::vector<double> terms(n + 1);
  for (int j = 0; j <= n; ++j) terms[j] = n * steiner_term_exponent(amplitude, nu, n, j);
  return numerics::log_sum_exp(terms) / n;
}

/// Limit exponent f^nu(theta); endpoint values by continuous extension.
inline double steiner_limit_exponent(double amplitude, double nu, double theta) {
  detail::require_amplitude(amplitude);
  if (!(nu > 0.0) || !(theta >= 0.0 && theta <= 1.0)) {
    throw ValidationError("steiner_limit_exponent: need nu > 0 and theta in [0, 1]");
  }
  const double ball = theta > 0.0 ? 0.5 * theta * std::log(2.0 * kPi * kE * nu / theta) : 0.0;
  return numerics::binary_entropy(theta) + (1.0 - theta) * std::log(2.0 * amplitude) + ball;
}

/// Relative residual (1-theta)^2/theta^3 / (2A^2/(pi nu)) - 1.
inline double cubic_residual(double amplitude, double nu, double theta) {
  const double lhs_log = 2.0 * std::log1p(-theta) - 3.0 * std::log(theta);
  const double rhs_log = std::log(2.0 * amplitude * amplitude / (kPi * nu));
  return std::expm1(lhs_log - rhs_log);
}

/// theta* in (0, 1), bisection on the log form of the stationarity cubic.
inline double theta_star(double amplitude, double nu, const ToleranceConfig& tol = {1e-14, 0.0, 400}) {
  detail::require_amplitude(amplitude);
  if (!(nu > 0.0) || !std::isfinite(nu)) {
    throw ValidationError("theta_star: nu must be finite and > 0");
  }
  const double rhs_log = std::log(2.0 * amplitude * amplitude / (kPi * nu));
  const auto log_gap = [rhs_log](double theta) {
    return 2.0 * std::log1p(-theta) - 3.0 * std::log(theta) - rhs_log;
  };
  return numerics::bisection_root(log_gap, 1e-15, 1.0 - 1e-15, tol);
}

inline CubeEllResult ell_cube(double amplitude, double nu, const ToleranceConfig& tol = {1e-14, 0.0, 400}) {
  detail::require_amplitude(amplitude);
  if (!(nu >= 0.0) || !std::isfinite(nu)) {
    throw ValidationError("ell_cube: nu must be finite and >= 0");
  }
  CubeEllResult result{amplitude, nu, 0.0, std::log(2.0 * amplitude)};
  if (nu == 0.0) return result;
  result.theta_star = theta_star(amplitude, nu, tol);
  result.ell = steiner_limit_exponent(amplitude, nu, result.theta_star);
  return result;
}

/// ln 2A - 0.5 ln(2 pi e nu) + (3c/2) nu^{1/3},  c = (pi / (2A^2))^{1/3}.
inline double low_noise_expansion(double amplitude, double nu) {
  detail::require_amplitude(amplitude);
  if (!(nu > 0.0)) {
    throw ValidationError("low_noise_expansion: nu must be > 0");
  }
  const double c = std::cbrt(kPi / (2.0 * amplitude * amplitude));
  return std::log(2.0 * amplitude) - 0.5 * std::log(2.0 * kPi * kE * nu) + 1.5 * c * std::cbrt(nu);
}

/// alpha^2/2 - alpha^4/4 + alpha^6/6 - 5 alpha^8/24.
inline double high_noise_series(double alpha) {
  const double a2 = alpha * alpha;
  return a2 * (0.5 + a2 * (-0.25 + a2 * (1.0 / 6.0 - a2 * (5.0 / 24.0))));
}

/// ln cosh(y) for y >= 0 without overflow.
inline double log_cosh(double y) {
  y = std::abs(y);
  return y + std::log1p(std::exp(-2.0 * y)) - std::log(2.0);
}

/// Mutual information of the equiprobable +-A input in Gaussian noise of
/// variance nu, alpha = A/sqrt(nu):
///
///   C = alpha^2 - 2/(sqrt(2 pi) alpha) e^{-alpha^2/2} int_0^inf e^{-y^2/(2 alpha^2)} cosh(y) ln cosh(y) dy.
///
/// The exponentials are folded into one exponent, e^{-(y - alpha^2)^2/(2 alpha^2)}
/// up to the log1p correction, and the integral is truncated at
/// max(40, 12 alpha^2 + 40) where the integrand is below e^{-700} of its peak.
inline double bpsk_high_noise_capacity(double amplitude, double nu,
                                       const ToleranceConfig& tol = {1e-15, 1e-13, 4000}) {
  detail::require_amplitude(amplitude);
  if (!(nu > 0.0)) {
    throw ValidationError("bpsk_high_noise_capacity: nu must be > 0");
  }
  const double alpha = amplitude / std::sqrt(nu);
  const double a2 = alpha * alpha;
  const auto integrand = [alpha, a2](double y) {
    const double lc = log_cosh(y);
    const double z = (y - a2) / alpha;
    // -alpha^2/2 - y^2/(2 alpha^2) + ln cosh(y)  ==  -z^2/2 + log1p(e^{-2y}) - ln 2
    const double exponent = -0.5 * z * z + std::log1p(std::exp(-2.0 * y)) - std::log(2.0);
    return std::exp(exponent) * lc;
  };
  const double y_max = std::max(40.0, 12.0 * a2 + 40.0);
  // Split at the Gaussian peak and a few widths either side.
  std::vector<double> cuts = {0.0};
  for (double k : {-8.0, -4.0, 0.0, 4.0, 8.0, 16.0}) {
    const double c = a2 + k * alpha;
    if (c > cuts.back() && c < y_max) cuts.push_back(c);
  }
  cuts.push_back(y_max);
  double integral = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    integral += numerics::adaptive_quadrature(integrand, cuts[i], cuts[i + 1], tol);
  }
  return a2 - 2.0 / (std::sqrt(2.0 * kPi) * alpha) * integral;
}

namespace detail {

inline double gaussian_pdf(double x, double variance) {
  return std::exp(-0.5 * x * x / variance) / std::sqrt(2.0 * kPi * variance);
}

// Density of X + Z at y with X uniform on [-A, A], by composite trapezoid
// convolution over `points` nodes.  The integration runs over the part of
// [-A, A] within 10 standard deviations of y, so the nodes resolve the
// Gaussian kernel at any noise level.
inline double uniform_plus_gaussian_density(double y, double amplitude, double nu, int points) {
  const double reach = 10.0 * std::sqrt(nu);
  const double lo = std::max(-amplitude, y - reach);
  const double hi = std::min(amplitude, y + reach);
  if (!(lo < hi)) return 0.0;
  const double step = (hi - lo) / (points - 1);
  double acc = 0.5 * (gaussian_pdf(y - lo, nu) + gaussian_pdf(y - hi, nu));
  for (int k = 1; k < points - 1; ++k) {
    acc += gaussian_pdf(y - (lo + k * step), nu);
  }
  return acc * step / (2.0 * amplitude);
}

inline double neg_p_log_p(double p) { return p > 0.0 ? -p * std::log(p) : 0.0; }

}  // namespace detail

/// Differential entropy h(X + Z) for amplitude-bounded X and Gaussian Z.
/// Support truncated to [-A - 8 sqrt(nu), A + 8 sqrt(nu)]; the uniform case
/// convolves by trapezoid with >= 4096 nodes, doubling until the entropy moves
/// by less than tol.abs_tol.
inline EntropyResult entropy_of_sum(const DensitySpec& x_spec, const DensitySpec& z_spec,
                                    const ToleranceConfig& tol = {1e-9, 0.0, 6}) {
  tol.validate();
  if (z_spec.kind != DensitySpec::Kind::gaussian) {
    throw ValidationError("entropy_of_sum: noise must be gaussian");
  }
  if (x_spec.kind == DensitySpec::Kind::gaussian) {
    throw ValidationError("entropy_of_sum: input must be amplitude-bounded (uniform or two_point)");
  }
  const double amplitude = x_spec.parameter;
  const double nu = z_spec.parameter;
  if (!(amplitude >= 0.0) || !(nu >= 0.0) || !std::isfinite(amplitude) || !std::isfinite(nu)) {
    throw ValidationError("entropy_of_sum: amplitude and variance must be finite and >= 0");
  }
  EntropyResult result{0.0, amplitude, nu, 0};
  if (amplitude == 0.0) {
    if (nu == 0.0) throw ValidationError("entropy_of_sum: X + Z is a point mass");
    result.entropy = 0.5 * std::log(2.0 * kPi * kE * nu);
    return result;
  }
  if (nu == 0.0) {
    if (x_spec.kind == DensitySpec::Kind::two_point) {
      throw ValidationError("entropy_of_sum: two-point input without noise has no density");
    }
    result.entropy = std::log(2.0 * amplitude);
    return result;
  }

  const double half_support = amplitude + 8.0 * std::sqrt(nu);
  const ToleranceConfig quad_tol{tol.abs_tol * 1e-2, 1e-12, 20000};
  const auto entropy_with = [&](auto&& density) {
    // Split at the kinks of the input law so the adaptive rule sees smooth pieces.
    const double cuts[] = {-half_support, -amplitude, 0.0, amplitude, half_support};
    double h = 0.0;
    for (int i = 0; i < 4; ++i) {
      h += numerics::adaptive_quadrature([&](double y) { return detail::neg_p_log_p(density(y)); }, cuts[i],
                                         cuts[i + 1], quad_tol);
    }
    return h;
  };

  if (x_spec.kind == DensitySpec::Kind::two_point) {
    result.entropy = entropy_with([&](double y) {
      return 0.5 * (detail::gaussian_pdf(y - amplitude, nu) + detail::gaussian_pdf(y + amplitude, nu));
    });
    return result;
  }

  int points = 4096;
  double previous = entropy_with([&](double y) { return detail::uniform_plus_gaussian_density(y, amplitude, nu, points); });
  for (int it = 0; it < tol.max_iterations; ++it) {
    points = 2 * points - 1;
    const double current =
        entropy_with([&](double y) { return detail::uniform_plus_gaussian_density(y, amplitude, nu, points); });
    if (std::abs(current - previous) < tol.abs_tol) {
      result.entropy = current;
      result.convolution_points = points;
      return result;
    }
    previous = current;
  }
  throw ConvergenceError("entropy_of_sum: convolution refinement did not converge");
}

}  // namespace cube
}  // namespace sigrho
