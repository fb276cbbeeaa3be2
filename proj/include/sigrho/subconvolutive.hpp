#pragma once

// Intrinsic-volume-like sequences {mu_n(j)}, held in the log domain, and the
// machinery that turns them into a parallel-body exponent:
//
//   g_n(t)   = (1/n) ln sum_j mu_n(j) e^{j t}
//   Lambda   = lim g_n,          Lambda* its convex conjugate on [0, 1]
//   ell(nu)  = sup_theta [ -Lambda*(1 - theta) + (theta/2) ln(2 pi e nu / theta) ].
//
// A sequence is sub-convolutive when mu_m * mu_n >= mu_{m+n} pointwise.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "sigrho/numerics.hpp"

namespace sigrho {

class IntrinsicVolumeSequence {
 public:
  /// rows[n-1] holds ln mu_n(0..n).  Entries may be -inf except the two ends.
  explicit IntrinsicVolumeSequence(std::vector<std::vector<double>> rows) : rows_(std::move(rows)) {
    if (rows_.empty()) {
      throw ValidationError("IntrinsicVolumeSequence: need n_max >= 1");
    }
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      const auto& row = rows_[i];
      const std::size_t n = i + 1;
      if (row.size() != n + 1) {
        throw ValidationError("IntrinsicVolumeSequence: row " + std::to_string(n) + " must have " +
                              std::to_string(n + 1) + " entries");
      }
      for (double v : row) {
        if (std::isnan(v) || v == std::numeric_limits<double>::infinity()) {
          throw ValidationError("IntrinsicVolumeSequence: entries must be finite or -inf");
        }
      }
      if (!std::isfinite(row.front()) || !std::isfinite(row.back())) {
        throw ValidationError("IntrinsicVolumeSequence: mu_n(0) and mu_n(n) must be positive (row " +
                              std::to_string(n) + ")");
      }
    }
  }

  int n_max() const { return static_cast<int>(rows_.size()); }

  const std::vector<double>& row(int n) const {
    if (n < 1 || n > n_max()) {
      throw ValidationError("IntrinsicVolumeSequence: row index out of range");
    }
    return rows_[n - 1];
  }

  double log_mu(int n, int j) const {
    const auto& r = row(n);
    if (j < 0 || j > n) {
      throw ValidationError("IntrinsicVolumeSequence: index j out of range");
    }
    return r[j];
  }

  const std::vector<std::vector<double>>& rows() const { return rows_; }

  friend bool operator==(const IntrinsicVolumeSequence&, const IntrinsicVolumeSequence&) = default;

 private:
  std::vector<std::vector<double>> rows_;
};

struct SearchInterval {
  double lo = 0.0;
  double hi = 0.0;
};

struct ConjugateFunction {
  enum class Provenance { finite_n_conjugate, lambda_star_estimate, closed_form };

  std::vector<double> grid;    // increasing, within [0, 1]
  std::vector<double> values;  // +inf allowed outside the effective domain
  Provenance provenance = Provenance::closed_form;
  int n_used = 0;              // n whose g_n was conjugated (0 for closed forms)
  double alpha_hat = 0.0;      // (1/n) ln mu_n(n) at n = n_used
  double beta_hat = 0.0;       // (1/n) ln mu_n(0) at n = n_used
  std::vector<SearchInterval> search_intervals;  // per grid point; empty for closed forms

  /// Piecewise-linear interpolation; +inf outside [grid.front(), grid.back()].
  double operator()(double x) const {
    if (grid.empty()) {
      throw ValidationError("ConjugateFunction: empty grid");
    }
    if (x < grid.front() || x > grid.back() || std::isnan(x)) {
      return std::numeric_limits<double>::infinity();
    }
    auto it = std::upper_bound(grid.begin(), grid.end(), x);
    if (it == grid.end()) return values.back();
    const std::size_t k = static_cast<std::size_t>(it - grid.begin());
    if (k == 0) return values.front();
    const double x0 = grid[k - 1];
    const double x1 = grid[k];
    const double w = (x - x0) / (x1 - x0);
    if (w == 0.0) return values[k - 1];
    return (1.0 - w) * values[k - 1] + w * values[k];
  }

  /// Slopes nondecreasing along the grid up to `slack`.
  bool is_convex(double slack = 1e-9) const {
    for (std::size_t k = 1; k + 1 < grid.size(); ++k) {
      const double left = (values[k] - values[k - 1]) / (grid[k] - grid[k - 1]);
      const double right = (values[k + 1] - values[k]) / (grid[k + 1] - grid[k]);
      if (right - left < -slack / std::min(grid[k] - grid[k - 1], grid[k + 1] - grid[k])) return false;
    }
    return true;
  }
};

struct LdpCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  bool ok = false;
};

struct EllGeneralResult {
  double ell = 0.0;
  double theta = 0.0;  // maximizing ball fraction
};

namespace subconv {

inline constexpr double kSubconvolutiveRelTol = 1e-10;
inline constexpr double kSandwichSlack = 1e-9;
inline constexpr double kDefaultInterpolationSlack = 1e-2;

/// ln mu_n(j) = ln C(n, j) + j ln 2A: intrinsic volumes of [-A, A]^n.
inline IntrinsicVolumeSequence cube_intrinsic_sequence(double amplitude, int n_max) {
  if (!(amplitude > 0.0) || !std::isfinite(amplitude)) {
    throw ValidationError("cube_intrinsic_sequence: amplitude must be finite and > 0");
  }
  if (n_max < 1) {
    throw ValidationError("cube_intrinsic_sequence: need n_max >= 1");
  }
  const double log_side = std::log(2.0 * amplitude);
  std::vector<std::vector<double>> rows(n_max);
  for (int n = 1; n <= n_max; ++n) {
    auto& row = rows[n - 1];
    row.resize(n + 1);
    for (int j = 0; j <= n; ++j) row[j] = numerics::log_binomial(n, j) + j * log_side;
  }
  return IntrinsicVolumeSequence(std::move(rows));
}

/// mu_n(j) = 1 for j in {0, n} and 0 otherwise; its Lambda is max(0, t).
inline IntrinsicVolumeSequence degenerate_sequence(int n_max) {
  if (n_max < 1) {
    throw ValidationError("degenerate_sequence: need n_max >= 1");
  }
  std::vector<std::vector<double>> rows(n_max);
  for (int n = 1; n <= n_max; ++n) {
    rows[n - 1].assign(n + 1, kNegInf);
    rows[n - 1].front() = 0.0;
    rows[n - 1].back() = 0.0;
  }
  return IntrinsicVolumeSequence(std::move(rows));
}

/// ln (mu_m * mu_n)(i), the discrete convolution evaluated in the log domain.
inline std::vector<double> log_convolution(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> out(a.size() + b.size() - 1, kNegInf);
  std::vector<double> terms;
  for (std::size_t i = 0; i < out.size(); ++i) {
    terms.clear();
    const std::size_t k_lo = i >= b.size() - 1 ? i - (b.size() - 1) : 0;
    const std::size_t k_hi = std::min(i, a.size() - 1);
    for (std::size_t k = k_lo; k <= k_hi; ++k) terms.push_back(a[k] + b[i - k]);
    out[i] = numerics::log_sum_exp(terms);
  }
  return out;
}

/// True iff (mu_m * mu_n)(i) >= mu_{m+n}(i) (1 - 1e-10) for every i.
inline bool check_subconvolutive(const IntrinsicVolumeSequence& seq, int m, int n) {
  if (m < 1 || n < 1 || m + n > seq.n_max()) {
    throw ValidationError("check_subconvolutive: need m, n >= 1 and m + n <= n_max");
  }
  const auto conv = log_convolution(seq.row(m), seq.row(n));
  const auto& target = seq.row(m + n);
  const double log_factor = std::log1p(-kSubconvolutiveRelTol);
  for (std::size_t i = 0; i < target.size(); ++i) {
    if (target[i] == kNegInf) continue;
    if (conv[i] < target[i] + log_factor) return false;
  }
  return true;
}

/// Checks mu_n(j)^2 >= ((j+1)/j) mu_n(j-1) mu_n(j+1) for 1 <= j <= n-1.
inline bool check_alexandrov_fenchel(const IntrinsicVolumeSequence& seq, int n) {
  if (n < 2 || n > seq.n_max()) {
    throw ValidationError("check_alexandrov_fenchel: need 2 <= n <= n_max");
  }
  const auto& r = seq.row(n);
  for (int j = 1; j <= n - 1; ++j) {
    const double rhs = std::log1p(1.0 / j) + r[j - 1] + r[j + 1];
    if (rhs == kNegInf) continue;
    // Scale-aware comparison: the identity may hold with equality in exact arithmetic.
    const double slack = 1e-12 * std::max(1.0, std::abs(rhs));
    if (2.0 * r[j] < rhs - slack) return false;
  }
  return true;
}

/// g_n(t) = (1/n) ln sum_j mu_n(j) e^{j t}.
inline double g_n_eval(const IntrinsicVolumeSequence& seq, int n, double t) {
  const auto& r = seq.row(n);
  if (!std::isfinite(t)) {
    throw ValidationError("g_n_eval: t must be finite");
  }
  double peak = kNegInf;
  for (int j = 0; j <= n; ++j) peak = std::max(peak, r[j] + j * t);
  double acc = 0.0;
  for (int j = 0; j <= n; ++j) {
    if (r[j] != kNegInf) acc += std::exp(r[j] + j * t - peak);
  }
  return (peak + std::log(acc)) / n;
}

/// The bracket [(beta - g1(0))/x, (g1(0) - alpha)/(1 - x)] that contains the
/// maximizing t of x t - g(t).
inline SearchInterval conjugate_search_interval(double x, double alpha, double beta, double g1_at_0) {
  if (!(x > 0.0 && x < 1.0)) {
    throw ValidationError("conjugate_search_interval: need 0 < x < 1");
  }
  const SearchInterval interval{(beta - g1_at_0) / x, (g1_at_0 - alpha) / (1.0 - x)};
  if (!(interval.lo <= interval.hi) || !std::isfinite(interval.lo) || !std::isfinite(interval.hi)) {
    throw ValidationError("conjugate_search_interval: degenerate bracket (inconsistent alpha, beta, g1(0))");
  }
  return interval;
}

/// g*(x) = sup_t [x t - g(t)] with t restricted to the bracket above.
inline double conjugate_on_interval(const std::function<double(double)>& g, double x, double alpha, double beta,
                                    double g1_at_0, const ToleranceConfig& tol = {1e-11, 0.0, 300}) {
  const SearchInterval interval = conjugate_search_interval(x, alpha, beta, g1_at_0);
  return numerics::golden_section_max([&](double t) { return x * t - g(t); }, interval.lo, interval.hi, tol).max;
}

inline std::vector<double> uniform_grid(int grid_points) {
  if (grid_points < 2) {
    throw ValidationError("uniform_grid: need at least 2 points");
  }
  std::vector<double> grid(grid_points);
  for (int k = 0; k < grid_points; ++k) grid[k] = static_cast<double>(k) / (grid_points - 1);
  grid.back() = 1.0;
  return grid;
}

/// Conjugate of g_n on a uniform grid over [0, 1]; the endpoints take the
/// limiting values -beta_hat (x = 0) and -alpha_hat (x = 1).
inline ConjugateFunction finite_n_conjugate(const IntrinsicVolumeSequence& seq, int n, int grid_points,
                                            const ToleranceConfig& tol = {1e-11, 0.0, 300}) {
  if (n < 1 || n > seq.n_max()) {
    throw ValidationError("finite_n_conjugate: need 1 <= n <= n_max");
  }
  if (grid_points < 16) {
    throw ValidationError("finite_n_conjugate: need grid_points >= 16");
  }
  ConjugateFunction out;
  out.provenance = ConjugateFunction::Provenance::finite_n_conjugate;
  out.n_used = n;
  out.alpha_hat = seq.log_mu(n, n) / n;
  out.beta_hat = seq.log_mu(n, 0) / n;
  out.grid = uniform_grid(grid_points);
  out.values.resize(grid_points);
  out.search_intervals.resize(grid_points);
  const double g1_at_0 = g_n_eval(seq, 1, 0.0);
  const auto g = [&seq, n](double t) { return g_n_eval(seq, n, t); };
  for (int k = 0; k < grid_points; ++k) {
    const double x = out.grid[k];
    if (k == 0) {
      out.values[k] = -out.beta_hat;
      out.search_intervals[k] = {-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    } else if (k == grid_points - 1) {
      out.values[k] = -out.alpha_hat;
      out.search_intervals[k] = {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    } else {
      out.search_intervals[k] = conjugate_search_interval(x, out.alpha_hat, out.beta_hat, g1_at_0);
      out.values[k] = conjugate_on_interval(g, x, out.alpha_hat, out.beta_hat, g1_at_0, tol);
    }
  }
  return out;
}

/// Lambda* estimated as the conjugate of g_{n_max}.
inline ConjugateFunction lambda_star_estimate(const IntrinsicVolumeSequence& seq, int grid_points = 65,
                                              const ToleranceConfig& tol = {1e-11, 0.0, 300}) {
  ConjugateFunction out = finite_n_conjugate(seq, seq.n_max(), grid_points, tol);
  out.provenance = ConjugateFunction::Provenance::lambda_star_estimate;
  return out;
}

/// Samples a closed-form rate function on a uniform grid.
inline ConjugateFunction closed_form_conjugate(const std::function<double(double)>& lambda_star, int grid_points) {
  ConjugateFunction out;
  out.provenance = ConjugateFunction::Provenance::closed_form;
  out.grid = uniform_grid(grid_points);
  out.values.resize(grid_points);
  for (int k = 0; k < grid_points; ++k) out.values[k] = lambda_star(out.grid[k]);
  return out;
}

/// Lambda*(x) = x ln x + (1-x) ln(1-x) - x ln 2A for the cube family.
inline double cube_lambda_star_value(double amplitude, double x) {
  if (!(x >= 0.0 && x <= 1.0)) return std::numeric_limits<double>::infinity();
  return -numerics::binary_entropy(x) - x * std::log(2.0 * amplitude);
}

inline ConjugateFunction cube_lambda_star(double amplitude, int grid_points = 1025) {
  if (!(amplitude > 0.0) || !std::isfinite(amplitude)) {
    throw ValidationError("cube_lambda_star: amplitude must be finite and > 0");
  }
  ConjugateFunction out =
      closed_form_conjugate([amplitude](double x) { return cube_lambda_star_value(amplitude, x); }, grid_points);
  out.alpha_hat = std::log(2.0 * amplitude);
  out.beta_hat = 0.0;
  return out;
}

/// max(beta_hat, t + alpha_hat) - 1e-9 <= g_{n_max}(t) <= g_1(t) + 1e-9 on the grid.
inline bool lambda_sandwich_check(const IntrinsicVolumeSequence& seq, const std::vector<double>& t_grid) {
  if (seq.n_max() < 2) {
    throw ValidationError("lambda_sandwich_check: need n_max >= 2");
  }
  const int n = seq.n_max();
  const double alpha_hat = seq.log_mu(n, n) / n;
  const double beta_hat = seq.log_mu(n, 0) / n;
  for (double t : t_grid) {
    const double gn = g_n_eval(seq, n, t);
    const double g1 = g_n_eval(seq, 1, t);
    if (std::max(beta_hat, t + alpha_hat) - kSandwichSlack > gn) return false;
    if (gn > g1 + kSandwichSlack) return false;
  }
  return true;
}

/// Large-deviation upper bound on [a, b] at dimension n:
///   lhs = (1/n) ln sum_{j/n in [a,b]} mu_n(j),   rhs = -inf_{[a,b]} Lambda*,
/// ok iff lhs <= rhs + ln(n+1)/n + interpolation_slack.
inline LdpCheck ldp_upper_check(const IntrinsicVolumeSequence& seq, double a, double b, int n,
                                const ConjugateFunction& lambda_star,
                                double interpolation_slack = kDefaultInterpolationSlack) {
  if (!(a <= b)) {
    throw ValidationError("ldp_upper_check: empty interval");
  }
  if (a < 0.0 || b > 1.0) {
    throw ValidationError("ldp_upper_check: interval must lie in [0, 1]");
  }
  if (n < 1 || n > seq.n_max()) {
    throw ValidationError("ldp_upper_check: need 1 <= n <= n_max");
  }
  if (!(interpolation_slack >= 0.0)) {
    throw ValidationError("ldp_upper_check: interpolation slack must be >= 0");
  }
  LdpCheck out;
  std::vector<double> terms;
  const auto& r = seq.row(n);
  for (int j = 0; j <= n; ++j) {
    const double frac = static_cast<double>(j) / n;
    if (frac >= a && frac <= b) terms.push_back(r[j]);
  }
  out.lhs = terms.empty() ? kNegInf : numerics::log_sum_exp(terms) / n;

  // The interpolant is piecewise linear, so its infimum sits at a breakpoint.
  double inf_value = std::min(lambda_star(a), lambda_star(b));
  for (std::size_t k = 0; k < lambda_star.grid.size(); ++k) {
    if (lambda_star.grid[k] >= a && lambda_star.grid[k] <= b) inf_value = std::min(inf_value, lambda_star.values[k]);
  }
  out.rhs = -inf_value;
  out.slack = std::log(n + 1.0) / n + interpolation_slack;
  out.ok = out.lhs <= out.rhs + out.slack;
  return out;
}

/// ell(nu) = sup_theta [ -Lambda*(1 - theta) + (theta/2) ln(2 pi e nu / theta) ].
inline EllGeneralResult ell_general(const ConjugateFunction& lambda_star, double nu,
                                    const ToleranceConfig& tol = {1e-13, 0.0, 400}) {
  if (!(nu > 0.0) || !std::isfinite(nu)) {
    throw ValidationError("ell_general: nu must be finite and > 0");
  }
  if (lambda_star.grid.empty() || lambda_star.grid.front() > 0.0 || lambda_star.grid.back() < 1.0) {
    throw ValidationError("ell_general: rate function must be tabulated on all of [0, 1]");
  }
  const double log_2pie_nu = std::log(2.0 * kPi * kE * nu);
  const auto objective = [&](double theta) {
    const double ball = theta > 0.0 ? 0.5 * theta * (log_2pie_nu - std::log(theta)) : 0.0;
    return -lambda_star(1.0 - theta) + ball;
  };
  const auto best = numerics::golden_section_max(objective, 0.0, 1.0, tol);
  return {best.max, best.argmax};
}

}  // namespace subconv
}  // namespace sigrho
