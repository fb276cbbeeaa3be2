#pragma once

// Shared numerical kernels: special functions, log-domain sums, scalar root
// finding and maximization, adaptive quadrature and dominant-eigenpair
// iteration for nonnegative matrices.
//
// Everything here is a pure function of its arguments.  -infinity is a
// first-class value meaning "log of zero".

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <queue>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

namespace sigrho {

/// Thrown when an input violates a documented precondition (CLI exit code 2).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown when an iterative method exhausts its budget (CLI exit code 3).
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();
inline constexpr double kPi = std::numbers::pi;
inline constexpr double kE = std::numbers::e;

struct ToleranceConfig {
  double abs_tol = 1e-10;
  double rel_tol = 0.0;
  int max_iterations = 200;

  void validate() const {
    if (!(abs_tol > 0.0) || !(rel_tol >= 0.0) || max_iterations < 1) {
      throw ValidationError("tolerance: need abs_tol > 0, rel_tol >= 0, max_iterations >= 1");
    }
  }
};

namespace numerics {

/// Shortest decimal text that parses back to exactly `x` ("inf"/"-inf"/"nan"
/// for non-finite values).
inline std::string shortest_repr(double x) {
  char buffer[64];
  const auto r = std::to_chars(buffer, buffer + sizeof buffer, x);
  return std::string(buffer, r.ptr);
}

inline double log_gamma(double x) {
  if (!(x > 0.0)) {
    throw ValidationError("log_gamma: argument must be positive");
  }
  return boost::math::lgamma(x);
}

/// ln of the volume of the unit ball in R^j: (j/2) ln pi - ln Gamma(j/2 + 1).
inline double log_unit_ball_volume(int j) {
  if (j < 0) {
    throw ValidationError("log_unit_ball_volume: dimension must be nonnegative");
  }
  if (j == 0) return 0.0;
  const double half = 0.5 * j;
  return half * std::log(kPi) - log_gamma(half + 1.0);
}

/// ln C(n, k) via log-gamma.
inline double log_binomial(int n, int k) {
  if (k < 0 || k > n) return kNegInf;
  return log_gamma(n + 1.0) - log_gamma(k + 1.0) - log_gamma(n - k + 1.0);
}

inline double log_sum_exp(std::span<const double> values) {
  if (values.empty()) {
    throw ValidationError("log_sum_exp: empty input");
  }
  const double peak = *std::max_element(values.begin(), values.end());
  if (std::isnan(peak)) {
    throw ValidationError("log_sum_exp: NaN input");
  }
  if (peak == kNegInf || peak == std::numeric_limits<double>::infinity()) {
    return peak;
  }
  double acc = 0.0;
  for (double v : values) {
    acc += std::exp(v - peak);
  }
  return peak + std::log(acc);
}

inline double log_sum_exp(std::initializer_list<double> values) {
  return log_sum_exp(std::span<const double>(values.begin(), values.size()));
}

/// Binary entropy in nats, continuously extended to 0 at the endpoints.
inline double binary_entropy(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -p * std::log(p) - (1.0 - p) * std::log1p(-p);
}

/// Bisection on a continuous monotone function whose values at lo and hi
/// differ in sign.  Stops when |f(x)| <= abs_tol or the bracket is narrower
/// than abs_tol.
template <class F>
double bisection_root(F&& f, double lo, double hi, const ToleranceConfig& tol) {
  tol.validate();
  if (!(lo < hi)) {
    throw ValidationError("bisection_root: need lo < hi");
  }
  double f_lo = f(lo);
  const double f_hi = f(hi);
  if (f_lo == 0.0) return lo;
  if (f_hi == 0.0) return hi;
  if ((f_lo > 0.0) == (f_hi > 0.0)) {
    throw ValidationError("bisection_root: no sign change on the bracket");
  }
  for (int it = 0; it < tol.max_iterations; ++it) {
    const double mid = lo + 0.5 * (hi - lo);
    const double f_mid = f(mid);
    if (std::abs(f_mid) <= tol.abs_tol || (hi - lo) <= tol.abs_tol || mid == lo || mid == hi) {
      return mid;
    }
    if ((f_mid > 0.0) == (f_lo > 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  throw ConvergenceError("bisection_root: iteration budget exhausted");
}

struct MaximizeResult {
  double argmax;
  double max;
};

/// Golden-section search for the maximum of a unimodal function on [lo, hi].
/// The endpoints are compared against the interior estimate so maxima on the
/// boundary are reported exactly.
template <class F>
MaximizeResult golden_section_max(F&& f, double lo, double hi, const ToleranceConfig& tol) {
  tol.validate();
  if (!(lo <= hi)) {
    throw ValidationError("golden_section_max: need lo <= hi");
  }
  const double f_lo = f(lo);
  const double f_hi = f(hi);
  MaximizeResult best = f_lo >= f_hi ? MaximizeResult{lo, f_lo} : MaximizeResult{hi, f_hi};
  if (lo == hi) return best;

  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo;
  double b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  int it = 0;
  while ((b - a) > tol.abs_tol) {
    if (++it > tol.max_iterations) {
      throw ConvergenceError("golden_section_max: iteration budget exhausted");
    }
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  const MaximizeResult interior = fc >= fd ? MaximizeResult{c, fc} : MaximizeResult{d, fd};
  return interior.max >= best.max ? interior : best;
}

namespace detail {

struct QuadSegment {
  double a;
  double b;
  double value;
  double error;
  bool operator<(const QuadSegment& other) const { return error < other.error; }
};

// Gauss-Kronrod 7/15 nodes and weights on [-1, 1].
inline constexpr double kKronrodNodes[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double kKronrodWeights[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double kGaussWeights[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class F>
QuadSegment gauss_kronrod_15(F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double f_center = f(center);
  double kronrod = f_center * kKronrodWeights[7];
  double gauss = f_center * kGaussWeights[3];
  for (int k = 0; k < 7; ++k) {
    const double dx = half * kKronrodNodes[k];
    const double pair = f(center - dx) + f(center + dx);
    kronrod += kKronrodWeights[k] * pair;
    if (k % 2 == 1) {
      gauss += kGaussWeights[k / 2] * pair;
    }
  }
  return {a, b, kronrod * half, std::abs((kronrod - gauss) * half)};
}

}  // namespace detail

/// Global adaptive Gauss-Kronrod (7/15) quadrature.  The interval with the
/// largest error estimate is bisected until the summed estimate satisfies
/// max(abs_tol, rel_tol*|I|); max_iterations bounds the number of bisections.
template <class F>
double adaptive_quadrature(F&& f, double a, double b, const ToleranceConfig& tol) {
  tol.validate();
  if (!(a < b)) {
    throw ValidationError("adaptive_quadrature: need a < b");
  }
  std::priority_queue<detail::QuadSegment> segments;
  segments.push(detail::gauss_kronrod_15(f, a, b));
  double total = segments.top().value;
  double total_error = segments.top().error;

  for (int it = 0;; ++it) {
    if (total_error <= std::max(tol.abs_tol, tol.rel_tol * std::abs(total))) {
      return total;
    }
    if (it >= tol.max_iterations) {
      throw ConvergenceError("adaptive_quadrature: subdivision budget exhausted");
    }
    const detail::QuadSegment worst = segments.top();
    segments.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    const detail::QuadSegment left = detail::gauss_kronrod_15(f, worst.a, mid);
    const detail::QuadSegment right = detail::gauss_kronrod_15(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    total_error += left.error + right.error - worst.error;
    segments.push(left);
    segments.push(right);
    if (!std::isfinite(total)) {
      throw ConvergenceError("adaptive_quadrature: non-finite integrand");
    }
  }
}

/// Integral over [a, inf).  The upper limit is pushed out (doubling the span)
/// until |f| drops below abs_tol*1e-3 of the running maximum seen, then
/// doubled once more as a check; the two results must agree within the
/// tolerance.
template <class F>
double adaptive_quadrature_to_infinity(F&& f, double a, double initial_span, const ToleranceConfig& tol) {
  tol.validate();
  if (!(initial_span > 0.0)) {
    throw ValidationError("adaptive_quadrature_to_infinity: initial span must be positive");
  }
  double span = initial_span;
  double running_max = 0.0;
  for (int it = 0;; ++it) {
    if (it >= 64) {
      throw ConvergenceError("adaptive_quadrature_to_infinity: integrand does not decay");
    }
    // Sample the current span coarsely to track the running maximum.
    for (int k = 0; k <= 64; ++k) {
      running_max = std::max(running_max, std::abs(f(a + span * k / 64.0)));
    }
    if (std::abs(f(a + span)) <= tol.abs_tol * 1e-3 * running_max || running_max == 0.0) {
      break;
    }
    span *= 2.0;
  }
  const double truncated = adaptive_quadrature(f, a, a + span, tol);
  const double check = adaptive_quadrature(f, a, a + 2.0 * span, tol);
  if (std::abs(check - truncated) > 2.0 * std::max(tol.abs_tol, tol.rel_tol * std::abs(check))) {
    throw ConvergenceError("adaptive_quadrature_to_infinity: truncation check failed");
  }
  return check;
}

/// Row-major dense square matrix.
class SquareMatrix {
 public:
  SquareMatrix() = default;
  explicit SquareMatrix(std::size_t n, double fill = 0.0) : n_(n), data_(n * n, fill) {}

  std::size_t size() const { return n_; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * n_, n_}; }
  std::span<const double> values() const { return data_; }

  SquareMatrix transposed() const {
    SquareMatrix t(n_);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

struct EigenPair {
  double eigenvalue;
  std::vector<double> eigenvector;
  int iterations;
};

/// Dominant eigenpair of an entrywise-nonnegative matrix by power iteration.
/// The start vector is all-ones (seed 0) or a seeded positive perturbation of
/// it; convergence is declared when successive Rayleigh quotients differ by at
/// most abs_tol + rel_tol*lambda.
inline EigenPair power_iteration(const SquareMatrix& matrix, const ToleranceConfig& tol, std::uint64_t seed = 0) {
  tol.validate();
  const std::size_t n = matrix.size();
  if (n == 0) {
    throw ValidationError("power_iteration: empty matrix");
  }
  for (double v : matrix.values()) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw ValidationError("power_iteration: matrix must be finite and entrywise nonnegative");
    }
  }

  std::vector<double> v(n, 1.0);
  if (seed != 0) {
    // splitmix64 stream: deterministic positive perturbation in [1, 1.5).
    std::uint64_t state = seed;
    for (auto& x : v) {
      std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
      z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
      z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
      z ^= z >> 31;
      x = 1.0 + 0.5 * static_cast<double>(z >> 11) * 0x1.0p-53;
    }
  }
  auto normalize = [](std::vector<double>& x) {
    double norm = 0.0;
    for (double e : x) norm += e * e;
    norm = std::sqrt(norm);
    if (norm == 0.0) {
      throw ConvergenceError("power_iteration: iterate vanished (spectral radius is zero)");
    }
    for (double& e : x) e /= norm;
  };
  normalize(v);

  std::vector<double> w(n);
  double previous = std::numeric_limits<double>::quiet_NaN();
  for (int it = 1; it <= tol.max_iterations; ++it) {
    for (std::size_t i = 0; i < n; ++i) {
      const auto r = matrix.row(i);
      double acc = 0.0;
      for (std::size_t j = 0; j < n; ++j) acc += r[j] * v[j];
      w[i] = acc;
    }
    double rayleigh = 0.0;
    for (std::size_t i = 0; i < n; ++i) rayleigh += v[i] * w[i];
    normalize(w);
    std::swap(v, w);
    if (std::abs(rayleigh - previous) <= tol.abs_tol + tol.rel_tol * std::abs(rayleigh)) {
      return {rayleigh, v, it};
    }
    previous = rayleigh;
  }
  throw ConvergenceError("power_iteration: no convergence (near-degenerate dominant eigenvalues?)");
}

}  // namespace numerics
}  // namespace sigrho
