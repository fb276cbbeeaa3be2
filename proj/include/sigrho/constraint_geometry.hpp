#pragma once

// Feasibility geometry of the (sigma, rho)-power constraint: a codeword
// x_1..x_n is admissible when every window of consecutive symbols satisfies
//
//     sum_{j=k+1}^{l} x_j^2 <= sigma + (l - k) * rho,   0 <= k < l <= n,
//
// equivalently when the battery recursion
//
//     s_0 = sigma,   s_{i+1} = min(sigma, s_i + rho - x_{i+1}^2)
//
// never goes negative.  All comparisons are exact (closed sets, no slack).

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "sigrho/numerics.hpp"
#include "sigrho/random.hpp"

namespace sigrho {

/// Battery capacity sigma >= 0 and per-slot recharge rho > 0.
class SigmaRhoParams {
 public:
  SigmaRhoParams(double sigma, double rho) : sigma_(sigma), rho_(rho) {
    if (!std::isfinite(sigma) || sigma < 0.0) {
      throw ValidationError("SigmaRhoParams: sigma must be finite and >= 0");
    }
    if (!std::isfinite(rho) || !(rho > 0.0)) {
      throw ValidationError("SigmaRhoParams: rho must be finite and > 0");
    }
  }

  double sigma() const { return sigma_; }
  double rho() const { return rho_; }

 private:
  double sigma_;
  double rho_;
};

using Codeword = std::vector<double>;

struct StateTrace {
  std::vector<double> states;  // s_0 .. s_n
};

namespace geometry {

inline void validate_codeword(std::span<const double> cw) {
  if (cw.empty()) {
    throw ValidationError("codeword must have at least one symbol");
  }
  for (double x : cw) {
    if (!std::isfinite(x)) {
      throw ValidationError("codeword entries must be finite");
    }
  }
}

inline StateTrace state_trace(const SigmaRhoParams& params, std::span<const double> cw) {
  validate_codeword(cw);
  StateTrace trace;
  trace.states.reserve(cw.size() + 1);
  double s = params.sigma();
  trace.states.push_back(s);
  for (double x : cw) {
    s = std::min(params.sigma(), s + params.rho() - x * x);
    trace.states.push_back(s);
  }
  return trace;
}

inline bool is_feasible(const SigmaRhoParams& params, std::span<const double> cw) {
  validate_codeword(cw);
  double s = params.sigma();
  for (double x : cw) {
    s = std::min(params.sigma(), s + params.rho() - x * x);
    if (s < 0.0) return false;
  }
  return true;
}

namespace detail {

// Prefix sums of x^2; compensated (Kahan) accumulation for long codewords.
inline std::vector<double> prefix_energy(std::span<const double> cw) {
  std::vector<double> prefix(cw.size() + 1, 0.0);
  if (cw.size() <= 1000) {
    for (std::size_t i = 0; i < cw.size(); ++i) prefix[i + 1] = prefix[i] + cw[i] * cw[i];
    return prefix;
  }
  double sum = 0.0;
  double carry = 0.0;
  for (std::size_t i = 0; i < cw.size(); ++i) {
    const double y = cw[i] * cw[i] - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
    prefix[i + 1] = sum;
  }
  return prefix;
}

}  // namespace detail

/// Direct O(n^2) evaluation of every window inequality.
inline bool window_check(const SigmaRhoParams& params, std::span<const double> cw) {
  validate_codeword(cw);
  const auto prefix = detail::prefix_energy(cw);
  const std::size_t n = cw.size();
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t l = k + 1; l <= n; ++l) {
      if (prefix[l] - prefix[k] > params.sigma() + static_cast<double>(l - k) * params.rho()) {
        return false;
      }
    }
  }
  return true;
}

/// Largest window excess  max_{k<l} [sum_{k<i<=l} x_i^2 - (l - k)]  at rho = 1.
/// Computed in O(n) as max over l of (S_l - min_{k<l} S_k) with S the partial
/// sums of x_i^2 - 1.  Callers with rho != 1 rescale first.
inline double burstiness(std::span<const double> cw) {
  validate_codeword(cw);
  double partial = 0.0;
  double min_prefix = 0.0;
  double best = -std::numeric_limits<double>::infinity();
  for (double x : cw) {
    partial += x * x - 1.0;
    best = std::max(best, partial - min_prefix);
    min_prefix = std::min(min_prefix, partial);
  }
  return best;
}

/// Appends ceil(sigma/rho) zeros after each block and concatenates.  Each
/// block must be feasible on its own; the zero run recharges the battery to
/// sigma, so the concatenation is feasible.
inline Codeword pad_and_concat(const SigmaRhoParams& params, std::span<const Codeword> blocks) {
  const auto pad = static_cast<std::size_t>(std::ceil(params.sigma() / params.rho()));
  Codeword out;
  for (const auto& block : blocks) {
    if (!is_feasible(params, block)) {
      throw ValidationError("pad_and_concat: input block is infeasible");
    }
    out.insert(out.end(), block.begin(), block.end());
    out.insert(out.end(), pad, 0.0);
  }
  return out;
}

/// Monte-Carlo estimate of P(burstiness(X^n) <= alpha*sqrt(n) and sum X_i^2 <= n)
/// for i.i.d. standard normal X_i.
inline double burstiness_walk_probability(int n, double alpha, std::uint64_t samples, std::uint64_t seed) {
  if (n < 1 || samples < 1) {
    throw ValidationError("burstiness_walk_probability: need n >= 1 and samples >= 1");
  }
  const double threshold = alpha * std::sqrt(static_cast<double>(n));
  const std::uint64_t hits = sharded_count(samples, seed, [n, threshold](RandomStream& rng, std::uint64_t count) {
    std::uint64_t local = 0;
    for (std::uint64_t s = 0; s < count; ++s) {
      double partial = 0.0;
      double min_prefix = 0.0;
      double burst = -std::numeric_limits<double>::infinity();
      double energy = 0.0;
      for (int i = 0; i < n; ++i) {
        const double x = rng.standard_normal();
        energy += x * x;
        partial += x * x - 1.0;
        burst = std::max(burst, partial - min_prefix);
        min_prefix = std::min(min_prefix, partial);
      }
      if (burst <= threshold && energy <= n) ++local;
    }
    return local;
  });
  return static_cast<double>(hits) / static_cast<double>(samples);
}

}  // namespace geometry
}  // namespace sigrho
