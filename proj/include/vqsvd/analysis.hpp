#pragma once

#include <cstdint>
#include <vector>

#include "vqsvd/ansatz.hpp"
#include "vqsvd/linalg.hpp"
#include "vqsvd/svd_methods.hpp"

namespace vqsvd {

// Per-index quality metrics of an estimated Schmidt spectrum against an
// oracle. Slots without a defined estimate (or without a positive oracle
// value) carry NaN and are excluded from aggregates.
struct ErrorReport {
  RealVector rel_errors;      // |1 - s_n / sigma_n|
  std::vector<bool> defined;  // estimate slot is defined
  RealVector infidelity;      // 1 - sum_{k<=n} s_k^2
  RealVector xi;              // -2 ln s_n, NaN for undefined or s_n <= 0
  double delta_est = 0.0;     // Schmidt gap xi_2 - xi_1 of the estimate
  double delta_oracle = 0.0;
  double delta_abs_error = 0.0;
  bool delta_defined = false;
  int undefined_count = 0;
};

// Oracle must be sorted non-increasing.
ErrorReport spectrum_metrics(const SpectrumResult& estimate,
                             const RealVector& oracle);

// True iff x is majorized by y: every prefix sum of sorted-descending x is
// at most the matching prefix of y (within tol) and totals agree within tol.
bool majorization_check(const RealVector& x, const RealVector& y,
                        double tol = 1e-12);

// Margin of the weighted upper bound: sum_n w_n sigma_n - i_final. Weights
// beyond the sigma list pair with zero.
double bound_check(double i_final, const ReferenceWeights& w,
                   const RealVector& sigmas);

// One row of the error-propagation study: mean relative recovery error per
// index for one exponent p, with per-index counts of diverged trials
// (non-positive or non-finite telescoped difference, or zero oracle value).
struct PropagationRow {
  double p = 1.0;
  RealVector mean_rel_error;        // NaN where every trial diverged
  std::vector<int> diverged_counts;
  bool diverged = false;
};

// Synthesizes noisy per-cutoff estimates s^(n)_k = sigma_k + U(-noise, noise)
// and recovers s_n = (S_n - S_{n-1})^(1/p) with S_n = sum_{k<=n} (s^(n)_k)^p.
// The same noise realizations feed every exponent. Deterministic per seed.
std::vector<PropagationRow> error_propagation_study(
    const RealVector& sigmas, double noise_scale,
    const std::vector<double>& p_exponents, int trials, std::uint64_t seed);

// Random doubly stochastic matrix via Sinkhorn normalization of positive
// uniforms; row and column sums reach 1 within 1e-12.
RealMatrix sinkhorn_doubly_stochastic(int n, std::uint64_t seed);

}  // namespace vqsvd
