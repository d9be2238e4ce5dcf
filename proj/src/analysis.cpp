#include "vqsvd/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include "vqsvd/rng.hpp"

namespace vqsvd {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

}  // namespace

ErrorReport spectrum_metrics(const SpectrumResult& estimate,
                             const RealVector& oracle) {
  for (Eigen::Index n = 1; n < oracle.size(); ++n)
    if (oracle[n] > oracle[n - 1] + 1e-12)
      throw std::invalid_argument("oracle sigmas must be sorted non-increasing");

  const std::size_t count = estimate.values.size();
  ErrorReport report;
  report.rel_errors = RealVector::Constant(static_cast<Eigen::Index>(count), kNan);
  report.infidelity = RealVector::Constant(static_cast<Eigen::Index>(count), kNan);
  report.xi = RealVector::Constant(static_cast<Eigen::Index>(count), kNan);
  report.defined.assign(count, false);

  double cumulative = 0.0;
  for (std::size_t n = 0; n < count; ++n) {
    const bool ok = n < estimate.defined.size() && estimate.defined[n];
    report.defined[n] = ok;
    if (!ok) {
      ++report.undefined_count;
      continue;
    }
    const double s = estimate.values[n];
    const Eigen::Index idx = static_cast<Eigen::Index>(n);
    cumulative += s * s;
    report.infidelity[idx] = 1.0 - cumulative;
    if (s > 0.0) report.xi[idx] = -2.0 * std::log(s);
    if (idx < oracle.size() && oracle[idx] > 0.0)
      report.rel_errors[idx] = std::abs(1.0 - s / oracle[idx]);
  }

  report.delta_est = kNan;
  report.delta_oracle = kNan;
  report.delta_abs_error = kNan;
  if (count >= 2 && std::isfinite(report.xi[0]) && std::isfinite(report.xi[1]))
    report.delta_est = report.xi[1] - report.xi[0];
  if (oracle.size() >= 2 && oracle[1] > 0.0)
    report.delta_oracle = 2.0 * std::log(oracle[0] / oracle[1]);
  report.delta_defined =
      std::isfinite(report.delta_est) && std::isfinite(report.delta_oracle);
  if (report.delta_defined)
    report.delta_abs_error = std::abs(report.delta_est - report.delta_oracle);
  return report;
}

bool majorization_check(const RealVector& x, const RealVector& y, double tol) {
  if (x.size() != y.size())
    throw std::invalid_argument("majorization_check needs equal lengths, got " +
                                std::to_string(x.size()) + " and " +
                                std::to_string(y.size()));
  std::vector<double> xs(x.data(), x.data() + x.size());
  std::vector<double> ys(y.data(), y.data() + y.size());
  std::sort(xs.begin(), xs.end(), std::greater<double>());
  std::sort(ys.begin(), ys.end(), std::greater<double>());
  double px = 0.0, py = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    px += xs[k];
    py += ys[k];
    if (px > py + tol) return false;
  }
  return std::abs(px - py) <= tol;
}

double bound_check(double i_final, const ReferenceWeights& w,
                   const RealVector& sigmas) {
  double bound = 0.0;
  for (Eigen::Index n = 0; n < w.weights.size(); ++n)
    bound += w.weights[n] * (n < sigmas.size() ? sigmas[n] : 0.0);
  return bound - i_final;
}

std::vector<PropagationRow> error_propagation_study(
    const RealVector& sigmas, double noise_scale,
    const std::vector<double>& p_exponents, int trials, std::uint64_t seed) {
  for (double p : p_exponents)
    if (!(p > 0.0))
      throw std::invalid_argument("exponent p must be positive, got " +
                                  std::to_string(p));
  if (trials < 1)
    throw std::invalid_argument("trials must be at least 1, got " +
                                std::to_string(trials));
  if (noise_scale < 0.0)
    throw std::invalid_argument("noise_scale must be non-negative");

  const Eigen::Index count = sigmas.size();
  std::vector<PropagationRow> rows;
  for (double p : p_exponents) {
    PropagationRow row;
    row.p = p;
    row.mean_rel_error = RealVector::Zero(count);
    row.diverged_counts.assign(static_cast<std::size_t>(count), 0);
    rows.push_back(std::move(row));
  }
  std::vector<int> kept(static_cast<std::size_t>(count) *
                        p_exponents.size(), 0);

  // noisy[n](k) holds cutoff run n+1's estimate of sigma_k.
  std::vector<RealVector> noisy(static_cast<std::size_t>(count));
  for (int t = 0; t < trials; ++t) {
    SplitMix64 rng(mix_seed(seed, static_cast<std::uint64_t>(t)));
    for (Eigen::Index n = 0; n < count; ++n) {
      noisy[static_cast<std::size_t>(n)].resize(n + 1);
      for (Eigen::Index k = 0; k <= n; ++k)
        noisy[static_cast<std::size_t>(n)][k] =
            sigmas[k] + rng.uniform(-noise_scale, noise_scale);
    }
    for (std::size_t pi = 0; pi < p_exponents.size(); ++pi) {
      const double p = p_exponents[pi];
      PropagationRow& row = rows[pi];
      double prev_sum = 0.0;
      for (Eigen::Index n = 0; n < count; ++n) {
        double sum = 0.0;
        for (Eigen::Index k = 0; k <= n; ++k)
          sum += std::pow(noisy[static_cast<std::size_t>(n)][k], p);
        const double diff = sum - prev_sum;
        prev_sum = sum;
        const std::size_t slot = static_cast<std::size_t>(n);
        if (!(diff > 0.0) || !std::isfinite(diff) || !(sigmas[n] > 0.0)) {
          ++row.diverged_counts[slot];
          row.diverged = true;
          continue;
        }
        const double recovered = std::pow(diff, 1.0 / p);
        row.mean_rel_error[n] += std::abs(1.0 - recovered / sigmas[n]);
        ++kept[pi * static_cast<std::size_t>(count) + slot];
      }
    }
  }
  for (std::size_t pi = 0; pi < p_exponents.size(); ++pi)
    for (Eigen::Index n = 0; n < count; ++n) {
      const int used = kept[pi * static_cast<std::size_t>(count) +
                            static_cast<std::size_t>(n)];
      if (used > 0)
        rows[pi].mean_rel_error[n] /= used;
      else
        rows[pi].mean_rel_error[n] = kNan;
    }
  return rows;
}

RealMatrix sinkhorn_doubly_stochastic(int n, std::uint64_t seed) {
  if (n < 1)
    throw std::invalid_argument("matrix size must be positive, got " +
                                std::to_string(n));
  SplitMix64 rng(seed);
  RealMatrix q(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) q(r, c) = rng.uniform(0.1, 1.1);
  for (int iter = 0; iter < 100000; ++iter) {
    for (int r = 0; r < n; ++r) q.row(r) /= q.row(r).sum();
    for (int c = 0; c < n; ++c) q.col(c) /= q.col(c).sum();
    double dev = 0.0;
    for (int r = 0; r < n; ++r)
      dev = std::max(dev, std::abs(q.row(r).sum() - 1.0));
    for (int c = 0; c < n; ++c)
      dev = std::max(dev, std::abs(q.col(c).sum() - 1.0));
    if (dev <= 1e-12) return q;
  }
  throw std::runtime_error("sinkhorn iteration did not converge");
}

}  // namespace vqsvd
