#include "vqsvd/svd_methods.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "vqsvd/rng.hpp"

namespace vqsvd {

namespace {

constexpr double nan_value = std::numeric_limits<double>::quiet_NaN();

int effective_gate_size(int register_qubits) { return std::min(2, register_qubits); }

// sorted non-increasing
std::vector<double> sorted_desc(std::vector<double> v) {
  std::sort(v.begin(), v.end(), std::greater<double>());
  return v;
}

std::vector<double> oracle_values(const StateVector& target, const BipartiteCut& cut) {
  SchmidtDecomposition dec = schmidt_decompose(target, cut);
  return std::vector<double>(dec.values.begin(), dec.values.end());
}

// xi, fidelity and oracle comparison columns from the value list
void finish_result(SpectrumResult& result, const std::vector<double>& oracle) {
  result.oracle = oracle;
  result.xi.assign(result.values.size(), nan_value);
  result.fidelity.assign(result.values.size(), 0.0);
  result.rel_errors.assign(result.values.size(), nan_value);
  double cumulative = 0.0;
  for (std::size_t n = 0; n < result.values.size(); ++n) {
    if (result.defined[n]) {
      double s = result.values[n];
      if (s > 0.0) result.xi[n] = -2.0 * std::log(s);
      cumulative += s * s;
      if (n < oracle.size() && oracle[n] > 1e-300) {
        result.rel_errors[n] = std::abs(s - oracle[n]) / oracle[n];
      }
    }
    result.fidelity[n] = cumulative;
  }
}

// leading strictly positive prefix of the weight vector
RealVector trimmed_weights(const ReferenceWeights& w) {
  Eigen::Index k = 0;
  while (k < w.weights.size() && w.weights[k] > 0.0) ++k;
  if (k == 0) throw std::invalid_argument("weights have no positive entries");
  return w.weights.head(k);
}

// diagonal overlaps c_k = u_k^dag T conj(v_k) for k < count
ComplexVector diagonal_overlaps(const LayeredCircuit& u, const LayeredCircuit& v,
                                const ComplexMatrix& t, int count) {
  ComplexMatrix u_cols = circuit_columns(u, count);
  ComplexMatrix v_cols = circuit_columns(v, count);
  ComplexVector c(count);
  for (int k = 0; k < count; ++k) {
    c[k] = u_cols.col(k).adjoint() * t * v_cols.col(k).conjugate();
  }
  return c;
}

struct CutFrame {
  int n_a = 0;
  int n_b = 0;
  ComplexMatrix t;
  std::vector<double> oracle;
};

CutFrame cut_frame(const StateVector& target, const BipartiteCut& cut) {
  cut.validate(target.num_qubits);
  if (cut.subsystem_a.empty() || cut.subsystem_b.empty()) {
    throw std::invalid_argument("cut must leave both subsystems non-empty");
  }
  CutFrame frame;
  frame.n_a = int(cut.subsystem_a.size());
  frame.n_b = int(cut.subsystem_b.size());
  frame.t = coefficient_matrix(target, cut);
  frame.oracle = oracle_values(target, cut);
  return frame;
}

}  // namespace

void DeflationLedger::append(const LayeredCircuit& u, const LayeredCircuit& v,
                             const ComplexMatrix& target_matrix) {
  ComplexVector u_new = circuit_columns(u, 1).col(0);
  ComplexVector v_new = circuit_columns(v, 1).col(0);
  if (u_new.size() != target_matrix.rows() || v_new.size() != target_matrix.cols()) {
    throw std::invalid_argument("ledger append: state sizes do not match the target matrix");
  }
  if (std::abs(u_new.norm() - 1.0) > 1e-12 || std::abs(v_new.norm() - 1.0) > 1e-12) {
    throw std::invalid_argument("ledger append: extracted states are not normalized");
  }
  int n = steps();
  a_overlaps.conservativeResize(n + 1, n + 1);
  b_overlaps.conservativeResize(n + 1, n + 1);
  cross.conservativeResize(n + 1, n + 1);
  for (int k = 0; k < n; ++k) {
    a_overlaps(k, n) = u_states[std::size_t(k)].dot(u_new);
    a_overlaps(n, k) = std::conj(a_overlaps(k, n));
    b_overlaps(k, n) = v_states[std::size_t(k)].dot(v_new);
    b_overlaps(n, k) = std::conj(b_overlaps(k, n));
    cross(n, k) = u_new.adjoint() * target_matrix * v_states[std::size_t(k)].conjugate();
    cross(k, n) = u_states[std::size_t(k)].adjoint() * target_matrix * v_new.conjugate();
  }
  a_overlaps(n, n) = Complex(1.0, 0.0);
  b_overlaps(n, n) = Complex(1.0, 0.0);
  cross(n, n) = u_new.adjoint() * target_matrix * v_new.conjugate();
  u_circuits.push_back(u);
  v_circuits.push_back(v);
  u_states.push_back(std::move(u_new));
  v_states.push_back(std::move(v_new));
}

SpectrumResult full_svd(const StateVector& target, const BipartiteCut& cut, int layers,
                        const ReferenceWeights& w, const SweepConfig& config,
                        std::uint64_t seed, bool identity_init) {
  CutFrame frame = cut_frame(target, cut);
  RealVector weights = trimmed_weights(w);
  Eigen::Index k_max = Eigen::Index(1) << std::min(frame.n_a, frame.n_b);
  if (weights.size() > k_max) {
    throw std::invalid_argument("full_svd: weight count exceeds 2^min(N,M)");
  }
  int k = int(weights.size());

  LayeredCircuit u = build_layered(frame.n_a, layers, mix_seed(seed, 1), identity_init,
                                   effective_gate_size(frame.n_a));
  LayeredCircuit v = build_layered(frame.n_b, layers, mix_seed(seed, 2), identity_init,
                                   effective_gate_size(frame.n_b));
  SweepResult sweep = sweep_optimize(u, v, {frame.t, weights}, config);

  ComplexVector diag = diagonal_overlaps(u, v, frame.t, k);
  std::vector<double> moduli(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) moduli[std::size_t(i)] = std::abs(diag[i]);

  SpectrumResult result;
  result.method = "full";
  result.values = sorted_desc(moduli);
  result.defined.assign(result.values.size(), true);
  finish_result(result, frame.oracle);

  double bound = 0.0;
  for (int n = 0; n < k && n < int(frame.oracle.size()); ++n) {
    bound += weights[n] * frame.oracle[std::size_t(n)];
  }
  result.metadata = {
      {"layers", layers},
      {"weight_count", k},
      {"decay", w.p},
      {"seed", seed},
      {"identity_init", identity_init},
      {"converged", sweep.converged},
      {"sweeps", sweep.sweeps_run},
      {"final_objective", sweep.final_objective},
      {"objective_bound", bound},
      {"bound_margin", bound - sweep.final_objective},
      {"sweep_trace", sweep.sweep_trace},
  };
  if (w.cutoff) result.metadata["cutoff"] = *w.cutoff;
  return result;
}

TelescopeResult telescope_differences(const std::vector<int>& cutoffs,
                                      const std::vector<double>& cumulative_sums) {
  if (cutoffs.size() != cumulative_sums.size()) {
    throw std::invalid_argument("telescope_differences: length mismatch");
  }
  if (cutoffs.empty()) throw std::invalid_argument("telescope_differences: no cutoffs");
  for (std::size_t i = 0; i < cutoffs.size(); ++i) {
    if (cutoffs[i] < 1 || (i > 0 && cutoffs[i] <= cutoffs[i - 1])) {
      throw std::invalid_argument("telescope_differences: cutoffs must be ascending and positive");
    }
  }
  int max_cutoff = cutoffs.back();
  TelescopeResult out;
  out.values.assign(std::size_t(max_cutoff), nan_value);
  out.defined.assign(std::size_t(max_cutoff), false);
  for (std::size_t i = 0; i < cutoffs.size(); ++i) {
    int c = cutoffs[i];
    double previous = 0.0;
    if (c > 1) {
      // needs the run at c-1
      if (i == 0 || cutoffs[i - 1] != c - 1) continue;
      previous = cumulative_sums[i - 1];
    }
    double difference = cumulative_sums[i] - previous;
    if (difference > 0.0) {
      out.values[std::size_t(c - 1)] = difference;
      out.defined[std::size_t(c - 1)] = true;
    }
  }
  return out;
}

SpectrumResult partial_svd(const StateVector& target, const BipartiteCut& cut, int layers,
                           double p_decay, const std::vector<int>& cutoffs,
                           const SweepConfig& config, std::uint64_t seed, bool identity_init) {
  CutFrame frame = cut_frame(target, cut);
  int d = 1 << std::min(frame.n_a, frame.n_b);
  if (cutoffs.empty() || cutoffs.front() != 1) {
    throw std::invalid_argument("partial_svd: cutoff list must start at 1");
  }
  for (std::size_t i = 0; i < cutoffs.size(); ++i) {
    if (cutoffs[i] > d || (i > 0 && cutoffs[i] <= cutoffs[i - 1])) {
      throw std::invalid_argument("partial_svd: cutoffs must be ascending and at most 2^min(N,M)");
    }
  }

  std::vector<double> sums;
  nlohmann::json runs = nlohmann::json::array();
  for (std::size_t i = 0; i < cutoffs.size(); ++i) {
    int c = cutoffs[i];
    ReferenceWeights w = reference_weights(p_decay, d, c);
    RealVector weights = trimmed_weights(w);
    LayeredCircuit u = build_layered(frame.n_a, layers, mix_seed(seed, 2 * std::uint64_t(c)),
                                     identity_init, effective_gate_size(frame.n_a));
    LayeredCircuit v = build_layered(frame.n_b, layers, mix_seed(seed, 2 * std::uint64_t(c) + 1),
                                     identity_init, effective_gate_size(frame.n_b));
    SweepResult sweep = sweep_optimize(u, v, {frame.t, weights}, config);
    ComplexVector diag = diagonal_overlaps(u, v, frame.t, c);
    std::vector<double> moduli(static_cast<std::size_t>(c));
    for (int n = 0; n < c; ++n) moduli[std::size_t(n)] = std::abs(diag[n]);
    moduli = sorted_desc(moduli);
    double sum = 0.0;
    for (double m : moduli) sum += m;
    sums.push_back(sum);
    runs.push_back({{"cutoff", c},
                    {"converged", sweep.converged},
                    {"sweeps", sweep.sweeps_run},
                    {"final_objective", sweep.final_objective},
                    {"cumulative_sum", sum},
                    {"values", moduli}});
  }

  TelescopeResult tel = telescope_differences(cutoffs, sums);
  SpectrumResult result;
  result.method = "partial";
  result.values = tel.values;
  result.defined = tel.defined;
  finish_result(result, frame.oracle);
  result.metadata = {
      {"layers", layers},
      {"decay", p_decay},
      {"seed", seed},
      {"identity_init", identity_init},
      {"cutoffs", cutoffs},
      {"runs", runs},
  };
  return result;
}

namespace {

struct DeflationStepTrace {
  nlohmann::json steps = nlohmann::json::array();
  int early_stop = 0;  // 0 = ran all steps
};

// Shared deflation loop: residual_matrix(ledger) supplies the unnormalized
// residual target for the next step.
template <typename ResidualFn>
DeflationStepTrace deflation_loop(DeflationLedger& ledger, const CutFrame& frame, int layers,
                                  int steps, const SweepConfig& config, std::uint64_t seed,
                                  bool identity_init, ResidualFn residual_matrix,
                                  std::vector<RealVector>* per_step_spectra) {
  DeflationStepTrace trace;
  for (int n = 1; n <= steps; ++n) {
    ComplexMatrix residual = residual_matrix(ledger);
    double alpha = residual.norm();
    if (alpha < 1e-14) {
      trace.early_stop = n;
      break;
    }
    residual /= alpha;
    LayeredCircuit u = build_layered(frame.n_a, layers, mix_seed(seed, 2 * std::uint64_t(n)),
                                     identity_init, effective_gate_size(frame.n_a));
    LayeredCircuit v = build_layered(frame.n_b, layers, mix_seed(seed, 2 * std::uint64_t(n) + 1),
                                     identity_init, effective_gate_size(frame.n_b));
    RealVector one = RealVector::Ones(1);
    SweepResult sweep = sweep_optimize(u, v, {residual, one}, config);
    ledger.append(u, v, frame.t);
    Complex raw = ledger.cross(n - 1, n - 1);
    trace.steps.push_back({{"step", n},
                           {"residual_norm", alpha},
                           {"converged", sweep.converged},
                           {"sweeps", sweep.sweeps_run},
                           {"final_objective", sweep.final_objective},
                           {"raw_overlap", {raw.real(), raw.imag()}}});
    if (per_step_spectra) {
      SvdResult core = svd(core_matrix(ledger));
      per_step_spectra->push_back(core.values);
    }
  }
  return trace;
}

}  // namespace

DeflationOutput simple_deflation(const StateVector& target, const BipartiteCut& cut, int layers,
                                 int steps, const SweepConfig& config, std::uint64_t seed,
                                 bool identity_init) {
  if (steps < 1) throw std::invalid_argument("simple_deflation: steps must be positive");
  CutFrame frame = cut_frame(target, cut);
  DeflationOutput out;
  out.ledger.eps = 1e-12;

  auto residual = [&frame](const DeflationLedger& ledger) {
    ComplexMatrix r = frame.t;
    for (int m = 0; m < ledger.steps(); ++m) {
      r.noalias() -= ledger.cross(m, m) * ledger.u_states[std::size_t(m)] *
                     ledger.v_states[std::size_t(m)].transpose();
    }
    return r;
  };
  DeflationStepTrace trace = deflation_loop(out.ledger, frame, layers, steps, config, seed,
                                            identity_init, residual, nullptr);

  SpectrumResult& result = out.spectrum;
  result.method = "simple";
  int negative_raws = 0;
  for (int n = 0; n < out.ledger.steps(); ++n) {
    double raw = out.ledger.cross(n, n).real();
    if (raw < 0.0) ++negative_raws;
    result.values.push_back(std::max(raw, 0.0));
  }
  result.defined.assign(result.values.size(), true);
  finish_result(result, frame.oracle);
  result.metadata = {
      {"layers", layers},
      {"steps_requested", steps},
      {"steps_completed", out.ledger.steps()},
      {"seed", seed},
      {"identity_init", identity_init},
      {"negative_raw_count", negative_raws},
      {"step_trace", trace.steps},
  };
  if (trace.early_stop > 0) result.metadata["early_stop_step"] = trace.early_stop;
  return out;
}

DeflationOutput improved_deflation(const StateVector& target, const BipartiteCut& cut, int layers,
                                   int steps, double eps, const SweepConfig& config,
                                   std::uint64_t seed, bool identity_init,
                                   std::vector<RealVector>* per_step_spectra) {
  if (steps < 1) throw std::invalid_argument("improved_deflation: steps must be positive");
  if (!(eps > 0.0)) throw std::invalid_argument("improved_deflation: eps must be positive");
  CutFrame frame = cut_frame(target, cut);
  DeflationOutput out;
  out.ledger.eps = eps;

  auto residual = [&frame](const DeflationLedger& ledger) {
    if (ledger.steps() == 0) return frame.t;
    int n = ledger.steps();
    Eigen::Index rows = frame.t.rows(), cols = frame.t.cols();
    ComplexMatrix u_basis(rows, n), v_basis(cols, n);
    for (int m = 0; m < n; ++m) {
      u_basis.col(m) = ledger.u_states[std::size_t(m)];
      v_basis.col(m) = ledger.v_states[std::size_t(m)];
    }
    ComplexMatrix a_pinv = thresholded_pseudo_inverse(ledger.a_overlaps, ledger.eps);
    ComplexMatrix b_pinv = thresholded_pseudo_inverse(ledger.b_overlaps, ledger.eps);
    ComplexMatrix p_a = u_basis * a_pinv * u_basis.adjoint();
    ComplexMatrix p_b = v_basis * b_pinv * v_basis.adjoint();
    return ComplexMatrix(frame.t - p_a * frame.t * p_b.transpose());
  };
  DeflationStepTrace trace = deflation_loop(out.ledger, frame, layers, steps, config, seed,
                                            identity_init, residual, per_step_spectra);

  SpectrumResult& result = out.spectrum;
  result.method = "improved";
  if (out.ledger.steps() > 0) {
    SvdResult core = svd(core_matrix(out.ledger));
    result.values.assign(core.values.begin(), core.values.end());
    std::sort(result.values.begin(), result.values.end(), std::greater<double>());
  }
  result.defined.assign(result.values.size(), true);
  finish_result(result, frame.oracle);
  double captured = result.fidelity.empty() ? 0.0 : result.fidelity.back();
  result.metadata = {
      {"layers", layers},
      {"steps_requested", steps},
      {"steps_completed", out.ledger.steps()},
      {"eps", eps},
      {"seed", seed},
      {"identity_init", identity_init},
      {"projected_fidelity", captured},
      {"step_trace", trace.steps},
  };
  if (trace.early_stop > 0) result.metadata["early_stop_step"] = trace.early_stop;
  return out;
}

ComplexMatrix core_matrix(const DeflationLedger& ledger) {
  int n = ledger.steps();
  if (n == 0) throw std::invalid_argument("core_matrix: empty ledger");
  EighResult a = eigh(ledger.a_overlaps);
  EighResult b = eigh(ledger.b_overlaps);
  RealVector ta(n), tb(n);
  for (int i = 0; i < n; ++i) {
    ta[i] = std::sqrt(pinv_filter(a.values[i], ledger.eps));
    tb[i] = std::sqrt(pinv_filter(b.values[i], ledger.eps));
  }
  ComplexMatrix core = a.vectors.adjoint() * ledger.cross * b.vectors.conjugate();
  for (int i = 0; i < n; ++i) core.row(i) *= ta[i];
  for (int j = 0; j < n; ++j) core.col(j) *= tb[j];
  return core;
}

Complex projected_overlap(const DeflationLedger& ledger, const ComplexVector& u,
                          const ComplexVector& v, const ComplexMatrix& target_matrix) {
  if (u.size() != target_matrix.rows() || v.size() != target_matrix.cols()) {
    throw std::invalid_argument("projected_overlap: dimension mismatch");
  }
  Complex direct = u.adjoint() * target_matrix * v.conjugate();
  int n = ledger.steps();
  if (n == 0) return direct;
  ComplexVector a_row(n), b_row(n);
  for (int k = 0; k < n; ++k) {
    a_row[k] = u.dot(ledger.u_states[std::size_t(k)]);
    b_row[k] = v.dot(ledger.v_states[std::size_t(k)]);
  }
  ComplexMatrix a_pinv = thresholded_pseudo_inverse(ledger.a_overlaps, ledger.eps);
  ComplexMatrix b_pinv = thresholded_pseudo_inverse(ledger.b_overlaps, ledger.eps);
  ComplexMatrix captured =
      a_row.transpose() * a_pinv * ledger.cross * b_pinv.transpose() * b_row;
  return direct - captured(0, 0);
}

nlohmann::json spectrum_to_json(const SpectrumResult& result) {
  auto column = [](const std::vector<double>& v, const std::vector<bool>& defined,
                   bool gate_on_defined) {
    nlohmann::json out = nlohmann::json::array();
    for (std::size_t i = 0; i < v.size(); ++i) {
      bool ok = std::isfinite(v[i]) && (!gate_on_defined || defined[i]);
      if (ok) out.push_back(v[i]);
      else out.push_back(nullptr);
    }
    return out;
  };
  nlohmann::json j;
  j["method"] = result.method;
  j["values"] = column(result.values, result.defined, true);
  j["defined"] = result.defined;
  j["xi"] = column(result.xi, result.defined, true);
  j["fidelity"] = column(result.fidelity, result.defined, false);
  j["oracle"] = result.oracle;
  j["rel_errors"] = column(result.rel_errors, result.defined, true);
  j["metadata"] = result.metadata;
  return j;
}

nlohmann::json ledger_to_json(const DeflationLedger& ledger) {
  auto matrix_json = [](const ComplexMatrix& m) {
    nlohmann::json out = nlohmann::json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) out.push_back({m(r, c).real(), m(r, c).imag()});
    }
    return out;
  };
  nlohmann::json j;
  j["steps"] = ledger.steps();
  j["eps"] = ledger.eps;
  j["u_circuits"] = nlohmann::json::array();
  j["v_circuits"] = nlohmann::json::array();
  for (const LayeredCircuit& c : ledger.u_circuits) j["u_circuits"].push_back(circuit_to_json(c));
  for (const LayeredCircuit& c : ledger.v_circuits) j["v_circuits"].push_back(circuit_to_json(c));
  j["a_overlaps"] = matrix_json(ledger.a_overlaps);
  j["b_overlaps"] = matrix_json(ledger.b_overlaps);
  j["cross"] = matrix_json(ledger.cross);
  return j;
}

DeflationLedger ledger_from_json(const nlohmann::json& j) {
  DeflationLedger ledger;
  ledger.eps = j.at("eps").get<double>();
  int n = j.at("steps").get<int>();
  auto matrix_from = [n](const nlohmann::json& entries) {
    if (int(entries.size()) != n * n) {
      throw std::invalid_argument("ledger_from_json: matrix entry count mismatch");
    }
    ComplexMatrix m(n, n);
    int idx = 0;
    for (int r = 0; r < n; ++r) {
      for (int c = 0; c < n; ++c, ++idx) {
        m(r, c) = Complex(entries[std::size_t(idx)][0].get<double>(),
                          entries[std::size_t(idx)][1].get<double>());
      }
    }
    return m;
  };
  for (const nlohmann::json& c : j.at("u_circuits")) {
    ledger.u_circuits.push_back(circuit_from_json(c));
    ledger.u_states.push_back(circuit_columns(ledger.u_circuits.back(), 1).col(0));
  }
  for (const nlohmann::json& c : j.at("v_circuits")) {
    ledger.v_circuits.push_back(circuit_from_json(c));
    ledger.v_states.push_back(circuit_columns(ledger.v_circuits.back(), 1).col(0));
  }
  if (int(ledger.u_circuits.size()) != n || int(ledger.v_circuits.size()) != n) {
    throw std::invalid_argument("ledger_from_json: circuit count mismatch");
  }
  ledger.a_overlaps = matrix_from(j.at("a_overlaps"));
  ledger.b_overlaps = matrix_from(j.at("b_overlaps"));
  ledger.cross = matrix_from(j.at("cross"));
  return ledger;
}

}  // namespace vqsvd
