#include "vqsvd/ansatz.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "vqsvd/rng.hpp"

namespace vqsvd {

LayeredCircuit build_layered(int num_qubits, int layers, std::uint64_t seed,
                             bool identity_init, int gate_size) {
  if (gate_size < 1 || gate_size > 3) {
    throw std::invalid_argument("build_layered: gate size must be 1, 2 or 3, got " +
                                std::to_string(gate_size));
  }
  if (num_qubits < gate_size) {
    throw std::invalid_argument("build_layered: " + std::to_string(num_qubits) +
                                " qubits cannot host " + std::to_string(gate_size) +
                                "-qubit gates");
  }
  if (layers < 1) throw std::invalid_argument("build_layered: layers must be positive");

  LayeredCircuit circuit;
  circuit.num_qubits = num_qubits;
  circuit.layers = layers;
  circuit.gate_size = gate_size;
  SplitMix64 rng(seed);
  int dim = 1 << gate_size;
  for (int layer = 0; layer < layers; ++layer) {
    for (int start = 1; start + gate_size - 1 <= num_qubits; ++start) {
      Gate g;
      g.matrix = identity_init ? ComplexMatrix::Identity(dim, dim) : haar_unitary(dim, rng);
      for (int t = 0; t < gate_size; ++t) g.targets.push_back(start + t);
      circuit.gates.push_back(std::move(g));
    }
  }
  return circuit;
}

StateVector apply_circuit(const LayeredCircuit& circuit, const StateVector& state) {
  if (circuit.num_qubits != state.num_qubits) {
    throw std::invalid_argument("apply_circuit: circuit on " +
                                std::to_string(circuit.num_qubits) + " qubits, state on " +
                                std::to_string(state.num_qubits));
  }
  StateVector out = state;
  for (const Gate& g : circuit.gates) out = apply_unitary(out, g.matrix, g.targets);
  return out;
}

ComplexMatrix circuit_columns(const LayeredCircuit& circuit, int columns) {
  std::uint64_t dim = std::uint64_t(1) << circuit.num_qubits;
  if (columns < 1 || std::uint64_t(columns) > dim) {
    throw std::invalid_argument("circuit_columns: column count out of range");
  }
  ComplexMatrix out(Eigen::Index(dim), columns);
  for (int k = 0; k < columns; ++k) {
    StateVector col = apply_circuit(circuit, StateVector::basis(circuit.num_qubits,
                                                                std::uint64_t(k)));
    out.col(k) = col.amplitudes;
  }
  return out;
}

ReferenceWeights reference_weights(double p, int d, std::optional<int> cutoff) {
  if (!(p > 0.0) || p > 1.0) {
    throw std::invalid_argument("reference_weights: p must be in (0,1], got " +
                                std::to_string(p));
  }
  if (d < 1) throw std::invalid_argument("reference_weights: D must be positive");
  int c = d;
  if (cutoff) {
    if (*cutoff < 1 || *cutoff > d) {
      throw std::invalid_argument("reference_weights: cutoff must be in [1,D], got " +
                                  std::to_string(*cutoff));
    }
    c = *cutoff;
  }
  ReferenceWeights out;
  out.p = p;
  out.cutoff = cutoff;
  out.weights = RealVector::Zero(d);
  for (int n = 0; n < c; ++n) out.weights[n] = std::pow(p, n);
  out.weights /= out.weights.norm();
  return out;
}

StateVector trial_state(const LayeredCircuit& u, const LayeredCircuit& v,
                        const ReferenceWeights& w, const BipartiteCut& cut) {
  int n_a = int(cut.subsystem_a.size());
  int n_b = int(cut.subsystem_b.size());
  int total = n_a + n_b;
  cut.validate(total);
  if (u.num_qubits != n_a || v.num_qubits != n_b) {
    std::ostringstream msg;
    msg << "trial_state: circuits on " << u.num_qubits << "|" << v.num_qubits
        << " qubits do not match the " << n_a << "|" << n_b << " cut";
    throw std::invalid_argument(msg.str());
  }
  Eigen::Index k_max = Eigen::Index(1) << std::min(n_a, n_b);
  if (w.weights.size() < 1 || w.weights.size() > k_max) {
    throw std::invalid_argument("trial_state: weight count exceeds 2^min(N,M)");
  }

  // Build sum_k w_k |k>_A |k>_B in the cut-local frame, rotate, then map the
  // local qubits back to the positions named by the cut.
  StateVector local = StateVector::zero(total);
  for (Eigen::Index k = 0; k < w.weights.size(); ++k) {
    local.amplitudes[k + (k << n_a)] = Complex(w.weights[k], 0.0);
  }
  for (const Gate& g : u.gates) local = apply_unitary(local, g.matrix, g.targets);
  for (const Gate& g : v.gates) {
    std::vector<int> shifted;
    for (int t : g.targets) shifted.push_back(t + n_a);
    local = apply_unitary(local, g.matrix, shifted);
  }

  std::vector<int> order;  // local qubit j+1 holds global qubit order[j]
  order.insert(order.end(), cut.subsystem_a.begin(), cut.subsystem_a.end());
  order.insert(order.end(), cut.subsystem_b.begin(), cut.subsystem_b.end());
  bool already_global = true;
  for (int j = 0; j < total; ++j) already_global = already_global && order[std::size_t(j)] == j + 1;
  if (already_global) return local;
  std::vector<int> inverse(static_cast<std::size_t>(total));
  for (int j = 0; j < total; ++j) inverse[std::size_t(order[std::size_t(j)] - 1)] = j + 1;
  return permute_qubits(local, inverse);
}

std::vector<double> omega_exponential(double p, int k) {
  if (!(p >= 0.0) || p >= 1.0) {
    throw std::invalid_argument("omega_exponential: p must be in [0,1), got " +
                                std::to_string(p));
  }
  if (k < 1) throw std::invalid_argument("omega_exponential: K must be positive");
  std::vector<double> angles;
  for (int i = 1; i <= k; ++i) {
    angles.push_back(2.0 * std::atan(std::pow(p, double(std::uint64_t(1) << (i - 1)))));
  }
  return angles;
}

StateVector omega_exponential_state(double p, int k) {
  std::vector<double> angles = omega_exponential(p, k);
  StateVector state = StateVector::basis(k, 0);
  for (int i = 1; i <= k; ++i) {
    double half = angles[std::size_t(i - 1)] / 2.0;
    ComplexMatrix ry(2, 2);
    ry << Complex(std::cos(half), 0.0), Complex(-std::sin(half), 0.0),
          Complex(std::sin(half), 0.0), Complex(std::cos(half), 0.0);
    state = apply_unitary(state, ry, {i});
  }
  return state;
}

namespace {

// sum_{n=0}^{m-1} x^n, stable for x = 1
double geometric_sum(double x, std::uint64_t m) {
  if (m == 0) return 0.0;
  if (std::abs(1.0 - x) < 1e-14) return double(m);
  return (1.0 - std::pow(x, double(m))) / (1.0 - x);
}

}  // namespace

ComplexMatrix omega_cutoff_core(double p, std::uint64_t c, int n_a) {
  if (!(p > 0.0) || p >= 1.0) {
    throw std::invalid_argument("omega_cutoff_core: p must be in (0,1), got " +
                                std::to_string(p));
  }
  if (c < 1) throw std::invalid_argument("omega_cutoff_core: cutoff must be positive");
  if (n_a < 1 || n_a > 62) throw std::invalid_argument("omega_cutoff_core: bad subsystem size");
  std::uint64_t d_a = std::uint64_t(1) << n_a;
  std::uint64_t a = c & (d_a - 1);
  std::uint64_t b = c >> n_a;

  double p2 = p * p;
  double q = std::pow(p2, double(d_a));  // p^(2*2^N_A)
  double na1 = geometric_sum(p2, a);
  double na2 = std::pow(p2, double(a)) * geometric_sum(p2, d_a - a);
  double nb1 = std::pow(q, double(b));
  double nb2 = geometric_sum(q, b);
  double n = na1 * nb1 + (na1 + na2) * nb2;
  if (!(n > 0.0)) throw std::runtime_error("omega_cutoff_core: normalization vanished");

  ComplexMatrix core = ComplexMatrix::Zero(2, 2);
  core(0, 0) = Complex(std::sqrt(na1 * nb1 / n), 0.0);
  core(0, 1) = Complex(std::sqrt(na1 * nb2 / n), 0.0);
  core(1, 1) = Complex(std::sqrt(na2 * nb2 / n), 0.0);
  return core;
}

StateVector omega_cutoff_state(double p, std::uint64_t c, int n_total) {
  if (!(p > 0.0) || p >= 1.0) {
    throw std::invalid_argument("omega_cutoff_state: p must be in (0,1), got " +
                                std::to_string(p));
  }
  std::uint64_t dim = std::uint64_t(1) << n_total;
  if (c < 1 || c > dim) {
    throw std::invalid_argument("omega_cutoff_state: cutoff out of range for " +
                                std::to_string(n_total) + " qubits");
  }
  StateVector state = StateVector::zero(n_total);
  for (std::uint64_t i = 0; i < c; ++i) {
    state.amplitudes[Eigen::Index(i)] = Complex(std::pow(p, double(i)), 0.0);
  }
  state.normalize();
  return state;
}

RealVector omega_hann_weights(int n_qubits) {
  if (n_qubits < 2) throw std::invalid_argument("omega_hann_weights: N must be at least 2");
  if (n_qubits > 24) throw std::invalid_argument("omega_hann_weights: N exceeds the 24-qubit cap");
  std::uint64_t dim = std::uint64_t(1) << n_qubits;
  RealVector w(static_cast<Eigen::Index>(dim));
  const double pi = std::acos(-1.0);
  for (std::uint64_t n = 0; n < dim; ++n) {
    w[Eigen::Index(n)] = 0.5 * (1.0 + std::cos(pi * double(n) / double(dim)));
  }
  w /= w.norm();
  return w;
}

nlohmann::json circuit_to_json(const LayeredCircuit& circuit) {
  nlohmann::json j;
  j["num_qubits"] = circuit.num_qubits;
  j["layers"] = circuit.layers;
  j["gate_size"] = circuit.gate_size;
  j["gates"] = nlohmann::json::array();
  for (const Gate& g : circuit.gates) {
    nlohmann::json gate;
    gate["targets"] = g.targets;
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index r = 0; r < g.matrix.rows(); ++r) {
      for (Eigen::Index c = 0; c < g.matrix.cols(); ++c) {
        rows.push_back({g.matrix(r, c).real(), g.matrix(r, c).imag()});
      }
    }
    gate["matrix"] = std::move(rows);
    j["gates"].push_back(std::move(gate));
  }
  return j;
}

LayeredCircuit circuit_from_json(const nlohmann::json& j) {
  LayeredCircuit circuit;
  circuit.num_qubits = j.at("num_qubits").get<int>();
  circuit.layers = j.at("layers").get<int>();
  circuit.gate_size = j.value("gate_size", 2);
  for (const nlohmann::json& gate : j.at("gates")) {
    Gate g;
    g.targets = gate.at("targets").get<std::vector<int>>();
    const nlohmann::json& entries = gate.at("matrix");
    Eigen::Index dim = Eigen::Index(1) << g.targets.size();
    if (Eigen::Index(entries.size()) != dim * dim) {
      throw std::invalid_argument("circuit_from_json: matrix entry count mismatch");
    }
    g.matrix.resize(dim, dim);
    Eigen::Index idx = 0;
    for (Eigen::Index r = 0; r < dim; ++r) {
      for (Eigen::Index c = 0; c < dim; ++c, ++idx) {
        g.matrix(r, c) = Complex(entries[std::size_t(idx)][0].get<double>(),
                                 entries[std::size_t(idx)][1].get<double>());
      }
    }
    circuit.gates.push_back(std::move(g));
  }
  return circuit;
}

}  // namespace vqsvd
