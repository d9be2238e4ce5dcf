#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "vqsvd/linalg.hpp"
#include "vqsvd/state.hpp"

namespace vqsvd {

// One gate of a layered circuit. targets[t] is the qubit carrying gate-local
// bit t, so a gate on (3,4) maps local index (s_low + 2*s_high) to qubits 3,4.
struct Gate {
  ComplexMatrix matrix;
  std::vector<int> targets;
};

// Staircase ansatz: per layer, gates on qubits (1..g),(2..g+1),...,(n-g+1..n),
// applied first to last. gate_size g is 2 for the standard ansatz; 1 and 3 are
// used by the state-preparation studies.
struct LayeredCircuit {
  int num_qubits = 0;
  int layers = 0;
  int gate_size = 2;
  std::vector<Gate> gates;
};

LayeredCircuit build_layered(int num_qubits, int layers, std::uint64_t seed,
                             bool identity_init = false, int gate_size = 2);

StateVector apply_circuit(const LayeredCircuit& circuit, const StateVector& state);

// Circuit acting on the first `columns` basis states, as a dense
// 2^num_qubits x columns matrix (column k = circuit applied to |k>).
ComplexMatrix circuit_columns(const LayeredCircuit& circuit, int columns);

// Geometric reference weights w_n = p^{n-1} w_1, normalized to sum of squares
// one. With a cutoff c, entries beyond c are zero and the first c renormalize.
struct ReferenceWeights {
  RealVector weights;
  double p = 1.0;
  std::optional<int> cutoff;
};

ReferenceWeights reference_weights(double p, int d, std::optional<int> cutoff = std::nullopt);

// |Psi> = sum_k w_k (U|k>) (x) (V|k>) on the qubits named by the cut.
StateVector trial_state(const LayeredCircuit& u, const LayeredCircuit& v,
                        const ReferenceWeights& w, const BipartiteCut& cut);

// Rotation angles theta_i = 2 atan(p^(2^(i-1))) whose Ry product prepares
// amplitudes proportional to p^n on K qubits.
std::vector<double> omega_exponential(double p, int k);

// State prepared by applying those rotations to |0...0>.
StateVector omega_exponential_state(double p, int k);

// Exact 2x2 coefficient matrix of the cutoff weight state (amplitudes p^n for
// n < c, zero beyond) across the cut at n_a qubits, using c = 2^n_a * b + a.
ComplexMatrix omega_cutoff_core(double p, std::uint64_t c, int n_a);

// The cutoff weight state itself, on n_total qubits.
StateVector omega_cutoff_state(double p, std::uint64_t c, int n_total);

// Hann window weights w_n proportional to (1 + cos(pi n / 2^N)) / 2, normalized.
RealVector omega_hann_weights(int n_qubits);

nlohmann::json circuit_to_json(const LayeredCircuit& circuit);
LayeredCircuit circuit_from_json(const nlohmann::json& j);

}  // namespace vqsvd
