#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "vqsvd/linalg.hpp"

#include <nlohmann/json_fwd.hpp>

namespace vqsvd {

// Dense state on num_qubits qubits. Qubit q (1-based) maps to bit q-1 of the
// amplitude index, i.e. qubit 1 is the least significant bit; a basis label
// n_K...n_1 therefore reads with qubit 1 rightmost. Capped at 24 qubits.
struct StateVector {
  int num_qubits = 0;
  ComplexVector amplitudes;

  StateVector() = default;
  StateVector(int n_qubits, ComplexVector amps);

  static StateVector zero(int n_qubits);                       // |0...0>
  static StateVector basis(int n_qubits, std::uint64_t index);

  std::uint64_t dimension() const { return std::uint64_t(1) << num_qubits; }
  double norm() const { return amplitudes.norm(); }
  void normalize();
};

// Ordered, disjoint qubit index lists covering all qubits. subsystem_a[i]
// becomes local bit i of the row index of the coefficient matrix.
struct BipartiteCut {
  std::vector<int> subsystem_a;
  std::vector<int> subsystem_b;

  void validate(int num_qubits) const;
  bool is_contiguous(int num_qubits) const;  // a = 1..N, b = N+1..num_qubits
};

// First-half/second-half cut: a = 1..n_a, b = n_a+1..n.
BipartiteCut half_cut(int num_qubits, int n_a);

// Apply a 2^k x 2^k unitary to the listed qubits; targets[t] is gate-local
// bit t (so targets[0] is the gate's least significant qubit). Gate must be
// unitary within 1e-12. k up to 6 is supported.
StateVector apply_unitary(const StateVector& state, const ComplexMatrix& gate,
                          const std::vector<int>& targets);

// Two-qubit convenience wrapper over apply_unitary.
StateVector apply_gate(const StateVector& state, const ComplexMatrix& gate,
                       std::pair<int, int> targets);

// Relabel qubits: new qubit j+1 is old qubit new_order[j]. new_order must be
// a permutation of 1..num_qubits.
StateVector permute_qubits(const StateVector& state, const std::vector<int>& new_order);

// 2^N x 2^M matrix with C(n, m) = amplitude of |n, m> in the cut's local
// bit ordering (subsystem_a bits form n, subsystem_b bits form m).
ComplexMatrix coefficient_matrix(const StateVector& state, const BipartiteCut& cut);

// Schmidt decomposition: state = sum_k values[k] u_k (x) v_k with u_k, v_k
// the columns of left_vectors/right_vectors, expressed in the cut's local
// index spaces. values are non-increasing with sum of squares 1.
struct SchmidtDecomposition {
  RealVector values;
  ComplexMatrix left_vectors;
  ComplexMatrix right_vectors;
};
SchmidtDecomposition schmidt_decompose(const StateVector& state, const BipartiteCut& cut);

// <a|b>
Complex overlap(const StateVector& a, const StateVector& b);

// Appendix-style operator vectorization: for terms (gamma_i, G_i) on K
// qubits, returns sum_i gamma_i (G_i tensor I) |Phi+> on 2K qubits, where
// |Phi+> = 2^{-K/2} sum_n |n, n> and the G-register is qubits 1..K. The
// result is intentionally NOT normalized; its norm is ||A||_F 2^{-K/2} with
// A = sum_i gamma_i G_i.
StateVector vectorize_operator(const std::vector<std::pair<Complex, ComplexMatrix>>& terms);

// Little-endian binary format: magic "VQST", u32 version (1), u32 num_qubits,
// then 2^n (re, im) double pairs.
void save_state(const StateVector& state, const std::string& path);
StateVector load_state(const std::string& path);

// JSON form for small states (up to 16 qubits).
nlohmann::json state_to_json(const StateVector& state);
StateVector state_from_json(const nlohmann::json& j);

}  // namespace vqsvd
