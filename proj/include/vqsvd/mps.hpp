#pragma once

#include <array>
#include <optional>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "vqsvd/linalg.hpp"
#include "vqsvd/state.hpp"

namespace vqsvd {

// Site tensor: m[s] has shape chi_i x chi_(i-1); the column index points
// toward the center cut, the row index toward the register edge.
struct MpsTensor {
  std::array<ComplexMatrix, 2> m;
};

// Two canonical MPS halves meeting at the cut: sites are numbered 1..N from
// the cut outward on each side. a_bonds[i] = chi_i with a_bonds[0] the center
// rank and a_bonds[N] = 1 at the register edge. Every tensor satisfies
// sum_s m[s]^dag m[s] = I on the center-facing bond.
struct CanonicalMps {
  std::vector<MpsTensor> a, b;
  RealVector weights;  // center Schmidt weights, unit l2 norm
  std::vector<int> a_bonds, b_bonds;
  BipartiteCut cut;
};

// Exact (or bond-truncated) canonical MPS of a state across a contiguous cut.
// Truncation keeps the leading singular values and rescales to preserve the
// norm; the center weights are renormalized after a drop.
CanonicalMps state_to_mps(const StateVector& state, const BipartiteCut& cut,
                          std::optional<int> max_bond = std::nullopt);

struct CanonicalReport {
  std::vector<double> a_deviation, b_deviation;  // per-site max |sum m^dag m - I|
  double weight_norm_deviation = 0.0;
  double max_deviation = 0.0;
  bool pass = false;  // all deviations at most 1e-10
};

CanonicalReport verify_canonical(const CanonicalMps& mps);

// Direct tensor contraction of the MPS back to a state vector.
StateVector mps_reconstruct_state(const CanonicalMps& mps);

// Staircase gates embedding each site tensor as an isometry completed to a
// unitary. Gate i of a side acts on that side's qubits [i, i + size - 1].
struct MpsGates {
  std::vector<ComplexMatrix> u_gates, v_gates;
  std::vector<int> u_sizes, v_sizes;
  RealVector weights;
};

// Rejects non-canonical input (the completion needs isometric tensors).
MpsGates mps_to_unitaries(const CanonicalMps& mps);

// Prepares sum_k w_k |k>_A |k>_B and applies both staircases.
StateVector gates_to_state(const MpsGates& gates, int n_a, int n_b);

nlohmann::json mps_to_json(const CanonicalMps& mps);

}  // namespace vqsvd
