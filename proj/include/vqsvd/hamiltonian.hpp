#pragma once

#include <Eigen/SparseCore>
#include <optional>
#include <string>
#include <vector>

#include "vqsvd/state.hpp"

#include <nlohmann/json_fwd.hpp>

namespace vqsvd {

// Spin-1/2 convention: |0> is up, S^z = diag(1/2, -1/2), S^+ = |0><1|.
// S_i . S_j = S^z_i S^z_j + (S^+_i S^-_j + S^-_i S^+_j) / 2.

enum class LatticeVariant { chain, square, ladder };

struct LatticeSpec {
  LatticeVariant variant = LatticeVariant::chain;
  int length = 0;        // chain sites, or ladder rungs
  int lx = 0, ly = 0;    // square lattice extents
  double j = 1.0;        // chain/square coupling
  double j_par = 1.0;    // ladder leg coupling
  double j_perp = 0.0;   // ladder rung coupling
  double twist = 0.0;    // twist angle (radians); ladder only
  bool twisted_boundary = false;
  std::vector<int> site_to_qubit;  // bijection, filled by the factory functions

  int num_qubits() const { return int(site_to_qubit.size()); }
  void validate() const;
};

// Open chain of L sites, qubit i = site i.
LatticeSpec chain_spec(int length, double coupling);

// Open Lx x Ly lattice; sites snake row-major: odd rows left-to-right, even
// rows right-to-left, so the first two rows of a 4x4 lattice are qubits
// 1,2,3,4 and 8,7,6,5. Site id for coordinates (x, y) is (y-1)*Lx + x.
LatticeSpec square_spec(int lx, int ly, double coupling);

// Two-leg ladder with L rungs, legs coupled by j_par, rungs by j_perp.
// Legs are closed with a twist: S^{+-}_{l, L+1} = e^{+-i twist} S^{+-}_{l, 1}
// (S^z untouched). Site id for (leg l, rung n) is 2(n-1) + l, which is also
// the qubit, so subsystem A = first L/2 rungs is contiguous.
LatticeSpec ladder_spec(int rungs, double j_par, double j_perp, double twist);

struct Bond {
  int qubit_i = 0;
  int qubit_j = 0;
  double coupling = 0.0;
  Complex flip_phase{1.0, 0.0};  // phase on S^+_i S^-_j (conjugated on the mirror term)
};

// Bond list implied by a lattice spec, in qubit labels.
std::vector<Bond> lattice_bonds(const LatticeSpec& spec);

struct SparseOperator {
  int num_qubits = 0;
  Eigen::SparseMatrix<Complex> matrix;

  std::uint64_t dimension() const { return std::uint64_t(1) << num_qubits; }
};

// Heisenberg Hamiltonian for the given lattice. Checked Hermitian within 1e-12 and
// total-S^z conserving (every nonzero entry connects equal-popcount states).
SparseOperator build_hamiltonian(const LatticeSpec& spec);

struct GroundStateResult {
  double energy = 0.0;
  StateVector state;
  double residual = 0.0;  // ||H psi - E psi||
  int iterations = 0;
  bool degenerate = false;  // first excited Ritz gap < 1e-10
  bool converged = false;
};

// Lanczos with full reorthogonalization (Krylov dimension <= 200, restarts on
// stagnation). Deterministic for a given seed. Optional sector pins the total
// S^z (in units of 1/2, e.g. 0 for the Sz = 0 sector) via the start vector;
// H conserves the sector exactly. Throws std::runtime_error with the final
// residual if the iteration does not reach tol * spectral scale.
GroundStateResult ground_state(const SparseOperator& h, double tol, std::uint64_t seed,
                               std::optional<int> total_sz_twice = std::nullopt);

nlohmann::json lattice_to_json(const LatticeSpec& spec);
LatticeSpec lattice_from_json(const nlohmann::json& j);

}  // namespace vqsvd
