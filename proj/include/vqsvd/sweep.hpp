#pragma once

#include <cstddef>
#include <vector>

#include "vqsvd/ansatz.hpp"
#include "vqsvd/linalg.hpp"
#include "vqsvd/state.hpp"

namespace vqsvd {

struct SweepConfig {
  double rel_tol = 1e-12;
  std::size_t max_sweeps = 100000;
  bool forward_and_backward = true;
};

// Weighted overlap objective I = Re sum_k w_k <k| U^dag T conj(V) |k>.
// target is the cut-local coefficient matrix (2^N x 2^M). For a single
// register (V absent), target column k is the target state for base |k>.
struct SweepObjective {
  ComplexMatrix target;
  RealVector weights;
};

struct SweepResult {
  std::vector<double> update_trace;   // objective after every gate update
  std::vector<double> sweep_trace;    // objective at the end of every sweep
  std::vector<double> sweep_wall_s;   // wall time per sweep
  bool converged = false;
  int sweeps_run = 0;
  double final_objective = 0.0;
};

// Alternating local updates: each gate in turn is replaced by the global
// maximizer of the objective with all other gates fixed (polar update from
// the SVD of its environment). Circuits are modified in place. A circuit
// with num_qubits == 0 denotes an absent register.
SweepResult sweep_optimize(LayeredCircuit& u, LayeredCircuit& v,
                           const SweepObjective& objective, const SweepConfig& config);

// Environment of one gate for the single-pair objective Re <base| U^dag |target>:
// F_{s,s'} = sum_rest L[(rest,s)] conj(R[(rest,s')]) with L the base evolved
// through the gates before gate_index and R the target pulled back through the
// adjoints of the gates after it. Direct reference implementation.
ComplexMatrix environment_tensor(const LayeredCircuit& circuit, const StateVector& base,
                                 int gate_index, const StateVector& target);

// Gate maximizing Re tr(G F): G = Y X^dag from the SVD F = X D Y^dag. The
// maximum value is the sum of the singular values of F.
ComplexMatrix local_update(const ComplexMatrix& f);

}  // namespace vqsvd
