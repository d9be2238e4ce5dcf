#include "vqsvd/sweep.hpp"

#include <chrono>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace vqsvd {

namespace {

// Stacks hold K partial states as a K x 2^n matrix (state index k in the row,
// amplitude index in the column), so one amplitude across all K states is a
// contiguous column. Both the gate kernel and the environment contraction
// then work on contiguous K-vectors.

ComplexMatrix basis_stack(int k, int num_qubits) {
  ComplexMatrix stack = ComplexMatrix::Zero(k, Eigen::Index(1) << num_qubits);
  for (int i = 0; i < k; ++i) stack(i, i) = Complex(1.0, 0.0);
  return stack;
}

// Enumeration of amplitude indices with the gate's target bits cleared.
struct GateSlots {
  std::vector<std::uint64_t> rest_bases;
  std::vector<std::uint64_t> offsets;
};

GateSlots gate_slots(const std::vector<int>& targets, int num_qubits) {
  int d = int(targets.size());
  std::uint64_t target_mask = 0;
  for (int t : targets) {
    if (t < 1 || t > num_qubits) {
      throw std::invalid_argument("gate target " + std::to_string(t) + " outside register of " +
                                  std::to_string(num_qubits) + " qubits");
    }
    target_mask |= std::uint64_t(1) << (t - 1);
  }
  GateSlots slots;
  slots.offsets.resize(std::size_t(1) << d);
  for (std::uint64_t s = 0; s < slots.offsets.size(); ++s) {
    std::uint64_t off = 0;
    for (int t = 0; t < d; ++t) {
      if ((s >> t) & 1) off |= std::uint64_t(1) << (targets[std::size_t(t)] - 1);
    }
    slots.offsets[s] = off;
  }
  std::uint64_t dim = std::uint64_t(1) << num_qubits;
  slots.rest_bases.reserve(std::size_t(dim >> d));
  for (std::uint64_t b = 0; b < dim; ++b) {
    if ((b & target_mask) == 0) slots.rest_bases.push_back(b);
  }
  return slots;
}

// stack <- G applied to every state in the stack (adjoint: G^dag instead)
void stack_apply_gate(ComplexMatrix& stack, const Gate& gate, int num_qubits, bool adjoint) {
  GateSlots slots = gate_slots(gate.targets, num_qubits);
  Eigen::Index d = Eigen::Index(slots.offsets.size());
  Eigen::Index k = stack.rows();
  // columns transform as new = old * G^T (or old * conj(G) for the adjoint)
  ComplexMatrix mixer = adjoint ? gate.matrix.conjugate() : ComplexMatrix(gate.matrix.transpose());
  ComplexMatrix block(k, d);
  for (std::uint64_t base : slots.rest_bases) {
    for (Eigen::Index s = 0; s < d; ++s) {
      block.col(s) = stack.col(Eigen::Index(base + slots.offsets[std::size_t(s)]));
    }
    block *= mixer;
    for (Eigen::Index s = 0; s < d; ++s) {
      stack.col(Eigen::Index(base + slots.offsets[std::size_t(s)])) = block.col(s);
    }
  }
}

void stack_apply_circuit(ComplexMatrix& stack, const std::vector<Gate>& gates, int num_qubits) {
  for (const Gate& g : gates) stack_apply_gate(stack, g, num_qubits, false);
}

// F_{s,s'} = sum_k sum_rest L[k,(rest,s)] conj(R[k,(rest,s')])
ComplexMatrix stack_environment(const ComplexMatrix& lstack, const ComplexMatrix& rstack,
                                const Gate& gate, int num_qubits) {
  GateSlots slots = gate_slots(gate.targets, num_qubits);
  Eigen::Index d = Eigen::Index(slots.offsets.size());
  Eigen::Index k = lstack.rows();
  ComplexMatrix f = ComplexMatrix::Zero(d, d);
  ComplexMatrix lblock(k, d), rblock(k, d);
  for (std::uint64_t base : slots.rest_bases) {
    for (Eigen::Index s = 0; s < d; ++s) {
      lblock.col(s) = lstack.col(Eigen::Index(base + slots.offsets[std::size_t(s)]));
      rblock.col(s) = rstack.col(Eigen::Index(base + slots.offsets[std::size_t(s)]));
    }
    f.noalias() += lblock.transpose() * rblock.conjugate();
  }
  return f;
}

double singular_value_sum(const ComplexMatrix& f) {
  return svd(f).values.sum();
}

// One pass over a register's gates: forward updates, then backward updates if
// requested. t_stack[k,:] is the target for base state |k>. Returns the
// objective after the last update.
double register_sweep(std::vector<Gate>& gates, int num_qubits, const ComplexMatrix& t_stack,
                      bool backward_too, std::vector<double>& update_trace) {
  Eigen::Index k = t_stack.rows();
  int count = int(gates.size());
  if (count == 0) {
    double obj = 0.0;
    for (Eigen::Index i = 0; i < k; ++i) obj += t_stack(i, i).real();
    return obj;
  }

  // r_after[i]: target pulled back through the adjoints of gates i+1..end
  std::vector<ComplexMatrix> r_after(static_cast<std::size_t>(count));
  r_after[std::size_t(count - 1)] = t_stack;
  for (int i = count - 1; i > 0; --i) {
    r_after[std::size_t(i - 1)] = r_after[std::size_t(i)];
    stack_apply_gate(r_after[std::size_t(i - 1)], gates[std::size_t(i)], num_qubits, true);
  }

  // l_before[i]: basis stack evolved through gates 0..i-1 (with their updates)
  std::vector<ComplexMatrix> l_before(static_cast<std::size_t>(count));
  ComplexMatrix l_cur = basis_stack(int(k), num_qubits);
  double objective = 0.0;
  for (int i = 0; i < count; ++i) {
    if (backward_too) l_before[std::size_t(i)] = l_cur;
    ComplexMatrix f = stack_environment(l_cur, r_after[std::size_t(i)], gates[std::size_t(i)],
                                        num_qubits);
    gates[std::size_t(i)].matrix = local_update(f);
    objective = singular_value_sum(f);
    update_trace.push_back(objective);
    stack_apply_gate(l_cur, gates[std::size_t(i)], num_qubits, false);
  }

  if (backward_too) {
    ComplexMatrix r_cur = t_stack;
    for (int i = count - 1; i >= 0; --i) {
      ComplexMatrix f = stack_environment(l_before[std::size_t(i)], r_cur, gates[std::size_t(i)],
                                          num_qubits);
      gates[std::size_t(i)].matrix = local_update(f);
      objective = singular_value_sum(f);
      update_trace.push_back(objective);
      stack_apply_gate(r_cur, gates[std::size_t(i)], num_qubits, true);
    }
  }
  return objective;
}

}  // namespace

SweepResult sweep_optimize(LayeredCircuit& u, LayeredCircuit& v,
                           const SweepObjective& objective, const SweepConfig& config) {
  int n_u = u.num_qubits;
  int n_v = v.num_qubits;
  if (n_u == 0) throw std::invalid_argument("sweep_optimize: U register is empty");
  Eigen::Index dim_u = Eigen::Index(1) << n_u;
  if (objective.target.rows() != dim_u) {
    std::ostringstream msg;
    msg << "sweep_optimize: target has " << objective.target.rows() << " rows, register has "
        << dim_u;
    throw std::invalid_argument(msg.str());
  }
  Eigen::Index k = objective.weights.size();
  if (k < 1 || k > dim_u) throw std::invalid_argument("sweep_optimize: bad weight count");
  if (n_v > 0) {
    Eigen::Index dim_v = Eigen::Index(1) << n_v;
    if (objective.target.cols() != dim_v) {
      throw std::invalid_argument("sweep_optimize: target column count does not match V register");
    }
    if (k > dim_v) throw std::invalid_argument("sweep_optimize: bad weight count");
  } else if (objective.target.cols() != k) {
    throw std::invalid_argument("sweep_optimize: single-register target needs one column per weight");
  }
  if (config.rel_tol <= 0.0) throw std::invalid_argument("sweep_optimize: rel_tol must be positive");
  if (config.max_sweeps < 1) throw std::invalid_argument("sweep_optimize: max_sweeps must be positive");

  SweepResult result;
  double previous = 0.0;
  for (std::size_t sweep = 0; sweep < config.max_sweeps; ++sweep) {
    auto start = std::chrono::steady_clock::now();
    double objective_now = 0.0;

    // A half: t_stack_A[k,:] = (T conj(V) diag(w))^T
    {
      ComplexMatrix t_eff;
      if (n_v > 0) {
        ComplexMatrix v_stack = basis_stack(int(k), n_v);  // v_stack[k,y] = (V|k>)[y]
        stack_apply_circuit(v_stack, v.gates, n_v);
        t_eff.noalias() = objective.target * v_stack.transpose().conjugate();
      } else {
        t_eff = objective.target;
      }
      t_eff *= objective.weights.asDiagonal();
      ComplexMatrix t_stack = t_eff.transpose();
      objective_now = register_sweep(u.gates, n_u, t_stack, config.forward_and_backward,
                                     result.update_trace);
    }

    // B half: t_stack_B[k,:] = (T^T conj(U) diag(w))^T
    if (n_v > 0 && !v.gates.empty()) {
      ComplexMatrix u_stack = basis_stack(int(k), n_u);
      stack_apply_circuit(u_stack, u.gates, n_u);
      ComplexMatrix t_eff = objective.target.transpose() * u_stack.transpose().conjugate();
      t_eff *= objective.weights.asDiagonal();
      ComplexMatrix t_stack = t_eff.transpose();
      objective_now = register_sweep(v.gates, n_v, t_stack, config.forward_and_backward,
                                     result.update_trace);
    }

    result.sweep_trace.push_back(objective_now);
    result.sweep_wall_s.push_back(
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
    result.sweeps_run = int(sweep) + 1;
    result.final_objective = objective_now;
    if (sweep > 0 &&
        std::abs(objective_now - previous) < config.rel_tol * std::max(std::abs(objective_now), 1e-15)) {
      result.converged = true;
      break;
    }
    previous = objective_now;
  }
  return result;
}

ComplexMatrix environment_tensor(const LayeredCircuit& circuit, const StateVector& base,
                                 int gate_index, const StateVector& target) {
  if (gate_index < 0 || gate_index >= int(circuit.gates.size())) {
    throw std::invalid_argument("environment_tensor: gate index " + std::to_string(gate_index) +
                                " out of range");
  }
  if (base.num_qubits != circuit.num_qubits || target.num_qubits != circuit.num_qubits) {
    throw std::invalid_argument("environment_tensor: register size mismatch");
  }
  StateVector l = base;
  for (int i = 0; i < gate_index; ++i) {
    l = apply_unitary(l, circuit.gates[std::size_t(i)].matrix, circuit.gates[std::size_t(i)].targets);
  }
  StateVector r = target;
  for (int i = int(circuit.gates.size()) - 1; i > gate_index; --i) {
    r = apply_unitary(r, circuit.gates[std::size_t(i)].matrix.adjoint(),
                      circuit.gates[std::size_t(i)].targets);
  }

  const Gate& gate = circuit.gates[std::size_t(gate_index)];
  int d = int(gate.targets.size());
  std::uint64_t target_mask = 0;
  std::vector<std::uint64_t> offsets(std::size_t(1) << d, 0);
  for (int t = 0; t < d; ++t) target_mask |= std::uint64_t(1) << (gate.targets[std::size_t(t)] - 1);
  for (std::uint64_t s = 0; s < offsets.size(); ++s) {
    for (int t = 0; t < d; ++t) {
      if ((s >> t) & 1) offsets[s] |= std::uint64_t(1) << (gate.targets[std::size_t(t)] - 1);
    }
  }
  Eigen::Index dloc = Eigen::Index(1) << d;
  ComplexMatrix f = ComplexMatrix::Zero(dloc, dloc);
  std::uint64_t dim = std::uint64_t(1) << circuit.num_qubits;
  for (std::uint64_t b = 0; b < dim; ++b) {
    if ((b & target_mask) != 0) continue;
    for (Eigen::Index s = 0; s < dloc; ++s) {
      for (Eigen::Index sp = 0; sp < dloc; ++sp) {
        f(s, sp) += l.amplitudes[Eigen::Index(b + offsets[std::size_t(s)])] *
                    std::conj(r.amplitudes[Eigen::Index(b + offsets[std::size_t(sp)])]);
      }
    }
  }
  return f;
}

ComplexMatrix local_update(const ComplexMatrix& f) {
  if (f.rows() != f.cols() || f.rows() < 1) {
    throw std::invalid_argument("local_update: environment must be square");
  }
  SvdResult dec = svd(f);
  // svd returns f = left diag(values) right^dag; maximizer of Re tr(G f)
  return dec.right * dec.left.adjoint();
}

}  // namespace vqsvd
