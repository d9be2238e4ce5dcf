#include "vqsvd/measurement.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "vqsvd/rng.hpp"

namespace vqsvd {

namespace {

void check_pair(const StateVector& a, const StateVector& b, const char* who) {
  if (a.num_qubits != b.num_qubits) {
    std::ostringstream msg;
    msg << who << ": states on " << a.num_qubits << " and " << b.num_qubits << " qubits";
    throw std::invalid_argument(msg.str());
  }
  if (std::abs(a.norm() - 1.0) > 1e-12 || std::abs(b.norm() - 1.0) > 1e-12) {
    throw std::invalid_argument(std::string(who) + ": states must be normalized");
  }
}

double clamp_probability(double p, const char* who) {
  if (p < -1e-12) {
    std::ostringstream msg;
    msg << who << ": probability " << p << " below the roundoff clamp";
    throw std::runtime_error(msg.str());
  }
  return std::max(p, 0.0);
}

}  // namespace

double swap_test(const StateVector& phi, const StateVector& g) {
  check_pair(phi, g, "swap_test");
  double mod2 = std::norm(overlap(phi, g));
  return (1.0 + mod2) / 2.0;
}

double hadamard_test(const StateVector& phi, const StateVector& g, double varphi) {
  check_pair(phi, g, "hadamard_test");
  return std::real(std::polar(1.0, varphi) * overlap(g, phi));
}

InterferometryOutcome interferometric_probs(const StateVector& phi, const StateVector& g,
                                            const StateVector& r, double varphi) {
  check_pair(phi, g, "interferometric_probs");
  check_pair(phi, r, "interferometric_probs");
  Complex g_phi = overlap(g, phi);
  Complex r_phi = overlap(r, phi);
  Complex g_r = overlap(g, r);
  double baseline = std::real(std::polar(1.0, varphi) * g_r);

  InterferometryOutcome out;
  out.phase = varphi;
  for (int n2 = 0; n2 < 2; ++n2) {
    double sigma = (n2 == 0) ? 1.0 : -1.0;
    Complex k = g_phi + sigma * std::polar(1.0, -varphi) * r_phi;
    double k2 = std::norm(k);
    for (int n1 = 0; n1 < 2; ++n1) {
      double sign1 = (n1 == 0) ? 1.0 : -1.0;
      double p = (2.0 + 2.0 * sigma * baseline + sign1 * k2) / 8.0;
      out.probs[std::size_t(n1)][std::size_t(n2)] = clamp_probability(p, "interferometric_probs");
    }
  }
  double total = out.probs[0][0] + out.probs[0][1] + out.probs[1][0] + out.probs[1][1];
  if (std::abs(total - 1.0) > 1e-12) {
    std::ostringstream msg;
    msg << "interferometric_probs: probabilities sum to " << total;
    throw std::runtime_error(msg.str());
  }
  return out;
}

namespace {

// controlled gate on [targets..., control]: applies u on the branch where the
// control bit equals `branch`
ComplexMatrix controlled_gate(const ComplexMatrix& u, int branch) {
  Eigen::Index d = u.rows();
  ComplexMatrix gate = ComplexMatrix::Identity(2 * d, 2 * d);
  Eigen::Index base = (branch == 1) ? d : 0;
  gate.block(base, base, d, d) = u;
  return gate;
}

}  // namespace

InterferometryOutcome interferometric_probs_circuit(const StateVector& phi, const StateVector& g,
                                                    const StateVector& r, double varphi) {
  check_pair(phi, g, "interferometric_probs_circuit");
  check_pair(phi, r, "interferometric_probs_circuit");
  int k = phi.num_qubits;
  if (k > 5) {
    throw std::invalid_argument("interferometric_probs_circuit: register too large to control");
  }
  int total = 2 + 2 * k;
  // qubits 1,2: ancillas; 3..k+2: branch register; k+3..2k+2: target register
  std::vector<int> reg3, reg4;
  for (int i = 0; i < k; ++i) reg3.push_back(3 + i);
  for (int i = 0; i < k; ++i) reg4.push_back(3 + k + i);

  ComplexMatrix phi_prep = unitary_from_state(phi.amplitudes);
  ComplexMatrix g_prep = unitary_from_state(g.amplitudes);
  ComplexMatrix r_prep = unitary_from_state(r.amplitudes);
  ComplexMatrix h(2, 2);
  h << 1, 1, 1, -1;
  h /= std::sqrt(2.0);
  ComplexMatrix rz(2, 2);
  rz << std::polar(1.0, -varphi / 2.0), 0.0, 0.0, std::polar(1.0, varphi / 2.0);
  ComplexMatrix swap2(4, 4);
  swap2 << 1, 0, 0, 0,
           0, 0, 1, 0,
           0, 1, 0, 0,
           0, 0, 0, 1;

  StateVector state = StateVector::zero(total);
  state.amplitudes[0] = Complex(1.0, 0.0);
  state = apply_unitary(state, phi_prep, reg4);
  state = apply_unitary(state, h, {1});
  state = apply_unitary(state, h, {2});
  {
    std::vector<int> targets = reg3;
    targets.push_back(2);
    state = apply_unitary(state, controlled_gate(r_prep, 1), targets);
  }
  state = apply_unitary(state, rz, {2});
  {
    std::vector<int> targets = reg3;
    targets.push_back(2);
    state = apply_unitary(state, controlled_gate(g_prep, 0), targets);
  }
  for (int i = 0; i < k; ++i) {
    state = apply_unitary(state, controlled_gate(swap2, 1), {reg3[std::size_t(i)],
                                                             reg4[std::size_t(i)], 1});
  }
  state = apply_unitary(state, h, {1});
  state = apply_unitary(state, h, {2});

  InterferometryOutcome out;
  out.phase = varphi;
  std::uint64_t dim = state.dimension();
  for (std::uint64_t idx = 0; idx < dim; ++idx) {
    int n1 = int(idx & 1);
    int n2 = int((idx >> 1) & 1);
    out.probs[std::size_t(n1)][std::size_t(n2)] += std::norm(state.amplitudes[Eigen::Index(idx)]);
  }
  return out;
}

SampleEstimate sample_estimate(const InterferometryOutcome& outcome, std::uint64_t shots,
                               std::uint64_t seed) {
  if (shots < 1) throw std::invalid_argument("sample_estimate: shots must be positive");
  std::vector<double> cells = {outcome.probs[0][0], outcome.probs[0][1], outcome.probs[1][0],
                               outcome.probs[1][1]};
  SplitMix64 rng(seed);
  std::uint64_t even = 0;  // outcomes with n1 + n2 even contribute +1
  for (std::uint64_t s = 0; s < shots; ++s) {
    std::size_t cell = rng.discrete(cells);
    if (cell == 0 || cell == 3) ++even;
  }
  double mean = (2.0 * double(even) - double(shots)) / double(shots);
  SampleEstimate est;
  est.estimate = mean;
  if (shots > 1) {
    double odd = double(shots - even);
    double ss = double(even) * (1.0 - mean) * (1.0 - mean) + odd * (1.0 + mean) * (1.0 + mean);
    est.std_error = std::sqrt(ss / double(shots - 1)) / std::sqrt(double(shots));
  }
  return est;
}

SampleEstimate sample_estimate(double probability, std::uint64_t shots, std::uint64_t seed) {
  if (shots < 1) throw std::invalid_argument("sample_estimate: shots must be positive");
  if (probability < 0.0 || probability > 1.0) {
    throw std::invalid_argument("sample_estimate: probability " + std::to_string(probability) +
                                " outside [0,1]");
  }
  SplitMix64 rng(seed);
  std::uint64_t hits = 0;
  for (std::uint64_t s = 0; s < shots; ++s) {
    if (rng.uniform() < probability) ++hits;
  }
  double mean = double(hits) / double(shots);
  SampleEstimate est;
  est.estimate = mean;
  if (shots > 1) {
    double miss = double(shots - hits);
    double ss = double(hits) * (1.0 - mean) * (1.0 - mean) + miss * mean * mean;
    est.std_error = std::sqrt(ss / double(shots - 1)) / std::sqrt(double(shots));
  }
  return est;
}

double deflation_cost_with_reference(const DeflationLedger& ledger, const StateVector& phi,
                                     const BipartiteCut& cut, const StateVector& r,
                                     const ComplexVector& u, const ComplexVector& v) {
  check_pair(phi, r, "deflation_cost_with_reference");
  Complex phi_r = overlap(phi, r);
  if (std::abs(phi_r) < 1e-10) {
    std::ostringstream msg;
    msg << "deflation_cost_with_reference: |<Phi|R>| = " << std::abs(phi_r)
        << " too small for a baseline";
    throw std::invalid_argument(msg.str());
  }
  ComplexMatrix t = coefficient_matrix(phi, cut);
  return std::real(phi_r * projected_overlap(ledger, u, v, t));
}

}  // namespace vqsvd
