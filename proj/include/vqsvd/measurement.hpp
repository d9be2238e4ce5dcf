#pragma once

#include <array>
#include <cstdint>

#include "vqsvd/linalg.hpp"
#include "vqsvd/state.hpp"
#include "vqsvd/svd_methods.hpp"

namespace vqsvd {

// Outcome distribution of the two-ancilla interferometric circuit.
struct InterferometryOutcome {
  std::array<std::array<double, 2>, 2> probs{};  // probs[n1][n2]
  double phase = 0.0;

  // sum of (-1)^(n1+n2) P_{n1,n2} = Re[e^{i phase} <Phi|R><G|Phi>]
  double parity() const {
    return probs[0][0] - probs[0][1] - probs[1][0] + probs[1][1];
  }
};

// Ancilla-0 probability (1 + |<Phi|G>|^2) / 2 of the SWAP test.
double swap_test(const StateVector& phi, const StateVector& g);

// Re[e^{i varphi} <G|Phi>] from the Hadamard test.
double hadamard_test(const StateVector& phi, const StateVector& g, double varphi);

// Exact closed-form outcome probabilities of the reference-state scheme.
InterferometryOutcome interferometric_probs(const StateVector& phi, const StateVector& g,
                                            const StateVector& r, double varphi);

// The same distribution obtained by simulating the two-ancilla circuit gate by
// gate (state preparations, controlled branches, phase shift, controlled swap,
// final Hadamards). Cross-check for the closed form.
InterferometryOutcome interferometric_probs_circuit(const StateVector& phi, const StateVector& g,
                                                    const StateVector& r, double varphi);

struct SampleEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
};

// Parity estimator from multinomial sampling of the outcome distribution.
SampleEstimate sample_estimate(const InterferometryOutcome& outcome, std::uint64_t shots,
                               std::uint64_t seed);

// Bernoulli estimate of a single probability.
SampleEstimate sample_estimate(double probability, std::uint64_t shots, std::uint64_t seed);

// Deflation cost from reference-scheme observables:
// Re[<Phi|R> (<u,v|Phi> - captured ledger part)]. Rejects references with
// |<Phi|R>| below 1e-10.
double deflation_cost_with_reference(const DeflationLedger& ledger, const StateVector& phi,
                                     const BipartiteCut& cut, const StateVector& r,
                                     const ComplexVector& u, const ComplexVector& v);

}  // namespace vqsvd
