#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "vqsvd/ansatz.hpp"
#include "vqsvd/linalg.hpp"
#include "vqsvd/state.hpp"
#include "vqsvd/sweep.hpp"

namespace vqsvd {

// Append-only record of extracted deflation pairs: circuits, the states they
// prepare, Gram matrices A_{k,l} = <u_k|u_l>, B_{k,l} = <v_k|v_l>, and cross
// overlaps X_{k,l} = <u_k, v_l|Phi> against the original target.
struct DeflationLedger {
  std::vector<LayeredCircuit> u_circuits, v_circuits;
  std::vector<ComplexVector> u_states, v_states;
  ComplexMatrix a_overlaps, b_overlaps, cross;
  double eps = 1e-12;

  int steps() const { return int(u_states.size()); }
  void append(const LayeredCircuit& u, const LayeredCircuit& v,
              const ComplexMatrix& target_matrix);
};

struct SpectrumResult {
  std::string method;
  std::vector<double> values;      // estimated s_n, NaN where undefined
  std::vector<bool> defined;
  std::vector<double> xi;          // -2 ln s_n, NaN where unavailable
  std::vector<double> fidelity;    // F_n = sum_{m<=n} s_m^2 over defined slots
  std::vector<double> oracle;      // exact Schmidt values of the target
  std::vector<double> rel_errors;  // |s_n - sigma_n| / sigma_n, NaN where unavailable
  nlohmann::json metadata;
};

// Weighted full optimization: maximize I = Re tr(W U^dag C V*), then read the
// spectrum off the sorted moduli of the diagonal overlaps.
SpectrumResult full_svd(const StateVector& target, const BipartiteCut& cut, int layers,
                        const ReferenceWeights& w, const SweepConfig& config,
                        std::uint64_t seed, bool identity_init = false);

// Telescoping of cumulative sums from independent cutoff runs:
// s_c = S_c - S_{c-1}. A slot is undefined when the difference is not positive
// or the run at c-1 is missing.
struct TelescopeResult {
  std::vector<double> values;
  std::vector<bool> defined;
};
TelescopeResult telescope_differences(const std::vector<int>& cutoffs,
                                      const std::vector<double>& cumulative_sums);

SpectrumResult partial_svd(const StateVector& target, const BipartiteCut& cut, int layers,
                           double p_decay, const std::vector<int>& cutoffs,
                           const SweepConfig& config, std::uint64_t seed,
                           bool identity_init = false);

struct DeflationOutput {
  SpectrumResult spectrum;
  DeflationLedger ledger;
};

// Deflation with the naive rank-one projector subtraction.
DeflationOutput simple_deflation(const StateVector& target, const BipartiteCut& cut, int layers,
                                 int steps, const SweepConfig& config, std::uint64_t seed,
                                 bool identity_init = false);

// Deflation with the pseudo-inverse-corrected projector; the final spectrum is
// the singular values of the core matrix. per_step_spectra, when given,
// receives the core spectrum after every step.
DeflationOutput improved_deflation(const StateVector& target, const BipartiteCut& cut, int layers,
                                   int steps, double eps, const SweepConfig& config,
                                   std::uint64_t seed, bool identity_init = false,
                                   std::vector<RealVector>* per_step_spectra = nullptr);

// Core matrix Sigma^(n) = diag(tau(d_A)^1/2) U_A^dag X conj(U_B) diag(tau(d_B)^1/2)
// built from the eigendecompositions of the ledger Gram matrices.
ComplexMatrix core_matrix(const DeflationLedger& ledger);

// <u,v|Phi> minus the part captured by the ledger span:
// <u,v|Phi> - sum <u|u_k> Apinv_{k,k'} <v|v_l> Bpinv_{l,l'} X_{k',l'}.
Complex projected_overlap(const DeflationLedger& ledger, const ComplexVector& u,
                          const ComplexVector& v, const ComplexMatrix& target_matrix);

nlohmann::json spectrum_to_json(const SpectrumResult& result);
nlohmann::json ledger_to_json(const DeflationLedger& ledger);
DeflationLedger ledger_from_json(const nlohmann::json& j);

}  // namespace vqsvd
