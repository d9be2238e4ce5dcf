#include <doctest.h>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include <cmath>
#include <vector>

#include "vqsvd/ansatz.hpp"
#include "vqsvd/linalg.hpp"
#include "vqsvd/rng.hpp"
#include "vqsvd/state.hpp"
#include "vqsvd/svd_methods.hpp"

using namespace vqsvd;

namespace {

// state with prescribed Schmidt values across the half cut
StateVector planted_state(int n_a, int n_b, const RealVector& sigma, std::uint64_t seed) {
  SplitMix64 rng(seed);
  Eigen::Index da = Eigen::Index(1) << n_a;
  Eigen::Index db = Eigen::Index(1) << n_b;
  ComplexMatrix u = haar_unitary(int(da), rng);
  ComplexMatrix v = haar_unitary(int(db), rng);
  ComplexMatrix c = ComplexMatrix::Zero(da, db);
  for (Eigen::Index k = 0; k < sigma.size(); ++k) {
    c += sigma[k] * u.col(k) * v.col(k).transpose();
  }
  StateVector s = StateVector::zero(n_a + n_b);
  for (Eigen::Index m = 0; m < db; ++m) {
    for (Eigen::Index n = 0; n < da; ++n) s.amplitudes[n + (m << n_a)] = c(n, m);
  }
  return s;
}

LayeredCircuit wrap_state(const ComplexVector& v, int num_qubits) {
  LayeredCircuit c;
  c.num_qubits = num_qubits;
  c.layers = 1;
  c.gate_size = num_qubits;
  Gate g;
  g.matrix = unitary_from_state(v);
  for (int q = 1; q <= num_qubits; ++q) g.targets.push_back(q);
  c.gates.push_back(std::move(g));
  return c;
}

ComplexVector random_register_state(int num_qubits, SplitMix64& rng) {
  ComplexVector v(Eigen::Index(1) << num_qubits);
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = Complex(rng.gaussian(), rng.gaussian());
  v.normalize();
  return v;
}

// orthogonal projector onto the span of the columns, via QR
ComplexMatrix span_projector(const ComplexMatrix& basis) {
  Eigen::HouseholderQR<ComplexMatrix> qr(basis);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(basis.rows(), basis.cols());
  return q * q.adjoint();
}

SweepConfig quick_config(std::size_t max_sweeps = 4000) {
  SweepConfig config;
  config.max_sweeps = max_sweeps;
  return config;
}

}  // namespace

TEST_SUITE("svd_methods") {

TEST_CASE("full method on a product state finds a pure spectrum") {
  StateVector target = StateVector::basis(2, 0);
  SpectrumResult result = full_svd(target, half_cut(2, 1), 1, reference_weights(0.9, 2),
                                   quick_config(), 3);
  REQUIRE(result.values.size() == 2);
  CHECK(std::abs(result.values[0] - 1.0) < 1e-8);
  CHECK(result.values[1] < 1e-8);
  CHECK(result.fidelity[0] == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(result.metadata.at("converged").get<bool>());
}

TEST_CASE("full method recovers a random four-qubit spectrum exactly") {
  StateVector target = planted_state(2, 2, (RealVector(4) << 0.7, 0.5, 0.4,
                                            std::sqrt(0.10)).finished(), 7);
  BipartiteCut cut = half_cut(4, 2);
  SpectrumResult result = full_svd(target, cut, 2, reference_weights(0.9, 4),
                                   quick_config(20000), 5);
  RealVector sigma = schmidt_decompose(target, cut).values;
  REQUIRE(result.values.size() == 4);
  for (int n = 0; n < 4; ++n) {
    CHECK(std::abs(result.values[std::size_t(n)] - sigma[n]) < 1e-6);
    CHECK(result.rel_errors[std::size_t(n)] < 1e-5);
  }
  double bound = result.metadata.at("objective_bound").get<double>();
  double objective = result.metadata.at("final_objective").get<double>();
  CHECK(std::abs(objective - bound) < 1e-8);
  CHECK(result.metadata.at("bound_margin").get<double>() >= -1e-10);
  auto trace = result.metadata.at("sweep_trace");
  REQUIRE(!trace.empty());
  CHECK(trace.back().get<double>() == doctest::Approx(objective));
}

TEST_CASE("telescoping differences") {
  TelescopeResult t = telescope_differences({1, 2, 3}, {0.9, 1.2, 1.25});
  REQUIRE(t.values.size() == 3);
  CHECK(t.values[0] == doctest::Approx(0.9).epsilon(1e-14));
  CHECK(t.values[1] == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(t.values[2] == doctest::Approx(0.05).epsilon(1e-11));
  CHECK(t.defined == std::vector<bool>{true, true, true});

  TelescopeResult flat = telescope_differences({1, 2, 3}, {0.9, 0.9, 0.85});
  CHECK(flat.defined == std::vector<bool>{true, false, false});

  TelescopeResult gap = telescope_differences({1, 3}, {0.9, 1.3});
  REQUIRE(gap.values.size() == 3);
  CHECK(gap.defined == std::vector<bool>{true, false, false});

  CHECK_THROWS_AS(telescope_differences({2, 1}, {0.5, 0.4}), std::invalid_argument);
  CHECK_THROWS_AS(telescope_differences({1}, {0.5, 0.4}), std::invalid_argument);
}

TEST_CASE("partial method telescopes a planted spectrum") {
  StateVector target = planted_state(2, 2, (RealVector(4) << 0.7, 0.5, 0.4,
                                            std::sqrt(0.10)).finished(), 11);
  BipartiteCut cut = half_cut(4, 2);
  SpectrumResult result = partial_svd(target, cut, 2, 1.0, {1, 2, 3, 4},
                                      quick_config(20000), 9);
  RealVector sigma = schmidt_decompose(target, cut).values;
  REQUIRE(result.values.size() == 4);
  for (int n = 0; n < 4; ++n) {
    REQUIRE(result.defined[std::size_t(n)]);
    CHECK(std::abs(result.values[std::size_t(n)] - sigma[n]) < 1e-6);
  }
  CHECK(int(result.metadata.at("runs").size()) == 4);

  CHECK_THROWS_AS(partial_svd(target, cut, 1, 1.0, {2, 3}, quick_config(), 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(partial_svd(target, cut, 1, 1.0, {1, 3, 2}, quick_config(), 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(partial_svd(target, cut, 1, 1.0, {1, 5}, quick_config(), 1),
                  std::invalid_argument);
}

TEST_CASE("partial method leaves skipped cutoffs undefined in json") {
  StateVector target = planted_state(2, 2, (RealVector(2) << 0.8, 0.6).finished(), 13);
  SpectrumResult result = partial_svd(target, half_cut(4, 2), 1, 1.0, {1, 2, 4},
                                      quick_config(8000), 17);
  REQUIRE(result.values.size() == 4);
  CHECK(result.defined[0]);
  CHECK(result.defined[1]);
  CHECK(!result.defined[2]);
  nlohmann::json j = spectrum_to_json(result);
  CHECK(j.at("values")[2].is_null());
  CHECK(!j.at("defined")[2].get<bool>());
}

TEST_CASE("simple deflation peels a rank-two state") {
  StateVector target = planted_state(2, 2, (RealVector(2) << 0.8, 0.6).finished(), 19);
  DeflationOutput out = simple_deflation(target, half_cut(4, 2), 1, 2, quick_config(8000), 23);
  REQUIRE(out.spectrum.values.size() == 2);
  CHECK(std::abs(out.spectrum.values[0] - 0.8) < 1e-6);
  CHECK(std::abs(out.spectrum.values[1] - 0.6) < 1e-6);
  CHECK(out.spectrum.metadata.at("negative_raw_count").get<int>() == 0);
  CHECK(out.ledger.steps() == 2);
  CHECK(int(out.spectrum.metadata.at("step_trace").size()) == 2);
}

TEST_CASE("deflation stops early once the residual vanishes") {
  StateVector target = StateVector::basis(4, 5);
  DeflationOutput out = simple_deflation(target, half_cut(4, 2), 1, 3, quick_config(), 3);
  CHECK(out.ledger.steps() == 1);
  CHECK(out.spectrum.metadata.at("steps_completed").get<int>() == 1);
  CHECK(out.spectrum.metadata.at("early_stop_step").get<int>() == 2);
  CHECK(std::abs(out.spectrum.values[0] - 1.0) < 1e-10);
}

TEST_CASE("improved deflation resolves a planted rank-three spectrum") {
  RealVector sigma(3);
  sigma << 0.8, 0.5, std::sqrt(0.11);
  StateVector target = planted_state(2, 2, sigma, 29);
  std::vector<RealVector> per_step;
  DeflationOutput out = improved_deflation(target, half_cut(4, 2), 1, 3, 1e-12,
                                           quick_config(8000), 31, false, &per_step);
  REQUIRE(out.spectrum.values.size() == 3);
  double total = 0.0;
  for (int n = 0; n < 3; ++n) {
    CHECK(std::abs(out.spectrum.values[std::size_t(n)] - sigma[n]) < 1e-8);
    total += out.spectrum.values[std::size_t(n)] * out.spectrum.values[std::size_t(n)];
  }
  CHECK(total <= 1.0 + 1e-10);
  REQUIRE(per_step.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) CHECK(per_step[i].size() == Eigen::Index(i + 1));
  CHECK(out.spectrum.metadata.at("projected_fidelity").get<double>() ==
        doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("core matrix singular values match the dense projected target") {
  SplitMix64 rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    int n_a = (trial % 2 == 0) ? 2 : 3;
    int n_b = 3;
    Eigen::Index da = Eigen::Index(1) << n_a;
    Eigen::Index db = Eigen::Index(1) << n_b;
    StateVector target = planted_state(n_a, n_b,
                                       (RealVector(3) << 0.7, 0.55, std::sqrt(0.2075)).finished(),
                                       100 + std::uint64_t(trial));
    ComplexMatrix t = coefficient_matrix(target, half_cut(n_a + n_b, n_a));

    int k = 2 + (trial % 2);
    DeflationLedger ledger;
    ComplexMatrix u_basis(da, k), v_basis(db, k);
    for (int i = 0; i < k; ++i) {
      ComplexVector u = random_register_state(n_a, rng);
      ComplexVector v = random_register_state(n_b, rng);
      u_basis.col(i) = u;
      v_basis.col(i) = v;
      ledger.append(wrap_state(u, n_a), wrap_state(v, n_b), t);
    }

    ComplexMatrix p_a = span_projector(u_basis);
    ComplexMatrix p_b = span_projector(v_basis);
    ComplexMatrix captured = p_a * t * p_b.transpose();
    RealVector dense = svd(captured).values;
    RealVector core = svd(core_matrix(ledger)).values;
    REQUIRE(core.size() == k);
    for (int i = 0; i < k; ++i) CHECK(std::abs(core[i] - dense[i]) < 1e-10);
    for (Eigen::Index i = k; i < dense.size(); ++i) CHECK(dense[i] < 1e-10);
  }
}

TEST_CASE("projected overlap removes exactly the captured span") {
  SplitMix64 rng(43);
  int n_a = 2, n_b = 2;
  StateVector target = planted_state(n_a, n_b, (RealVector(2) << 0.8, 0.6).finished(), 57);
  ComplexMatrix t = coefficient_matrix(target, half_cut(4, 2));

  DeflationLedger ledger;
  ComplexMatrix u_basis(4, 2), v_basis(4, 2);
  for (int i = 0; i < 2; ++i) {
    ComplexVector u = random_register_state(n_a, rng);
    ComplexVector v = random_register_state(n_b, rng);
    u_basis.col(i) = u;
    v_basis.col(i) = v;
    ledger.append(wrap_state(u, n_a), wrap_state(v, n_b), t);
  }

  // ledger members are already captured
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      Complex left = projected_overlap(ledger, ledger.u_states[std::size_t(i)],
                                       ledger.v_states[std::size_t(j)], t);
      CHECK(std::abs(left) < 1e-10);
    }
  }

  // fresh pair against the dense two-sided capture
  ComplexMatrix p_a = span_projector(u_basis);
  ComplexMatrix p_b = span_projector(v_basis);
  for (int trial = 0; trial < 5; ++trial) {
    ComplexVector u = random_register_state(n_a, rng);
    ComplexVector v = random_register_state(n_b, rng);
    ComplexMatrix residual = t - p_a * t * p_b.transpose();
    ComplexMatrix cell = u.adjoint() * residual * v.conjugate();
    Complex got = projected_overlap(ledger, u, v, t);
    CHECK(std::abs(got - cell(0, 0)) < 1e-10);
  }
}

TEST_CASE("ledger json round trip") {
  SplitMix64 rng(47);
  StateVector target = planted_state(2, 2, (RealVector(2) << 0.8, 0.6).finished(), 59);
  ComplexMatrix t = coefficient_matrix(target, half_cut(4, 2));
  DeflationLedger ledger;
  ledger.eps = 1e-10;
  for (int i = 0; i < 2; ++i) {
    ledger.append(wrap_state(random_register_state(2, rng), 2),
                  wrap_state(random_register_state(2, rng), 2), t);
  }
  DeflationLedger back = ledger_from_json(ledger_to_json(ledger));
  CHECK(back.eps == ledger.eps);
  REQUIRE(back.steps() == 2);
  CHECK((back.a_overlaps - ledger.a_overlaps).cwiseAbs().maxCoeff() < 1e-15);
  CHECK((back.b_overlaps - ledger.b_overlaps).cwiseAbs().maxCoeff() < 1e-15);
  CHECK((back.cross - ledger.cross).cwiseAbs().maxCoeff() < 1e-15);
  for (int i = 0; i < 2; ++i) {
    CHECK((back.u_states[std::size_t(i)] - ledger.u_states[std::size_t(i)]).norm() < 1e-15);
    CHECK((back.v_states[std::size_t(i)] - ledger.v_states[std::size_t(i)]).norm() < 1e-15);
  }
}

}  // TEST_SUITE
