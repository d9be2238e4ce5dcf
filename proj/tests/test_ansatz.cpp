#include <doctest.h>

#include <nlohmann/json.hpp>

#include <cmath>

#include "vqsvd/ansatz.hpp"
#include "vqsvd/linalg.hpp"
#include "vqsvd/rng.hpp"
#include "vqsvd/state.hpp"

using namespace vqsvd;

namespace {

StateVector random_state(int n, std::uint64_t seed) {
  SplitMix64 rng(seed);
  StateVector s = StateVector::zero(n);
  for (Eigen::Index i = 0; i < s.amplitudes.size(); ++i)
    s.amplitudes[i] = Complex(rng.gaussian(), rng.gaussian());
  s.normalize();
  return s;
}

}  // namespace

TEST_SUITE("ansatz") {

TEST_CASE("layered circuit structure") {
  for (int gate_size : {1, 2, 3}) {
    LayeredCircuit c = build_layered(5, 3, 11, false, gate_size);
    CHECK(c.num_qubits == 5);
    CHECK(c.gate_size == gate_size);
    CHECK(int(c.gates.size()) == 3 * (5 - gate_size + 1));
    int dim = 1 << gate_size;
    for (const Gate& g : c.gates) {
      CHECK(int(g.targets.size()) == gate_size);
      ComplexMatrix gram = g.matrix.adjoint() * g.matrix;
      CHECK((gram - ComplexMatrix::Identity(dim, dim)).cwiseAbs().maxCoeff() < 1e-12);
    }
    // staircase: first layer starts at qubit 1 and steps by one
    for (int i = 0; i < 5 - gate_size + 1; ++i) {
      CHECK(c.gates[std::size_t(i)].targets.front() == i + 1);
    }
  }
  CHECK_THROWS_AS(build_layered(2, 1, 1, false, 3), std::invalid_argument);
  CHECK_THROWS_AS(build_layered(3, 0, 1), std::invalid_argument);
}

TEST_CASE("identity initialization and seed determinism") {
  LayeredCircuit id = build_layered(4, 2, 5, true);
  for (const Gate& g : id.gates) {
    CHECK((g.matrix - ComplexMatrix::Identity(4, 4)).cwiseAbs().maxCoeff() == 0.0);
  }
  LayeredCircuit a = build_layered(4, 2, 5);
  LayeredCircuit b = build_layered(4, 2, 5);
  LayeredCircuit c = build_layered(4, 2, 6);
  REQUIRE(a.gates.size() == b.gates.size());
  double same = 0.0, other = 0.0;
  for (std::size_t i = 0; i < a.gates.size(); ++i) {
    same = std::max(same, (a.gates[i].matrix - b.gates[i].matrix).cwiseAbs().maxCoeff());
    other = std::max(other, (a.gates[i].matrix - c.gates[i].matrix).cwiseAbs().maxCoeff());
  }
  CHECK(same == 0.0);
  CHECK(other > 1e-3);
}

TEST_CASE("apply_circuit preserves norm and matches gate-by-gate application") {
  LayeredCircuit c = build_layered(4, 2, 9);
  StateVector in = random_state(4, 3);
  StateVector out = apply_circuit(c, in);
  CHECK(out.norm() == doctest::Approx(1.0).epsilon(1e-12));
  StateVector manual = in;
  for (const Gate& g : c.gates) manual = apply_unitary(manual, g.matrix, g.targets);
  CHECK((out.amplitudes - manual.amplitudes).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("circuit_columns agrees with apply_circuit on basis states") {
  LayeredCircuit c = build_layered(3, 2, 4);
  ComplexMatrix cols = circuit_columns(c, 4);
  REQUIRE(cols.rows() == 8);
  REQUIRE(cols.cols() == 4);
  for (int k = 0; k < 4; ++k) {
    StateVector direct = apply_circuit(c, StateVector::basis(3, std::uint64_t(k)));
    CHECK((cols.col(k) - direct.amplitudes).cwiseAbs().maxCoeff() < 1e-13);
  }
}

TEST_CASE("reference weights follow the geometric law") {
  ReferenceWeights w = reference_weights(0.9, 2);
  CHECK(w.weights.size() == 2);
  CHECK(w.weights[0] == doctest::Approx(1.0 / std::sqrt(1.81)).epsilon(1e-14));
  CHECK(w.weights[1] / w.weights[0] == doctest::Approx(0.9).epsilon(1e-14));
  CHECK(w.weights.squaredNorm() == doctest::Approx(1.0).epsilon(1e-14));

  ReferenceWeights flat = reference_weights(1.0, 4);
  for (int i = 0; i < 4; ++i) CHECK(flat.weights[i] == doctest::Approx(0.5).epsilon(1e-14));

  ReferenceWeights cut1 = reference_weights(0.9, 256, 1);
  CHECK(cut1.weights[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(cut1.weights.tail(255).cwiseAbs().maxCoeff() == 0.0);

  ReferenceWeights cut3 = reference_weights(0.5, 8, 3);
  CHECK(cut3.weights.tail(5).cwiseAbs().maxCoeff() == 0.0);
  CHECK(cut3.weights.squaredNorm() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(cut3.weights[1] / cut3.weights[0] == doctest::Approx(0.5).epsilon(1e-13));

  CHECK_THROWS_AS(reference_weights(-0.1, 4), std::invalid_argument);
  CHECK_THROWS_AS(reference_weights(0.9, 4, 0), std::invalid_argument);
  CHECK_THROWS_AS(reference_weights(0.9, 4, 5), std::invalid_argument);
}

TEST_CASE("trial_state coefficient matrix is U diag(w) V^T") {
  for (std::uint64_t seed : {1ULL, 2ULL}) {
    LayeredCircuit u = build_layered(2, 2, seed);
    LayeredCircuit v = build_layered(3, 2, seed + 10);
    ReferenceWeights w = reference_weights(0.9, 4);
    BipartiteCut cut = seed == 2 ? BipartiteCut{{2, 4}, {1, 3, 5}} : half_cut(5, 2);
    StateVector psi = trial_state(u, v, w, cut);
    CHECK(psi.num_qubits == 5);
    ComplexMatrix c = coefficient_matrix(psi, cut);
    ComplexMatrix u_cols = circuit_columns(u, 4);
    ComplexMatrix v_cols = circuit_columns(v, 4);
    ComplexMatrix expect =
        u_cols * w.weights.cast<Complex>().asDiagonal() * v_cols.transpose();
    CHECK((c - expect).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("exponential omega state has geometric amplitudes") {
  for (double p : {0.3, 0.9}) {
    for (int k = 1; k <= 8; ++k) {
      StateVector s = omega_exponential_state(p, k);
      CHECK(s.norm() == doctest::Approx(1.0).epsilon(1e-12));
      for (std::uint64_t n = 1; n < s.dimension(); ++n) {
        Complex ratio = s.amplitudes[Eigen::Index(n)] / s.amplitudes[0];
        CHECK(std::abs(ratio - Complex(std::pow(p, double(n)), 0.0)) < 1e-12);
      }
      std::vector<double> angles = omega_exponential(p, k);
      REQUIRE(int(angles.size()) == k);
      for (int i = 0; i < k; ++i) {
        double expect = 2.0 * std::atan(std::pow(p, std::pow(2.0, double(i))));
        CHECK(angles[std::size_t(i)] == doctest::Approx(expect).epsilon(1e-14));
      }
    }
  }
}

TEST_CASE("cutoff core matches the dense cutoff state") {
  for (std::uint64_t c : {1ULL, 3ULL, 7ULL, 8ULL, 13ULL}) {
    double p = 0.8;
    int n_total = 4, n_a = 2;
    ComplexMatrix core = omega_cutoff_core(p, c, n_a);
    StateVector full = omega_cutoff_state(p, c, n_total);
    SvdResult dense = svd(coefficient_matrix(full, half_cut(n_total, n_a)));
    SvdResult small = svd(core);
    REQUIRE(small.values.size() == 2);
    for (int k = 0; k < 2; ++k) {
      double sigma = k < dense.values.size() ? dense.values[k] : 0.0;
      CHECK(std::abs(small.values[k] - sigma) < 1e-12);
    }
    // rank is 1 when the cutoff fills whole columns (a=0) or stays inside one (b=0)
    bool degenerate = (c % (1ULL << n_a)) == 0 || c < (1ULL << n_a);
    CHECK((small.values[1] < 1e-14) == degenerate);
  }
}

TEST_CASE("hann weights are normalized with low schmidt rank") {
  RealVector w = omega_hann_weights(6);
  REQUIRE(w.size() == 64);
  CHECK(w.squaredNorm() == doctest::Approx(1.0).epsilon(1e-12));
  // profile follows the window: monotone decreasing from w[0], vanishing tail
  for (Eigen::Index i = 1; i < w.size(); ++i) CHECK(w[i] <= w[i - 1] + 1e-15);
  CHECK(w[1] / w[0] == doctest::Approx((1.0 + std::cos(M_PI / 64.0)) / 2.0).epsilon(1e-12));
  StateVector s = StateVector::zero(6);
  s.amplitudes = w.cast<Complex>();
  for (int n_a = 1; n_a < 6; ++n_a) {
    SvdResult dec = svd(coefficient_matrix(s, half_cut(6, n_a)));
    int rank = 0;
    for (Eigen::Index i = 0; i < dec.values.size(); ++i) {
      if (dec.values[i] > 1e-12 * dec.values[0]) ++rank;
    }
    CHECK(rank <= 3);
  }
}

TEST_CASE("circuit json round trip") {
  LayeredCircuit c = build_layered(4, 2, 13, false, 3);
  LayeredCircuit back = circuit_from_json(circuit_to_json(c));
  CHECK(back.num_qubits == c.num_qubits);
  CHECK(back.layers == c.layers);
  CHECK(back.gate_size == c.gate_size);
  REQUIRE(back.gates.size() == c.gates.size());
  for (std::size_t i = 0; i < c.gates.size(); ++i) {
    CHECK(back.gates[i].targets == c.gates[i].targets);
    CHECK((back.gates[i].matrix - c.gates[i].matrix).cwiseAbs().maxCoeff() < 1e-15);
  }
}

}  // TEST_SUITE
