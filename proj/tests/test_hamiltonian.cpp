#include <doctest.h>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include <bit>
#include <cmath>

#include "vqsvd/hamiltonian.hpp"
#include "vqsvd/state.hpp"

using namespace vqsvd;

namespace {

double dense_ground_energy(const SparseOperator& h) {
  ComplexMatrix dense = h.matrix.toDense();
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(dense);
  return solver.eigenvalues()[0];
}

}  // namespace

TEST_SUITE("hamiltonian") {

TEST_CASE("two-site chain ground state is the singlet") {
  SparseOperator h = build_hamiltonian(chain_spec(2, 1.0));
  GroundStateResult gs = ground_state(h, 1e-12, 1);
  CHECK(gs.converged);
  CHECK(std::abs(gs.energy - (-0.75)) < 1e-12);
  CHECK(!gs.degenerate);
  // singlet amplitudes: (|01> - |10>)/sqrt(2) up to phase
  CHECK(std::abs(std::abs(gs.state.amplitudes[1]) - 1.0 / std::sqrt(2.0)) < 1e-10);
  CHECK(std::abs(gs.state.amplitudes[0]) < 1e-10);
}

TEST_CASE("three-site chain is a degenerate doublet") {
  SparseOperator h = build_hamiltonian(chain_spec(3, 1.0));
  GroundStateResult gs = ground_state(h, 1e-12, 1);
  CHECK(gs.converged);
  CHECK(std::abs(gs.energy - (-1.0)) < 1e-12);
  CHECK(gs.degenerate);
}

TEST_CASE("lanczos energy matches dense diagonalization") {
  for (int length : {4, 5, 6, 8}) {
    SparseOperator h = build_hamiltonian(chain_spec(length, 1.0));
    GroundStateResult gs = ground_state(h, 1e-11, 3);
    double exact = dense_ground_energy(h);
    CHECK(gs.converged);
    CHECK(std::abs(gs.energy - exact) < 1e-9);
    // residual ||H psi - E psi|| stays at the requested tolerance
    ComplexVector hv = h.matrix * gs.state.amplitudes;
    double residual = (hv - gs.energy * gs.state.amplitudes).norm();
    CHECK(residual < 1e-8 * std::max(1.0, std::abs(gs.energy)));
    CHECK(gs.residual < 1e-8 * std::max(1.0, std::abs(gs.energy)));
  }
}

TEST_CASE("sz sector pin reproduces the unrestricted ground state") {
  SparseOperator h = build_hamiltonian(chain_spec(4, 1.0));
  GroundStateResult free_run = ground_state(h, 1e-12, 5);
  GroundStateResult pinned = ground_state(h, 1e-12, 5, 0);
  CHECK(std::abs(free_run.energy - pinned.energy) < 1e-10);
  // every populated basis state in the pinned run has equal up/down counts
  for (Eigen::Index i = 0; i < pinned.state.amplitudes.size(); ++i) {
    if (std::abs(pinned.state.amplitudes[i]) > 1e-12) {
      CHECK(std::popcount(std::uint64_t(i)) == 2);
    }
  }
}

TEST_CASE("hamiltonian conserves total sz") {
  SparseOperator h = build_hamiltonian(chain_spec(5, 1.0));
  for (int outer = 0; outer < h.matrix.outerSize(); ++outer) {
    for (Eigen::SparseMatrix<Complex>::InnerIterator it(h.matrix, outer); it; ++it) {
      CHECK(std::popcount(std::uint64_t(it.row())) ==
            std::popcount(std::uint64_t(it.col())));
    }
  }
}

TEST_CASE("square lattice snake mapping") {
  LatticeSpec spec = square_spec(4, 4, 1.0);
  auto qubit_at = [&](int x, int y) {
    return spec.site_to_qubit[std::size_t((y - 1) * spec.lx + x - 1)];
  };
  CHECK(qubit_at(1, 2) == 8);
  CHECK(qubit_at(4, 2) == 5);
  CHECK(qubit_at(1, 1) == 1);
  CHECK(qubit_at(4, 1) == 4);
  CHECK(lattice_bonds(spec).size() == 24);
  LatticeSpec half = square_spec(4, 2, 1.0);
  CHECK(lattice_bonds(half).size() == 10);
  for (const Bond& b : lattice_bonds(spec)) {
    CHECK(b.flip_phase == Complex(1.0, 0.0));
    CHECK(b.coupling == doctest::Approx(1.0));
  }
}

TEST_CASE("ladder mapping interleaves legs on rungs") {
  LatticeSpec spec = ladder_spec(4, 1.0, -0.1, 0.0);
  auto qubit_at = [&](int leg, int rung) {
    return spec.site_to_qubit[std::size_t(2 * (rung - 1) + leg - 1)];
  };
  CHECK(qubit_at(1, 1) == 1);
  CHECK(qubit_at(2, 1) == 2);
  CHECK(qubit_at(1, 3) == 5);
  CHECK(spec.num_qubits() == 8);
  int rung_bonds = 0;
  int leg_bonds = 0;
  for (const Bond& b : lattice_bonds(spec)) {
    if (std::abs(b.coupling - (-0.1)) < 1e-15) {
      ++rung_bonds;
    } else {
      CHECK(b.coupling == doctest::Approx(1.0));
      ++leg_bonds;
    }
  }
  CHECK(rung_bonds == 4);
  CHECK(leg_bonds == 8);  // periodic legs: 4 bonds per leg
}

TEST_CASE("twisted boundary flips the wrap bond phase") {
  LatticeSpec twisted = ladder_spec(4, 1.0, -0.1, M_PI);
  int flipped = 0;
  for (const Bond& b : lattice_bonds(twisted)) {
    if (std::abs(b.flip_phase - Complex(-1.0, 0.0)) < 1e-12) ++flipped;
  }
  CHECK(flipped == 2);  // one wrap bond per leg

  SparseOperator h0 = build_hamiltonian(ladder_spec(3, 1.0, -0.2, 0.0));
  SparseOperator hpi = build_hamiltonian(ladder_spec(3, 1.0, -0.2, M_PI));
  double e0 = dense_ground_energy(h0);
  double epi = dense_ground_energy(hpi);
  CHECK(std::abs(e0 - epi) > 1e-6);
  GroundStateResult gs = ground_state(hpi, 1e-11, 2);
  CHECK(std::abs(gs.energy - epi) < 1e-9);
}

TEST_CASE("hamiltonian is hermitian with twist applied") {
  SparseOperator h = build_hamiltonian(ladder_spec(3, 1.0, -0.1, M_PI));
  ComplexMatrix dense = h.matrix.toDense();
  CHECK((dense - dense.adjoint()).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("lattice spec validation") {
  CHECK_THROWS_AS(chain_spec(1, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(square_spec(0, 2, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(ladder_spec(1, 1.0, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("lattice json round trip") {
  for (const LatticeSpec& spec :
       {chain_spec(6, 0.7), square_spec(3, 2, 1.2), ladder_spec(4, 1.0, -0.1, M_PI)}) {
    LatticeSpec back = lattice_from_json(lattice_to_json(spec));
    CHECK(back.variant == spec.variant);
    CHECK(back.num_qubits() == spec.num_qubits());
    auto bonds_a = lattice_bonds(spec);
    auto bonds_b = lattice_bonds(back);
    REQUIRE(bonds_a.size() == bonds_b.size());
    for (std::size_t i = 0; i < bonds_a.size(); ++i) {
      CHECK(bonds_a[i].qubit_i == bonds_b[i].qubit_i);
      CHECK(bonds_a[i].qubit_j == bonds_b[i].qubit_j);
      CHECK(bonds_a[i].coupling == doctest::Approx(bonds_b[i].coupling));
      CHECK(std::abs(bonds_a[i].flip_phase - bonds_b[i].flip_phase) < 1e-15);
    }
  }
}

}  // TEST_SUITE
