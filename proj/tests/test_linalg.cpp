#include <doctest.h>

#include <cmath>
#include <set>

#include "vqsvd/linalg.hpp"
#include "vqsvd/rng.hpp"

using namespace vqsvd;

namespace {

ComplexMatrix random_matrix(int rows, int cols, SplitMix64& rng) {
  ComplexMatrix m(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) m(r, c) = Complex(rng.gaussian(), rng.gaussian());
  return m;
}

}  // namespace

TEST_SUITE("linalg") {

TEST_CASE("splitmix64 is deterministic and uniform draws stay in range") {
  SplitMix64 a(42), b(42), c(43);
  CHECK(a.next() == b.next());
  CHECK(a.next() == b.next());
  SplitMix64 d(7);
  bool saw_upper = false;
  for (int i = 0; i < 1000; ++i) {
    double x = d.uniform();
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
    if (x > 0.5) saw_upper = true;
  }
  CHECK(saw_upper);
  CHECK(c.next() != SplitMix64(42).next());
  double lo = 2.0, hi = 3.0;
  for (int i = 0; i < 100; ++i) {
    double x = d.uniform(lo, hi);
    CHECK(x >= lo);
    CHECK(x < hi);
  }
}

TEST_CASE("splitmix64 discrete respects the distribution") {
  SplitMix64 rng(11);
  std::vector<double> probs{0.0, 1.0, 0.0};
  for (int i = 0; i < 50; ++i) CHECK(rng.discrete(probs) == 1);
  std::vector<double> half{0.5, 0.5};
  int first = 0;
  for (int i = 0; i < 2000; ++i)
    if (rng.discrete(half) == 0) ++first;
  CHECK(first > 800);
  CHECK(first < 1200);
}

TEST_CASE("mix_seed decorrelates streams deterministically") {
  CHECK(mix_seed(1, 0) == mix_seed(1, 0));
  std::set<std::uint64_t> seen;
  for (std::uint64_t s = 0; s < 50; ++s) seen.insert(mix_seed(9, s));
  CHECK(seen.size() == 50);
}

TEST_CASE("svd reconstructs and orders values") {
  SplitMix64 rng(1);
  for (int trial = 0; trial < 5; ++trial) {
    int rows = 3 + int(rng.next() % 6);
    int cols = 3 + int(rng.next() % 6);
    ComplexMatrix a = random_matrix(rows, cols, rng);
    SvdResult dec = svd(a);
    ComplexMatrix back = dec.left * dec.values.asDiagonal() * dec.right.adjoint();
    CHECK((back - a).cwiseAbs().maxCoeff() < 1e-12);
    for (Eigen::Index i = 1; i < dec.values.size(); ++i)
      CHECK(dec.values[i] <= dec.values[i - 1] + 1e-15);
    CHECK((dec.left.adjoint() * dec.left - ComplexMatrix::Identity(dec.left.cols(), dec.left.cols()))
              .cwiseAbs()
              .maxCoeff() < 1e-12);
    CHECK((dec.right.adjoint() * dec.right - ComplexMatrix::Identity(dec.right.cols(), dec.right.cols()))
              .cwiseAbs()
              .maxCoeff() < 1e-12);
  }
}

TEST_CASE("svd of a diagonal matrix gives its moduli sorted") {
  ComplexMatrix a = ComplexMatrix::Zero(2, 2);
  a(0, 0) = Complex(0.0, 3.0);
  a(1, 1) = Complex(-4.0, 0.0);
  SvdResult dec = svd(a);
  CHECK(dec.values[0] == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(dec.values[1] == doctest::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("svd rejects empty and non-finite input") {
  CHECK_THROWS_AS(svd(ComplexMatrix()), std::invalid_argument);
  ComplexMatrix bad = ComplexMatrix::Zero(2, 2);
  bad(0, 0) = Complex(std::nan(""), 0.0);
  CHECK_THROWS_AS(svd(bad), std::invalid_argument);
}

TEST_CASE("eigh reconstructs Hermitian matrices with ascending values") {
  SplitMix64 rng(2);
  ComplexMatrix b = random_matrix(6, 6, rng);
  ComplexMatrix h = b + b.adjoint();
  EighResult dec = eigh(h);
  ComplexMatrix back = dec.vectors * dec.values.asDiagonal() * dec.vectors.adjoint();
  CHECK((back - h).cwiseAbs().maxCoeff() < 1e-12);
  for (Eigen::Index i = 1; i < dec.values.size(); ++i)
    CHECK(dec.values[i] >= dec.values[i - 1] - 1e-15);
}

TEST_CASE("eigh rejects non-Hermitian input") {
  ComplexMatrix h(2, 2);
  h << Complex(1, 0), Complex(2, 0), Complex(0, 0), Complex(1, 0);
  CHECK_THROWS_AS(eigh(h), std::invalid_argument);
}

TEST_CASE("pinv_filter thresholds at eps") {
  CHECK(pinv_filter(2.0, 1e-12) == doctest::Approx(0.5));
  CHECK(pinv_filter(1e-13, 1e-12) == 0.0);
  CHECK(pinv_filter(0.0, 1e-12) == 0.0);
  CHECK(pinv_filter(-1.0, 1e-12) == 0.0);
}

TEST_CASE("thresholded_pseudo_inverse inverts within the kept span") {
  SplitMix64 rng(3);
  ComplexMatrix b = random_matrix(5, 3, rng);
  ComplexMatrix gram = b.adjoint() * b;  // PSD, full rank 3
  ComplexMatrix pinv = thresholded_pseudo_inverse(gram, 1e-12);
  CHECK((gram * pinv * gram - gram).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((pinv * gram * pinv - pinv).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("thresholded_pseudo_inverse drops small eigenvalues and rejects non-PSD") {
  ComplexMatrix h = ComplexMatrix::Zero(2, 2);
  h(0, 0) = 4.0;
  h(1, 1) = 1e-14;  // below eps: dropped
  ComplexMatrix pinv = thresholded_pseudo_inverse(h, 1e-12);
  CHECK(std::abs(pinv(0, 0) - Complex(0.25, 0.0)) < 1e-14);
  CHECK(std::abs(pinv(1, 1)) == 0.0);

  ComplexMatrix neg = ComplexMatrix::Zero(2, 2);
  neg(0, 0) = 1.0;
  neg(1, 1) = -1e-6;
  CHECK_THROWS_AS(thresholded_pseudo_inverse(neg, 1e-12), std::invalid_argument);
}

TEST_CASE("haar_unitary is unitary and seed-reproducible") {
  SplitMix64 rng(4);
  ComplexMatrix u = haar_unitary(8, rng);
  CHECK((u.adjoint() * u - ComplexMatrix::Identity(8, 8)).cwiseAbs().maxCoeff() < 1e-12);
  SplitMix64 r1(5), r2(5);
  CHECK((haar_unitary(4, r1) - haar_unitary(4, r2)).cwiseAbs().maxCoeff() == 0.0);
  SplitMix64 r3(6);
  CHECK((haar_unitary(4, r3) - haar_unitary(4, r2)).cwiseAbs().maxCoeff() > 1e-3);
}

TEST_CASE("unitary_from_state embeds the state as first column") {
  SplitMix64 rng(7);
  ComplexVector v(8);
  for (int i = 0; i < 8; ++i) v[i] = Complex(rng.gaussian(), rng.gaussian());
  v.normalize();
  ComplexMatrix u = unitary_from_state(v);
  CHECK((u.col(0) - v).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((u.adjoint() * u - ComplexMatrix::Identity(8, 8)).cwiseAbs().maxCoeff() < 1e-12);
  // also for a basis-state input where Gram-Schmidt must skip a column
  ComplexVector e2 = ComplexVector::Zero(4);
  e2[2] = 1.0;
  ComplexMatrix u2 = unitary_from_state(e2);
  CHECK((u2.col(0) - e2).cwiseAbs().maxCoeff() < 1e-14);
  CHECK((u2.adjoint() * u2 - ComplexMatrix::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-12);
}

}  // TEST_SUITE
