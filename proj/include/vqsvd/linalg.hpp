#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>

#include "vqsvd/rng.hpp"

namespace vqsvd {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

// A = left * values.asDiagonal() * right.adjoint(); values non-increasing.
struct SvdResult {
  ComplexMatrix left;
  RealVector values;
  ComplexMatrix right;
};

// H = vectors * values.asDiagonal() * vectors.adjoint(); values ascending.
struct EighResult {
  RealVector values;
  ComplexMatrix vectors;
};

// Dense SVD. Throws std::invalid_argument on empty/non-finite input and
// std::runtime_error if the decomposition does not converge.
SvdResult svd(const ComplexMatrix& a);

// Hermitian eigendecomposition, eigenvalues ascending. Input must be
// Hermitian within 1e-12; violations are rejected with the max asymmetry
// in the message.
EighResult eigh(const ComplexMatrix& h);

// tau_eps(x) = 1/x for x > eps, else 0.
double pinv_filter(double x, double eps);

// Spectral pseudo-inverse sum_m tau_eps(d_m) v_m v_m^dagger of a Hermitian
// PSD matrix. Eigenvalues in [-1e-10, 0) from roundoff are clamped to 0;
// anything below -1e-10 is rejected as non-PSD.
ComplexMatrix thresholded_pseudo_inverse(const ComplexMatrix& h, double eps);

// Haar-random unitary: QR of a complex Ginibre matrix with the R-diagonal
// phase fix.
ComplexMatrix haar_unitary(int dim, SplitMix64& rng);

// Unitary whose first column is the given unit vector; remaining columns are
// an orthonormal completion (deterministic Gram-Schmidt against basis
// vectors). Used to turn target states into preparation gates.
ComplexMatrix unitary_from_state(const ComplexVector& v);

}  // namespace vqsvd
