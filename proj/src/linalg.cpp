#include "vqsvd/linalg.hpp"

#include <Eigen/SVD>
#include <sstream>
#include <stdexcept>

namespace vqsvd {

SvdResult svd(const ComplexMatrix& a) {
  if (a.rows() == 0 || a.cols() == 0) {
    throw std::invalid_argument("svd: empty matrix");
  }
  if (!a.allFinite()) {
    throw std::invalid_argument("svd: non-finite entries");
  }
  SvdResult out;
  // Jacobi is more accurate for small matrices; bidiagonal divide-and-conquer
  // is much faster for the 256x256 coefficient matrices.
  if (a.rows() <= 32 || a.cols() <= 32) {
    Eigen::JacobiSVD<ComplexMatrix> dec(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (dec.info() != Eigen::Success) {
      throw std::runtime_error("svd: Jacobi SVD did not converge");
    }
    out.left = dec.matrixU();
    out.values = dec.singularValues();
    out.right = dec.matrixV();
  } else {
    Eigen::BDCSVD<ComplexMatrix> dec(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (dec.info() != Eigen::Success) {
      throw std::runtime_error("svd: BDC SVD did not converge");
    }
    out.left = dec.matrixU();
    out.values = dec.singularValues();
    out.right = dec.matrixV();
  }
  return out;
}

EighResult eigh(const ComplexMatrix& h) {
  if (h.rows() == 0 || h.rows() != h.cols()) {
    throw std::invalid_argument("eigh: matrix must be square and non-empty");
  }
  if (!h.allFinite()) {
    throw std::invalid_argument("eigh: non-finite entries");
  }
  double asym = (h - h.adjoint()).cwiseAbs().maxCoeff();
  if (asym > 1e-12) {
    std::ostringstream msg;
    msg << "eigh: input not Hermitian, max asymmetry " << asym;
    throw std::invalid_argument(msg.str());
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> dec(h);
  if (dec.info() != Eigen::Success) {
    throw std::runtime_error("eigh: eigensolver did not converge");
  }
  return {dec.eigenvalues(), dec.eigenvectors()};
}

double pinv_filter(double x, double eps) { return x > eps ? 1.0 / x : 0.0; }

ComplexMatrix thresholded_pseudo_inverse(const ComplexMatrix& h, double eps) {
  double asym = (h - h.adjoint()).cwiseAbs().maxCoeff();
  if (asym > 1e-10) {
    std::ostringstream msg;
    msg << "thresholded_pseudo_inverse: not Hermitian, max asymmetry " << asym;
    throw std::invalid_argument(msg.str());
  }
  EighResult dec = eigh((h + h.adjoint()) / 2.0);
  RealVector d = dec.values;
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    if (d[i] < 0.0) {
      if (d[i] < -1e-10) {
        std::ostringstream msg;
        msg << "thresholded_pseudo_inverse: eigenvalue " << d[i] << " below PSD tolerance";
        throw std::invalid_argument(msg.str());
      }
      d[i] = 0.0;  // roundoff clamp
    }
  }
  RealVector inv(d.size());
  for (Eigen::Index i = 0; i < d.size(); ++i) inv[i] = pinv_filter(d[i], eps);
  return dec.vectors * inv.asDiagonal() * dec.vectors.adjoint();
}

ComplexMatrix haar_unitary(int dim, SplitMix64& rng) {
  if (dim < 1) throw std::invalid_argument("haar_unitary: dim must be positive");
  ComplexMatrix g(dim, dim);
  for (int j = 0; j < dim; ++j) {
    for (int i = 0; i < dim; ++i) {
      g(i, j) = Complex(rng.gaussian(), rng.gaussian());
    }
  }
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ();
  ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < dim; ++j) {
    Complex d = r(j, j);
    double mag = std::abs(d);
    q.col(j) *= (mag > 0.0) ? d / mag : Complex(1.0, 0.0);
  }
  return q;
}

ComplexMatrix unitary_from_state(const ComplexVector& v) {
  Eigen::Index n = v.size();
  if (n == 0) throw std::invalid_argument("unitary_from_state: empty vector");
  double nrm = v.norm();
  if (std::abs(nrm - 1.0) > 1e-10) {
    throw std::invalid_argument("unitary_from_state: vector not normalized");
  }
  ComplexMatrix u(n, n);
  u.col(0) = v / nrm;
  Eigen::Index filled = 1;
  for (Eigen::Index b = 0; b < n && filled < n; ++b) {
    ComplexVector cand = ComplexVector::Zero(n);
    cand[b] = 1.0;
    for (Eigen::Index k = 0; k < filled; ++k) {
      cand -= u.col(k) * u.col(k).dot(cand);
    }
    double r = cand.norm();
    if (r > 1e-8) {
      // one re-orthogonalization pass for numerical hygiene
      for (Eigen::Index k = 0; k < filled; ++k) {
        cand -= u.col(k) * u.col(k).dot(cand);
      }
      u.col(filled++) = cand / cand.norm();
    }
  }
  if (filled != n) throw std::runtime_error("unitary_from_state: completion failed");
  return u;
}

}  // namespace vqsvd
