#include "vqsvd/hamiltonian.hpp"

#include <bit>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "vqsvd/rng.hpp"

namespace vqsvd {

namespace {

int site_count(const LatticeSpec& spec) {
  switch (spec.variant) {
    case LatticeVariant::chain: return spec.length;
    case LatticeVariant::square: return spec.lx * spec.ly;
    case LatticeVariant::ladder: return 2 * spec.length;
  }
  return 0;
}

}  // namespace

void LatticeSpec::validate() const {
  switch (variant) {
    case LatticeVariant::chain:
      if (length < 2) throw std::invalid_argument("chain needs at least 2 sites");
      break;
    case LatticeVariant::square:
      if (lx < 1 || ly < 1 || lx * ly < 2) throw std::invalid_argument("square lattice too small");
      break;
    case LatticeVariant::ladder:
      if (length < 2) throw std::invalid_argument("ladder needs at least 2 rungs");
      break;
  }
  if ((twist != 0.0 || twisted_boundary) && variant != LatticeVariant::ladder) {
    throw std::invalid_argument("twist is only supported for the ladder variant");
  }
  int n = site_count(*this);
  if (int(site_to_qubit.size()) != n) {
    throw std::invalid_argument("site_to_qubit size does not match lattice");
  }
  std::vector<bool> seen(std::size_t(n) + 1, false);
  for (int q : site_to_qubit) {
    if (q < 1 || q > n || seen[std::size_t(q)]) {
      throw std::invalid_argument("site_to_qubit is not a bijection");
    }
    seen[std::size_t(q)] = true;
  }
}

LatticeSpec chain_spec(int length, double coupling) {
  LatticeSpec spec;
  spec.variant = LatticeVariant::chain;
  spec.length = length;
  spec.j = coupling;
  for (int i = 1; i <= length; ++i) spec.site_to_qubit.push_back(i);
  spec.validate();
  return spec;
}

LatticeSpec square_spec(int lx, int ly, double coupling) {
  LatticeSpec spec;
  spec.variant = LatticeVariant::square;
  spec.lx = lx;
  spec.ly = ly;
  spec.j = coupling;
  spec.site_to_qubit.resize(std::size_t(lx) * std::size_t(ly));
  for (int y = 1; y <= ly; ++y) {
    for (int x = 1; x <= lx; ++x) {
      int site = (y - 1) * lx + x;
      int qubit = (y % 2 == 1) ? (y - 1) * lx + x : (y - 1) * lx + (lx + 1 - x);
      spec.site_to_qubit[std::size_t(site - 1)] = qubit;
    }
  }
  spec.validate();
  return spec;
}

LatticeSpec ladder_spec(int rungs, double j_par, double j_perp, double twist) {
  LatticeSpec spec;
  spec.variant = LatticeVariant::ladder;
  spec.length = rungs;
  spec.j_par = j_par;
  spec.j_perp = j_perp;
  spec.twist = twist;
  spec.twisted_boundary = true;
  for (int i = 1; i <= 2 * rungs; ++i) spec.site_to_qubit.push_back(i);
  spec.validate();
  return spec;
}

std::vector<Bond> lattice_bonds(const LatticeSpec& spec) {
  spec.validate();
  std::vector<Bond> bonds;
  auto qubit_of = [&](int site) { return spec.site_to_qubit[std::size_t(site - 1)]; };
  switch (spec.variant) {
    case LatticeVariant::chain:
      for (int i = 1; i < spec.length; ++i) {
        bonds.push_back({qubit_of(i), qubit_of(i + 1), spec.j, {1.0, 0.0}});
      }
      break;
    case LatticeVariant::square:
      for (int y = 1; y <= spec.ly; ++y) {
        for (int x = 1; x <= spec.lx; ++x) {
          int site = (y - 1) * spec.lx + x;
          if (x < spec.lx) bonds.push_back({qubit_of(site), qubit_of(site + 1), spec.j, {1.0, 0.0}});
          if (y < spec.ly) bonds.push_back({qubit_of(site), qubit_of(site + spec.lx), spec.j, {1.0, 0.0}});
        }
      }
      break;
    case LatticeVariant::ladder: {
      auto site_of = [&](int leg, int rung) { return 2 * (rung - 1) + leg; };
      for (int leg = 1; leg <= 2; ++leg) {
        for (int n = 1; n < spec.length; ++n) {
          bonds.push_back({qubit_of(site_of(leg, n)), qubit_of(site_of(leg, n + 1)),
                           spec.j_par, {1.0, 0.0}});
        }
        if (spec.twisted_boundary) {
          // S^z S^z + (e^{-i twist} S^+_L S^-_1 + h.c.) / 2
          bonds.push_back({qubit_of(site_of(leg, spec.length)), qubit_of(site_of(leg, 1)),
                           spec.j_par, std::polar(1.0, -spec.twist)});
        }
      }
      for (int n = 1; n <= spec.length; ++n) {
        bonds.push_back({qubit_of(site_of(1, n)), qubit_of(site_of(2, n)),
                         spec.j_perp, {1.0, 0.0}});
      }
      break;
    }
  }
  return bonds;
}

SparseOperator build_hamiltonian(const LatticeSpec& spec) {
  std::vector<Bond> bonds = lattice_bonds(spec);
  int nq = spec.num_qubits();
  if (nq > 24) throw std::invalid_argument("lattice exceeds the 24-qubit cap");
  std::uint64_t dim = std::uint64_t(1) << nq;

  std::vector<Eigen::Triplet<Complex>> trips;
  trips.reserve(std::size_t(dim) * (bonds.size() + 1));
  for (std::uint64_t b = 0; b < dim; ++b) {
    double diag = 0.0;
    for (const Bond& bond : bonds) {
      std::uint64_t mi = std::uint64_t(1) << (bond.qubit_i - 1);
      std::uint64_t mj = std::uint64_t(1) << (bond.qubit_j - 1);
      bool down_i = (b & mi) != 0;  // bit set = |1> = spin down
      bool down_j = (b & mj) != 0;
      double sz_i = down_i ? -0.5 : 0.5;
      double sz_j = down_j ? -0.5 : 0.5;
      diag += bond.coupling * sz_i * sz_j;
      if (down_i && !down_j) {
        // S^+_i S^-_j flips (i down, j up) -> (i up, j down)
        std::uint64_t b2 = (b & ~mi) | mj;
        trips.emplace_back(Eigen::Index(b2), Eigen::Index(b),
                           0.5 * bond.coupling * bond.flip_phase);
      } else if (!down_i && down_j) {
        std::uint64_t b2 = (b | mi) & ~mj;
        trips.emplace_back(Eigen::Index(b2), Eigen::Index(b),
                           0.5 * bond.coupling * std::conj(bond.flip_phase));
      }
    }
    if (diag != 0.0) trips.emplace_back(Eigen::Index(b), Eigen::Index(b), Complex(diag, 0.0));
  }

  SparseOperator h;
  h.num_qubits = nq;
  h.matrix.resize(Eigen::Index(dim), Eigen::Index(dim));
  h.matrix.setFromTriplets(trips.begin(), trips.end());
  h.matrix.makeCompressed();

  // Hermiticity and total-S^z conservation checks
  Eigen::SparseMatrix<Complex> diff = Eigen::SparseMatrix<Complex>(h.matrix.adjoint()) - h.matrix;
  double max_asym = 0.0;
  for (int k = 0; k < diff.outerSize(); ++k) {
    for (Eigen::SparseMatrix<Complex>::InnerIterator it(diff, k); it; ++it) {
      max_asym = std::max(max_asym, std::abs(it.value()));
    }
  }
  if (max_asym > 1e-12) {
    std::ostringstream msg;
    msg << "build_hamiltonian: not Hermitian, max asymmetry " << max_asym;
    throw std::runtime_error(msg.str());
  }
  for (int k = 0; k < h.matrix.outerSize(); ++k) {
    for (Eigen::SparseMatrix<Complex>::InnerIterator it(h.matrix, k); it; ++it) {
      if (std::popcount(std::uint64_t(it.row())) != std::popcount(std::uint64_t(it.col()))) {
        throw std::runtime_error("build_hamiltonian: total S^z not conserved");
      }
    }
  }
  return h;
}

namespace {

struct LanczosRun {
  double energy = 0.0;
  ComplexVector vector;
  double residual = 0.0;
  double second_ritz = 0.0;
  bool has_second = false;
  int matvecs = 0;
};

// One restarted-Lanczos pass from the given start vector; optionally kept
// orthogonal to a deflation vector throughout.
LanczosRun lanczos_pass(const Eigen::SparseMatrix<Complex>& h, ComplexVector start,
                        double tol, int max_dim, const ComplexVector* deflate) {
  Eigen::Index dim = h.rows();
  max_dim = int(std::min<Eigen::Index>(max_dim, dim));
  auto project_out = [&](ComplexVector& w) {
    if (deflate) w -= (*deflate) * deflate->dot(w);
  };
  project_out(start);
  double n0 = start.norm();
  if (n0 < 1e-12) throw std::runtime_error("lanczos: start vector vanished");
  start /= n0;

  ComplexMatrix basis(dim, max_dim);
  std::vector<double> alpha, beta;  // beta[j] couples v_{j-1} and v_j
  basis.col(0) = start;
  LanczosRun out;

  ComplexVector w(dim);
  int m = 0;
  for (int j = 0; j < max_dim; ++j) {
    w = h * basis.col(j);
    ++out.matvecs;
    double a = std::real(Complex(basis.col(j).dot(w)));
    alpha.push_back(a);
    w -= a * basis.col(j);
    if (j > 0) w -= beta.back() * basis.col(j - 1);
    project_out(w);
    // full reorthogonalization, two passes
    for (int pass = 0; pass < 2; ++pass) {
      for (int k = 0; k <= j; ++k) w -= basis.col(k) * basis.col(k).dot(w);
    }
    m = j + 1;

    // Ritz data from the tridiagonal
    RealMatrix t = RealMatrix::Zero(m, m);
    for (int i = 0; i < m; ++i) t(i, i) = alpha[std::size_t(i)];
    for (int i = 0; i + 1 < m; ++i) {
      t(i, i + 1) = beta[std::size_t(i)];
      t(i + 1, i) = beta[std::size_t(i)];
    }
    Eigen::SelfAdjointEigenSolver<RealMatrix> tdec(t);
    double theta = tdec.eigenvalues()[0];
    double scale = std::max(std::abs(tdec.eigenvalues()[0]), std::abs(tdec.eigenvalues()[m - 1]));
    if (scale == 0.0) scale = 1.0;
    double bnext = w.norm();
    double est = bnext * std::abs(tdec.eigenvectors()(m - 1, 0));

    bool breakdown = bnext < 1e-14 * scale;
    if (est <= 0.5 * tol * scale || breakdown || j + 1 == max_dim) {
      ComplexVector x = basis.leftCols(m) * tdec.eigenvectors().col(0).cast<Complex>();
      x.normalize();
      ComplexVector hx = h * x;
      ++out.matvecs;
      double energy = std::real(Complex(x.dot(hx)));
      double res = (hx - energy * x).norm();
      out.energy = energy;
      out.vector = std::move(x);
      out.residual = res;
      if (m > 1) {
        out.second_ritz = tdec.eigenvalues()[1];
        out.has_second = true;
      }
      if (res <= tol * scale || breakdown || j + 1 == max_dim) return out;
    }
    beta.push_back(bnext);
    basis.col(j + 1) = w / bnext;
  }
  return out;
}

}  // namespace

GroundStateResult ground_state(const SparseOperator& h, double tol, std::uint64_t seed,
                               std::optional<int> total_sz_twice) {
  Eigen::Index dim = h.matrix.rows();
  int nq = h.num_qubits;
  SplitMix64 rng(seed);

  ComplexVector start(dim);
  if (total_sz_twice) {
    int twice = *total_sz_twice;
    if ((nq - twice) % 2 != 0 || twice < -nq || twice > nq) {
      throw std::invalid_argument("ground_state: invalid S^z sector for this qubit count");
    }
    int downs = (nq - twice) / 2;
    start.setZero();
    for (Eigen::Index b = 0; b < dim; ++b) {
      if (std::popcount(std::uint64_t(b)) == downs) {
        start[b] = Complex(rng.gaussian(), rng.gaussian());
      }
    }
  } else {
    for (Eigen::Index b = 0; b < dim; ++b) start[b] = Complex(rng.gaussian(), rng.gaussian());
  }

  const int max_dim = 200;
  const int max_restarts = 40;
  double scale_guess = 1.0;
  LanczosRun run;
  int total_matvecs = 0;
  bool converged = false;
  for (int restart = 0; restart < max_restarts; ++restart) {
    run = lanczos_pass(h.matrix, start, tol, max_dim, nullptr);
    total_matvecs += run.matvecs;
    scale_guess = std::max(std::abs(run.energy), run.has_second ? std::abs(run.second_ritz) : 0.0);
    if (scale_guess == 0.0) scale_guess = 1.0;
    if (run.residual <= tol * scale_guess) {
      converged = true;
      break;
    }
    start = run.vector;  // restart from the best Ritz vector
  }
  if (!converged) {
    std::ostringstream msg;
    msg << "ground_state: not converged, residual " << run.residual << " after "
        << total_matvecs << " matvecs";
    throw std::runtime_error(msg.str());
  }

  // Degeneracy probe: a second, deflated run from an independent start vector.
  // Only this resolves true multiplicity; the tridiagonal of a single Krylov
  // run never duplicates a degenerate eigenvalue.
  ComplexVector probe_start(dim);
  if (total_sz_twice) {
    int downs = (nq - *total_sz_twice) / 2;
    probe_start.setZero();
    for (Eigen::Index b = 0; b < dim; ++b) {
      if (std::popcount(std::uint64_t(b)) == downs) {
        probe_start[b] = Complex(rng.gaussian(), rng.gaussian());
      }
    }
  } else {
    for (Eigen::Index b = 0; b < dim; ++b) probe_start[b] = Complex(rng.gaussian(), rng.gaussian());
  }
  bool degenerate = false;
  if (dim > 1) {
    LanczosRun probe = lanczos_pass(h.matrix, probe_start, std::max(tol, 1e-12), max_dim,
                                    &run.vector);
    total_matvecs += probe.matvecs;
    degenerate = std::abs(probe.energy - run.energy) < 1e-10;
  }

  GroundStateResult out;
  out.energy = run.energy;
  out.state = StateVector(nq, run.vector);
  out.residual = run.residual;
  out.iterations = total_matvecs;
  out.degenerate = degenerate;
  out.converged = true;
  return out;
}

nlohmann::json lattice_to_json(const LatticeSpec& spec) {
  nlohmann::json j;
  switch (spec.variant) {
    case LatticeVariant::chain: j["variant"] = "chain"; break;
    case LatticeVariant::square: j["variant"] = "square"; break;
    case LatticeVariant::ladder: j["variant"] = "ladder"; break;
  }
  j["length"] = spec.length;
  j["lx"] = spec.lx;
  j["ly"] = spec.ly;
  j["j"] = spec.j;
  j["j_par"] = spec.j_par;
  j["j_perp"] = spec.j_perp;
  j["twist"] = spec.twist;
  j["twisted_boundary"] = spec.twisted_boundary;
  j["site_to_qubit"] = spec.site_to_qubit;
  return j;
}

LatticeSpec lattice_from_json(const nlohmann::json& j) {
  LatticeSpec spec;
  std::string variant = j.at("variant").get<std::string>();
  if (variant == "chain") spec.variant = LatticeVariant::chain;
  else if (variant == "square") spec.variant = LatticeVariant::square;
  else if (variant == "ladder") spec.variant = LatticeVariant::ladder;
  else throw std::invalid_argument("unknown lattice variant: " + variant);
  spec.length = j.value("length", 0);
  spec.lx = j.value("lx", 0);
  spec.ly = j.value("ly", 0);
  spec.j = j.value("j", 1.0);
  spec.j_par = j.value("j_par", 1.0);
  spec.j_perp = j.value("j_perp", 0.0);
  spec.twist = j.value("twist", 0.0);
  spec.twisted_boundary = j.value("twisted_boundary", false);
  if (j.contains("site_to_qubit")) {
    spec.site_to_qubit = j.at("site_to_qubit").get<std::vector<int>>();
  } else {
    // regenerate the default mapping
    switch (spec.variant) {
      case LatticeVariant::chain: spec = chain_spec(spec.length, spec.j); break;
      case LatticeVariant::square: spec = square_spec(spec.lx, spec.ly, spec.j); break;
      case LatticeVariant::ladder:
        spec = ladder_spec(spec.length, spec.j_par, spec.j_perp, spec.twist);
        break;
    }
  }
  spec.validate();
  return spec;
}

}  // namespace vqsvd
