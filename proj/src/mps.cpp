#include "vqsvd/mps.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace vqsvd {

namespace {

constexpr double kSvdRelCut = 1e-12;
constexpr double kCanonicalTol = 1e-10;

// Bits needed to index a bond of dimension chi (0 for a trivial bond).
int bond_bits(int chi) {
  int bits = 0;
  while ((1 << bits) < chi) ++bits;
  return bits;
}

// Peels one register half into site tensors, cut side first. `isometry` is
// 2^n x chi0 with orthonormal columns (the Schmidt vectors of this side).
// Invariant entering site i: carry(y * 2^i + x_low, k) holds the partial
// contraction with bond y of dimension chi_i against center index k, where
// x_low runs over the i innermost qubits of the side.
struct PeelResult {
  std::vector<MpsTensor> tensors;
  std::vector<int> bonds;
};

PeelResult peel_side(const ComplexMatrix& isometry, int n,
                     std::optional<int> max_bond) {
  const Eigen::Index chi0 = isometry.cols();
  PeelResult out;
  out.tensors.resize(static_cast<std::size_t>(n));
  out.bonds.assign(static_cast<std::size_t>(n) + 1, 1);
  out.bonds[0] = static_cast<int>(chi0);

  ComplexMatrix carry = isometry;
  Eigen::Index chi_hi = 1;
  for (int i = n; i >= 2; --i) {
    const Eigen::Index low_dim = Eigen::Index(1) << (i - 1);
    ComplexMatrix block(2 * chi_hi, low_dim * chi0);
    for (Eigen::Index y = 0; y < chi_hi; ++y)
      for (Eigen::Index s = 0; s < 2; ++s)
        for (Eigen::Index xl = 0; xl < low_dim; ++xl)
          block.row(y * 2 + s).segment(xl * chi0, chi0) =
              carry.row(y * 2 * low_dim + s * low_dim + xl);

    SvdResult dec = svd(block);
    Eigen::Index keep = 0;
    const double top = dec.values.size() > 0 ? dec.values[0] : 0.0;
    while (keep < dec.values.size() && dec.values[keep] > kSvdRelCut * top)
      ++keep;
    if (keep == 0) keep = 1;
    if (max_bond && keep > *max_bond) keep = *max_bond;
    RealVector kept = dec.values.head(keep);
    const double kept_norm = kept.norm();
    if (kept_norm > 0.0 && keep < dec.values.size())
      kept *= dec.values.norm() / kept_norm;

    MpsTensor& site = out.tensors[static_cast<std::size_t>(i) - 1];
    for (int s = 0; s < 2; ++s) {
      site.m[static_cast<std::size_t>(s)].resize(chi_hi, keep);
      for (Eigen::Index y = 0; y < chi_hi; ++y)
        site.m[static_cast<std::size_t>(s)].row(y) =
            dec.left.row(y * 2 + s).head(keep);
    }

    ComplexMatrix next(keep * low_dim, chi0);
    ComplexMatrix rows = kept.asDiagonal() * dec.right.leftCols(keep).adjoint();
    for (Eigen::Index y = 0; y < keep; ++y)
      for (Eigen::Index xl = 0; xl < low_dim; ++xl)
        next.row(y * low_dim + xl) =
            rows.row(y).segment(xl * chi0, chi0);
    carry = std::move(next);
    chi_hi = keep;
    out.bonds[static_cast<std::size_t>(i) - 1] = static_cast<int>(keep);
  }

  // Site 1 absorbs the carry directly: it is already isometric against the
  // center index, and an SVD here would rotate the center basis.
  MpsTensor& first = out.tensors[0];
  for (int s = 0; s < 2; ++s) {
    first.m[static_cast<std::size_t>(s)].resize(chi_hi, chi0);
    for (Eigen::Index y = 0; y < chi_hi; ++y)
      first.m[static_cast<std::size_t>(s)].row(y) = carry.row(y * 2 + s);
  }
  return out;
}

// Inverse of the peel: rebuilds the 2^n x chi0 side matrix.
ComplexMatrix unpeel_side(const std::vector<MpsTensor>& tensors,
                          Eigen::Index chi0) {
  const int n = static_cast<int>(tensors.size());
  ComplexMatrix carry(2 * tensors[0].m[0].rows(), chi0);
  for (int s = 0; s < 2; ++s)
    for (Eigen::Index y = 0; y < tensors[0].m[0].rows(); ++y)
      carry.row(y * 2 + s) = tensors[0].m[static_cast<std::size_t>(s)].row(y);
  for (int i = 2; i <= n; ++i) {
    const Eigen::Index low_dim = Eigen::Index(1) << (i - 1);
    const MpsTensor& site = tensors[static_cast<std::size_t>(i) - 1];
    const Eigen::Index rows_out = site.m[0].rows();
    ComplexMatrix next(rows_out * 2 * low_dim, chi0);
    for (Eigen::Index y = 0; y < rows_out; ++y)
      for (Eigen::Index s = 0; s < 2; ++s) {
        auto dest = next.middleRows(y * 2 * low_dim + s * low_dim, low_dim);
        dest.setZero();
        for (Eigen::Index yp = 0; yp < site.m[0].cols(); ++yp)
          dest += site.m[static_cast<std::size_t>(s)](y, yp) *
                  carry.middleRows(yp * low_dim, low_dim);
      }
    carry = std::move(next);
  }
  return carry;
}

double side_deviation(const MpsTensor& site) {
  const Eigen::Index cols = site.m[0].cols();
  ComplexMatrix gram = site.m[0].adjoint() * site.m[0] +
                       site.m[1].adjoint() * site.m[1];
  gram -= ComplexMatrix::Identity(cols, cols);
  return gram.cwiseAbs().maxCoeff();
}

// Embeds a site tensor as an isometry on `size` qubits and completes it to a
// unitary via Householder QR with a phase fix so the isometry columns are
// reproduced exactly.
ComplexMatrix site_unitary(const MpsTensor& site, int size) {
  const Eigen::Index dim = Eigen::Index(1) << size;
  const Eigen::Index chi_in = site.m[0].cols();
  const Eigen::Index chi_out = site.m[0].rows();
  if (chi_in > dim || 2 * chi_out > dim)
    throw std::runtime_error("site tensor does not fit a " +
                             std::to_string(size) + "-qubit gate");
  ComplexMatrix iso = ComplexMatrix::Zero(dim, chi_in);
  for (Eigen::Index s = 0; s < 2; ++s)
    for (Eigen::Index y = 0; y < chi_out; ++y)
      iso.row(s + 2 * y) = site.m[static_cast<std::size_t>(s)].row(y);

  Eigen::HouseholderQR<ComplexMatrix> qr(iso);
  ComplexMatrix unitary = qr.householderQ();
  ComplexMatrix r = qr.matrixQR().topRows(chi_in).triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < chi_in; ++j) {
    const Complex d = r(j, j);
    const double mag = std::abs(d);
    if (mag < 1e-14)
      throw std::runtime_error("rank-deficient site tensor in gate completion");
    unitary.col(j) *= d / mag;
  }
  return unitary;
}

void side_gates(const std::vector<MpsTensor>& tensors,
                const std::vector<int>& bonds,
                std::vector<ComplexMatrix>& gates, std::vector<int>& sizes) {
  const int n = static_cast<int>(tensors.size());
  for (int i = 1; i <= n; ++i) {
    const int b_in = bond_bits(bonds[static_cast<std::size_t>(i) - 1]);
    const int b_out = bond_bits(bonds[static_cast<std::size_t>(i)]);
    const int size = std::max(b_in, 1 + b_out);
    gates.push_back(site_unitary(tensors[static_cast<std::size_t>(i) - 1], size));
    sizes.push_back(size);
  }
}

nlohmann::json tensor_to_json(const MpsTensor& site) {
  nlohmann::json arr = nlohmann::json::array();
  for (int s = 0; s < 2; ++s) {
    const ComplexMatrix& m = site.m[static_cast<std::size_t>(s)];
    nlohmann::json entries = nlohmann::json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r)
      for (Eigen::Index c = 0; c < m.cols(); ++c)
        entries.push_back({m(r, c).real(), m(r, c).imag()});
    arr.push_back({{"rows", m.rows()}, {"cols", m.cols()}, {"entries", entries}});
  }
  return arr;
}

}  // namespace

CanonicalMps state_to_mps(const StateVector& state, const BipartiteCut& cut,
                          std::optional<int> max_bond) {
  cut.validate(state.num_qubits);
  if (!cut.is_contiguous(state.num_qubits))
    throw std::invalid_argument("state_to_mps requires a contiguous cut");
  if (max_bond && *max_bond < 1)
    throw std::invalid_argument("max_bond must be at least 1, got " +
                                std::to_string(*max_bond));

  SchmidtDecomposition dec = schmidt_decompose(state, cut);
  Eigen::Index keep = 0;
  const double top = dec.values.size() > 0 ? dec.values[0] : 0.0;
  while (keep < dec.values.size() && dec.values[keep] > kSvdRelCut * top)
    ++keep;
  if (keep == 0) keep = 1;
  if (max_bond && keep > *max_bond) keep = *max_bond;

  CanonicalMps mps;
  mps.cut = cut;
  mps.weights = dec.values.head(keep);
  mps.weights /= mps.weights.norm();

  const int n_a = static_cast<int>(cut.subsystem_a.size());
  const int n_b = static_cast<int>(cut.subsystem_b.size());
  PeelResult a_side =
      peel_side(dec.left_vectors.leftCols(keep), n_a, max_bond);
  PeelResult b_side =
      peel_side(dec.right_vectors.leftCols(keep), n_b, max_bond);
  mps.a = std::move(a_side.tensors);
  mps.a_bonds = std::move(a_side.bonds);
  mps.b = std::move(b_side.tensors);
  mps.b_bonds = std::move(b_side.bonds);
  return mps;
}

CanonicalReport verify_canonical(const CanonicalMps& mps) {
  CanonicalReport report;
  for (const MpsTensor& site : mps.a)
    report.a_deviation.push_back(side_deviation(site));
  for (const MpsTensor& site : mps.b)
    report.b_deviation.push_back(side_deviation(site));
  report.weight_norm_deviation =
      mps.weights.size() == 0 && mps.a.empty() && mps.b.empty()
          ? 0.0
          : std::abs(mps.weights.squaredNorm() - 1.0);
  report.max_deviation = report.weight_norm_deviation;
  for (double d : report.a_deviation)
    report.max_deviation = std::max(report.max_deviation, d);
  for (double d : report.b_deviation)
    report.max_deviation = std::max(report.max_deviation, d);
  report.pass = report.max_deviation <= kCanonicalTol;
  return report;
}

StateVector mps_reconstruct_state(const CanonicalMps& mps) {
  const int n_a = static_cast<int>(mps.cut.subsystem_a.size());
  const int n_b = static_cast<int>(mps.cut.subsystem_b.size());
  const Eigen::Index chi0 = mps.weights.size();
  ComplexMatrix u = unpeel_side(mps.a, chi0);
  ComplexMatrix v = unpeel_side(mps.b, chi0);
  ComplexMatrix coeff = u * mps.weights.cast<Complex>().asDiagonal() * v.transpose();

  StateVector local = StateVector::zero(n_a + n_b);
  Eigen::Map<ComplexMatrix>(local.amplitudes.data(), coeff.rows(),
                            coeff.cols()) = coeff;

  bool already_local = true;
  for (int i = 0; i < n_a; ++i)
    if (mps.cut.subsystem_a[static_cast<std::size_t>(i)] != i + 1)
      already_local = false;
  if (already_local) return local;

  std::vector<int> order;
  order.insert(order.end(), mps.cut.subsystem_a.begin(), mps.cut.subsystem_a.end());
  order.insert(order.end(), mps.cut.subsystem_b.begin(), mps.cut.subsystem_b.end());
  std::vector<int> inverse(order.size());
  for (std::size_t j = 0; j < order.size(); ++j)
    inverse[static_cast<std::size_t>(order[j]) - 1] = static_cast<int>(j) + 1;
  return permute_qubits(local, inverse);
}

MpsGates mps_to_unitaries(const CanonicalMps& mps) {
  CanonicalReport report = verify_canonical(mps);
  if (!report.pass)
    throw std::invalid_argument(
        "mps_to_unitaries requires a canonical MPS, max deviation " +
        std::to_string(report.max_deviation));
  MpsGates gates;
  gates.weights = mps.weights;
  side_gates(mps.a, mps.a_bonds, gates.u_gates, gates.u_sizes);
  side_gates(mps.b, mps.b_bonds, gates.v_gates, gates.v_sizes);
  return gates;
}

StateVector gates_to_state(const MpsGates& gates, int n_a, int n_b) {
  if (static_cast<int>(gates.u_gates.size()) != n_a ||
      static_cast<int>(gates.v_gates.size()) != n_b)
    throw std::invalid_argument("gate count does not match register sizes");
  StateVector state = StateVector::zero(n_a + n_b);
  const Eigen::Index side_cap =
      Eigen::Index(1) << std::min(n_a, n_b);
  if (gates.weights.size() > side_cap)
    throw std::invalid_argument("center rank " +
                                std::to_string(gates.weights.size()) +
                                " exceeds register capacity " +
                                std::to_string(side_cap));
  for (Eigen::Index k = 0; k < gates.weights.size(); ++k) {
    const std::uint64_t idx =
        static_cast<std::uint64_t>(k) |
        (static_cast<std::uint64_t>(k) << n_a);
    state.amplitudes[static_cast<Eigen::Index>(idx)] = gates.weights[k];
  }
  for (int i = 0; i < n_a; ++i) {
    std::vector<int> targets;
    for (int q = 0; q < gates.u_sizes[static_cast<std::size_t>(i)]; ++q)
      targets.push_back(i + 1 + q);
    state = apply_unitary(state, gates.u_gates[static_cast<std::size_t>(i)], targets);
  }
  for (int i = 0; i < n_b; ++i) {
    std::vector<int> targets;
    for (int q = 0; q < gates.v_sizes[static_cast<std::size_t>(i)]; ++q)
      targets.push_back(n_a + i + 1 + q);
    state = apply_unitary(state, gates.v_gates[static_cast<std::size_t>(i)], targets);
  }
  return state;
}

nlohmann::json mps_to_json(const CanonicalMps& mps) {
  nlohmann::json j;
  j["a_bonds"] = mps.a_bonds;
  j["b_bonds"] = mps.b_bonds;
  j["weights"] = std::vector<double>(mps.weights.data(),
                                     mps.weights.data() + mps.weights.size());
  j["cut"] = {{"subsystem_a", mps.cut.subsystem_a},
              {"subsystem_b", mps.cut.subsystem_b}};
  j["a"] = nlohmann::json::array();
  for (const MpsTensor& site : mps.a) j["a"].push_back(tensor_to_json(site));
  j["b"] = nlohmann::json::array();
  for (const MpsTensor& site : mps.b) j["b"].push_back(tensor_to_json(site));
  return j;
}

}  // namespace vqsvd
