#include "vqsvd/state.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace vqsvd {

namespace {

constexpr int kMaxQubits = 24;

void check_qubit_count(int n) {
  if (n < 0 || n > kMaxQubits) {
    std::ostringstream msg;
    msg << "qubit count " << n << " outside supported range [0, " << kMaxQubits << "]";
    throw std::invalid_argument(msg.str());
  }
}

void check_unitary(const ComplexMatrix& g) {
  if (g.rows() != g.cols() || g.rows() == 0) {
    throw std::invalid_argument("gate matrix must be square");
  }
  double dev = (g.adjoint() * g - ComplexMatrix::Identity(g.rows(), g.cols()))
                   .cwiseAbs()
                   .maxCoeff();
  if (dev > 1e-12) {
    std::ostringstream msg;
    msg << "gate not unitary, deviation " << dev;
    throw std::invalid_argument(msg.str());
  }
}

}  // namespace

StateVector::StateVector(int n_qubits, ComplexVector amps) {
  check_qubit_count(n_qubits);
  if (amps.size() != Eigen::Index(std::uint64_t(1) << n_qubits)) {
    throw std::invalid_argument("amplitude count does not match qubit count");
  }
  if (!amps.allFinite()) {
    throw std::invalid_argument("non-finite amplitudes");
  }
  num_qubits = n_qubits;
  amplitudes = std::move(amps);
}

StateVector StateVector::zero(int n_qubits) {
  check_qubit_count(n_qubits);
  StateVector s;
  s.num_qubits = n_qubits;
  s.amplitudes = ComplexVector::Zero(Eigen::Index(std::uint64_t(1) << n_qubits));
  s.amplitudes[0] = 1.0;
  return s;
}

StateVector StateVector::basis(int n_qubits, std::uint64_t index) {
  check_qubit_count(n_qubits);
  if (index >= (std::uint64_t(1) << n_qubits)) {
    throw std::invalid_argument("basis index out of range");
  }
  StateVector s;
  s.num_qubits = n_qubits;
  s.amplitudes = ComplexVector::Zero(Eigen::Index(std::uint64_t(1) << n_qubits));
  s.amplitudes[Eigen::Index(index)] = 1.0;
  return s;
}

void StateVector::normalize() {
  double n = norm();
  if (n < 1e-300) throw std::runtime_error("cannot normalize zero state");
  amplitudes /= n;
}

void BipartiteCut::validate(int num_qubits) const {
  std::vector<bool> seen(std::size_t(num_qubits) + 1, false);
  auto visit = [&](const std::vector<int>& part) {
    for (int q : part) {
      if (q < 1 || q > num_qubits) throw std::invalid_argument("cut qubit index out of range");
      if (seen[std::size_t(q)]) throw std::invalid_argument("cut subsystems not disjoint");
      seen[std::size_t(q)] = true;
    }
  };
  visit(subsystem_a);
  visit(subsystem_b);
  if (int(subsystem_a.size() + subsystem_b.size()) != num_qubits) {
    throw std::invalid_argument("cut does not cover all qubits");
  }
}

bool BipartiteCut::is_contiguous(int num_qubits) const {
  int n_a = int(subsystem_a.size());
  if (int(subsystem_a.size() + subsystem_b.size()) != num_qubits) return false;
  for (int i = 0; i < n_a; ++i) {
    if (subsystem_a[std::size_t(i)] != i + 1) return false;
  }
  for (int i = 0; i < int(subsystem_b.size()); ++i) {
    if (subsystem_b[std::size_t(i)] != n_a + i + 1) return false;
  }
  return true;
}

BipartiteCut half_cut(int num_qubits, int n_a) {
  if (n_a < 0 || n_a > num_qubits) throw std::invalid_argument("half_cut: bad split");
  BipartiteCut cut;
  for (int q = 1; q <= n_a; ++q) cut.subsystem_a.push_back(q);
  for (int q = n_a + 1; q <= num_qubits; ++q) cut.subsystem_b.push_back(q);
  return cut;
}

StateVector apply_unitary(const StateVector& state, const ComplexMatrix& gate,
                          const std::vector<int>& targets) {
  int k = int(targets.size());
  if (k < 1 || k > 6) throw std::invalid_argument("apply_unitary: 1 to 6 targets supported");
  Eigen::Index dim = Eigen::Index(1) << k;
  if (gate.rows() != dim || gate.cols() != dim) {
    throw std::invalid_argument("apply_unitary: gate size does not match target count");
  }
  check_unitary(gate);
  std::vector<bool> used(std::size_t(state.num_qubits) + 1, false);
  for (int q : targets) {
    if (q < 1 || q > state.num_qubits) throw std::invalid_argument("apply_unitary: target out of range");
    if (used[std::size_t(q)]) throw std::invalid_argument("apply_unitary: duplicate target");
    used[std::size_t(q)] = true;
  }

  std::uint64_t n = state.dimension();
  std::uint64_t target_mask = 0;
  std::vector<std::uint64_t> bit(targets.size());
  for (int t = 0; t < k; ++t) {
    bit[std::size_t(t)] = std::uint64_t(1) << (targets[std::size_t(t)] - 1);
    target_mask |= bit[std::size_t(t)];
  }
  // offsets[s] = global-index offset of gate-local basis state s
  std::vector<std::uint64_t> offsets(std::size_t(dim), 0);
  for (std::uint64_t s = 0; s < std::uint64_t(dim); ++s) {
    for (int t = 0; t < k; ++t) {
      if (s & (std::uint64_t(1) << t)) offsets[s] |= bit[std::size_t(t)];
    }
  }

  StateVector out;
  out.num_qubits = state.num_qubits;
  out.amplitudes = state.amplitudes;
  ComplexVector scratch(dim);
  for (std::uint64_t base = 0; base < n; ++base) {
    if (base & target_mask) continue;  // enumerate states with target bits clear
    for (Eigen::Index s = 0; s < dim; ++s) {
      scratch[s] = state.amplitudes[Eigen::Index(base | offsets[std::size_t(s)])];
    }
    for (Eigen::Index r = 0; r < dim; ++r) {
      Complex acc = 0.0;
      for (Eigen::Index s = 0; s < dim; ++s) acc += gate(r, s) * scratch[s];
      out.amplitudes[Eigen::Index(base | offsets[std::size_t(r)])] = acc;
    }
  }
  return out;
}

StateVector apply_gate(const StateVector& state, const ComplexMatrix& gate,
                       std::pair<int, int> targets) {
  if (gate.rows() != 4 || gate.cols() != 4) {
    throw std::invalid_argument("apply_gate: expected a 4x4 gate");
  }
  return apply_unitary(state, gate, {targets.first, targets.second});
}

StateVector permute_qubits(const StateVector& state, const std::vector<int>& new_order) {
  int n = state.num_qubits;
  if (int(new_order.size()) != n) throw std::invalid_argument("permute_qubits: wrong length");
  std::vector<bool> seen(std::size_t(n) + 1, false);
  for (int q : new_order) {
    if (q < 1 || q > n || seen[std::size_t(q)]) {
      throw std::invalid_argument("permute_qubits: not a permutation");
    }
    seen[std::size_t(q)] = true;
  }
  StateVector out;
  out.num_qubits = n;
  out.amplitudes = ComplexVector::Zero(state.amplitudes.size());
  std::uint64_t dim = state.dimension();
  for (std::uint64_t old_idx = 0; old_idx < dim; ++old_idx) {
    std::uint64_t new_idx = 0;
    for (int j = 0; j < n; ++j) {
      if (old_idx & (std::uint64_t(1) << (new_order[std::size_t(j)] - 1))) {
        new_idx |= std::uint64_t(1) << j;
      }
    }
    out.amplitudes[Eigen::Index(new_idx)] = state.amplitudes[Eigen::Index(old_idx)];
  }
  return out;
}

ComplexMatrix coefficient_matrix(const StateVector& state, const BipartiteCut& cut) {
  cut.validate(state.num_qubits);
  int n_a = int(cut.subsystem_a.size());
  int n_b = int(cut.subsystem_b.size());
  const StateVector* src = &state;
  StateVector permuted;
  if (!cut.is_contiguous(state.num_qubits)) {
    std::vector<int> order = cut.subsystem_a;
    order.insert(order.end(), cut.subsystem_b.begin(), cut.subsystem_b.end());
    permuted = permute_qubits(state, order);
    src = &permuted;
  }
  Eigen::Index rows = Eigen::Index(1) << n_a;
  Eigen::Index cols = Eigen::Index(1) << n_b;
  // column-major map: C(n, m) = amps[n + (m << n_a)] is exactly Eigen's layout
  return Eigen::Map<const ComplexMatrix>(src->amplitudes.data(), rows, cols);
}

SchmidtDecomposition schmidt_decompose(const StateVector& state, const BipartiteCut& cut) {
  if (std::abs(state.norm() - 1.0) > 1e-12) {
    throw std::invalid_argument("schmidt_decompose: state not normalized");
  }
  ComplexMatrix c = coefficient_matrix(state, cut);
  SvdResult dec = svd(c);
  SchmidtDecomposition out;
  out.values = dec.values;
  out.left_vectors = dec.left;
  // C = U S V^dagger means state = sum_k s_k u_k (x) conj(V col k)
  out.right_vectors = dec.right.conjugate();
  return out;
}

Complex overlap(const StateVector& a, const StateVector& b) {
  if (a.num_qubits != b.num_qubits) {
    throw std::invalid_argument("overlap: qubit counts differ");
  }
  return a.amplitudes.dot(b.amplitudes);  // Eigen dot conjugates the left side
}

StateVector vectorize_operator(const std::vector<std::pair<Complex, ComplexMatrix>>& terms) {
  if (terms.empty()) throw std::invalid_argument("vectorize_operator: no terms");
  Eigen::Index dim = terms.front().second.rows();
  int k = 0;
  while ((Eigen::Index(1) << k) < dim) ++k;
  if ((Eigen::Index(1) << k) != dim) {
    throw std::invalid_argument("vectorize_operator: operator dimension not a power of 2");
  }
  for (const auto& [gamma, g] : terms) {
    (void)gamma;
    if (g.rows() != dim || g.cols() != dim) {
      throw std::invalid_argument("vectorize_operator: mixed operator dimensions");
    }
    check_unitary(g);
  }
  // (G tensor I)|Phi+> has coefficient matrix 2^{-K/2} G with the G-register
  // as the row (qubits 1..K), so the sum can be filled directly.
  ComplexMatrix a = ComplexMatrix::Zero(dim, dim);
  for (const auto& [gamma, g] : terms) a += gamma * g;
  double scale = std::pow(2.0, -0.5 * k);
  StateVector out;
  out.num_qubits = 2 * k;
  check_qubit_count(out.num_qubits);
  out.amplitudes = ComplexVector::Zero(dim * dim);
  for (Eigen::Index m = 0; m < dim; ++m) {
    for (Eigen::Index n = 0; n < dim; ++n) {
      out.amplitudes[n + (m << k)] = scale * a(n, m);
    }
  }
  return out;
}

void save_state(const StateVector& state, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("save_state: cannot open " + path);
  const char magic[4] = {'V', 'Q', 'S', 'T'};
  std::uint32_t version = 1;
  std::uint32_t nq = std::uint32_t(state.num_qubits);
  f.write(magic, 4);
  f.write(reinterpret_cast<const char*>(&version), 4);
  f.write(reinterpret_cast<const char*>(&nq), 4);
  for (Eigen::Index i = 0; i < state.amplitudes.size(); ++i) {
    double re = state.amplitudes[i].real();
    double im = state.amplitudes[i].imag();
    f.write(reinterpret_cast<const char*>(&re), 8);
    f.write(reinterpret_cast<const char*>(&im), 8);
  }
  if (!f) throw std::runtime_error("save_state: write failed for " + path);
}

StateVector load_state(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("load_state: cannot open " + path);
  char magic[4];
  std::uint32_t version = 0, nq = 0;
  f.read(magic, 4);
  f.read(reinterpret_cast<char*>(&version), 4);
  f.read(reinterpret_cast<char*>(&nq), 4);
  if (!f || std::string(magic, 4) != "VQST") {
    throw std::runtime_error("load_state: bad magic in " + path);
  }
  if (version != 1) throw std::runtime_error("load_state: unsupported version");
  check_qubit_count(int(nq));
  Eigen::Index dim = Eigen::Index(1) << nq;
  ComplexVector amps(dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    double re = 0, im = 0;
    f.read(reinterpret_cast<char*>(&re), 8);
    f.read(reinterpret_cast<char*>(&im), 8);
    amps[i] = Complex(re, im);
  }
  if (!f) throw std::runtime_error("load_state: truncated file " + path);
  return StateVector(int(nq), std::move(amps));
}

nlohmann::json state_to_json(const StateVector& state) {
  if (state.num_qubits > 16) {
    throw std::invalid_argument("state_to_json: intended for small states (<= 16 qubits)");
  }
  nlohmann::json j;
  j["num_qubits"] = state.num_qubits;
  nlohmann::json amps = nlohmann::json::array();
  for (Eigen::Index i = 0; i < state.amplitudes.size(); ++i) {
    amps.push_back({state.amplitudes[i].real(), state.amplitudes[i].imag()});
  }
  j["amplitudes"] = std::move(amps);
  return j;
}

StateVector state_from_json(const nlohmann::json& j) {
  int nq = j.at("num_qubits").get<int>();
  check_qubit_count(nq);
  const auto& amps = j.at("amplitudes");
  Eigen::Index dim = Eigen::Index(1) << nq;
  if (Eigen::Index(amps.size()) != dim) {
    throw std::invalid_argument("state_from_json: wrong amplitude count");
  }
  ComplexVector v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    v[i] = Complex(amps[std::size_t(i)].at(0).get<double>(),
                   amps[std::size_t(i)].at(1).get<double>());
  }
  return StateVector(nq, std::move(v));
}

}  // namespace vqsvd
