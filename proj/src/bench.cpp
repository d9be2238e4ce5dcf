#include "vqsvd/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <string>

#include "vqsvd/ansatz.hpp"
#include "vqsvd/rng.hpp"
#include "vqsvd/sweep.hpp"

namespace vqsvd {

namespace {

void require_keys(const nlohmann::json& j, const std::string& path,
                  std::initializer_list<const char*> allowed) {
  if (!j.is_object())
    throw std::invalid_argument("expected an object at " +
                                (path.empty() ? std::string("/") : path));
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* key : allowed)
      if (it.key() == key) {
        known = true;
        break;
      }
    if (!known)
      throw std::invalid_argument("unknown key at " + path + "/" + it.key());
  }
}

bool has(const nlohmann::json& j, const char* key) {
  return j.contains(key) && !j.at(key).is_null();
}

TargetSpec target_from_json(const nlohmann::json& j) {
  require_keys(j, "/target", {"type", "lattice", "sz_sector", "gs_tol",
                              "num_qubits", "p", "cutoff"});
  TargetSpec t;
  if (has(j, "type")) t.type = j.at("type").get<std::string>();
  if (t.type != "ground_state" && t.type != "hann" && t.type != "exponential" &&
      t.type != "cutoff_weights")
    throw std::invalid_argument("unknown target type \"" + t.type +
                                "\" at /target/type");
  if (t.type == "ground_state") {
    if (!has(j, "lattice"))
      throw std::invalid_argument("missing key /target/lattice");
    require_keys(j.at("lattice"), "/target/lattice",
                 {"variant", "length", "lx", "ly", "j", "j_par", "j_perp",
                  "twist", "twisted_boundary", "site_to_qubit"});
    t.lattice = lattice_from_json(j.at("lattice"));
    if (has(j, "sz_sector")) t.sz_sector = j.at("sz_sector").get<int>();
    if (has(j, "gs_tol")) t.gs_tol = j.at("gs_tol").get<double>();
  } else {
    if (!has(j, "num_qubits"))
      throw std::invalid_argument("missing key /target/num_qubits");
    t.num_qubits = j.at("num_qubits").get<int>();
    if (has(j, "p")) t.p = j.at("p").get<double>();
    if (has(j, "cutoff")) t.cutoff = j.at("cutoff").get<std::uint64_t>();
  }
  return t;
}

}  // namespace

ExperimentConfig config_from_json(const nlohmann::json& j) {
  require_keys(j, "",
               {"target", "cut", "method", "m_layers", "gate_size", "n_steps",
                "p_decay", "num_weights", "weight_cutoff", "cutoffs", "eps",
                "sweep", "seeds", "shots", "output", "write_trace"});
  ExperimentConfig c;
  if (!has(j, "target")) throw std::invalid_argument("missing key /target");
  c.target = target_from_json(j.at("target"));

  if (has(j, "cut")) {
    require_keys(j.at("cut"), "/cut", {"subsystem_a"});
    if (has(j.at("cut"), "subsystem_a"))
      c.cut_a = j.at("cut").at("subsystem_a").get<std::vector<int>>();
  }
  if (has(j, "method")) c.method = j.at("method").get<std::string>();
  if (c.method != "full" && c.method != "partial" && c.method != "simple" &&
      c.method != "improved" && c.method != "prep")
    throw std::invalid_argument("unknown method \"" + c.method +
                                "\" at /method");
  if (has(j, "m_layers")) c.m_layers = j.at("m_layers").get<int>();
  if (c.m_layers < 1)
    throw std::invalid_argument("/m_layers must be at least 1, got " +
                                std::to_string(c.m_layers));
  if (has(j, "gate_size")) c.gate_size = j.at("gate_size").get<int>();
  if (c.gate_size < 1 || c.gate_size > 3)
    throw std::invalid_argument("/gate_size must be 1, 2 or 3, got " +
                                std::to_string(c.gate_size));
  if (has(j, "n_steps")) c.n_steps = j.at("n_steps").get<int>();
  if (c.n_steps < 1)
    throw std::invalid_argument("/n_steps must be at least 1, got " +
                                std::to_string(c.n_steps));
  if (has(j, "p_decay")) c.p_decay = j.at("p_decay").get<double>();
  if (!(c.p_decay > 0.0) || c.p_decay > 1.0)
    throw std::invalid_argument("/p_decay must lie in (0, 1]");
  if (has(j, "num_weights")) c.num_weights = j.at("num_weights").get<int>();
  if (c.num_weights < 0)
    throw std::invalid_argument("/num_weights must be non-negative");
  if (has(j, "weight_cutoff"))
    c.weight_cutoff = j.at("weight_cutoff").get<int>();
  if (has(j, "cutoffs")) c.cutoffs = j.at("cutoffs").get<std::vector<int>>();
  if (has(j, "eps")) c.eps = j.at("eps").get<double>();
  if (!(c.eps > 0.0)) throw std::invalid_argument("/eps must be positive");
  if (has(j, "sweep")) {
    const nlohmann::json& s = j.at("sweep");
    require_keys(s, "/sweep", {"rel_tol", "max_sweeps", "forward_and_backward"});
    if (has(s, "rel_tol")) c.sweep.rel_tol = s.at("rel_tol").get<double>();
    if (has(s, "max_sweeps"))
      c.sweep.max_sweeps = s.at("max_sweeps").get<std::size_t>();
    if (has(s, "forward_and_backward"))
      c.sweep.forward_and_backward = s.at("forward_and_backward").get<bool>();
  }
  if (has(j, "seeds")) {
    const nlohmann::json& s = j.at("seeds");
    require_keys(s, "/seeds", {"circuit", "solver", "shots"});
    if (has(s, "circuit"))
      c.seeds.circuit = s.at("circuit").get<std::uint64_t>();
    if (has(s, "solver")) c.seeds.solver = s.at("solver").get<std::uint64_t>();
    if (has(s, "shots")) c.seeds.shots = s.at("shots").get<std::uint64_t>();
  }
  if (has(j, "shots")) c.shots = j.at("shots").get<std::int64_t>();
  if (has(j, "output")) {
    const nlohmann::json& o = j.at("output");
    require_keys(o, "/output", {"dir", "prefix"});
    if (has(o, "dir")) c.output.dir = o.at("dir").get<std::string>();
    if (has(o, "prefix")) c.output.prefix = o.at("prefix").get<std::string>();
  }
  if (has(j, "write_trace")) c.write_trace = j.at("write_trace").get<bool>();
  return c;
}

nlohmann::json config_to_json(const ExperimentConfig& c) {
  nlohmann::json t;
  t["type"] = c.target.type;
  if (c.target.type == "ground_state") {
    t["lattice"] = lattice_to_json(c.target.lattice);
    t["gs_tol"] = c.target.gs_tol;
    if (c.target.sz_sector)
      t["sz_sector"] = *c.target.sz_sector;
    else
      t["sz_sector"] = nullptr;
  } else {
    t["num_qubits"] = c.target.num_qubits;
    if (c.target.type != "hann") t["p"] = c.target.p;
    if (c.target.type == "cutoff_weights") t["cutoff"] = c.target.cutoff;
  }
  nlohmann::json j;
  j["target"] = t;
  if (c.cut_a.empty())
    j["cut"] = nullptr;
  else
    j["cut"] = {{"subsystem_a", c.cut_a}};
  j["method"] = c.method;
  j["m_layers"] = c.m_layers;
  if (c.method == "prep") j["gate_size"] = c.gate_size;
  if (c.method == "simple" || c.method == "improved")
    j["n_steps"] = c.n_steps;
  if (c.method == "improved") j["eps"] = c.eps;
  if (c.method == "full" || c.method == "partial") j["p_decay"] = c.p_decay;
  if (c.method == "full") {
    j["num_weights"] = c.num_weights;
    if (c.weight_cutoff)
      j["weight_cutoff"] = *c.weight_cutoff;
    else
      j["weight_cutoff"] = nullptr;
  }
  if (c.method == "partial") j["cutoffs"] = c.cutoffs;
  j["sweep"] = {{"rel_tol", c.sweep.rel_tol},
                {"max_sweeps", c.sweep.max_sweeps},
                {"forward_and_backward", c.sweep.forward_and_backward}};
  j["seeds"] = {{"circuit", c.seeds.circuit},
                {"solver", c.seeds.solver},
                {"shots", c.seeds.shots}};
  if (c.shots)
    j["shots"] = *c.shots;
  else
    j["shots"] = nullptr;
  j["output"] = {{"dir", c.output.dir}, {"prefix", c.output.prefix}};
  j["write_trace"] = c.write_trace;
  return j;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw std::invalid_argument("cannot open config file " + path);
  nlohmann::json j = nlohmann::json::parse(in);
  return config_from_json(j);
}

std::string config_hash(const ExperimentConfig& config) {
  nlohmann::json j = config_to_json(config);
  j.erase("output");
  j.erase("write_trace");
  const std::string dump = j.dump();
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char ch : dump) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

namespace {

BipartiteCut cut_from_a(const std::vector<int>& a, int num_qubits) {
  BipartiteCut cut;
  cut.subsystem_a = a;
  std::vector<char> used(static_cast<std::size_t>(num_qubits) + 1, 0);
  for (int q : a) {
    if (q < 1 || q > num_qubits)
      throw std::invalid_argument("cut qubit " + std::to_string(q) +
                                  " outside 1.." + std::to_string(num_qubits));
    used[static_cast<std::size_t>(q)] = 1;
  }
  for (int q = 1; q <= num_qubits; ++q)
    if (!used[static_cast<std::size_t>(q)]) cut.subsystem_b.push_back(q);
  cut.validate(num_qubits);
  return cut;
}

std::string fmt(double x) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path);
}

std::string output_base(const ExperimentConfig& config) {
  std::string dir = config.output.dir;
  if (dir.empty()) {
    const char* env = std::getenv("VQSVD_OUT");
    dir = env && *env ? env : ".";
  }
  std::filesystem::create_directories(dir);
  return dir + "/" + config.output.prefix;
}

std::string git_hash() {
  FILE* pipe = popen("git rev-parse HEAD 2>/dev/null", "r");
  if (!pipe) return "unknown";
  char buf[128];
  std::string s;
  while (std::fgets(buf, sizeof buf, pipe)) s += buf;
  pclose(pipe);
  while (!s.empty() && (s.back() == '\n' || s.back() == '\r')) s.pop_back();
  return s.empty() ? "unknown" : s;
}

std::string timestamp_utc() {
  std::time_t now = std::time(nullptr);
  std::tm tm_utc{};
  gmtime_r(&now, &tm_utc);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

std::string oracle_csv(const RealVector& oracle, const std::string& hash) {
  std::string text = "n,sigma_n,config_hash\n";
  for (Eigen::Index n = 0; n < oracle.size(); ++n)
    text += std::to_string(n + 1) + "," + fmt(oracle[n]) + "," + hash + "\n";
  return text;
}

std::string errors_csv(const SpectrumResult& spectrum, const ErrorReport& report,
                       const RealVector& oracle, const std::string& hash) {
  std::string text = "n,s_n,sigma_n,rel_err,xi_n,F_n,config_hash\n";
  for (std::size_t n = 0; n < spectrum.values.size(); ++n) {
    const Eigen::Index i = static_cast<Eigen::Index>(n);
    const double sigma =
        i < oracle.size() ? oracle[i] : std::numeric_limits<double>::quiet_NaN();
    text += std::to_string(n + 1) + "," + fmt(spectrum.values[n]) + "," +
            fmt(sigma) + "," + fmt(report.rel_errors[i]) + "," +
            fmt(report.xi[i]) + "," + fmt(spectrum.fidelity[n]) + "," + hash +
            "\n";
  }
  return text;
}

std::string trace_csv(const nlohmann::json& trace, const std::string& hash) {
  std::string text = "sweep,objective,config_hash\n";
  int n = 0;
  for (const auto& value : trace)
    text += std::to_string(++n) + "," + fmt(value.get<double>()) + "," + hash +
            "\n";
  return text;
}

// Conjunction of every convergence flag the method metadata reports.
bool metadata_converged(const nlohmann::json& m) {
  bool ok = true;
  if (m.contains("converged")) ok = ok && m.at("converged").get<bool>();
  if (m.contains("runs"))
    for (const auto& r : m.at("runs")) ok = ok && r.at("converged").get<bool>();
  if (m.contains("step_trace"))
    for (const auto& s : m.at("step_trace"))
      ok = ok && s.at("converged").get<bool>();
  return ok;
}

std::vector<int> default_cutoffs(int max_rank) {
  std::vector<int> cutoffs;
  for (int c : {1, 2, 4, 8, 16, 32})
    if (c <= max_rank) cutoffs.push_back(c);
  return cutoffs;
}

SpectrumResult run_prep(const ExperimentConfig& config,
                        const TargetBundle& bundle) {
  const int nq = bundle.state.num_qubits;
  if (nq < config.gate_size)
    throw std::invalid_argument("prep target has " + std::to_string(nq) +
                                " qubits, below gate size " +
                                std::to_string(config.gate_size));
  ComplexMatrix target(bundle.state.amplitudes.size(), 1);
  target.col(0) = bundle.state.amplitudes;
  LayeredCircuit u = build_layered(nq, config.m_layers,
                                   mix_seed(config.seeds.circuit, 1), false,
                                   config.gate_size);
  LayeredCircuit v;
  SweepResult sweep = sweep_optimize(u, v, {target, RealVector::Ones(1)},
                                     config.sweep);
  const double value = sweep.final_objective;

  SpectrumResult result;
  result.method = "prep";
  result.values = {value};
  result.defined = {true};
  result.oracle = {1.0};
  result.rel_errors = {std::abs(1.0 - value)};
  result.fidelity = {value * value};
  result.xi = {value > 0.0 ? -2.0 * std::log(value)
                           : std::numeric_limits<double>::quiet_NaN()};
  result.metadata = {
      {"layers", config.m_layers},
      {"gate_size", config.gate_size},
      {"seed", config.seeds.circuit},
      {"converged", sweep.converged},
      {"sweeps", sweep.sweeps_run},
      {"final_objective", value},
      {"infidelity", 1.0 - value * value},
      {"sweep_trace", sweep.sweep_trace},
  };
  return result;
}

}  // namespace

TargetBundle build_target(const ExperimentConfig& config) {
  TargetBundle bundle;
  const TargetSpec& t = config.target;
  if (t.type == "ground_state") {
    SparseOperator h = build_hamiltonian(t.lattice);
    bundle.gs = ground_state(h, t.gs_tol, config.seeds.solver, t.sz_sector);
    bundle.state = bundle.gs.state;
    bundle.has_gs = true;
  } else if (t.type == "hann") {
    RealVector w = omega_hann_weights(t.num_qubits);
    bundle.state = StateVector::zero(t.num_qubits);
    bundle.state.amplitudes = w.cast<Complex>();
  } else if (t.type == "exponential") {
    bundle.state = omega_exponential_state(t.p, t.num_qubits);
  } else {
    bundle.state = omega_cutoff_state(t.p, t.cutoff, t.num_qubits);
  }
  const int nq = bundle.state.num_qubits;
  bundle.cut =
      config.cut_a.empty() ? half_cut(nq, nq / 2) : cut_from_a(config.cut_a, nq);
  bundle.oracle = schmidt_decompose(bundle.state, bundle.cut).values;
  return bundle;
}

RunArtifacts run_experiment(const ExperimentConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  TargetBundle bundle = build_target(config);
  const int max_rank = static_cast<int>(
      std::min<Eigen::Index>(bundle.oracle.size(),
                             Eigen::Index(1) << std::min(
                                 bundle.cut.subsystem_a.size(),
                                 bundle.cut.subsystem_b.size())));

  RunArtifacts out;
  out.hash = config_hash(config);

  DeflationOutput deflation;
  bool have_ledger = false;
  if (config.method == "full") {
    const int k = config.num_weights > 0 ? config.num_weights : max_rank;
    ReferenceWeights w = reference_weights(config.p_decay, k, config.weight_cutoff);
    out.spectrum = full_svd(bundle.state, bundle.cut, config.m_layers, w,
                            config.sweep, config.seeds.circuit);
  } else if (config.method == "partial") {
    std::vector<int> cutoffs =
        config.cutoffs.empty() ? default_cutoffs(max_rank) : config.cutoffs;
    out.spectrum = partial_svd(bundle.state, bundle.cut, config.m_layers,
                               config.p_decay, cutoffs, config.sweep,
                               config.seeds.circuit);
  } else if (config.method == "simple") {
    deflation = simple_deflation(bundle.state, bundle.cut, config.m_layers,
                                 config.n_steps, config.sweep,
                                 config.seeds.circuit);
    out.spectrum = deflation.spectrum;
    have_ledger = true;
  } else if (config.method == "improved") {
    deflation = improved_deflation(bundle.state, bundle.cut, config.m_layers,
                                   config.n_steps, config.eps, config.sweep,
                                   config.seeds.circuit);
    out.spectrum = deflation.spectrum;
    have_ledger = true;
  } else {
    out.spectrum = run_prep(config, bundle);
  }

  RealVector metric_oracle = bundle.oracle;
  if (config.method == "prep") metric_oracle = RealVector::Ones(1);
  out.report = spectrum_metrics(out.spectrum, metric_oracle);
  out.converged = metadata_converged(out.spectrum.metadata);
  out.exit_code = out.converged ? 0 : 4;
  if (config.shots) out.spectrum.metadata["shots"] = *config.shots;

  const std::string base = output_base(config);
  const std::string oracle_path = base + "_oracle.csv";
  write_text(oracle_path, oracle_csv(bundle.oracle, out.hash));
  out.files.push_back(oracle_path);

  nlohmann::json spectrum_json = spectrum_to_json(out.spectrum);
  spectrum_json["config_hash"] = out.hash;
  const std::string spectrum_path = base + "_spectrum.json";
  write_text(spectrum_path, spectrum_json.dump(2) + "\n");
  out.files.push_back(spectrum_path);

  const std::string errors_path = base + "_errors.csv";
  write_text(errors_path,
             errors_csv(out.spectrum, out.report, metric_oracle, out.hash));
  out.files.push_back(errors_path);

  if (have_ledger) {
    nlohmann::json ledger_json = ledger_to_json(deflation.ledger);
    ledger_json["config_hash"] = out.hash;
    const std::string ledger_path = base + "_ledger.json";
    write_text(ledger_path, ledger_json.dump(2) + "\n");
    out.files.push_back(ledger_path);
  }

  if (config.write_trace && out.spectrum.metadata.contains("sweep_trace")) {
    const std::string trace_path = base + "_trace.csv";
    write_text(trace_path,
               trace_csv(out.spectrum.metadata.at("sweep_trace"), out.hash));
    out.files.push_back(trace_path);
  }

  out.wall_seconds = std::chrono::duration<double>(
                         std::chrono::steady_clock::now() - start)
                         .count();

  nlohmann::json meta;
  meta["config"] = config_to_json(config);
  meta["config_hash"] = out.hash;
  meta["git_hash"] = git_hash();
  meta["timestamp_utc"] = timestamp_utc();
  meta["wall_seconds"] = out.wall_seconds;
  meta["converged"] = out.converged;
  meta["exit_code"] = out.exit_code;
  meta["method"] = config.method;
  if (bundle.has_gs) {
    meta["ground_state"] = {{"energy", bundle.gs.energy},
                            {"residual", bundle.gs.residual},
                            {"iterations", bundle.gs.iterations},
                            {"degenerate", bundle.gs.degenerate},
                            {"converged", bundle.gs.converged}};
    meta["lattice_mapping"] = config.target.lattice.site_to_qubit;
  }
  const std::string meta_path = base + "_meta.json";
  meta["files"] = out.files;
  write_text(meta_path, meta.dump(2) + "\n");
  out.files.push_back(meta_path);
  return out;
}

std::string write_oracle_only(const ExperimentConfig& config) {
  TargetBundle bundle = build_target(config);
  const std::string path = output_base(config) + "_oracle.csv";
  write_text(path, oracle_csv(bundle.oracle, config_hash(config)));
  return path;
}

namespace {

ExperimentConfig chain_base(int length, const std::string& method, int layers) {
  ExperimentConfig c;
  c.target.type = "ground_state";
  c.target.lattice = chain_spec(length, 1.0);
  c.target.sz_sector = 0;
  c.method = method;
  c.m_layers = layers;
  c.seeds = {101, 7, 1};
  return c;
}

}  // namespace

std::vector<std::string> preset_names() {
  return {"fig2", "fig2-small", "fig3", "fig3-small", "fig4",
          "fig4-small", "fig6", "fig7", "fig7-small"};
}

std::vector<PresetRun> preset_runs(const std::string& name,
                                   const std::string& out_dir,
                                   std::optional<std::uint64_t> seed) {
  std::vector<PresetRun> runs;
  auto push = [&](const std::string& run_name, ExperimentConfig c) {
    c.output.prefix = run_name;
    if (!out_dir.empty()) c.output.dir = out_dir;
    if (seed) c.seeds = {*seed, *seed, *seed};
    runs.push_back({run_name, std::move(c)});
  };

  if (name == "fig2") {
    for (int m = 1; m <= 6; ++m) {
      ExperimentConfig c = chain_base(16, "full", m);
      c.sweep.max_sweeps = m == 1 ? 1500 : 2500;
      c.write_trace = true;
      push("fig2_m" + std::to_string(m), c);
    }
    for (int cutoff : {1, 2, 4, 8, 16, 32}) {
      ExperimentConfig c = chain_base(16, "full", 4);
      c.weight_cutoff = cutoff;
      c.sweep.max_sweeps = 2000;
      push("fig2_c" + std::to_string(cutoff), c);
    }
  } else if (name == "fig2-small") {
    for (int m : {1, 2, 3}) {
      ExperimentConfig c = chain_base(10, "full", m);
      c.sweep.max_sweeps = 800;
      c.write_trace = true;
      push("fig2s_m" + std::to_string(m), c);
    }
    for (int cutoff : {1, 4, 16}) {
      ExperimentConfig c = chain_base(10, "full", 2);
      c.weight_cutoff = cutoff;
      c.sweep.max_sweeps = 800;
      push("fig2s_c" + std::to_string(cutoff), c);
    }
  } else if (name == "fig3" || name == "fig3-small") {
    const bool small = name == "fig3-small";
    const int length = small ? 10 : 16;
    const int layers = small ? 3 : 4;
    const int steps = small ? 10 : 20;
    ExperimentConfig full = chain_base(length, "full", layers);
    full.sweep.max_sweeps = small ? 500 : 2500;
    push(small ? "fig3s_full" : "fig3_full", full);
    ExperimentConfig partial = chain_base(length, "partial", layers);
    partial.p_decay = 1.0;
    partial.cutoffs = small ? std::vector<int>{1, 2, 3, 4}
                            : std::vector<int>{1, 2, 3, 4, 5, 6};
    partial.sweep.max_sweeps = small ? 500 : 2000;
    push(small ? "fig3s_partial" : "fig3_partial", partial);
    ExperimentConfig simple = chain_base(length, "simple", layers);
    simple.n_steps = steps;
    simple.sweep.max_sweeps = small ? 500 : 800;
    push(small ? "fig3s_simple" : "fig3_simple", simple);
    ExperimentConfig improved = chain_base(length, "improved", layers);
    improved.n_steps = steps;
    improved.sweep.max_sweeps = small ? 500 : 800;
    push(small ? "fig3s_improved" : "fig3_improved", improved);
  } else if (name == "fig4" || name == "fig4-small") {
    const bool small = name == "fig4-small";
    ExperimentConfig full;
    full.target.type = "ground_state";
    full.target.lattice = small ? square_spec(4, 2, 1.0) : square_spec(4, 4, 1.0);
    full.target.sz_sector = 0;
    full.method = "full";
    full.m_layers = small ? 3 : 4;
    full.seeds = {101, 7, 1};
    full.sweep.max_sweeps = small ? 500 : 2500;
    push(small ? "fig4s_full" : "fig4_full", full);
    ExperimentConfig improved = full;
    improved.method = "improved";
    improved.n_steps = small ? 8 : 20;
    improved.sweep.max_sweeps = small ? 500 : 800;
    push(small ? "fig4s_improved" : "fig4_improved", improved);
  } else if (name == "fig6") {
    for (int n : {8, 12})
      for (int g : {1, 2, 3}) {
        ExperimentConfig c;
        c.target.type = "hann";
        c.target.num_qubits = n;
        c.method = "prep";
        c.gate_size = g;
        c.m_layers = 6;
        c.seeds = {101, 7, 1};
        c.sweep.max_sweeps = 2000;
        c.write_trace = true;
        push("fig6_n" + std::to_string(n) + "_g" + std::to_string(g), c);
      }
  } else if (name == "fig7" || name == "fig7-small") {
    const bool small = name == "fig7-small";
    for (double j_perp : {-0.1, 0.1}) {
      ExperimentConfig c;
      c.target.type = "ground_state";
      c.target.lattice =
          ladder_spec(small ? 4 : 8, 1.0, j_perp, 3.14159265358979323846);
      c.target.sz_sector = 0;
      c.method = "improved";
      c.m_layers = small ? 3 : 4;
      c.n_steps = small ? 8 : 20;
      c.seeds = {101, 7, 1};
      c.sweep.max_sweeps = small ? 500 : 800;
      const std::string phase = j_perp < 0 ? "topological" : "trivial";
      push((small ? "fig7s_" : "fig7_") + phase, c);
    }
  } else {
    throw std::invalid_argument("unknown preset \"" + name + "\"");
  }
  return runs;
}

}  // namespace vqsvd
