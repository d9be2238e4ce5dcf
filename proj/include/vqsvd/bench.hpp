#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "vqsvd/analysis.hpp"
#include "vqsvd/hamiltonian.hpp"
#include "vqsvd/svd_methods.hpp"

namespace vqsvd {

// What state the experiment analyzes. ground_state diagonalizes a Heisenberg
// lattice; the weight-state types build the closed-form reference states.
struct TargetSpec {
  std::string type = "ground_state";  // ground_state | hann | exponential | cutoff_weights
  LatticeSpec lattice;
  std::optional<int> sz_sector;  // total 2 S^z sector pin for the solver
  double gs_tol = 1e-11;
  int num_qubits = 0;   // weight-state types
  double p = 0.9;       // exponential / cutoff_weights decay
  std::uint64_t cutoff = 1;  // cutoff_weights
};

struct SeedSpec {
  std::uint64_t circuit = 1;
  std::uint64_t solver = 1;
  std::uint64_t shots = 1;
};

struct OutputSpec {
  std::string dir;  // empty: VQSVD_OUT or current directory
  std::string prefix = "run";
};

struct ExperimentConfig {
  TargetSpec target;
  std::vector<int> cut_a;  // qubits of subsystem A; empty = first half
  std::string method = "full";  // full | partial | simple | improved | prep
  int m_layers = 1;
  int gate_size = 2;  // prep method only
  int n_steps = 1;    // deflation steps
  double p_decay = 0.9;
  int num_weights = 0;  // full method weight count; 0 = 2^min(N,M)
  std::optional<int> weight_cutoff;  // full method hard cutoff
  std::vector<int> cutoffs;  // partial method, default {1,2,4,8,16,32} clipped
  double eps = 1e-12;
  SweepConfig sweep{1e-12, 20000, true};
  SeedSpec seeds;
  std::optional<std::int64_t> shots;  // recorded in metadata; sampling lives in measurement
  OutputSpec output;
  bool write_trace = false;
};

// Strict parse: unknown keys are rejected with their JSON pointer path.
ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& config);
ExperimentConfig load_config(const std::string& path);

// FNV-1a 64 over the canonical JSON dump, as 16 hex digits.
std::string config_hash(const ExperimentConfig& config);

struct TargetBundle {
  StateVector state;
  BipartiteCut cut;
  RealVector oracle;  // exact Schmidt values across the cut
  GroundStateResult gs;
  bool has_gs = false;
};

TargetBundle build_target(const ExperimentConfig& config);

struct RunArtifacts {
  SpectrumResult spectrum;
  ErrorReport report;
  std::vector<std::string> files;  // everything written, in order
  std::string hash;
  int exit_code = 0;  // 0 ok, 4 optimizer hit the sweep cap
  bool converged = true;
  double wall_seconds = 0.0;
};

// Runs one experiment and writes oracle CSV, spectrum JSON, error CSV, run
// metadata JSON, the deflation ledger JSON when applicable, and the sweep
// trace CSV when requested. Config errors throw std::invalid_argument,
// solver failures std::runtime_error.
RunArtifacts run_experiment(const ExperimentConfig& config);

// Oracle-only artifact (the `oracle` CLI command).
std::string write_oracle_only(const ExperimentConfig& config);

struct PresetRun {
  std::string name;
  ExperimentConfig config;
};

std::vector<std::string> preset_names();

// Expands a preset into its named runs. out_dir overrides the output
// directory when non-empty; seed, when given, replaces every seed group.
std::vector<PresetRun> preset_runs(const std::string& name,
                                   const std::string& out_dir,
                                   std::optional<std::uint64_t> seed);

}  // namespace vqsvd
