#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "snmix/gibbs.hpp"
#include "snmix/scenarios.hpp"

namespace snmix {

struct StudyConfig {
  std::vector<int> scenario_ids;
  std::vector<int> sample_sizes;
  int replicates = 20;
  std::vector<KernelFamily> kernels = {KernelFamily::gaussian, KernelFamily::skew_normal};
  std::uint64_t root_seed = 1;
  int n_iter = 6000;
  int burn_in = 1000;
  int thin = 1;
  int hmax = 50;
  int grid_points = 2001;
  AlphaUpdate alpha_update = AlphaUpdate::escobar_west;
  ScenarioOptions scenario_options;
};

/// One (scenario, n, kernel, replicate) cell.
struct StudyRecord {
  int scenario = 0;
  int n = 0;
  KernelFamily kernel = KernelFamily::gaussian;
  int replicate = 0;
  std::uint64_t data_seed = 0;
  std::uint64_t chain_seed = 0;
  std::string status = "ok";  // "ok" or "error:<message>"
  double kl = 0.0;
  double l2 = 0.0;
  double k_mean = 0.0;
  double alpha_mean = 0.0;
};

std::string kernel_name(KernelFamily k);
KernelFamily kernel_from_name(const std::string& name);

/// Seed-splitting rule used by the harness: data streams depend on
/// (root, scenario, n, replicate) so both kernels fit the same replicate
/// dataset; chain streams additionally mix in the kernel tag.
std::uint64_t study_data_seed(std::uint64_t root, int scenario, int n, int replicate);
std::uint64_t study_chain_seed(std::uint64_t root, int scenario, int n, int replicate,
                               KernelFamily kernel);

/// Simulates the replicate dataset for a record key (used by the CLI to
/// persist the data files alongside results).
std::vector<double> replicate_data(const StudyConfig& cfg, int scenario, int n, int replicate);

/// Runs every cell not already present in `existing` (matched by
/// scenario/n/kernel/replicate with status "ok"); replicates execute in
/// parallel and results merge deterministically by cell key. A chain failure
/// becomes a record with status "error:...".
std::vector<StudyRecord> run_study(const StudyConfig& cfg,
                                   const std::vector<StudyRecord>& existing = {});

/// Per-cell means over ok replicates in the layout of the paper-style tables
/// (columns KL, L2, E(k|-), E(alpha|-)).
std::string render_table(const std::vector<StudyRecord>& records);

struct CellMean {
  int scenario = 0;
  int n = 0;
  KernelFamily kernel = KernelFamily::gaussian;
  int completed = 0;
  double kl = 0.0, l2 = 0.0, k_mean = 0.0, alpha_mean = 0.0;
};

std::vector<CellMean> cell_means(const std::vector<StudyRecord>& records);

}  // namespace snmix
