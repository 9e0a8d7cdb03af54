#include "snmix/study.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "snmix/metrics.hpp"
#include "snmix/rounding.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace snmix {

std::string kernel_name(KernelFamily k) {
  return k == KernelFamily::gaussian ? "gaussian" : "skew-normal";
}

KernelFamily kernel_from_name(const std::string& name) {
  if (name == "gaussian") return KernelFamily::gaussian;
  if (name == "skew-normal" || name == "skew_normal") return KernelFamily::skew_normal;
  throw std::invalid_argument("unknown kernel: " + name);
}

std::uint64_t study_data_seed(std::uint64_t root, int scenario, int n, int replicate) {
  return derive_seed(root, {0xDA7Aull, static_cast<std::uint64_t>(scenario),
                            static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(replicate)});
}

std::uint64_t study_chain_seed(std::uint64_t root, int scenario, int n, int replicate,
                               KernelFamily kernel) {
  return derive_seed(root, {0xC4A1ull, static_cast<std::uint64_t>(scenario),
                            static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(replicate),
                            kernel == KernelFamily::gaussian ? 1ull : 2ull});
}

std::vector<double> replicate_data(const StudyConfig& cfg, int scenario, int n, int replicate) {
  Rng rng(study_data_seed(cfg.root_seed, scenario, n, replicate));
  if (scenario_is_discrete(scenario)) {
    const std::vector<int> ints = sample_scenario_discrete(scenario, n, rng);
    return std::vector<double>(ints.begin(), ints.end());
  }
  return sample_scenario_continuous(scenario, n, rng, cfg.scenario_options);
}

namespace {

StudyRecord run_cell(const StudyConfig& cfg, int scenario, int n, KernelFamily kernel,
                     int replicate) {
  StudyRecord rec;
  rec.scenario = scenario;
  rec.n = n;
  rec.kernel = kernel;
  rec.replicate = replicate;
  rec.data_seed = study_data_seed(cfg.root_seed, scenario, n, replicate);
  rec.chain_seed = study_chain_seed(cfg.root_seed, scenario, n, replicate, kernel);
  try {
    ChainConfig chain;
    chain.hmax = cfg.hmax;
    chain.n_iter = cfg.n_iter;
    chain.burn_in = cfg.burn_in;
    chain.thin = cfg.thin;
    chain.seed = rec.chain_seed;
    chain.kernel = kernel;
    chain.alpha_update = cfg.alpha_update;

    if (scenario_is_discrete(scenario)) {
      Rng data_rng(rec.data_seed);
      const std::vector<int> data = sample_scenario_discrete(scenario, n, data_rng);
      const std::vector<double> latent_view(data.begin(), data.end());
      chain.base = BaseMeasure::defaults_from_data(latent_view);
      const RoundingGrid grid = RoundingGrid::count();
      const PosteriorSummary summary = run_chain_discrete(data, chain, grid);

      const int max_y = *std::max_element(data.begin(), data.end());
      long j_max = choose_j_max(summary, grid, max_y);
      // extend the comparison range until the true pmf tail is negligible
      double tail = 0.0;
      long j_true = j_max;
      for (long j = 0;; ++j) {
        tail += true_pmf(scenario, static_cast<int>(j));
        if (tail > 1.0 - 1e-10) {
          j_true = j;
          break;
        }
        if (j > 10000) break;
      }
      const long j_top = std::max(j_max, j_true);
      const std::vector<double> fit = posterior_mean_pmf(summary, grid, j_top);
      std::vector<double> truth(j_top + 1, 0.0);
      for (long j = 0; j <= j_top; ++j) truth[j] = true_pmf(scenario, static_cast<int>(j));
      rec.kl = kl_divergence_pmf(truth, fit);
      rec.l2 = l2_distance_pmf(truth, fit);
      const OccupiedHistogram occ = occupied_cluster_posterior(summary);
      rec.k_mean = occ.mean;
      double am = 0.0;
      for (const MixtureDraw& d : summary.draws) am += d.alpha;
      rec.alpha_mean = am / static_cast<double>(summary.draws.size());
    } else {
      Rng data_rng(rec.data_seed);
      const std::vector<double> data =
          sample_scenario_continuous(scenario, n, data_rng, cfg.scenario_options);
      chain.base = BaseMeasure::defaults_from_data(data);
      const PosteriorSummary summary = run_chain(data, chain);

      const std::vector<double> grid = default_grid(data, cfg.grid_points);
      const std::vector<double> fit = posterior_mean_density(summary, grid);
      std::vector<double> truth(grid.size());
      for (std::size_t i = 0; i < grid.size(); ++i)
        truth[i] = true_density(scenario, grid[i], cfg.scenario_options);
      const DensityGrid f(grid, truth), g(grid, fit);
      rec.kl = kl_divergence(f, g);
      rec.l2 = l2_distance(f, g);
      const OccupiedHistogram occ = occupied_cluster_posterior(summary);
      rec.k_mean = occ.mean;
      double am = 0.0;
      for (const MixtureDraw& d : summary.draws) am += d.alpha;
      rec.alpha_mean = am / static_cast<double>(summary.draws.size());
    }
  } catch (const std::exception& e) {
    rec.status = std::string("error:") + e.what();
    rec.kl = rec.l2 = rec.k_mean = rec.alpha_mean = std::nan("");
  }
  return rec;
}

using CellKey = std::tuple<int, int, int, int>;  // scenario, n, kernel tag, replicate

CellKey key_of(const StudyRecord& r) {
  return {r.scenario, r.n, r.kernel == KernelFamily::gaussian ? 0 : 1, r.replicate};
}

}  // namespace

std::vector<StudyRecord> run_study(const StudyConfig& cfg,
                                   const std::vector<StudyRecord>& existing) {
  for (int id : cfg.scenario_ids)
    if (!scenario_is_valid(id)) throw std::invalid_argument("run_study: unknown scenario id");

  std::set<CellKey> done;
  std::vector<StudyRecord> records;
  for (const StudyRecord& r : existing)
    if (r.status == "ok") {
      done.insert(key_of(r));
      records.push_back(r);
    }

  struct Task {
    int scenario, n, replicate;
    KernelFamily kernel;
  };
  std::vector<Task> tasks;
  for (int scenario : cfg.scenario_ids)
    for (int n : cfg.sample_sizes)
      for (KernelFamily kernel : cfg.kernels)
        for (int rep = 0; rep < cfg.replicates; ++rep) {
          const CellKey key{scenario, n, kernel == KernelFamily::gaussian ? 0 : 1, rep};
          if (!done.count(key)) tasks.push_back({scenario, n, rep, kernel});
        }

  std::vector<StudyRecord> fresh(tasks.size());
  const auto n_tasks = static_cast<std::int64_t>(tasks.size());
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t t = 0; t < n_tasks; ++t)
    fresh[t] = run_cell(cfg, tasks[t].scenario, tasks[t].n, tasks[t].kernel, tasks[t].replicate);

  records.insert(records.end(), fresh.begin(), fresh.end());
  std::sort(records.begin(), records.end(),
            [](const StudyRecord& a, const StudyRecord& b) { return key_of(a) < key_of(b); });
  return records;
}

std::vector<CellMean> cell_means(const std::vector<StudyRecord>& records) {
  std::map<std::tuple<int, int, int>, CellMean> cells;
  for (const StudyRecord& r : records) {
    if (r.status != "ok") continue;
    auto& c = cells[{r.scenario, r.n, r.kernel == KernelFamily::gaussian ? 0 : 1}];
    c.scenario = r.scenario;
    c.n = r.n;
    c.kernel = r.kernel;
    ++c.completed;
    c.kl += r.kl;
    c.l2 += r.l2;
    c.k_mean += r.k_mean;
    c.alpha_mean += r.alpha_mean;
  }
  std::vector<CellMean> out;
  for (auto& [key, c] : cells) {
    if (c.completed > 0) {
      c.kl /= c.completed;
      c.l2 /= c.completed;
      c.k_mean /= c.completed;
      c.alpha_mean /= c.completed;
    }
    out.push_back(c);
  }
  return out;
}

std::string render_table(const std::vector<StudyRecord>& records) {
  const std::vector<CellMean> cells = cell_means(records);
  std::ostringstream os;
  char buf[256];
  int last_scenario = -1;
  for (const CellMean& c : cells) {
    if (c.scenario != last_scenario) {
      if (last_scenario != -1) os << "\n";
      os << "Scenario " << c.scenario << "\n";
      std::snprintf(buf, sizeof(buf), "%6s  %-12s %10s %10s %10s %12s\n", "n", "Kernel", "KL",
                    "L2", "E(k|-)", "E(alpha|-)");
      os << buf;
      last_scenario = c.scenario;
    }
    std::snprintf(buf, sizeof(buf), "%6d  %-12s %10.4f %10.4f %10.4f %12.4f\n", c.n,
                  kernel_name(c.kernel).c_str(), c.kl, c.l2, c.k_mean, c.alpha_mean);
    os << buf;
  }
  return os.str();
}

}  // namespace snmix
