// snmix: Dirichlet-process skew-normal mixture fitting, pmf estimation,
// simulation studies, and grid metrics.
//
// Exit codes: 0 success, 2 usage error, 3 data error.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "snmix/gibbs.hpp"
#include "snmix/io.hpp"
#include "snmix/metrics.hpp"
#include "snmix/rounding.hpp"
#include "snmix/scenarios.hpp"
#include "snmix/study.hpp"

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;
using namespace snmix;

namespace {

// ---------------------------------------------------------------- options

struct ChainCli {
  std::string input;
  std::string output;
  std::string kernel = "skew-normal";
  int iters = 6000;
  int burnin = 1000;
  int thin = 1;
  std::uint64_t seed = 1;
  int hmax = 50;
  int grid_points = 2001;
  std::string alpha_update = "escobar-west";
  std::string preset;

  // base-measure overrides; NaN means "derive from data / use default"
  double xi0 = std::nan("");
  double kappa = std::nan("");
  double a = std::nan("");
  double b = std::nan("");
  double psi0 = std::nan("");
  double a_alpha = std::nan("");
  double b_alpha = std::nan("");

  CLI::Option* opt_iters = nullptr;
  CLI::Option* opt_burnin = nullptr;
  CLI::Option* opt_a_alpha = nullptr;
  CLI::Option* opt_b_alpha = nullptr;
};

void add_chain_options(CLI::App* sub, ChainCli& c, bool with_grid) {
  sub->add_option("--kernel", c.kernel, "Kernel family")
      ->check(CLI::IsMember({"gaussian", "skew-normal"}))
      ->capture_default_str();
  c.opt_iters = sub->add_option("--iters", c.iters, "Total Gibbs sweeps")
                    ->check(CLI::PositiveNumber)
                    ->capture_default_str();
  c.opt_burnin = sub->add_option("--burnin", c.burnin, "Discarded initial sweeps")
                     ->check(CLI::NonNegativeNumber)
                     ->capture_default_str();
  sub->add_option("--thin", c.thin, "Keep every thin-th retained draw")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sub->add_option("--seed", c.seed, "Root RNG seed")->capture_default_str();
  sub->add_option("--hmax", c.hmax, "Stick-breaking truncation level")
      ->check(CLI::Range(1, 100000))
      ->capture_default_str();
  if (with_grid)
    sub->add_option("--grid-points", c.grid_points, "Evaluation grid size")
        ->check(CLI::Range(2, 10000000))
        ->capture_default_str();
  sub->add_option("--alpha-update", c.alpha_update, "Concentration update scheme")
      ->check(CLI::IsMember({"escobar-west", "stick-conjugate"}))
      ->capture_default_str();
  sub->add_option("--xi0", c.xi0, "Location prior center (default: sample mean)");
  sub->add_option("--kappa", c.kappa, "Location prior scale factor (default: sample variance)");
  sub->add_option("--a", c.a, "Scale prior shape (default 0.5)");
  sub->add_option("--b", c.b, "Scale prior rate (default 0.5)");
  sub->add_option("--psi0", c.psi0, "Shape prior variance (default 10)");
  c.opt_a_alpha = sub->add_option("--a-alpha", c.a_alpha, "Concentration prior shape (default 1)");
  c.opt_b_alpha = sub->add_option("--b-alpha", c.b_alpha, "Concentration prior rate (default 1)");
}

void apply_preset(ChainCli& c) {
  if (c.preset.empty()) return;
  // galaxy preset: alpha ~ Ga(1/2, 50), 10,000 retained draws
  if (c.opt_a_alpha->count() == 0) c.a_alpha = 0.5;
  if (c.opt_b_alpha->count() == 0) c.b_alpha = 50.0;
  if (c.opt_iters->count() == 0) c.iters = 11000;
  if (c.opt_burnin->count() == 0) c.burnin = 1000;
}

BaseMeasure resolve_base(const ChainCli& c, std::span<const double> data) {
  BaseMeasure base = BaseMeasure::defaults_from_data(data);
  if (!std::isnan(c.xi0)) base.xi0 = c.xi0;
  if (!std::isnan(c.kappa)) base.kappa = c.kappa;
  if (!std::isnan(c.a)) base.a = c.a;
  if (!std::isnan(c.b)) base.b = c.b;
  if (!std::isnan(c.psi0)) base.psi0 = c.psi0;
  if (!std::isnan(c.a_alpha)) base.a_alpha = c.a_alpha;
  if (!std::isnan(c.b_alpha)) base.b_alpha = c.b_alpha;
  return BaseMeasure(base.xi0, base.kappa, base.a, base.b, base.psi0, base.a_alpha,
                     base.b_alpha);  // re-validate
}

ChainConfig resolve_chain(const ChainCli& c, const BaseMeasure& base) {
  ChainConfig cfg;
  cfg.hmax = c.hmax;
  cfg.n_iter = c.iters;
  cfg.burn_in = c.burnin;
  cfg.thin = c.thin;
  cfg.seed = c.seed;
  cfg.kernel = kernel_from_name(c.kernel);
  cfg.base = base;
  cfg.alpha_update = c.alpha_update == "stick-conjugate" ? AlphaUpdate::stick_conjugate
                                                         : AlphaUpdate::escobar_west;
  if (cfg.n_iter <= cfg.burn_in)
    throw CLI::ValidationError("--iters must exceed --burnin");
  return cfg;
}

// --------------------------------------------------------------- file io

void write_text(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

std::string csv_of_grid(const char* xname, const char* vname, std::span<const double> x,
                        std::span<const double> v) {
  std::ostringstream os;
  os << xname << "," << vname << "\n";
  for (std::size_t i = 0; i < x.size(); ++i)
    os << format_double(x[i]) << "," << format_double(v[i]) << "\n";
  return os.str();
}

// resolved config in the same INI dialect --config accepts
std::string resolved_config_ini(const std::string& section, const ChainCli& c,
                                const BaseMeasure& base, bool with_grid,
                                const std::string& extra = "") {
  std::ostringstream os;
  os << "[" << section << "]\n";
  os << "input=\"" << c.input << "\"\n";
  os << "output=\"" << c.output << "\"\n";
  os << "kernel=" << c.kernel << "\n";
  os << "iters=" << c.iters << "\n";
  os << "burnin=" << c.burnin << "\n";
  os << "thin=" << c.thin << "\n";
  os << "seed=" << c.seed << "\n";
  os << "hmax=" << c.hmax << "\n";
  if (with_grid) os << "grid-points=" << c.grid_points << "\n";
  os << "alpha-update=" << c.alpha_update << "\n";
  os << "xi0=" << format_double(base.xi0) << "\n";
  os << "kappa=" << format_double(base.kappa) << "\n";
  os << "a=" << format_double(base.a) << "\n";
  os << "b=" << format_double(base.b) << "\n";
  os << "psi0=" << format_double(base.psi0) << "\n";
  os << "a-alpha=" << format_double(base.a_alpha) << "\n";
  os << "b-alpha=" << format_double(base.b_alpha) << "\n";
  os << extra;
  return os.str();
}

ojson base_to_json(const BaseMeasure& base) {
  ojson j;
  j["xi0"] = base.xi0;
  j["kappa"] = base.kappa;
  j["a"] = base.a;
  j["b"] = base.b;
  j["psi0"] = base.psi0;
  j["a_alpha"] = base.a_alpha;
  j["b_alpha"] = base.b_alpha;
  return j;
}

ojson ess_to_json(const std::vector<double>& ess) {
  ojson arr = ojson::array();
  for (double e : ess) {
    if (std::isfinite(e))
      arr.push_back(e);
    else
      arr.push_back("inf");
  }
  return arr;
}

ojson occupied_to_json(const OccupiedHistogram& occ) {
  ojson j;
  for (const auto& [k, p] : occ.probability) j[std::to_string(k)] = p;
  return j;
}

// common posterior summaries: occupied histogram, traces, ess, means
struct FitReport {
  OccupiedHistogram occupied;
  std::vector<double> monitor_points;
  TraceDiagnostics traces;
  double alpha_mean = 0.0;
  double shape_acceptance = 0.0;
};

FitReport make_report(const PosteriorSummary& summary, std::span<const double> grid) {
  FitReport rep;
  rep.occupied = occupied_cluster_posterior(summary);
  for (double q : {0.1, 0.3, 0.5, 0.7, 0.9})
    rep.monitor_points.push_back(grid.front() + q * (grid.back() - grid.front()));
  rep.traces = trace_diagnostics(summary, rep.monitor_points);
  for (const MixtureDraw& d : summary.draws) rep.alpha_mean += d.alpha;
  rep.alpha_mean /= static_cast<double>(summary.draws.size());
  rep.shape_acceptance =
      summary.diag.shape_attempts > 0
          ? static_cast<double>(summary.diag.shape_accepts) / summary.diag.shape_attempts
          : 0.0;
  return rep;
}

std::string traces_csv(const PosteriorSummary& summary, const FitReport& rep) {
  std::ostringstream os;
  os << "draw,alpha";
  for (std::size_t p = 0; p < rep.monitor_points.size(); ++p) os << ",p" << (p + 1);
  os << "\n";
  for (std::size_t d = 0; d < summary.draws.size(); ++d) {
    os << d << "," << format_double(summary.draws[d].alpha);
    for (std::size_t p = 0; p < rep.monitor_points.size(); ++p)
      os << "," << format_double(rep.traces.traces[p][d]);
    os << "\n";
  }
  return os.str();
}

std::string occupied_csv(const OccupiedHistogram& occ) {
  std::ostringstream os;
  os << "k,probability\n";
  for (const auto& [k, p] : occ.probability) os << k << "," << format_double(p) << "\n";
  return os.str();
}

void report_to_manifest(ojson& m, const PosteriorSummary& summary, const FitReport& rep) {
  m["retained_draws"] = summary.draws.size();
  m["e_alpha"] = rep.alpha_mean;
  m["e_occupied"] = rep.occupied.mean;
  m["occupied_histogram"] = occupied_to_json(rep.occupied);
  m["shape_acceptance_rate"] = rep.shape_acceptance;
  m["monitor_points"] = rep.monitor_points;
  m["ess"] = ess_to_json(rep.traces.ess);
}

// ------------------------------------------------------------- fit-density

int run_fit_density(ChainCli& c) {
  apply_preset(c);
  const std::vector<double> data = read_real_column(c.input);
  const BaseMeasure base = resolve_base(c, data);
  const ChainConfig cfg = resolve_chain(c, base);

  const PosteriorSummary summary = run_chain(data, cfg);
  const std::vector<double> grid = default_grid(data, c.grid_points);
  const std::vector<double> density = posterior_mean_density(summary, grid);
  const FitReport rep = make_report(summary, grid);

  fs::create_directories(c.output);
  const std::string extra = c.preset.empty() ? "" : "preset=" + c.preset + "\n";
  write_text(fs::path(c.output) / "config.resolved",
             resolved_config_ini("fit-density", c, base, true, extra));
  write_text(fs::path(c.output) / "density.csv", csv_of_grid("x", "density", grid, density));
  write_text(fs::path(c.output) / "occupied.csv", occupied_csv(rep.occupied));
  write_text(fs::path(c.output) / "traces.csv", traces_csv(summary, rep));

  ojson m;
  m["command"] = "fit-density";
  m["input"] = c.input;
  m["n_data"] = data.size();
  m["kernel"] = c.kernel;
  m["seed"] = c.seed;
  m["iters"] = c.iters;
  m["burnin"] = c.burnin;
  m["thin"] = c.thin;
  m["hmax"] = c.hmax;
  m["alpha_update"] = c.alpha_update;
  if (!c.preset.empty()) m["preset"] = c.preset;
  m["base_measure"] = base_to_json(base);
  m["grid"] = {{"lo", grid.front()}, {"hi", grid.back()}, {"points", grid.size()}};
  report_to_manifest(m, summary, rep);
  m["files"] = {"config.resolved", "density.csv", "occupied.csv", "traces.csv"};
  write_text(fs::path(c.output) / "manifest.json", m.dump(2) + "\n");
  std::cout << "fit-density: " << summary.draws.size() << " draws, E(k|-) = "
            << rep.occupied.mean << ", E(alpha|-) = " << rep.alpha_mean << "\n";
  return 0;
}

// ----------------------------------------------------------------- fit-pmf

RoundingGrid parse_rounding(const std::string& spec) {
  if (spec == "count") return RoundingGrid::count();
  if (spec == "floor") return RoundingGrid::floor_grid();
  if (spec.rfind("custom:", 0) == 0)
    return RoundingGrid::custom(read_thresholds_file(spec.substr(7)));
  throw CLI::ValidationError("--rounding must be count, floor, or custom:<file>");
}

int run_fit_pmf(ChainCli& c, const std::string& rounding_spec) {
  apply_preset(c);
  const RoundingGrid grid_scheme = parse_rounding(rounding_spec);
  const std::vector<int> data = read_int_column(c.input);
  const std::vector<double> latent_view(data.begin(), data.end());
  const BaseMeasure base = resolve_base(c, latent_view);
  const ChainConfig cfg = resolve_chain(c, base);

  const PosteriorSummary summary = run_chain_discrete(data, cfg, grid_scheme);
  const int max_y = *std::max_element(data.begin(), data.end());
  const long j_max = choose_j_max(summary, grid_scheme, max_y);
  const std::vector<double> pmf = posterior_mean_pmf(summary, grid_scheme, j_max);

  // trace monitor points live on the latent scale
  std::vector<double> latent_grid = default_grid(latent_view, 101);
  const FitReport rep = make_report(summary, latent_grid);

  fs::create_directories(c.output);
  const std::string extra = "rounding=" + rounding_spec + "\n";
  write_text(fs::path(c.output) / "config.resolved",
             resolved_config_ini("fit-pmf", c, base, false, extra));
  {
    std::ostringstream os;
    os << "j,probability\n";
    for (long j = 0; j <= j_max; ++j) os << j << "," << format_double(pmf[j]) << "\n";
    write_text(fs::path(c.output) / "pmf.csv", os.str());
  }
  write_text(fs::path(c.output) / "occupied.csv", occupied_csv(rep.occupied));
  write_text(fs::path(c.output) / "traces.csv", traces_csv(summary, rep));

  ojson m;
  m["command"] = "fit-pmf";
  m["input"] = c.input;
  m["n_data"] = data.size();
  m["kernel"] = c.kernel;
  m["seed"] = c.seed;
  m["iters"] = c.iters;
  m["burnin"] = c.burnin;
  m["thin"] = c.thin;
  m["hmax"] = c.hmax;
  m["alpha_update"] = c.alpha_update;
  m["rounding"] = grid_scheme.scheme_name();
  m["rounding_spec"] = rounding_spec;
  m["base_measure"] = base_to_json(base);
  m["j_max"] = j_max;
  double pmf_sum = 0.0;
  for (double p : pmf) pmf_sum += p;
  m["pmf_sum"] = pmf_sum;
  m["impute_fallbacks"] = summary.diag.impute_fallbacks;
  report_to_manifest(m, summary, rep);
  m["files"] = {"config.resolved", "pmf.csv", "occupied.csv", "traces.csv"};
  write_text(fs::path(c.output) / "manifest.json", m.dump(2) + "\n");
  std::cout << "fit-pmf: " << summary.draws.size() << " draws, J_max = " << j_max
            << ", pmf sum = " << pmf_sum << "\n";
  return 0;
}

// ---------------------------------------------------------------- simulate

std::string records_csv(const std::vector<StudyRecord>& records) {
  std::ostringstream os;
  os << "scenario,n,kernel,replicate,data_seed,chain_seed,status,kl,l2,k_mean,alpha_mean\n";
  for (const StudyRecord& r : records) {
    std::string status = r.status;
    std::replace(status.begin(), status.end(), ',', ';');
    os << r.scenario << "," << r.n << "," << kernel_name(r.kernel) << "," << r.replicate << ","
       << r.data_seed << "," << r.chain_seed << "," << status << "," << format_double(r.kl)
       << "," << format_double(r.l2) << "," << format_double(r.k_mean) << ","
       << format_double(r.alpha_mean) << "\n";
  }
  return os.str();
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      cells.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  cells.push_back(cur);
  return cells;
}

std::vector<StudyRecord> load_records(const fs::path& path) {
  std::vector<StudyRecord> out;
  std::ifstream in(path);
  if (!in) return out;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (header) {
      header = false;
      continue;
    }
    if (line.empty()) continue;
    const std::vector<std::string> cells = split_csv_line(line);
    if (cells.size() != 11) continue;
    try {
      StudyRecord r;
      r.scenario = std::stoi(cells[0]);
      r.n = std::stoi(cells[1]);
      r.kernel = kernel_from_name(cells[2]);
      r.replicate = std::stoi(cells[3]);
      r.data_seed = std::stoull(cells[4]);
      r.chain_seed = std::stoull(cells[5]);
      r.status = cells[6];
      r.kl = std::stod(cells[7]);
      r.l2 = std::stod(cells[8]);
      r.k_mean = std::stod(cells[9]);
      r.alpha_mean = std::stod(cells[10]);
      out.push_back(r);
    } catch (const std::exception&) {
      // malformed row: treat the cell as missing
    }
  }
  return out;
}

int run_simulate(const ChainCli& c, int scenario, int n, int replicates,
                 const std::string& kernel_sel) {
  StudyConfig cfg;
  cfg.scenario_ids = {scenario};
  cfg.sample_sizes = {n};
  cfg.replicates = replicates;
  cfg.root_seed = c.seed;
  cfg.n_iter = c.iters;
  cfg.burn_in = c.burnin;
  cfg.thin = c.thin;
  cfg.hmax = c.hmax;
  cfg.grid_points = c.grid_points;
  cfg.alpha_update = c.alpha_update == "stick-conjugate" ? AlphaUpdate::stick_conjugate
                                                         : AlphaUpdate::escobar_west;
  if (kernel_sel == "gaussian")
    cfg.kernels = {KernelFamily::gaussian};
  else if (kernel_sel == "skew-normal")
    cfg.kernels = {KernelFamily::skew_normal};

  if (cfg.n_iter <= cfg.burn_in)
    throw CLI::ValidationError("--iters must exceed --burnin");

  fs::create_directories(c.output);
  const fs::path results_path = fs::path(c.output) / "results.csv";

  // resume: keep existing ok cells whose seeds match the current derivation
  std::vector<StudyRecord> existing;
  for (const StudyRecord& r : load_records(results_path)) {
    if (r.status != "ok") continue;
    if (r.data_seed != study_data_seed(cfg.root_seed, r.scenario, r.n, r.replicate)) continue;
    if (r.chain_seed !=
        study_chain_seed(cfg.root_seed, r.scenario, r.n, r.replicate, r.kernel))
      continue;
    existing.push_back(r);
  }

  const std::vector<StudyRecord> records = run_study(cfg, existing);
  const std::size_t computed = records.size() - existing.size();

  // replicate datasets, reusable as fit-density / fit-pmf input
  fs::create_directories(fs::path(c.output) / "data");
  for (int rep = 0; rep < replicates; ++rep) {
    const std::vector<double> data = replicate_data(cfg, scenario, n, rep);
    std::ostringstream os;
    os << "y\n";
    for (double v : data) {
      if (scenario_is_discrete(scenario))
        os << static_cast<long long>(v) << "\n";
      else
        os << format_double(v) << "\n";
    }
    std::ostringstream name;
    name << "s" << scenario << "_n" << n << "_rep" << rep << ".csv";
    write_text(fs::path(c.output) / "data" / name.str(), os.str());
  }

  write_text(results_path, records_csv(records));
  write_text(fs::path(c.output) / "table.txt", render_table(records));

  ojson m;
  m["command"] = "simulate";
  m["scenario"] = scenario;
  m["n"] = n;
  m["replicates"] = replicates;
  m["kernels"] = kernel_sel;
  m["root_seed"] = c.seed;
  m["iters"] = c.iters;
  m["burnin"] = c.burnin;
  m["thin"] = c.thin;
  m["hmax"] = c.hmax;
  m["grid_points"] = c.grid_points;
  m["alpha_update"] = c.alpha_update;
  m["records"] = records.size();
  int failed = 0;
  for (const StudyRecord& r : records)
    if (r.status != "ok") ++failed;
  m["failed"] = failed;
  m["resumed"] = existing.size();
  m["files"] = {"results.csv", "table.txt", "data/"};
  write_text(fs::path(c.output) / "manifest.json", m.dump(2) + "\n");

  std::cout << "simulate: " << records.size() << " records (" << computed << " computed, "
            << existing.size() << " reused, " << failed << " failed)\n"
            << render_table(records);
  return 0;
}

// -------------------------------------------------------------------- eval

int run_eval(const std::string& f_path, const std::string& g_path, bool discrete) {
  auto load = [](const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path, 0, "cannot open file");
    std::vector<double> xs, vs;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty()) continue;
      const std::vector<std::string> cells = split_csv_line(line);
      if (cells.size() != 2) throw ParseError(path, lineno, "expected two columns");
      try {
        xs.push_back(std::stod(cells[0]));
        vs.push_back(std::stod(cells[1]));
      } catch (const std::exception&) {
        if (lineno == 1) continue;  // header
        throw ParseError(path, lineno, "expected numbers, got '" + line + "'");
      }
    }
    if (xs.empty()) throw ParseError(path, 0, "empty input: no data values found");
    return std::pair{xs, vs};
  };
  const auto [fx, fv] = load(f_path);
  const auto [gx, gv] = load(g_path);
  if (fx.size() != gx.size()) throw ParseError(g_path, 0, "grids differ in length");
  for (std::size_t i = 0; i < fx.size(); ++i)
    if (fx[i] != gx[i]) throw ParseError(g_path, 0, "grids differ");
  bool flag = false;
  double kl, l2;
  if (discrete) {
    kl = kl_divergence_pmf(fv, gv, &flag);
    l2 = l2_distance_pmf(fv, gv);
  } else {
    const DensityGrid f(fx, fv), g(gx, gv);
    kl = kl_divergence(f, g, &flag);
    l2 = l2_distance(f, g);
  }
  std::cout << "KL " << format_double(kl) << "\n" << "L2 " << format_double(l2) << "\n";
  if (flag) std::cout << "note: support violation, KL is +inf\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dirichlet-process skew-normal mixtures for density and pmf estimation"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Key=value config file; flags override it");

  ChainCli fit_c;
  CLI::App* fit = app.add_subcommand("fit-density", "Fit a density to a real-valued sample");
  fit->fallthrough();
  fit->add_option("--input", fit_c.input, "Single-column CSV of reals")->required();
  fit->add_option("--output", fit_c.output, "Output bundle directory")->required();
  add_chain_options(fit, fit_c, true);
  fit->add_option("--preset", fit_c.preset, "Named preset")->check(CLI::IsMember({"galaxy"}));

  ChainCli pmf_c;
  std::string rounding_spec = "count";
  CLI::App* fpmf = app.add_subcommand("fit-pmf", "Fit a pmf to a nonnegative integer sample");
  fpmf->fallthrough();
  fpmf->add_option("--input", pmf_c.input, "Single-column CSV of nonnegative integers")
      ->required();
  fpmf->add_option("--output", pmf_c.output, "Output bundle directory")->required();
  add_chain_options(fpmf, pmf_c, false);
  fpmf->add_option("--rounding", rounding_spec, "count | floor | custom:<file>")
      ->capture_default_str();

  ChainCli sim_c;
  int scenario = 0, sim_n = 100, replicates = 20;
  std::string kernel_sel = "both";
  CLI::App* sim = app.add_subcommand("simulate", "Run a scenario study");
  sim->fallthrough();
  sim->add_option("--scenario", scenario, "Scenario id (1-8)")
      ->required()
      ->check(CLI::Range(1, 8));
  sim->add_option("--n", sim_n, "Sample size per replicate")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sim->add_option("--replicates", replicates, "Replicates per cell")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sim->add_option("--output", sim_c.output, "Output directory")->required();
  sim->add_option("--kernel", kernel_sel, "gaussian | skew-normal | both")
      ->check(CLI::IsMember({"gaussian", "skew-normal", "both"}))
      ->capture_default_str();
  sim->add_option("--iters", sim_c.iters)->check(CLI::PositiveNumber)->capture_default_str();
  sim->add_option("--burnin", sim_c.burnin)
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  sim->add_option("--thin", sim_c.thin)->check(CLI::PositiveNumber)->capture_default_str();
  sim->add_option("--seed", sim_c.seed)->capture_default_str();
  sim->add_option("--hmax", sim_c.hmax)->check(CLI::Range(1, 100000))->capture_default_str();
  sim->add_option("--grid-points", sim_c.grid_points)
      ->check(CLI::Range(2, 10000000))
      ->capture_default_str();
  sim->add_option("--alpha-update", sim_c.alpha_update)
      ->check(CLI::IsMember({"escobar-west", "stick-conjugate"}))
      ->capture_default_str();

  std::string eval_f, eval_g;
  bool eval_discrete = false;
  CLI::App* ev = app.add_subcommand("eval", "KL and L2 between two grid CSV files");
  ev->fallthrough();
  ev->add_option("--f", eval_f, "Reference grid CSV (x,value)")->required();
  ev->add_option("--g", eval_g, "Comparison grid CSV (x,value)")->required();
  ev->add_flag("--discrete", eval_discrete, "Treat inputs as pmfs (exact sums)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (app.got_subcommand(fit)) return run_fit_density(fit_c);
    if (app.got_subcommand(fpmf)) return run_fit_pmf(pmf_c, rounding_spec);
    if (app.got_subcommand(sim))
      return run_simulate(sim_c, scenario, sim_n, replicates, kernel_sel);
    if (app.got_subcommand(ev)) return run_eval(eval_f, eval_g, eval_discrete);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    std::cerr << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
