#include "drmlab_cli/commands.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include "drm/distributions.hpp"
#include "drm/histogram_io.hpp"
#include "drm/montecarlo.hpp"
#include "drm/operator.hpp"
#include "drm/random_measures.hpp"
#include "drm/verification.hpp"

namespace drm::cli {
namespace fs = std::filesystem;
namespace {

constexpr int kManifestVersion = 1;

fs::path prepare_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create " + dir.string() + ": " + ec.message());
  return dir;
}

void write_json(const fs::path& path, const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << j.dump(2) << '\n';
}

nlohmann::json manifest(std::string_view command, const ExperimentConfig& cfg) {
  return {{"command", command}, {"version", kManifestVersion}, {"config", to_json(cfg)}};
}

GridSpec grid_of(const ExperimentConfig& cfg) { return GridSpec(cfg.x_max, cfg.cells); }

MetricConfig metric_of(const ExperimentConfig& cfg) {
  return MetricConfig::make(cfg.alpha, cfg.s_min, cfg.s_max, cfg.s_points, cfg.tolerance);
}

HistogramMeasure initial_density(const ExperimentConfig& cfg, const GridSpec& grid) {
  if (cfg.init == "equilibrium") return projected_drm_equilibrium(cfg.w, grid);
  if (cfg.init == "point") return point_mass(cfg.w, grid);
  if (cfg.init == "exponential") return projected_gamma(1.0, cfg.w, grid);
  const UniformPiece piece{0.0, 2.0 * cfg.w, 1.0};
  return from_uniform_pieces({&piece, 1}, grid);
}

double histogram_ks(const HistogramMeasure& p, const HistogramMeasure& q) {
  return ks_distance(p, [&q](double x) { return q.cdf_at(x); });
}

struct Check {
  std::string name;
  bool passed = false;
  double measured = 0.0;
  double limit = 0.0;
  std::string note;
};

nlohmann::json to_json(const Check& c) {
  return {{"name", c.name}, {"passed", c.passed}, {"measured", c.measured}, {"limit", c.limit}, {"note", c.note}};
}

}  // namespace

int cmd_simulate(ExperimentConfig cfg, std::ostream& log) {
  if (cfg.init.empty()) cfg.init = "equal";
  cfg.steps = cfg.steps_or(100);
  const Model model = parse_model(cfg.model);
  const InitialCondition init = parse_initial_condition(cfg.init);
  const GridSpec grid = grid_of(cfg);
  const Execution execution = cfg.parallel ? Execution::kParallel : Execution::kSequential;
  const fs::path root = prepare_dir(cfg.out);

  for (std::size_t r = 0; r < cfg.repeat; ++r) {
    ExperimentConfig run_cfg = cfg;
    run_cfg.seed = cfg.seed + r;
    run_cfg.repeat = 1;
    const fs::path dir = cfg.repeat == 1 ? root : prepare_dir(root / ("run_" + std::to_string(r)));
    run_cfg.out = dir.string();

    Population pop = make_population(cfg.n, cfg.w, init, model, run_cfg.seed);
    const auto snapshots = run(pop, *cfg.steps, cfg.snapshot_every, grid, execution);

    write_snapshots_csv(dir / "snapshots.csv", snapshots);
    write_histogram_csv(dir / "final_histogram.csv", snapshots.back().histogram);
    std::vector<std::string> files = {"snapshots.csv", "final_histogram.csv"};
    if (cfg.snapshot_histograms) {
      for (const auto& s : snapshots) {
        const std::string name = "histogram_t" + std::to_string(s.t) + ".csv";
        write_histogram_csv(dir / name, s.histogram);
        files.push_back(name);
      }
    }
    const auto& last = snapshots.back();
    auto m = manifest("simulate", run_cfg);
    m["files"] = files;
    m["final"] = {{"t", last.t}, {"mean", last.mean}, {"cv", last.cv}, {"gini", last.gini}, {"ks", last.ks}};
    write_json(dir / "manifest.json", m);
    log << "simulate seed=" << run_cfg.seed << " t=" << last.t << " mean=" << format_double(last.mean)
        << " cv=" << format_double(last.cv) << " gini=" << format_double(last.gini)
        << " ks=" << format_double(last.ks) << " -> " << dir.string() << '\n';
  }
  return kExitOk;
}

int cmd_iterate(ExperimentConfig cfg, std::ostream& log) {
  if (cfg.init.empty()) cfg.init = "uniform";
  cfg.steps = cfg.steps_or(200);
  const GridSpec grid = grid_of(cfg);
  const fs::path dir = prepare_dir(cfg.out);

  const auto result = iterate(initial_density(cfg, grid), *cfg.steps, metric_of(cfg));
  write_trace_csv(dir / "trace.csv", result.trace);
  write_histogram_csv(dir / "final_histogram.csv", result.final_measure);
  const auto& last = result.trace.back();
  const double drift = std::abs(last.mean - result.trace.front().mean) / result.trace.front().mean;
  auto m = manifest("iterate", cfg);
  m["files"] = {"trace.csv", "final_histogram.csv"};
  m["final"] = {{"t", last.t}, {"mean", last.mean}, {"cv", last.cv}, {"ks", last.ks}, {"d_alpha", last.d_alpha},
                {"mean_drift", drift}};
  write_json(dir / "manifest.json", m);
  log << "iterate t=" << last.t << " ks=" << format_double(last.ks) << " cv=" << format_double(last.cv)
      << " mean_drift=" << format_double(drift) << " -> " << dir.string() << '\n';
  return kExitOk;
}

int cmd_equilibrium(ExperimentConfig cfg, std::ostream& log) {
  const fs::path dir = prepare_dir(cfg.out);
  const DrmEquilibrium drm_eq(cfg.w);
  const DyEquilibrium dy_eq(cfg.w);
  std::ofstream out(dir / "equilibrium.csv");
  if (!out) throw std::runtime_error("cannot open " + (dir / "equilibrium.csv").string() + " for writing");
  out << "x,p_drm,p_dy\n";
  for (std::size_t i = 0; i < cfg.points; ++i) {
    const double x = cfg.x_lo + (cfg.x_hi - cfg.x_lo) * static_cast<double>(i) / static_cast<double>(cfg.points - 1);
    out << format_double(x) << ',' << format_double(drm_pdf(drm_eq, x)) << ',' << format_double(dy_pdf(dy_eq, x))
        << '\n';
  }
  out.close();
  auto m = manifest("equilibrium", cfg);
  m["files"] = {"equilibrium.csv"};
  write_json(dir / "manifest.json", m);
  log << "equilibrium " << cfg.points << " points on [" << cfg.x_lo << ", " << cfg.x_hi << "] -> "
      << (dir / "equilibrium.csv").string() << '\n';
  return kExitOk;
}

int cmd_verify(ExperimentConfig cfg, std::ostream& log) {
  cfg.steps = cfg.steps_or(100);
  const GridSpec grid = grid_of(cfg);
  const MetricConfig metric = metric_of(cfg);
  const fs::path dir = prepare_dir(cfg.out);
  const double w = cfg.w;
  std::vector<Check> checks;
  auto timed = [&log](const std::string& name) {
    log << "verify: " << name << "...\n" << std::flush;
    return std::chrono::steady_clock::now();
  };

  // Fixed point.
  timed("fixed_point");
  const HistogramMeasure target = projected_drm_equilibrium(w, grid);
  const DrmEquilibrium eq(w);
  const double fixed_ks = ks_distance(apply_T(target), [&eq](double x) { return drm_cdf(eq, x); });
  checks.push_back({"fixed_point_ks", cfg.calibrate || fixed_ks <= 1e-3, fixed_ks, 1e-3,
                    cfg.calibrate ? "calibration: residual recorded as the discretization floor" : ""});

  // Conservation and moment bounds over random measures.
  timed("conservation");
  double worst_mass = 0.0;
  double worst_mean = 0.0;
  double worst_m2 = -INFINITY;
  double worst_ma = -INFINITY;
  const double coef2 = moment_bound_coefficient(2.0);
  const double coefa = moment_bound_coefficient(cfg.alpha);
  for (std::size_t i = 0; i < cfg.measures; ++i) {
    const auto p = random_measure(cfg.seed, i, w, grid);
    const auto tp = apply_T(p);
    worst_mass = std::max(worst_mass, std::abs(tp.total_mass() - p.total_mass()));
    worst_mean = std::max(worst_mean, std::abs(tp.mean() - p.mean()) / p.mean());
    worst_m2 = std::max(worst_m2, moment(tp, 2.0) - (coef2 * moment(p, 2.0) * (1.0 + 1e-6) + 1e-8));
    worst_ma = std::max(worst_ma, moment(tp, cfg.alpha) - (coefa * moment(p, cfg.alpha) * (1.0 + 1e-6) + 1e-8));
  }
  checks.push_back({"mass_conservation", worst_mass <= 1e-12, worst_mass, 1e-12, ""});
  checks.push_back({"mean_conservation", worst_mean <= 1e-10, worst_mean, 1e-10, "relative"});
  checks.push_back({"moment_bound_2", worst_m2 <= 0.0, worst_m2, 0.0, "max of M2(Tp) - bound"});
  checks.push_back({"moment_bound_alpha", worst_ma <= 0.0, worst_ma, 0.0, "max of M_alpha(Tp) - bound"});

  // Contraction.
  timed("contraction");
  std::vector<std::pair<HistogramMeasure, HistogramMeasure>> pairs;
  for (std::size_t i = 0; i < cfg.pairs; ++i) pairs.push_back(random_pair(cfg.seed, i, w, grid));
  const auto report = verify_contraction(pairs, metric);
  double worst_ratio = 0.0;
  for (double r : report.ratios) worst_ratio = std::max(worst_ratio, r);
  checks.push_back({"contraction", report.passed() && report.endpoint_max.empty(), worst_ratio,
                    report.factor * (1.0 + cfg.tolerance),
                    std::to_string(report.endpoint_max.size()) + " endpoint maxima, " +
                        std::to_string(report.degenerate.size()) + " degenerate pairs"});

  // Geometric decay.
  timed("geometric_decay");
  const UniformPiece piece{0.0, 2.0 * w, 1.0};
  const auto trace = convergence_trace(from_uniform_pieces({&piece, 1}, grid), cfg.trace_steps, metric);
  write_convergence_csv(dir / "convergence.csv", trace);
  double worst_excess = 0.0;
  for (const auto& row : trace.rows)
    if (row.bound > 0.0) worst_excess = std::max(worst_excess, row.d_alpha / row.bound);
  checks.push_back({"geometric_decay", trace.passed(), worst_excess, 1.0 + cfg.tolerance,
                    std::to_string(trace.violations.size()) + " steps above the bound before the floor " +
                        format_double(trace.floor)});

  // Micro-macro agreement.
  timed("micro_macro");
  Population pop = make_population(cfg.n, w, InitialCondition::kEqual, Model::kDrm, cfg.seed);
  const auto snapshots = run(pop, *cfg.steps, 0, grid, cfg.parallel ? Execution::kParallel : Execution::kSequential);
  const auto density = iterate(point_mass(w, grid), *cfg.steps, metric).final_measure;
  const double micro_ks = histogram_ks(snapshots.back().histogram, density);
  checks.push_back({"micro_macro_ks", cfg.calibrate || micro_ks <= 0.01, micro_ks, 0.01,
                    cfg.calibrate ? "calibration: residual recorded" : ""});

  bool all = true;
  nlohmann::json list = nlohmann::json::array();
  for (const auto& c : checks) {
    all = all && c.passed;
    list.push_back(to_json(c));
    log << (c.passed ? "PASS " : "FAIL ") << c.name << " measured=" << format_double(c.measured)
        << " limit=" << format_double(c.limit) << (c.note.empty() ? "" : " (" + c.note + ")") << '\n';
  }
  auto m = manifest("verify", cfg);
  m["passed"] = all;
  m["checks"] = list;
  m["contraction"] = to_json(report);
  m["files"] = {"verify_report.json", "convergence.csv"};
  write_json(dir / "verify_report.json", m);
  return all ? kExitOk : kExitVerifyFailed;
}

int run_command(std::string_view command, const ExperimentConfig& cfg, std::ostream& log, std::ostream& err) {
  try {
    validate(cfg, command);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
  try {
    if (command == "simulate") return cmd_simulate(cfg, log);
    if (command == "iterate") return cmd_iterate(cfg, log);
    if (command == "equilibrium") return cmd_equilibrium(cfg, log);
    if (command == "verify") return cmd_verify(cfg, log);
    err << "unknown command '" << command << "'\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "runtime error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

}  // namespace drm::cli
