#include "drm/verification.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <stdexcept>

#include "drm/histogram_io.hpp"

namespace drm {

ContractionReport verify_contraction(const std::vector<std::pair<HistogramMeasure, HistogramMeasure>>& pairs,
                                     const MetricConfig& cfg) {
  cfg.validate();
  ContractionReport report;
  report.alpha = cfg.alpha;
  report.factor = contraction_factor(cfg.alpha);
  const double limit = report.factor * (1.0 + cfg.tolerance);

  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto& [p, q] = pairs[i];
    const DAlpha before = d_alpha(p, q, cfg);
    if (before.value < 1e-12) {
      report.degenerate.push_back(i);
      continue;
    }
    const DAlpha after = d_alpha(apply_T(p), apply_T(q), cfg);
    if (before.endpoint_max || after.endpoint_max) report.endpoint_max.push_back(i);
    const double ratio = after.value / before.value;
    if (ratio > limit) report.violations.push_back(report.ratios.size());
    report.ratios.push_back(ratio);
    report.s_argmax.push_back(after.s_argmax);
  }
  return report;
}

nlohmann::json to_json(const ContractionReport& report) {
  return {
      {"alpha", report.alpha},
      {"factor", report.factor},
      {"ratios", report.ratios},
      {"violations", report.violations},
      {"s_argmax", report.s_argmax},
      {"degenerate", report.degenerate},
      {"endpoint_max", report.endpoint_max},
  };
}

ConvergenceTrace convergence_trace(const HistogramMeasure& p0, std::size_t steps, const MetricConfig& cfg) {
  cfg.validate();
  const double factor = contraction_factor(cfg.alpha);
  const HistogramMeasure target = projected_drm_equilibrium(p0.mean(), p0.grid());

  ConvergenceTrace trace;
  trace.floor = 10.0 * d_alpha(apply_T(target), target, cfg).value;

  const double d0 = d_alpha(p0, target, cfg).value;
  HistogramMeasure p = p0;
  bool floor_reached = false;
  for (std::size_t t = 0; t <= steps; ++t) {
    if (t > 0) p = apply_T(p);
    ConvergenceRow row;
    row.t = t;
    row.d_alpha = t == 0 ? d0 : d_alpha(p, target, cfg).value;
    row.bound = d0 * std::pow(factor, static_cast<double>(t));
    row.floor = row.d_alpha < trace.floor;
    floor_reached = floor_reached || row.floor;
    if (!floor_reached && row.d_alpha > row.bound * (1.0 + cfg.tolerance)) trace.violations.push_back(t);
    trace.rows.push_back(row);
  }
  return trace;
}

void write_convergence_csv(std::ostream& out, const ConvergenceTrace& trace) {
  out << "t,d_alpha,bound,floor_flag\n";
  for (const auto& r : trace.rows)
    out << r.t << ',' << format_double(r.d_alpha) << ',' << format_double(r.bound) << ',' << (r.floor ? 1 : 0) << '\n';
}

void write_convergence_csv(const std::filesystem::path& path, const ConvergenceTrace& trace) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_convergence_csv(out, trace);
}

}  // namespace drm
