#include "drm/operator.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>

#include "drm/distributions.hpp"
#include "drm/histogram_io.hpp"

namespace drm {
namespace {

constexpr std::size_t kSeriesFrom = 8;
constexpr int kSeriesTerms = 20;

// Cell k = [k h, (k + 1) h] with unit density contributes to its own cell
//   mass   h   * phi(k),        phi(k)  = 1 - k ln(1 + 1/k)
//   offset h^2 * chi(k),        chi(k)  = (k^2 / 2) ln(1 + 1/k) - (2k - 1) / 4
// where offset is the integral of (u - k h) ln((k + 1) h / u). Both lose
// digits to cancellation for large k, where the series in y = 1/k is used.
double phi(std::size_t k) {
  if (k == 0) return 1.0;
  const double kk = static_cast<double>(k);
  if (k < kSeriesFrom) return 1.0 - kk * std::log1p(1.0 / kk);
  const double y = 1.0 / kk;
  double term = 1.0;
  double sum = 0.0;
  for (int m = 1; m <= kSeriesTerms; ++m) {
    term *= y;
    sum += (m % 2 == 1 ? term : -term) / (m + 1);
  }
  return sum;
}

double chi(std::size_t k) {
  if (k == 0) return 0.25;
  const double kk = static_cast<double>(k);
  if (k < kSeriesFrom) return 0.5 * kk * kk * std::log1p(1.0 / kk) - (2.0 * kk - 1.0) / 4.0;
  const double y = 1.0 / kk;
  double term = 1.0;
  double sum = 0.0;
  for (int j = 1; j <= kSeriesTerms; ++j) {
    term *= y;
    sum += (j % 2 == 1 ? term : -term) / (2.0 * (j + 2));
  }
  return sum;
}

// out[k] = sum_{i <= k} p[i] r[k - i] for k < out.size(). Blocked over output
// cells; within a cell the sum always runs over i ascending.
void convolve_truncated(std::span<const double> p, std::span<const double> r, std::span<double> out) {
  constexpr std::size_t kBlock = 1024;
  const std::size_t n = out.size();
  const auto blocks = static_cast<std::ptrdiff_t>((n + kBlock - 1) / kBlock);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 1)
#endif
  for (std::ptrdiff_t b = blocks - 1; b >= 0; --b) {
    const std::size_t k0 = static_cast<std::size_t>(b) * kBlock;
    const std::size_t k1 = std::min(n, k0 + kBlock);
    double* o = out.data();
    for (std::size_t i = 0; i < k1; ++i) {
      const double pi = p[i];
      if (pi == 0.0) continue;
      const std::size_t start = std::max(k0, i);
      const double* ri = r.data() + (start - i);
      double* oi = o + start;
      const std::size_t len = k1 - start;
      for (std::size_t k = 0; k < len; ++k) oi[k] += pi * ri[k];
    }
  }
}

struct ReceiverParts {
  std::vector<double> cells;
  double tail_mass = 0.0;
  double tail_moment = 0.0;
};

ReceiverParts receiver_parts(const HistogramMeasure& p, const QTable& q) {
  const auto& grid = p.grid();
  const std::size_t n = grid.n_cells();
  const double h = grid.h();
  const auto cells = p.cell_mass();

  // eps Y restricted to cell k has mass G_k and in-cell mean a_k + E_k / G_k.
  // Adding an independent uniform X on cell i sends U_k = E_k / h of it to
  // cell i + k + 1 and the rest L_k to cell i + k; R merges both shifts.
  std::vector<double> r(n + 1, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    const double g = q.cell_integral[k];
    const double up = std::clamp(q.cell_offset_moment[k] / h, 0.0, g);
    r[k] += g - up;
    r[k + 1] += up;
  }

  ReceiverParts out;
  out.cells.assign(n, 0.0);
  convolve_truncated(cells, r, out.cells);

  // Pieces landing at index >= n, placed at their cell centers.
  std::vector<double> suffix(n + 2, 0.0);
  std::vector<double> suffix_index(n + 2, 0.0);
  for (std::size_t m = n + 1; m-- > 0;) {
    suffix[m] = suffix[m + 1] + r[m];
    suffix_index[m] = suffix_index[m + 1] + static_cast<double>(m) * r[m];
  }
  double cells_mass = 0.0;
  double cells_moment = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double pi = cells[i];
    if (pi == 0.0) continue;
    cells_mass += pi;
    cells_moment += pi * grid.center(i);
    const std::size_t j = n - i;
    out.tail_mass += pi * suffix[j];
    out.tail_moment += pi * (grid.center(i) * suffix[j] + h * suffix_index[j]);
  }

  // X in a cell, eps Y beyond x_max.
  out.tail_mass += cells_mass * q.beyond_mass;
  out.tail_moment += q.beyond_mass * (cells_moment + cells_mass * q.beyond_mean);

  // X in the tail bucket: everything stays beyond x_max.
  if (p.tail_mass() > 0.0) {
    const double giver_mass = q.total();
    double giver_moment = q.beyond_mass * q.beyond_mean;
    for (std::size_t k = 0; k < n; ++k) giver_moment += grid.left(k) * q.cell_integral[k] + q.cell_offset_moment[k];
    out.tail_mass += p.tail_mass() * giver_mass;
    out.tail_moment += p.tail_mass() * (p.tail_mean() * giver_mass + giver_moment);
  }

  // The law of eps Y has mass total(Q) = mass(p), so the receiver mass is
  // quadratic in mass(p) and rounding errors would grow by 3/2 per step.
  // Dividing by total(Q) makes it linear.
  const double inv = 1.0 / q.total();
  for (auto& m : out.cells) m *= inv;
  out.tail_mass *= inv;
  out.tail_moment *= inv;
  return out;
}

HistogramMeasure with_tail(const GridSpec& grid, std::vector<double> cells, double tail_mass, double tail_moment) {
  const double tail_mean = tail_mass > 0.0 ? std::max(grid.x_max(), tail_moment / tail_mass) : 0.0;
  return HistogramMeasure(grid, std::move(cells), tail_mass, tail_mean);
}

}  // namespace

double QTable::value_at(double u) const {
  if (!(u > 0.0)) throw std::domain_error("QTable::value_at: u must be positive");
  if (u >= grid.x_max()) return u < tail_mean ? tail_level : 0.0;
  const std::size_t j = grid.cell_of(u);
  const double right = grid.right(j);
  return q_at_edges[j + 1] + source_density[j] * std::log(right / u);
}

double QTable::total() const {
  return std::accumulate(cell_integral.begin(), cell_integral.end(), 0.0) + beyond_mass;
}

QTable build_q(const HistogramMeasure& p) {
  const auto& grid = p.grid();
  const std::size_t n = grid.n_cells();
  const double h = grid.h();
  const auto cells = p.cell_mass();

  QTable q{grid, std::vector<double>(n + 1), std::vector<double>(n), std::vector<double>(n), std::vector<double>(n)};
  for (std::size_t i = 0; i < n; ++i) q.source_density[i] = cells[i] / h;
  if (p.tail_mass() > 0.0) {
    q.tail_mean = p.tail_mean();
    q.tail_level = p.tail_mass() / p.tail_mean();
    q.beyond_mass = q.tail_level * (p.tail_mean() - grid.x_max());
    q.beyond_mean = 0.5 * (p.tail_mean() + grid.x_max());
  }

  q.q_at_edges[n] = q.tail_level;
  for (std::size_t i = n - 1; i >= 1; --i)
    q.q_at_edges[i] = q.q_at_edges[i + 1] + q.source_density[i] * std::log1p(1.0 / static_cast<double>(i));
  q.q_at_edges[0] = cells[0] > 0.0 ? std::numeric_limits<double>::infinity() : q.q_at_edges[1];

  for (std::size_t k = 0; k < n; ++k) {
    const double above = q.q_at_edges[k + 1];  // contribution of cells right of k, constant on cell k
    q.cell_integral[k] = h * above + cells[k] * phi(k);
    q.cell_offset_moment[k] = 0.5 * h * h * above + cells[k] * h * chi(k);
  }
  return q;
}

HistogramMeasure giver_pushforward(const HistogramMeasure& p, Projection projection) {
  const QTable q = build_q(p);
  if (projection == Projection::kCellExact)
    return with_tail(p.grid(), q.cell_integral, q.beyond_mass, q.beyond_mass * q.beyond_mean);
  return project_mean_preserving(p.grid(), q.cell_integral, q.cell_offset_moment, q.beyond_mass,
                                 q.beyond_mass * q.beyond_mean);
}

HistogramMeasure receiver_pushforward(const HistogramMeasure& p) {
  const QTable q = build_q(p);
  auto parts = receiver_parts(p, q);
  return with_tail(p.grid(), std::move(parts.cells), parts.tail_mass, parts.tail_moment);
}

HistogramMeasure apply_T(const HistogramMeasure& p, Projection projection) {
  const auto& grid = p.grid();
  const std::size_t n = grid.n_cells();
  const QTable q = build_q(p);
  const ReceiverParts recv = receiver_parts(p, q);

  std::vector<double> mass(n);
  for (std::size_t k = 0; k < n; ++k) mass[k] = 0.5 * q.cell_integral[k] + 0.5 * recv.cells[k];
  const double tail_mass = 0.5 * q.beyond_mass + 0.5 * recv.tail_mass;
  const double tail_moment = 0.5 * q.beyond_mass * q.beyond_mean + 0.5 * recv.tail_moment;

  if (projection == Projection::kCellExact) return with_tail(grid, std::move(mass), tail_mass, tail_moment);

  std::vector<double> offset(n);
  const double half_h = 0.5 * grid.h();
  for (std::size_t k = 0; k < n; ++k) offset[k] = 0.5 * q.cell_offset_moment[k] + 0.5 * recv.cells[k] * half_h;
  return project_mean_preserving(grid, mass, offset, tail_mass, tail_moment);
}

HistogramMeasure projected_drm_equilibrium(double w, const GridSpec& grid) {
  const DrmEquilibrium eq(w);
  return from_pdf([&eq](double x) { return drm_pdf(eq, x); }, grid, 16, Projection::kMeanPreserving);
}

IterationResult iterate(const HistogramMeasure& p0, std::size_t steps, const MetricConfig& diagnostics,
                        Projection projection) {
  diagnostics.validate();
  const double w = p0.mean();
  if (!(w > 0.0)) throw std::invalid_argument("iterate: initial mean must be positive");
  const HistogramMeasure reference = projected_drm_equilibrium(w, p0.grid());

  auto record = [&](std::size_t t, const HistogramMeasure& p) {
    TraceRecord rec;
    rec.t = t;
    rec.mean = p.mean();
    rec.m_alpha = moment(p, diagnostics.alpha);
    rec.cv = cv(p);
    const DrmEquilibrium eq(rec.mean);
    rec.ks = ks_distance(p, [&eq](double x) { return drm_cdf(eq, x); });
    try {
      rec.d_alpha = d_alpha(p, reference, diagnostics).value;
    } catch (const std::invalid_argument&) {
      rec.d_alpha = std::numeric_limits<double>::quiet_NaN();
    }
    return rec;
  };

  IterationResult result{{}, p0};
  result.trace.reserve(steps + 1);
  result.trace.push_back(record(0, p0));
  for (std::size_t t = 1; t <= steps; ++t) {
    try {
      result.final_measure = apply_T(result.final_measure, projection);
    } catch (const std::invalid_argument& e) {
      throw std::runtime_error("iterate: step " + std::to_string(t) + " failed: " + e.what());
    }
    result.trace.push_back(record(t, result.final_measure));
  }
  return result;
}

void write_trace_csv(std::ostream& out, const std::vector<TraceRecord>& trace) {
  out << "t,mean,m_alpha,cv,ks,d_alpha\n";
  for (const auto& r : trace) {
    out << r.t << ',' << format_double(r.mean) << ',' << format_double(r.m_alpha) << ',' << format_double(r.cv) << ','
        << format_double(r.ks) << ',' << format_double(r.d_alpha) << '\n';
  }
}

void write_trace_csv(const std::filesystem::path& path, const std::vector<TraceRecord>& trace) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_trace_csv(out, trace);
}

}  // namespace drm
