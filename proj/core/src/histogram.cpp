#include "drm/histogram.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "drm/quadrature.hpp"

namespace drm {
namespace {

// Laplace kernel of a unit-mass uniform cell [a, a + h]:
//   K(a) = (exp(-s a) - exp(-s (a + h))) / (s h) = exp(-s a) * kappa,
//   kappa = (1 - exp(-s h)) / (s h).
// Fills kernel[i] = K(a_i) - 1 (minus_one) or K(a_i). exp(-s a_i) runs as a
// geometric recurrence, re-anchored on the C library every kAnchor cells.
void fill_kernel(double s, const GridSpec& grid, bool minus_one, std::vector<double>& kernel) {
  constexpr std::size_t kAnchor = 256;
  const std::size_t n = grid.n_cells();
  const double h = grid.h();
  const double y = s * h;
  const double ratio_m1 = std::expm1(-y);  // exp(-s h) - 1
  const double ratio = 1.0 + ratio_m1;
  double kappa_m1 = 0.0;                   // kappa - 1
  if (y < 1e-2) {
    kappa_m1 = y * (-1.0 / 2 + y * (1.0 / 6 + y * (-1.0 / 24 + y * (1.0 / 120 + y * (-1.0 / 720)))));
  } else {
    kappa_m1 = (-ratio_m1 - y) / y;
  }
  const double kappa = 1.0 + kappa_m1;
  kernel.resize(n);
  if (minus_one) {
    double d = 0.0;  // exp(-s a_i) - 1
    for (std::size_t i = 0; i < n; ++i) {
      if (i % kAnchor == 0) d = std::expm1(-s * grid.left(i));
      kernel[i] = d * kappa + kappa_m1;
      d = d * ratio + ratio_m1;
    }
  } else {
    double e = 1.0;  // exp(-s a_i)
    for (std::size_t i = 0; i < n; ++i) {
      if (i % kAnchor == 0) e = std::exp(-s * grid.left(i));
      kernel[i] = e * kappa;
      e *= ratio;
    }
  }
}

// Mean of x^alpha over [a, a + h].
double cell_power_average(double a, double h, double alpha) {
  if (alpha == 0.0) return 1.0;
  if (a == 0.0) return std::pow(h, alpha) / (alpha + 1.0);
  const double r = h / a;
  return std::pow(a, alpha) * std::expm1((alpha + 1.0) * std::log1p(r)) / ((alpha + 1.0) * r);
}

void require_nonnegative_finite(double v, const char* what) {
  if (!std::isfinite(v) || v < 0.0) throw std::invalid_argument(std::string("HistogramMeasure: ") + what + " must be finite and nonnegative");
}

}  // namespace

GridSpec::GridSpec(double x_max, std::size_t n_cells) : x_max_(x_max), n_cells_(n_cells), h_(x_max / static_cast<double>(n_cells)) {
  if (!(x_max > 0.0) || !std::isfinite(x_max)) throw std::invalid_argument("GridSpec: x_max must be positive and finite");
  if (n_cells < 2) throw std::invalid_argument("GridSpec: need at least 2 cells");
}

std::size_t GridSpec::cell_of(double x) const noexcept {
  const double k = std::floor(x / h_);
  if (!(k > 0.0)) return 0;
  if (k >= static_cast<double>(n_cells_ - 1)) return n_cells_ - 1;
  return static_cast<std::size_t>(k);
}

HistogramMeasure::HistogramMeasure(GridSpec grid, std::vector<double> cell_mass, double tail_mass, double tail_mean)
    : grid_(grid), cell_mass_(std::move(cell_mass)), tail_mass_(tail_mass), tail_mean_(tail_mean) {
  if (cell_mass_.size() != grid_.n_cells()) throw std::invalid_argument("HistogramMeasure: cell count does not match grid");
  for (double m : cell_mass_) require_nonnegative_finite(m, "cell masses");
  require_nonnegative_finite(tail_mass_, "tail mass");
  if (tail_mass_ > 0.0) {
    if (!std::isfinite(tail_mean_) || tail_mean_ < grid_.x_max() * (1.0 - 1e-12))
      throw std::invalid_argument("HistogramMeasure: tail mean must be at least x_max");
    tail_mean_ = std::max(tail_mean_, grid_.x_max());
  } else {
    tail_mean_ = 0.0;
  }

  cumulative_.resize(cell_mass_.size() + 1);
  cumulative_[0] = 0.0;
  double first = 0.0;
  for (std::size_t i = 0; i < cell_mass_.size(); ++i) {
    cumulative_[i + 1] = cumulative_[i] + cell_mass_[i];
    first += cell_mass_[i] * grid_.center(i);
  }
  mean_ = first + tail_mass_ * tail_mean_;
}

double HistogramMeasure::cdf_at(double x) const {
  if (!(x >= 0.0)) throw std::domain_error("cdf_at: x must be nonnegative");
  if (x >= grid_.x_max()) {
    const double cells = cumulative_.back();
    return (tail_mass_ > 0.0 && x >= tail_mean_) ? cells + tail_mass_ : cells;
  }
  const std::size_t k = grid_.cell_of(x);
  const double frac = std::clamp((x - grid_.left(k)) / grid_.h(), 0.0, 1.0);
  return cumulative_[k] + cell_mass_[k] * frac;
}

HistogramMeasure project_mean_preserving(const GridSpec& grid, std::span<const double> cell_mass,
                                         std::span<const double> cell_offset_moment, double tail_mass,
                                         double tail_first_moment) {
  const std::size_t n = grid.n_cells();
  if (cell_mass.size() != n || cell_offset_moment.size() != n)
    throw std::invalid_argument("project_mean_preserving: array sizes do not match grid");
  const double h = grid.h();

  // Moment the cell-center model is missing, and the mass able to move each way.
  std::vector<double> out(n);
  double missing = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    double m = cell_mass[k];
    if (m < 0.0) {
      if (m < -1e-12) throw std::invalid_argument("project_mean_preserving: negative cell mass");
      m = 0.0;
    }
    out[k] = m;
    if (m > 0.0) missing += cell_offset_moment[k] - 0.5 * h * m;
  }
  const double total = std::accumulate(out.begin(), out.end(), 0.0);

  // Every cell sends the same fraction of its mass one cell over, right when
  // moment is missing and left when there is too much. The fraction is the
  // smallest uniform shift that fixes the mean, so cumulative masses move by
  // at most fraction * max cell mass.
  if (missing > 0.0) {
    const double movable = total - out[n - 1];
    if (movable > 0.0) {
      const double fraction = std::min(1.0, missing / (h * movable));
      double carry = 0.0;
      for (std::size_t k = 0; k + 1 < n; ++k) {
        const double moved = fraction * out[k];
        out[k] = out[k] - moved + carry;
        carry = moved;
      }
      out[n - 1] += carry;
    }
  } else if (missing < 0.0) {
    const double movable = total - out[0];
    if (movable > 0.0) {
      const double fraction = std::min(1.0, -missing / (h * movable));
      double carry = 0.0;
      for (std::size_t k = n; k-- > 1;) {
        const double moved = fraction * out[k];
        out[k] = out[k] - moved + carry;
        carry = moved;
      }
      out[0] += carry;
    }
  }

  const double tail_mean = tail_mass > 0.0 ? std::max(grid.x_max(), tail_first_moment / tail_mass) : 0.0;
  return HistogramMeasure(grid, std::move(out), tail_mass, tail_mean);
}

HistogramMeasure from_pdf(const std::function<double(double)>& pdf, const GridSpec& grid, std::size_t quad_points,
                          Projection projection) {
  if (quad_points < 8) throw std::invalid_argument("from_pdf: need at least 8 quadrature points per cell");
  const GaussLegendre gl(quad_points);
  const std::size_t n = grid.n_cells();
  const double h = grid.h();

  auto eval = [&pdf](double x) {
    const double v = pdf(x);
    if (!std::isfinite(v)) throw std::invalid_argument("from_pdf: density is not finite at a quadrature node");
    if (v < 0.0) throw std::invalid_argument("from_pdf: density is negative at a quadrature node");
    return v;
  };

  std::vector<double> mass(n);
  std::vector<double> offset(n);
  // x = t^2 on cell 0.
  const double root_h = std::sqrt(h);
  mass[0] = gl.integrate([&](double t) { return 2.0 * t * eval(t * t); }, 0.0, root_h);
  offset[0] = gl.integrate([&](double t) { return 2.0 * t * t * t * eval(t * t); }, 0.0, root_h);
  for (std::size_t i = 1; i < n; ++i) {
    double m = 0.0;
    double f = 0.0;
    const double half = 0.5 * h;
    const double mid = grid.center(i);
    for (std::size_t q = 0; q < gl.size(); ++q) {
      const double u = half * (1.0 + gl.nodes()[q]);
      const double v = gl.weights()[q] * eval(mid + half * gl.nodes()[q]);
      m += v;
      f += v * u;
    }
    mass[i] = half * m;
    offset[i] = half * f;
  }

  const double total = std::accumulate(mass.begin(), mass.end(), 0.0);
  if (total > 1.0 + 1e-9) throw std::invalid_argument("from_pdf: projected mass exceeds 1");
  const double tail_mass = std::max(0.0, 1.0 - total);

  double tail_mean = 0.0;
  if (tail_mass > 0.0) {
    const double lo = grid.x_max();
    const double hi = 8.0 * grid.x_max();
    constexpr int kPieces = 64;
    const double step = (hi - lo) / kPieces;
    double tm = 0.0;
    double tf = 0.0;
    for (int k = 0; k < kPieces; ++k) {
      const double a = lo + k * step;
      tm += gl.integrate(eval, a, a + step);
      tf += gl.integrate([&](double x) { return x * eval(x); }, a, a + step);
    }
    tail_mean = tm > 0.0 ? std::max(lo, tf / tm) : lo;
  }

  if (projection == Projection::kCellExact) return HistogramMeasure(grid, std::move(mass), tail_mass, tail_mean);
  return project_mean_preserving(grid, mass, offset, tail_mass, tail_mass * tail_mean);
}

HistogramMeasure from_samples(std::span<const double> samples, const GridSpec& grid) {
  if (samples.empty()) throw std::invalid_argument("from_samples: no samples");
  const std::size_t n = grid.n_cells();
  std::vector<std::size_t> counts(n, 0);
  std::size_t tail_count = 0;
  double tail_sum = 0.0;
  for (double x : samples) {
    if (!std::isfinite(x) || x < 0.0) throw std::invalid_argument("from_samples: samples must be finite and nonnegative");
    if (x >= grid.x_max()) {
      ++tail_count;
      tail_sum += x;
    } else {
      ++counts[grid.cell_of(x)];
    }
  }
  const double inv = 1.0 / static_cast<double>(samples.size());
  std::vector<double> mass(n);
  for (std::size_t i = 0; i < n; ++i) mass[i] = static_cast<double>(counts[i]) * inv;
  const double tail_mass = static_cast<double>(tail_count) * inv;
  const double tail_mean = tail_count > 0 ? tail_sum / static_cast<double>(tail_count) : 0.0;
  return HistogramMeasure(grid, std::move(mass), tail_mass, tail_mean);
}

HistogramMeasure point_mass(double x, const GridSpec& grid) {
  if (!std::isfinite(x) || x < 0.0) throw std::invalid_argument("point_mass: location must be finite and nonnegative");
  const std::size_t n = grid.n_cells();
  std::vector<double> mass(n, 0.0);
  if (x >= grid.x_max()) return HistogramMeasure(grid, std::move(mass), 1.0, x);
  if (x <= grid.center(0)) {
    mass[0] = 1.0;
    return HistogramMeasure(grid, std::move(mass));
  }
  const std::size_t k = grid.cell_of(x);
  const double c = grid.center(k);
  if (x >= c) {
    const double theta = (x - c) / grid.h();
    mass[k] = 1.0 - theta;
    if (k + 1 < n) {
      mass[k + 1] = theta;
      return HistogramMeasure(grid, std::move(mass));
    }
    return HistogramMeasure(grid, std::move(mass), theta, grid.x_max() + 0.5 * grid.h());
  }
  const double theta = (c - x) / grid.h();
  mass[k] = 1.0 - theta;
  mass[k - 1] = theta;
  return HistogramMeasure(grid, std::move(mass));
}

HistogramMeasure from_uniform_pieces(std::span<const UniformPiece> pieces, const GridSpec& grid) {
  if (pieces.empty()) throw std::invalid_argument("from_uniform_pieces: no pieces");
  double total_weight = 0.0;
  for (const auto& piece : pieces) {
    if (!(piece.lo >= 0.0) || !(piece.hi > piece.lo) || !std::isfinite(piece.hi) || !(piece.weight >= 0.0))
      throw std::invalid_argument("from_uniform_pieces: each piece needs 0 <= lo < hi and weight >= 0");
    total_weight += piece.weight;
  }
  if (!(total_weight > 0.0)) throw std::invalid_argument("from_uniform_pieces: total weight must be positive");

  const std::size_t n = grid.n_cells();
  std::vector<double> mass(n, 0.0);
  std::vector<double> offset(n, 0.0);
  double tail_mass = 0.0;
  double tail_first = 0.0;
  for (const auto& piece : pieces) {
    const double density = piece.weight / (total_weight * (piece.hi - piece.lo));
    if (density == 0.0) continue;
    if (piece.lo < grid.x_max()) {
      const std::size_t k0 = grid.cell_of(piece.lo);
      for (std::size_t k = k0; k < n && grid.left(k) < piece.hi; ++k) {
        const double l = std::max(grid.left(k), piece.lo);
        const double r = std::min(grid.right(k), piece.hi);
        if (r <= l) continue;
        const double a = grid.left(k);
        mass[k] += density * (r - l);
        offset[k] += density * 0.5 * (r - l) * ((r - a) + (l - a));
      }
    }
    if (piece.hi > grid.x_max()) {
      const double l = std::max(grid.x_max(), piece.lo);
      tail_mass += density * (piece.hi - l);
      tail_first += density * 0.5 * (piece.hi - l) * (piece.hi + l);
    }
  }
  return project_mean_preserving(grid, mass, offset, tail_mass, tail_first);
}

double mean(const HistogramMeasure& p) noexcept { return p.mean(); }

double moment(const HistogramMeasure& p, double alpha) {
  if (!(alpha >= 0.0)) throw std::domain_error("moment: alpha must be nonnegative");
  if (alpha == 0.0) return p.total_mass();
  const auto& grid = p.grid();
  const auto cells = p.cell_mass();
  double sum = 0.0;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (cells[i] == 0.0) continue;
    sum += cells[i] * cell_power_average(grid.left(i), grid.h(), alpha);
  }
  if (p.tail_mass() > 0.0) sum += p.tail_mass() * std::pow(p.tail_mean(), alpha);
  return sum;
}

double laplace(const HistogramMeasure& p, double s) {
  if (!(s >= 0.0)) throw std::domain_error("laplace: s must be nonnegative");
  if (s == 0.0) return p.total_mass();
  const auto cells = p.cell_mass();
  // Large s: sum K directly. Small s: sum K - 1 so the result keeps full
  // relative precision as it approaches the total mass.
  const bool direct = s >= 1.0;
  std::vector<double> kernel;
  fill_kernel(s, p.grid(), !direct, kernel);
  double sum = 0.0;
  for (std::size_t i = 0; i < cells.size(); ++i) sum += cells[i] * kernel[i];
  if (direct) {
    if (p.tail_mass() > 0.0) sum += p.tail_mass() * std::exp(-s * p.tail_mean());
    return sum;
  }
  if (p.tail_mass() > 0.0) sum += p.tail_mass() * std::expm1(-s * p.tail_mean());
  return p.total_mass() + sum;
}

double laplace_difference(const HistogramMeasure& p, const HistogramMeasure& q, double s) {
  if (!(s >= 0.0)) throw std::domain_error("laplace_difference: s must be nonnegative");
  if (!(p.grid() == q.grid())) return laplace(p, s) - laplace(q, s);
  const auto pc = p.cell_mass();
  const auto qc = q.cell_mass();
  double mass_diff = p.tail_mass() - q.tail_mass();
  for (std::size_t i = 0; i < pc.size(); ++i) mass_diff += pc[i] - qc[i];
  if (s == 0.0) return mass_diff;

  const bool direct = s >= 1.0;
  std::vector<double> kernel;
  fill_kernel(s, p.grid(), !direct, kernel);
  double sum = 0.0;
  for (std::size_t i = 0; i < pc.size(); ++i) sum += (pc[i] - qc[i]) * kernel[i];
  auto tail_term = [s, direct](const HistogramMeasure& m) {
    if (m.tail_mass() == 0.0) return 0.0;
    return m.tail_mass() * (direct ? std::exp(-s * m.tail_mean()) : std::expm1(-s * m.tail_mean()));
  };
  sum += tail_term(p) - tail_term(q);
  return direct ? sum : mass_diff + sum;
}

double ks_distance(const HistogramMeasure& p, const std::function<double(double)>& target_cdf) {
  const auto& grid = p.grid();
  double worst = 0.0;
  for (std::size_t i = 0; i <= grid.n_cells(); ++i) {
    const double x = i == grid.n_cells() ? grid.x_max() : grid.left(i);
    worst = std::max(worst, std::abs(p.cdf_at(x) - target_cdf(x)));
  }
  return worst;
}

double cv(const HistogramMeasure& p) {
  const double m0 = p.total_mass();
  const double m1 = p.mean();
  if (!(m1 > 0.0)) throw std::invalid_argument("cv: mean must be positive");
  const double mu = m1 / m0;
  const double var = std::max(0.0, moment(p, 2.0) / m0 - mu * mu);
  return std::sqrt(var) / mu;
}

double gini(const HistogramMeasure& p) {
  const double m0 = p.total_mass();
  const double m1 = p.mean();
  if (!(m1 > 0.0)) throw std::invalid_argument("gini: mean must be positive");
  const auto& grid = p.grid();
  const auto cells = p.cell_mass();
  // Lorenz curve through the atoms in increasing wealth order; trapezoid area.
  double lorenz_prev = 0.0;
  double area2 = 0.0;
  auto add_atom = [&](double mass, double x) {
    if (mass == 0.0) return;
    const double f = mass / m0;
    const double lorenz = lorenz_prev + mass * x / m1;
    area2 += f * (lorenz_prev + lorenz);
    lorenz_prev = lorenz;
  };
  for (std::size_t i = 0; i < cells.size(); ++i) add_atom(cells[i], grid.center(i));
  add_atom(p.tail_mass(), p.tail_mean());
  return 1.0 - area2;
}

}  // namespace drm
