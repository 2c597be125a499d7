#include "drm/montecarlo.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <ostream>

#include "drm/distributions.hpp"
#include "drm/histogram_io.hpp"
#include "drm/rng.hpp"

namespace drm {
namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

void exchange_pair(std::vector<double>& wealth, std::uint32_t a, std::uint32_t b, Model model, std::uint64_t seed,
                   std::uint64_t t, std::uint64_t k) {
  rng::Stream stream(seed, rng::Purpose::kPair, t, k);
  const double eps = stream.uniform01();
  const bool b_receives = (stream() >> 63) != 0;
  auto [ma, mb] = pair_exchange(wealth[a], wealth[b], eps, b_receives, model);
  wealth[a] = ma;
  wealth[b] = mb;
}

}  // namespace

std::string_view to_string(Model model) noexcept { return model == Model::kDrm ? "drm" : "dy"; }

Model parse_model(std::string_view name) {
  const auto s = lower(name);
  if (s == "drm") return Model::kDrm;
  if (s == "dy") return Model::kDy;
  throw std::invalid_argument("unknown model '" + std::string(name) + "' (expected drm or dy)");
}

std::pair<double, double> pair_exchange(double m_i, double m_j, double epsilon, bool j_wins, Model model) {
  if (!(m_i >= 0.0) || !(m_j >= 0.0)) throw std::domain_error("pair_exchange: wealth must be nonnegative");
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw std::domain_error("pair_exchange: epsilon must lie in [0, 1]");
  if (model == Model::kDy) {
    const double pool = m_i + m_j;
    const double share = epsilon * pool;
    return {share, pool - share};
  }
  if (j_wins) {
    const double moved = epsilon * m_i;
    return {m_i - moved, m_j + moved};
  }
  const double moved = epsilon * m_j;
  return {m_i + moved, m_j - moved};
}

Population::Population(std::vector<double> wealth, Model model, std::uint64_t seed, std::uint64_t step_count)
    : wealth_(std::move(wealth)), model_(model), seed_(seed), step_count_(step_count) {
  if (wealth_.empty() || wealth_.size() % 2 != 0) throw std::invalid_argument("N must be even");
  if (wealth_.size() > std::numeric_limits<std::uint32_t>::max())
    throw std::invalid_argument("Population: too many agents");
  for (double m : wealth_)
    if (!(m >= 0.0) || !std::isfinite(m)) throw std::invalid_argument("Population: wealth must be finite and >= 0");
  total_ = std::accumulate(wealth_.begin(), wealth_.end(), 0.0);
  perm_.resize(wealth_.size());
}

void Population::step(Execution execution) {
  const std::size_t n = wealth_.size();
  const std::uint64_t t = step_count_;
  std::iota(perm_.begin(), perm_.end(), 0u);
  rng::Stream shuffle(seed_, rng::Purpose::kShuffle, t, 0);
  for (std::size_t i = n - 1; i > 0; --i) std::swap(perm_[i], perm_[shuffle.below(i + 1)]);

  const auto pairs = static_cast<std::ptrdiff_t>(n / 2);
  if (execution == Execution::kParallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (std::ptrdiff_t k = 0; k < pairs; ++k)
      exchange_pair(wealth_, perm_[2 * k], perm_[2 * k + 1], model_, seed_, t, static_cast<std::uint64_t>(k));
  } else {
    for (std::ptrdiff_t k = 0; k < pairs; ++k)
      exchange_pair(wealth_, perm_[2 * k], perm_[2 * k + 1], model_, seed_, t, static_cast<std::uint64_t>(k));
  }
  ++step_count_;

  double sum = 0.0;
  for (double m : wealth_) {
    if (m < 0.0) throw InvariantViolation("negative wealth after step " + std::to_string(step_count_));
    sum += m;
  }
  if (std::abs(sum - total_) > 1e-9 * std::max(total_, 1e-300))
    throw InvariantViolation("wealth not conserved at step " + std::to_string(step_count_));
}

std::string_view to_string(InitialCondition init) noexcept {
  switch (init) {
    case InitialCondition::kEqual:
      return "equal";
    case InitialCondition::kUniform:
      return "uniform";
    case InitialCondition::kExponential:
      return "exponential";
  }
  return "equal";
}

InitialCondition parse_initial_condition(std::string_view name) {
  const auto s = lower(name);
  if (s == "equal") return InitialCondition::kEqual;
  if (s == "uniform") return InitialCondition::kUniform;
  if (s == "exponential") return InitialCondition::kExponential;
  throw std::invalid_argument("unknown initial condition '" + std::string(name) +
                              "' (expected equal, uniform or exponential)");
}

Population make_population(std::size_t n, double w, InitialCondition init, Model model, std::uint64_t seed) {
  if (n == 0 || n % 2 != 0) throw std::invalid_argument("N must be even");
  if (!(w > 0.0) || !std::isfinite(w)) throw std::invalid_argument("w must be positive");
  std::vector<double> wealth(n, w);
  if (init != InitialCondition::kEqual) {
    const DyEquilibrium exponential(w);
    for (std::size_t i = 0; i < n; ++i) {
      rng::Stream stream(seed, rng::Purpose::kInit, 0, i);
      wealth[i] = init == InitialCondition::kUniform ? 2.0 * w * stream.uniform01() : dy_sample(exponential, stream);
    }
  }
  return Population(std::move(wealth), model, seed);
}

double sample_mean(std::span<const double> x) {
  if (x.empty()) throw std::invalid_argument("sample_mean: empty sample");
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double sample_cv(std::span<const double> x) {
  const double m = sample_mean(x);
  if (!(m > 0.0)) throw std::domain_error("sample_cv: mean must be positive");
  double ss = 0.0;
  for (double v : x) ss += (v - m) * (v - m);
  return std::sqrt(ss / static_cast<double>(x.size())) / m;
}

double sample_gini(std::span<const double> x) {
  std::vector<double> sorted(x.begin(), x.end());
  std::sort(sorted.begin(), sorted.end());
  const auto n = static_cast<double>(sorted.size());
  double weighted = 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    weighted += (2.0 * static_cast<double>(i + 1) - n - 1.0) * sorted[i];
    total += sorted[i];
  }
  if (!(total > 0.0)) throw std::domain_error("sample_gini: total must be positive");
  return weighted / (n * total);
}

double sample_ks(std::span<const double> x, const std::function<double(double)>& cdf) {
  std::vector<double> sorted(x.begin(), x.end());
  std::sort(sorted.begin(), sorted.end());
  const auto n = static_cast<double>(sorted.size());
  double d = 0.0;
  std::size_t i = 0;
  while (i < sorted.size()) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    const double f = cdf(sorted[i]);
    d = std::max({d, std::abs(f - static_cast<double>(i) / n), std::abs(static_cast<double>(j) / n - f)});
    i = j;
  }
  return d;
}

EquilibriumFit empirical_vs_equilibrium(const Population& pop) {
  const auto x = pop.wealth();
  EquilibriumFit fit;
  const double w = sample_mean(x);
  fit.cv = sample_cv(x);
  fit.gini = sample_gini(x);
  if (pop.model() == Model::kDrm) {
    const DrmEquilibrium eq(w);
    fit.ks = sample_ks(x, [&eq](double v) { return drm_cdf(eq, v); });
  } else {
    const DyEquilibrium eq(w);
    fit.ks = sample_ks(x, [&eq](double v) { return dy_cdf(eq, v); });
  }
  return fit;
}

std::vector<Snapshot> run(Population& pop, std::size_t steps, std::size_t snapshot_every, const GridSpec& grid,
                          Execution execution) {
  std::vector<Snapshot> out;
  auto take = [&] {
    const auto fit = empirical_vs_equilibrium(pop);
    out.push_back({pop.step_count(), sample_mean(pop.wealth()), fit.cv, fit.gini, fit.ks,
                   from_samples(pop.wealth(), grid)});
  };
  take();
  for (std::size_t s = 1; s <= steps; ++s) {
    pop.step(execution);
    if (s == steps || (snapshot_every > 0 && s % snapshot_every == 0)) take();
  }
  return out;
}

void write_snapshots_csv(std::ostream& out, const std::vector<Snapshot>& snapshots) {
  out << "t,mean,cv,gini,ks\n";
  for (const auto& s : snapshots)
    out << s.t << ',' << format_double(s.mean) << ',' << format_double(s.cv) << ',' << format_double(s.gini) << ','
        << format_double(s.ks) << '\n';
}

void write_snapshots_csv(const std::filesystem::path& path, const std::vector<Snapshot>& snapshots) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_snapshots_csv(out, snapshots);
}

}  // namespace drm
