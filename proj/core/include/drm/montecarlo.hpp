#pragma once

// Agent-based exchange simulation.
//
// Each step draws a uniform perfect matching of the N agents (N even) and
// applies one exchange per pair. Random numbers come from counter-based
// streams (see rng.hpp):
//
//   matching:  Fisher-Yates over 0..N-1 from stream (seed, kShuffle, t, 0),
//              perm[N-1] swapped first; pair k is (perm[2k], perm[2k+1]).
//   pair k:    stream (seed, kPair, t, k); first draw gives eps = (u >> 11) 2^-53,
//              top bit of the second draw set means perm[2k+1] receives.
//
// t is the step count before the step. Pairs are disjoint, so the parallel
// mode writes the same wealth array as the sequential one.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "drm/histogram.hpp"

namespace drm {

enum class Model { kDrm, kDy };

std::string_view to_string(Model model) noexcept;
/// Accepts "drm" and "dy" (case-insensitive); throws std::invalid_argument.
Model parse_model(std::string_view name);

/// Wealth conservation or nonnegativity broke during a step.
class InvariantViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One exchange. DRM: the loser gives eps of its wealth to the winner
/// (j receives when j_wins). DY: the pooled wealth is split eps : 1 - eps.
/// Throws std::domain_error for negative wealth or eps outside [0, 1].
std::pair<double, double> pair_exchange(double m_i, double m_j, double epsilon, bool j_wins, Model model);

enum class Execution { kSequential, kParallel };

class Population {
 public:
  /// Throws std::invalid_argument for odd or zero N and negative wealth.
  Population(std::vector<double> wealth, Model model, std::uint64_t seed, std::uint64_t step_count = 0);

  std::span<const double> wealth() const noexcept { return wealth_; }
  std::size_t size() const noexcept { return wealth_.size(); }
  double total() const noexcept { return total_; }
  Model model() const noexcept { return model_; }
  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t step_count() const noexcept { return step_count_; }

  /// One round of pairings. Throws InvariantViolation when the wealth sum
  /// drifts by more than 1e-9 relative or a wealth turns negative.
  void step(Execution execution = Execution::kSequential);

 private:
  std::vector<double> wealth_;
  std::vector<std::uint32_t> perm_;
  Model model_;
  std::uint64_t seed_;
  std::uint64_t step_count_;
  double total_;
};

enum class InitialCondition { kEqual, kUniform, kExponential };

std::string_view to_string(InitialCondition init) noexcept;
/// Accepts "equal", "uniform", "exponential"; throws std::invalid_argument.
InitialCondition parse_initial_condition(std::string_view name);

/// All at w, uniform on [0, 2w], or exponential with mean w. Agent i draws
/// from stream (seed, kInit, 0, i).
Population make_population(std::size_t n, double w, InitialCondition init, Model model, std::uint64_t seed);

double sample_mean(std::span<const double> x);
/// Population standard deviation over mean.
double sample_cv(std::span<const double> x);
double sample_gini(std::span<const double> x);
/// Exact KS distance between the empirical step cdf of x and `cdf`.
double sample_ks(std::span<const double> x, const std::function<double(double)>& cdf);

struct EquilibriumFit {
  double ks = 0.0;
  double cv = 0.0;
  double gini = 0.0;
};

/// KS against the equilibrium of the population's own model at the empirical mean.
EquilibriumFit empirical_vs_equilibrium(const Population& pop);

struct Snapshot {
  std::uint64_t t = 0;
  double mean = 0.0;
  double cv = 0.0;
  double gini = 0.0;
  double ks = 0.0;
  HistogramMeasure histogram;
};

/// Steps `steps` times, snapshotting at t = 0, every `snapshot_every` steps
/// and after the last step. snapshot_every = 0 keeps only the first and last.
std::vector<Snapshot> run(Population& pop, std::size_t steps, std::size_t snapshot_every, const GridSpec& grid,
                          Execution execution = Execution::kSequential);

/// Header `t,mean,cv,gini,ks`.
void write_snapshots_csv(std::ostream& out, const std::vector<Snapshot>& snapshots);
void write_snapshots_csv(const std::filesystem::path& path, const std::vector<Snapshot>& snapshots);

}  // namespace drm
