#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "spinflip/channel.hpp"
#include "spinflip/scattering.hpp"

namespace spinflip {

/// Initial two-impurity state. Text forms: "product:m1,m2", "coupled:s12,m12",
/// "singlet", "custom:a0,a1,..." (real amplitudes in product-basis order).
struct InitialState {
  enum class Kind { product, coupled, singlet, custom };

  Kind kind = Kind::product;
  int twice_a = 0;  // m1 or s12
  int twice_b = 0;  // m2 or m12
  std::vector<cplx> amplitudes;

  static InitialState parse(std::string_view text);
  static InitialState product(int twice_m1, int twice_m2) { return {Kind::product, twice_m1, twice_m2, {}}; }
  static InitialState singlet() { return {Kind::singlet, 0, 0, {}}; }

  /// Normalized state vector; throws ConfigError if it does not fit s or has zero norm.
  StateVector build(Spin s) const;
  std::string describe() const;
};

enum class PostSelect { up, down, none };

std::string to_string(PostSelect p);
PostSelect parse_post_select(std::string_view text);

struct KSpread {
  double sigma_over_k = 0.05;
  int nodes = 31;
};

/// Empty axes fall back to the model's own g or kx0.
struct SweepAxes {
  std::vector<double> g;
  std::vector<double> kx0_over_pi;
};

struct ExperimentSpec {
  std::string label;
  ModelConfig model;
  /// Defaults to |s,-s> when unset.
  std::optional<InitialState> initial;
  int n_max = 10;
  PostSelect post_select = PostSelect::up;
  std::optional<KSpread> k_spread;
  SweepAxes sweep;

  void validate() const;
  InitialState initial_or_default() const;
};

/// One row per (grid point, n). Column order matches csv_header().
struct ResultRow {
  std::string label;
  std::string spin;
  std::string coupling;
  double g = 0.0;
  double kx0_over_pi = 0.0;
  double sigma_over_k = 0.0;
  int n = 0;
  double fidelity = 0.0;
  double cumulative_probability = 0.0;
  double log_negativity = 0.0;
  double purity = 0.0;
  double step_probability = 0.0;

  friend bool operator==(const ResultRow&, const ResultRow&) = default;
};

struct GridFailure {
  std::string label;
  double g = 0.0;
  double kx0_over_pi = 0.0;
  std::string reason;
};

struct ExperimentResult {
  std::vector<ResultRow> rows;
  std::vector<GridFailure> failures;

  bool ok() const { return failures.empty(); }
};

/// Tolerances of the per-grid-point self-checks.
inline constexpr double kUnitarityTolerance = 1e-10;
inline constexpr double kSelectionRuleTolerance = 1e-12;

/// Evaluates every grid point (g outer, kx0 inner); rows come out in grid
/// order regardless of how the points were scheduled.
ExperimentResult run_experiment(const ExperimentSpec& spec, Execution exec = Execution::parallel);
ExperimentResult run_experiments(const std::vector<ExperimentSpec>& specs,
                                 Execution exec = Execution::parallel);

/// Named experiment bundles. Throws ConfigError for unknown names.
std::vector<ExperimentSpec> preset(std::string_view name);
std::vector<std::string> preset_names();

/// Trajectory for a single configuration (no sweep, no self-checks).
Trajectory run_trajectory(const ModelConfig& model, const InitialState& initial, int n_max,
                          PostSelect post_select = PostSelect::up,
                          std::optional<KSpread> k_spread = std::nullopt,
                          Execution exec = Execution::parallel);

}  // namespace spinflip
