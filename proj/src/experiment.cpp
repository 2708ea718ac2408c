#include "spinflip/experiment.hpp"

#include <cmath>
#include <exception>
#include <sstream>

#include "spinflip/metrics.hpp"

namespace spinflip {

namespace {

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    out.push_back(text.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double parse_real(std::string_view text) {
  const std::string s(text);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ConfigError("not a number: '" + s + "'");
  }
  if (used != s.size()) throw ConfigError("not a number: '" + s + "'");
  return v;
}

struct GridPoint {
  double g;
  double kx0_over_pi;
};

struct PointResult {
  std::vector<ResultRow> rows;
  std::optional<GridFailure> failure;
};

std::vector<GridPoint> grid_of(const ExperimentSpec& spec) {
  const std::vector<double> gs = spec.sweep.g.empty() ? std::vector<double>{spec.model.g} : spec.sweep.g;
  const std::vector<double> ks = spec.sweep.kx0_over_pi.empty()
                                     ? std::vector<double>{spec.model.kx0_over_pi}
                                     : spec.sweep.kx0_over_pi;
  std::vector<GridPoint> grid;
  grid.reserve(gs.size() * ks.size());
  for (double g : gs)
    for (double k : ks) grid.push_back({g, k});
  return grid;
}

KrausMixture checked_channel(const ModelConfig& cfg, const std::optional<KSpread>& spread,
                             Execution exec) {
  auto fail = [&](const std::string& what, double value) {
    std::ostringstream os;
    os << what << " " << value;
    throw std::runtime_error(os.str());
  };
  KrausMixture channel;
  if (spread) {
    channel = gaussian_k_kraus(cfg, spread->sigma_over_k, spread->nodes, exec);
  } else {
    const auto ops = solve_two_impurity(cfg);
    if (double u = verify_unitarity(ops); !(u < kUnitarityTolerance)) {
      fail("unitarity deviation", u);
    }
    if (double v = selection_rule_violation(ops); !(v < kSelectionRuleTolerance)) {
      fail("S_z selection-rule violation", v);
    }
    channel = KrausMixture::single(extract_kraus(ops));
  }
  if (double c = channel.completeness_deviation(); !(c < kUnitarityTolerance)) {
    fail("Kraus completeness deviation", c);
  }
  for (const auto& comp : channel.components) {
    if (double v = comp.kraus.shift_rule_violation(); !(v < kSelectionRuleTolerance)) {
      fail("Kraus m12 shift-rule violation", v);
    }
  }
  return channel;
}

ProtocolStep step_for(PostSelect p) {
  ProtocolStep step;
  if (p == PostSelect::none) step.detect.reset();
  if (p == PostSelect::down) step.detect = ElectronSpin::down;
  return step;
}

PointResult evaluate_point(const ExperimentSpec& spec, GridPoint point, Execution inner) {
  PointResult out;
  ModelConfig cfg = spec.model;
  cfg.g = point.g;
  cfg.kx0_over_pi = point.kx0_over_pi;
  const double sigma = spec.k_spread ? spec.k_spread->sigma_over_k : 0.0;
  try {
    const KrausMixture channel = checked_channel(cfg, spec.k_spread, inner);
    const Spin s = cfg.s;
    const auto rho0 = DensityMatrix::from_pure(spec.initial_or_default().build(s));
    const auto traj =
        iterate_protocol(channel, rho0, spec.n_max, singlet_state(s), step_for(spec.post_select));
    for (const auto& rec : traj.records) {
      out.rows.push_back({spec.label, s.to_string(), to_string(cfg.coupling.kind), point.g,
                          point.kx0_over_pi, sigma, rec.n, rec.fidelity,
                          rec.cumulative_probability, rec.log_negativity, rec.purity,
                          rec.step_probability});
    }
    if (traj.truncated) {
      out.failure = GridFailure{spec.label, point.g, point.kx0_over_pi,
                                "post-selection probability vanished after n=" +
                                    std::to_string(traj.records.back().n)};
    }
  } catch (const std::exception& e) {
    out.failure = GridFailure{spec.label, point.g, point.kx0_over_pi, e.what()};
  }
  return out;
}

std::vector<double> range_axis(double start, double stop, double step) {
  std::vector<double> out;
  const auto count = static_cast<int>(std::floor((stop - start) / step + 1e-9)) + 1;
  for (int i = 0; i < count; ++i) out.push_back(std::round((start + i * step) * 1e12) / 1e12);
  return out;
}

ExperimentSpec base_spec(std::string label, ModelConfig model, int n_max) {
  ExperimentSpec spec;
  spec.label = std::move(label);
  spec.model = std::move(model);
  spec.n_max = n_max;
  return spec;
}

}  // namespace

InitialState InitialState::parse(std::string_view text) {
  const auto colon = text.find(':');
  const std::string_view head = text.substr(0, colon);
  const std::string_view rest = colon == std::string_view::npos ? "" : text.substr(colon + 1);
  try {
    if (head == "singlet" && colon == std::string_view::npos) return singlet();
    if (head == "product" || head == "coupled") {
      const auto parts = split(rest, ',');
      if (parts.size() != 2) throw ConfigError("expected two half-integers");
      const Kind kind = head == "product" ? Kind::product : Kind::coupled;
      return {kind, parse_twice_half_integer(parts[0]), parse_twice_half_integer(parts[1]), {}};
    }
    if (head == "custom") {
      InitialState st{Kind::custom, 0, 0, {}};
      for (auto p : split(rest, ',')) st.amplitudes.emplace_back(parse_real(p), 0.0);
      return st;
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError("initial state '" + std::string(text) + "': " + e.what());
  }
  throw ConfigError("initial state '" + std::string(text) +
                    "': expected product:m1,m2 | coupled:s12,m12 | singlet | custom:a0,a1,...");
}

StateVector InitialState::build(Spin s) const {
  try {
    switch (kind) {
      case Kind::product:
        return product_state(s, twice_a, twice_b);
      case Kind::coupled:
        return coupled_basis(s).state(twice_a, twice_b);
      case Kind::singlet:
        return singlet_state(s);
      case Kind::custom: {
        if (static_cast<Index>(amplitudes.size()) != s.pair_dim()) {
          throw ConfigError("custom state needs " + std::to_string(s.pair_dim()) +
                            " amplitudes for s=" + s.to_string());
        }
        StateVector v(s.pair_dim());
        for (Index i = 0; i < v.size(); ++i) v(i) = amplitudes[static_cast<std::size_t>(i)];
        const double norm = v.norm();
        if (!(norm > 1e-300) || !std::isfinite(norm)) throw ConfigError("custom state has zero norm");
        return v / norm;
      }
    }
  } catch (const std::out_of_range& e) {
    throw ConfigError(std::string("initial state does not fit the spin: ") + e.what());
  }
  throw std::logic_error("unreachable initial-state kind");
}

std::string InitialState::describe() const {
  switch (kind) {
    case Kind::product:
      return "product:" + format_half_integer(twice_a) + "," + format_half_integer(twice_b);
    case Kind::coupled:
      return "coupled:" + format_half_integer(twice_a) + "," + format_half_integer(twice_b);
    case Kind::singlet:
      return "singlet";
    case Kind::custom:
      return "custom[" + std::to_string(amplitudes.size()) + "]";
  }
  return {};
}

std::string to_string(PostSelect p) {
  switch (p) {
    case PostSelect::up:
      return "up";
    case PostSelect::down:
      return "down";
    case PostSelect::none:
      return "none";
  }
  return {};
}

PostSelect parse_post_select(std::string_view text) {
  if (text == "up") return PostSelect::up;
  if (text == "down") return PostSelect::down;
  if (text == "none") return PostSelect::none;
  throw ConfigError("post_select must be up, down or none, got '" + std::string(text) + "'");
}

InitialState ExperimentSpec::initial_or_default() const {
  return initial.value_or(InitialState::product(model.s.twice(), -model.s.twice()));
}

void ExperimentSpec::validate() const {
  if (label.find_first_of(",\"\n\r") != std::string::npos) {
    throw ConfigError("label: must not contain commas, quotes or newlines");
  }
  if (n_max < 0) throw ConfigError("n_max: must be >= 0");
  if (!sweep.g.empty() && !model.coupling.rates.empty()) {
    throw ConfigError("sweep.jv: cannot sweep J/v when explicit xy rates are given");
  }
  for (double g : sweep.g) {
    if (!std::isfinite(g) || g < 0.0) throw ConfigError("sweep.jv: values must be finite and >= 0");
  }
  for (double k : sweep.kx0_over_pi) {
    if (!std::isfinite(k) || k < 0.0) {
      throw ConfigError("sweep.kx0_over_pi: values must be finite and >= 0");
    }
  }
  if (k_spread) {
    if (!(k_spread->sigma_over_k > 0.0 && k_spread->sigma_over_k < 0.2)) {
      throw ConfigError("k_spread.sigma_over_k: must lie in (0, 0.2)");
    }
    if (k_spread->nodes < 3 || k_spread->nodes % 2 == 0) {
      throw ConfigError("k_spread.nodes: must be odd and >= 3");
    }
  }
  try {
    model.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("model: ") + e.what());
  }
  try {
    (void)initial_or_default().build(model.s);
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("initial: ") + e.what());
  }
}

ExperimentResult run_experiment(const ExperimentSpec& spec, Execution exec) {
  spec.validate();
  const auto grid = grid_of(spec);
  const Execution inner = grid.size() == 1 ? exec : Execution::serial;
  std::vector<PointResult> results(grid.size());

  const auto count = static_cast<long>(grid.size());
#pragma omp parallel for schedule(dynamic) if (exec == Execution::parallel && count > 1)
  for (long i = 0; i < count; ++i) {
    results[static_cast<std::size_t>(i)] =
        evaluate_point(spec, grid[static_cast<std::size_t>(i)], inner);
  }

  ExperimentResult out;
  for (auto& r : results) {
    out.rows.insert(out.rows.end(), r.rows.begin(), r.rows.end());
    if (r.failure) out.failures.push_back(std::move(*r.failure));
  }
  return out;
}

ExperimentResult run_experiments(const std::vector<ExperimentSpec>& specs, Execution exec) {
  ExperimentResult out;
  for (const auto& spec : specs) {
    auto r = run_experiment(spec, exec);
    out.rows.insert(out.rows.end(), r.rows.begin(), r.rows.end());
    out.failures.insert(out.failures.end(), r.failures.begin(), r.failures.end());
  }
  return out;
}

Trajectory run_trajectory(const ModelConfig& model, const InitialState& initial, int n_max,
                          PostSelect post_select, std::optional<KSpread> k_spread,
                          Execution exec) {
  const KrausMixture channel =
      k_spread ? gaussian_k_kraus(model, k_spread->sigma_over_k, k_spread->nodes, exec)
               : KrausMixture::single(extract_kraus(solve_two_impurity(model)));
  return iterate_protocol(channel, DensityMatrix::from_pure(initial.build(model.s)), n_max,
                          singlet_state(model.s), step_for(post_select));
}

std::vector<std::string> preset_names() {
  return {"fig2ab", "fig2c", "entanglement-s2", "photonic-nonideal", "photonic-ideal",
          "robustness"};
}

std::vector<ExperimentSpec> preset(std::string_view name) {
  const Spin half(1), one(2), three_halves(3), two(4);
  if (name == "fig2ab") {
    auto spec = base_spec("fig2ab", ModelConfig::heisenberg(half, 1.5, 1.0), 14);
    spec.sweep.g = range_axis(0.2, 3.0, 0.1);
    return {spec};
  }
  if (name == "fig2c") {
    return {base_spec("fig2c", ModelConfig::heisenberg(half, 1.5, 1.0), 20),
            base_spec("fig2c", ModelConfig::heisenberg(one, 1.2, 1.0), 20),
            base_spec("fig2c", ModelConfig::heisenberg(three_halves, 1.1, 1.0), 20)};
  }
  if (name == "entanglement-s2") {
    return {base_spec("entanglement-s2", ModelConfig::heisenberg(two, 1.0, 1.0), 8)};
  }
  if (name == "photonic-nonideal") {
    const double r3 = std::sqrt(3.0);
    return {base_spec("photonic-nonideal",
                      ModelConfig::xy_rates(three_halves, {r3, 4.0 * r3, r3}, 1.0), 12)};
  }
  if (name == "photonic-ideal") {
    return {base_spec("photonic-ideal", ModelConfig::xy(three_halves, 1.0, 1.0), 12)};
  }
  if (name == "robustness") {
    auto spec = base_spec("robustness", ModelConfig::heisenberg(half, 1.5, 1.0), 12);
    spec.k_spread = KSpread{0.05, 31};
    spec.sweep.kx0_over_pi = {0.90, 0.95, 1.00, 1.03};
    return {spec};
  }
  throw ConfigError("unknown preset '" + std::string(name) + "'");
}

}  // namespace spinflip
