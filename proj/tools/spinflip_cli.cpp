// Command-line driver: runs presets or config files and writes CSV/JSON rows.
//
// Exit codes: 0 success, 1 solver or invariant failure at some grid point,
// 2 usage or configuration error.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "spinflip/config.hpp"
#include "spinflip/emit.hpp"
#include "spinflip/experiment.hpp"

namespace {

using namespace spinflip;

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

struct Overrides {
  std::optional<std::string> spin, coupling, rates, jv, kx0, initial, post_select, mediator, label;
  std::optional<int> n_max, nodes;
  std::optional<double> sigma_over_k;
};

void apply(const Overrides& o, ExperimentSpec& spec) {
  if (o.spin) spec.model.s = Spin::parse(*o.spin);
  if (o.coupling) {
    if (*o.coupling == "heisenberg") {
      spec.model.coupling = {CouplingKind::heisenberg, {}};
      spec.model.dispersion = Dispersion::quadratic;
    } else if (*o.coupling == "xy") {
      spec.model.coupling.kind = CouplingKind::xy;
      spec.model.dispersion = Dispersion::linear;
    } else {
      throw ConfigError("--coupling: expected heisenberg or xy");
    }
  }
  if (o.rates) spec.model.coupling.rates = parse_axis(*o.rates);
  if (o.jv) {
    auto axis = parse_axis(*o.jv);
    spec.sweep.g.clear();
    if (axis.size() == 1) {
      spec.model.g = axis.front();
    } else {
      spec.sweep.g = std::move(axis);
    }
  }
  if (o.kx0) {
    auto axis = parse_axis(*o.kx0);
    spec.sweep.kx0_over_pi.clear();
    if (axis.size() == 1) {
      spec.model.kx0_over_pi = axis.front();
    } else {
      spec.sweep.kx0_over_pi = std::move(axis);
    }
  }
  if (o.initial) spec.initial = InitialState::parse(*o.initial);
  if (o.post_select) spec.post_select = parse_post_select(*o.post_select);
  if (o.mediator) {
    if (*o.mediator == "half") {
      spec.model.mediator = MediatorSpin::half;
    } else if (*o.mediator == "pauli") {
      spec.model.mediator = MediatorSpin::pauli;
    } else {
      throw ConfigError("--mediator-spin: expected half or pauli");
    }
  }
  if (o.n_max) spec.n_max = *o.n_max;
  if (o.sigma_over_k) spec.k_spread = KSpread{*o.sigma_over_k, o.nodes.value_or(31)};
  if (o.nodes && spec.k_spread) spec.k_spread->nodes = *o.nodes;
  if (o.label) spec.label = *o.label;
}

nlohmann::json failure_summary(const ExperimentResult& result) {
  nlohmann::json j;
  j["status"] = "failed";
  j["failures"] = nlohmann::json::array();
  for (const auto& f : result.failures) {
    j["failures"].push_back(
        {{"label", f.label}, {"g", f.g}, {"kx0_over_pi", f.kx0_over_pi}, {"reason", f.reason}});
  }
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Singlet extraction by repeated spin-flip scattering between two spin-s impurities"};

  std::optional<std::string> preset_name, config_path, out_path;
  std::string format_text = "csv";
  bool serial = false;
  bool list = false;
  Overrides o;

  app.add_option("--preset", preset_name, "Named experiment (see --list-presets)");
  app.add_option("--config", config_path, "JSON experiment file");
  app.add_flag("--list-presets", list, "Print preset names and exit");
  app.add_option("--spin", o.spin, "Impurity spin s, e.g. 1/2, 1, 3/2");
  app.add_option("--coupling", o.coupling, "heisenberg (electron) or xy (photon)");
  app.add_option("--rates", o.rates, "XY rates J_{s,m}/v for m=-s..s-1, comma separated");
  app.add_option("--jv", o.jv, "J/v: value, list a,b,c or range start:stop:step");
  app.add_option("--kx0-over-pi", o.kx0, "k x0 / pi: value, list or range");
  app.add_option("--n", o.n_max, "Number of mediators")->check(CLI::NonNegativeNumber);
  app.add_option("--initial", o.initial, "product:m1,m2 | coupled:s12,m12 | singlet | custom:a0,...");
  app.add_option("--post-select", o.post_select, "up | down | none");
  app.add_option("--sigma-over-k", o.sigma_over_k, "Gaussian wavevector spread sigma/k");
  app.add_option("--nodes", o.nodes, "Quadrature nodes for the wavevector spread (odd)");
  app.add_option("--mediator-spin", o.mediator, "Mediator spin normalization: half | pauli");
  app.add_option("--label", o.label, "Label written to every row");
  app.add_option("--format", format_text, "csv | json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--out", out_path, "Output file (default: stdout)");
  app.add_flag("--serial", serial, "Use the serial reference path instead of OpenMP");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  if (list) {
    for (const auto& name : preset_names()) std::cout << name << '\n';
    return 0;
  }

  std::vector<ExperimentSpec> specs;
  try {
    if (preset_name && config_path) throw ConfigError("--preset and --config are exclusive");
    if (preset_name) {
      specs = preset(*preset_name);
    } else if (config_path) {
      specs = {load_experiment(*config_path)};
    } else {
      ExperimentSpec spec;
      spec.label = "cli";
      spec.model = ModelConfig::heisenberg(Spin(1), 1.5, 1.0);
      specs = {spec};
    }
    for (auto& spec : specs) {
      apply(o, spec);
      spec.validate();
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  const ExperimentResult result =
      run_experiments(specs, serial ? Execution::serial : Execution::parallel);

  try {
    const Format format = parse_format(format_text);
    if (out_path) {
      emit(result.rows, format, *out_path);
    } else {
      write_rows(std::cout, result.rows, format);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  if (!result.ok()) {
    std::cerr << failure_summary(result).dump() << '\n';
    return kExitFailure;
  }
  return 0;
}
