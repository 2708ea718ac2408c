#include "spinflip/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

namespace spinflip {

namespace {

using nlohmann::json;

// Runs f, prefixing any error with the JSON field path.
template <typename F>
auto at_path(const std::string& path, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ConfigError& e) {
    const std::string what = e.what();
    if (what.rfind(path, 0) == 0) throw;
    throw ConfigError(path + ": " + what);
  } catch (const std::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

void reject_unknown(const json& obj, const std::string& path, const std::set<std::string>& known) {
  if (!obj.is_object()) throw ConfigError((path.empty() ? "<root>" : path) + ": expected an object");
  for (const auto& [key, _] : obj.items()) {
    if (!known.count(key)) {
      throw ConfigError((path.empty() ? "" : path + ".") + key + ": unknown field");
    }
  }
}

double get_real(const json& j) {
  if (!j.is_number()) throw ConfigError("expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ConfigError("expected a finite number");
  return v;
}

Spin parse_spin(const json& j) {
  if (j.is_string()) return Spin::parse(j.get<std::string>());
  const double v = get_real(j);
  const double twice = 2.0 * v;
  if (std::abs(twice - std::round(twice)) > 1e-12) throw ConfigError("not a half-integer");
  return Spin(static_cast<int>(std::lround(twice)));
}

std::vector<double> parse_axis_json(const json& j) {
  if (j.is_string()) return parse_axis(j.get<std::string>());
  if (j.is_number()) return {get_real(j)};
  if (!j.is_array() || j.empty()) throw ConfigError("expected a non-empty list, number or range");
  std::vector<double> out;
  for (const auto& v : j) out.push_back(get_real(v));
  return out;
}

ModelConfig parse_model(const json& m) {
  reject_unknown(m, "model",
                 {"spin", "coupling", "dispersion", "jv", "rates", "kx0_over_pi", "mediator_spin"});
  ModelConfig cfg;
  if (!m.contains("spin")) throw ConfigError("model.spin: required");
  cfg.s = at_path("model.spin", [&] { return parse_spin(m["spin"]); });
  if (m.contains("coupling")) {
    const auto kind = at_path("model.coupling", [&] { return m["coupling"].get<std::string>(); });
    if (kind == "heisenberg") {
      cfg.coupling.kind = CouplingKind::heisenberg;
      cfg.dispersion = Dispersion::quadratic;
    } else if (kind == "xy") {
      cfg.coupling.kind = CouplingKind::xy;
      cfg.dispersion = Dispersion::linear;
    } else {
      throw ConfigError("model.coupling: expected heisenberg or xy");
    }
  }
  if (m.contains("dispersion")) {
    const auto d = at_path("model.dispersion", [&] { return m["dispersion"].get<std::string>(); });
    if (d == "quadratic") {
      cfg.dispersion = Dispersion::quadratic;
    } else if (d == "linear") {
      cfg.dispersion = Dispersion::linear;
    } else {
      throw ConfigError("model.dispersion: expected quadratic or linear");
    }
  }
  if (m.contains("jv")) cfg.g = at_path("model.jv", [&] { return get_real(m["jv"]); });
  if (m.contains("kx0_over_pi")) {
    cfg.kx0_over_pi = at_path("model.kx0_over_pi", [&] { return get_real(m["kx0_over_pi"]); });
  }
  if (m.contains("rates")) {
    cfg.coupling.rates = at_path("model.rates", [&] {
      if (!m["rates"].is_array()) throw ConfigError("expected a list");
      std::vector<double> r;
      for (const auto& v : m["rates"]) r.push_back(get_real(v));
      return r;
    });
  }
  if (m.contains("mediator_spin")) {
    const auto ms = at_path("model.mediator_spin", [&] { return m["mediator_spin"].get<std::string>(); });
    if (ms == "half") {
      cfg.mediator = MediatorSpin::half;
    } else if (ms == "pauli") {
      cfg.mediator = MediatorSpin::pauli;
    } else {
      throw ConfigError("model.mediator_spin: expected half or pauli");
    }
  }
  at_path("model", [&] { cfg.validate(); });
  return cfg;
}

InitialState parse_initial(const json& j) {
  if (j.is_string()) return InitialState::parse(j.get<std::string>());
  reject_unknown(j, "initial", {"kind", "m1", "m2", "s12", "m12", "amplitudes"});
  const auto kind = at_path("initial.kind", [&] { return j.at("kind").get<std::string>(); });
  auto half = [&](const char* key) {
    return at_path(std::string("initial.") + key, [&] {
      const json& v = j.at(key);
      if (v.is_string()) return parse_twice_half_integer(v.get<std::string>());
      const double twice = 2.0 * get_real(v);
      if (std::abs(twice - std::round(twice)) > 1e-12) throw ConfigError("not a half-integer");
      return static_cast<int>(std::lround(twice));
    });
  };
  if (kind == "product") return InitialState::product(half("m1"), half("m2"));
  if (kind == "coupled") return {InitialState::Kind::coupled, half("s12"), half("m12"), {}};
  if (kind == "singlet") return InitialState::singlet();
  if (kind == "custom") {
    InitialState st{InitialState::Kind::custom, 0, 0, {}};
    at_path("initial.amplitudes", [&] {
      const json& a = j.at("amplitudes");
      if (!a.is_array() || a.empty()) throw ConfigError("expected a non-empty list");
      for (const auto& v : a) {
        if (v.is_array()) {
          if (v.size() != 2) throw ConfigError("complex amplitudes are [re, im] pairs");
          st.amplitudes.emplace_back(get_real(v[0]), get_real(v[1]));
        } else {
          st.amplitudes.emplace_back(get_real(v), 0.0);
        }
      }
    });
    return st;
  }
  throw ConfigError("initial.kind: expected product, coupled, singlet or custom");
}

}  // namespace

std::vector<double> parse_axis(std::string_view text) {
  auto real = [](std::string_view t) {
    const std::string s(t);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      throw ConfigError("not a number: '" + s + "'");
    }
    if (used != s.size() || !std::isfinite(v)) throw ConfigError("not a finite number: '" + s + "'");
    return v;
  };
  std::vector<double> out;
  if (text.find(':') != std::string_view::npos) {
    const auto a = text.find(':');
    const auto b = text.find(':', a + 1);
    if (b == std::string_view::npos) throw ConfigError("range must be start:stop:step");
    const double start = real(text.substr(0, a));
    const double stop = real(text.substr(a + 1, b - a - 1));
    const double step = real(text.substr(b + 1));
    if (!(step > 0.0) || stop < start) throw ConfigError("range needs step > 0 and stop >= start");
    const auto count = static_cast<long>(std::floor((stop - start) / step + 1e-9)) + 1;
    if (count > 100000) throw ConfigError("range has too many points");
    for (long i = 0; i < count; ++i) {
      out.push_back(std::round((start + static_cast<double>(i) * step) * 1e12) / 1e12);
    }
    return out;
  }
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(',', start);
    out.push_back(real(text.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

ExperimentSpec parse_experiment(const json& doc) {
  reject_unknown(doc, "", {"label", "model", "initial", "n_max", "post_select", "k_spread", "sweep"});
  ExperimentSpec spec;
  if (doc.contains("label")) {
    spec.label = at_path("label", [&] { return doc["label"].get<std::string>(); });
  }
  if (!doc.contains("model")) throw ConfigError("model: required");
  spec.model = parse_model(doc["model"]);
  if (doc.contains("initial")) spec.initial = parse_initial(doc["initial"]);
  if (doc.contains("n_max")) {
    spec.n_max = at_path("n_max", [&] {
      if (!doc["n_max"].is_number_integer()) throw ConfigError("expected an integer");
      return doc["n_max"].get<int>();
    });
  }
  if (doc.contains("post_select")) {
    spec.post_select =
        at_path("post_select", [&] { return parse_post_select(doc["post_select"].get<std::string>()); });
  }
  if (doc.contains("k_spread")) {
    const json& ks = doc["k_spread"];
    reject_unknown(ks, "k_spread", {"sigma_over_k", "nodes"});
    KSpread spread;
    spread.sigma_over_k = at_path("k_spread.sigma_over_k", [&] { return get_real(ks.at("sigma_over_k")); });
    if (ks.contains("nodes")) {
      spread.nodes = at_path("k_spread.nodes", [&] { return ks["nodes"].get<int>(); });
    }
    spec.k_spread = spread;
  }
  if (doc.contains("sweep")) {
    const json& sw = doc["sweep"];
    reject_unknown(sw, "sweep", {"jv", "kx0_over_pi"});
    if (sw.contains("jv")) spec.sweep.g = at_path("sweep.jv", [&] { return parse_axis_json(sw["jv"]); });
    if (sw.contains("kx0_over_pi")) {
      spec.sweep.kx0_over_pi =
          at_path("sweep.kx0_over_pi", [&] { return parse_axis_json(sw["kx0_over_pi"]); });
    }
  }
  spec.validate();
  return spec;
}

ExperimentSpec load_experiment(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot open config file");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return parse_experiment(doc);
}

}  // namespace spinflip
