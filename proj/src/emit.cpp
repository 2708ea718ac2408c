#include "spinflip/emit.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

namespace spinflip {

namespace {

std::string real17(double v) {
  if (!std::isfinite(v)) throw std::runtime_error("refusing to emit a non-finite value");
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string quoted(const std::string& s) { return nlohmann::json(s).dump(); }

}  // namespace

Format parse_format(std::string_view text) {
  if (text == "csv") return Format::csv;
  if (text == "json") return Format::json;
  throw std::invalid_argument("format must be csv or json, got '" + std::string(text) + "'");
}

const std::string& csv_header() {
  static const std::string header =
      "label,spin,coupling,g,kx0_over_pi,sigma_over_k,n,fidelity,cumulative_probability,"
      "log_negativity,purity,step_probability";
  return header;
}

void write_csv(std::ostream& os, const std::vector<ResultRow>& rows) {
  os << csv_header() << '\n';
  for (const auto& r : rows) {
    os << r.label << ',' << r.spin << ',' << r.coupling << ',' << real17(r.g) << ','
       << real17(r.kx0_over_pi) << ',' << real17(r.sigma_over_k) << ',' << r.n << ','
       << real17(r.fidelity) << ',' << real17(r.cumulative_probability) << ','
       << real17(r.log_negativity) << ',' << real17(r.purity) << ','
       << real17(r.step_probability) << '\n';
  }
}

void write_json(std::ostream& os, const std::vector<ResultRow>& rows) {
  os << '[';
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    os << (i ? ",\n " : "\n ") << "{\"label\":" << quoted(r.label)
       << ",\"spin\":" << quoted(r.spin) << ",\"coupling\":" << quoted(r.coupling)
       << ",\"g\":" << real17(r.g) << ",\"kx0_over_pi\":" << real17(r.kx0_over_pi)
       << ",\"sigma_over_k\":" << real17(r.sigma_over_k) << ",\"n\":" << r.n
       << ",\"fidelity\":" << real17(r.fidelity)
       << ",\"cumulative_probability\":" << real17(r.cumulative_probability)
       << ",\"log_negativity\":" << real17(r.log_negativity)
       << ",\"purity\":" << real17(r.purity)
       << ",\"step_probability\":" << real17(r.step_probability) << '}';
  }
  os << (rows.empty() ? "]\n" : "\n]\n");
}

void write_rows(std::ostream& os, const std::vector<ResultRow>& rows, Format format) {
  if (format == Format::csv) {
    write_csv(os, rows);
  } else {
    write_json(os, rows);
  }
}

void emit(const std::vector<ResultRow>& rows, Format format, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error(path.string() + ": cannot open for writing");
  write_rows(out, rows, format);
  out.flush();
  if (!out) throw std::runtime_error(path.string() + ": write failed");
}

std::vector<ResultRow> rows_from_json(const std::string& text) {
  const auto doc = nlohmann::json::parse(text);
  if (!doc.is_array()) throw std::invalid_argument("result JSON must be an array of rows");
  std::vector<ResultRow> rows;
  rows.reserve(doc.size());
  for (const auto& j : doc) {
    ResultRow r;
    r.label = j.at("label").get<std::string>();
    r.spin = j.at("spin").get<std::string>();
    r.coupling = j.at("coupling").get<std::string>();
    r.g = j.at("g").get<double>();
    r.kx0_over_pi = j.at("kx0_over_pi").get<double>();
    r.sigma_over_k = j.at("sigma_over_k").get<double>();
    r.n = j.at("n").get<int>();
    r.fidelity = j.at("fidelity").get<double>();
    r.cumulative_probability = j.at("cumulative_probability").get<double>();
    r.log_negativity = j.at("log_negativity").get<double>();
    r.purity = j.at("purity").get<double>();
    r.step_probability = j.at("step_probability").get<double>();
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace spinflip
