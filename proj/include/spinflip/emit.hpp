#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "spinflip/experiment.hpp"

namespace spinflip {

enum class Format { csv, json };

Format parse_format(std::string_view text);

/// label,spin,coupling,g,kx0_over_pi,sigma_over_k,n,fidelity,
/// cumulative_probability,log_negativity,purity,step_probability
const std::string& csv_header();

/// Reals are printed with 17 significant digits.
void write_csv(std::ostream& os, const std::vector<ResultRow>& rows);
void write_json(std::ostream& os, const std::vector<ResultRow>& rows);
void write_rows(std::ostream& os, const std::vector<ResultRow>& rows, Format format);

/// Writes to path; throws std::runtime_error naming the path on I/O failure.
void emit(const std::vector<ResultRow>& rows, Format format, const std::filesystem::path& path);

std::vector<ResultRow> rows_from_json(const std::string& text);

}  // namespace spinflip
