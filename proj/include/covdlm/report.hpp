#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include <json.hpp>

#include "covdlm/matops.hpp"
#include "covdlm/simulate.hpp"

namespace covdlm {

/// Floats in every report use 12 significant digits.
std::string format_number(double value);
double round_significant(double value);

nlohmann::json to_json(const Vector& v);
nlohmann::json to_json(const Matrix& m);
nlohmann::json to_json(const StudyReport& report);

/// Long format: time,entry,value with entries s_ij (i <= j) and rho_ij (i < j).
void write_study_csv(const StudyReport& report, std::ostream& out);

/// Long-format rows (time,<prefix>ij,value) for the upper triangle of m.
void write_matrix_rows(std::ostream& out, long time, const std::string& prefix, const Matrix& m,
                       bool include_diagonal);

void write_text_file(const std::filesystem::path& path, const std::string& contents);
void write_json_file(const std::filesystem::path& path, const nlohmann::json& doc);

}  // namespace covdlm
