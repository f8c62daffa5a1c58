#include "covdlm/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "covdlm/errors.hpp"

namespace covdlm {

std::string format_number(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

double round_significant(double value) {
  if (!std::isfinite(value)) return value;
  return std::stod(format_number(value));
}

nlohmann::json to_json(const Vector& v) {
  auto out = nlohmann::json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(round_significant(v(i)));
  return out;
}

nlohmann::json to_json(const Matrix& m) {
  auto out = nlohmann::json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    auto row = nlohmann::json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(round_significant(m(i, j)));
    out.push_back(std::move(row));
  }
  return out;
}

nlohmann::json to_json(const StudyReport& report) {
  nlohmann::json doc;
  doc["family"] = std::string(to_string(report.family));
  doc["p"] = report.p;
  doc["length"] = report.length;
  doc["replications"] = report.replications;
  doc["sigma_true"] = to_json(report.sigma_true.matrix());
  doc["s_bar_overall"] = to_json(report.s_bar_overall.matrix());
  auto snaps = nlohmann::json::array();
  for (const auto& s : report.snapshots) {
    snaps.push_back({{"t", s.t}, {"s_bar", to_json(s.s_bar.matrix())}, {"rho_bar", to_json(s.rho_bar)}});
  }
  doc["snapshots"] = std::move(snaps);
  doc["msse_estimated"] = to_json(report.msse_estimated);
  doc["msse_known"] = to_json(report.msse_known);
  return doc;
}

void write_matrix_rows(std::ostream& out, long time, const std::string& prefix, const Matrix& m,
                       bool include_diagonal) {
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = include_diagonal ? i : i + 1; j < m.cols(); ++j) {
      out << time << ',' << prefix << i + 1 << j + 1 << ',' << format_number(m(i, j)) << '\n';
    }
  }
}

void write_study_csv(const StudyReport& report, std::ostream& out) {
  out << "time,entry,value\n";
  for (std::size_t t = 0; t < report.s_bar.size(); ++t) {
    const long time = static_cast<long>(t) + 1;
    write_matrix_rows(out, time, "s", report.s_bar[t].matrix(), true);
    write_matrix_rows(out, time, "rho", report.rho_bar[t], false);
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error(ErrorKind::IoError, "cannot open " + path.string() + " for writing");
  file << contents;
  if (!file) throw Error(ErrorKind::IoError, "failed writing " + path.string());
}

void write_json_file(const std::filesystem::path& path, const nlohmann::json& doc) {
  write_text_file(path, doc.dump(2) + "\n");
}

}  // namespace covdlm
