#include "cfq/io/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "cfq/error.hpp"

namespace cfq::io {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v == 0.0 ? 0.0 : v);  // no "-0"
  return buf;
}

void write_csv(const std::string& path, const CsvTable& table) {
  const std::size_t cols = table.header.size();
  if (table.columns.size() != cols) throw InputError("csv: header and column count differ");
  const std::size_t rows = cols ? table.columns[0].size() : 0;
  for (const auto& c : table.columns) {
    if (c.size() != rows) throw InputError("csv: columns differ in length");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  for (std::size_t j = 0; j < cols; ++j) out << (j ? "," : "") << table.header[j];
  out << '\n';
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) out << (j ? "," : "") << format_number(table.columns[j][i]);
    out << '\n';
  }
  if (!out) throw IoError("failed writing " + path);
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  CsvTable t;
  std::string line;
  if (!std::getline(in, line)) throw InputError(path + ": empty csv");
  std::stringstream hs(line);
  for (std::string cell; std::getline(hs, cell, ',');) t.header.push_back(cell);
  t.columns.resize(t.header.size());
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream rs(line);
    std::size_t j = 0;
    for (std::string cell; std::getline(rs, cell, ','); ++j) {
      if (j >= t.columns.size()) throw InputError(path + ": row has too many cells");
      try {
        t.columns[j].push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw InputError(path + ": bad number '" + cell + "'");
      }
    }
    if (j != t.columns.size()) throw InputError(path + ": row has too few cells");
  }
  return t;
}

CsvTable bloch_table(const std::vector<double>& t, const std::vector<qubit::QubitOperator>& states,
                     const std::vector<double>& traces) {
  if (states.size() != t.size() || traces.size() != t.size()) throw InputError("bloch_table: length mismatch");
  CsvTable table{{"t", "sx", "sy", "sz", "trace"}, std::vector<std::vector<double>>(5)};
  for (std::size_t i = 0; i < t.size(); ++i) {
    const qubit::BlochVector b = qubit::bloch(states[i]);
    table.columns[0].push_back(t[i]);
    table.columns[1].push_back(b.x);
    table.columns[2].push_back(b.y);
    table.columns[3].push_back(b.z);
    table.columns[4].push_back(traces[i]);
  }
  return table;
}

CsvTable curve_table(const std::vector<double>& t, const std::vector<double>& value,
                     const std::vector<double>& stderr_) {
  if (value.size() != t.size() || stderr_.size() != t.size()) throw InputError("curve_table: length mismatch");
  return CsvTable{{"t", "value", "stderr"}, {t, value, stderr_}};
}

CsvTable theta_table(const fpe::ThetaPdf& pdf) {
  CsvTable table{{"theta", "pdf"}, std::vector<std::vector<double>>(2)};
  for (std::size_t i = 0; i < pdf.size(); ++i) {
    table.columns[0].push_back(pdf.theta(i));
    table.columns[1].push_back(pdf.values[i]);
  }
  if (pdf.size() > 0) {
    table.columns[0].push_back(2.0 * std::numbers::pi);
    table.columns[1].push_back(pdf.values.front());
  }
  return table;
}

}  // namespace cfq::io
