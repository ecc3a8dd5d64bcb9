#pragma once

#include <string>
#include <vector>

#include "cfq/fpe/theta_pdf.hpp"
#include "cfq/qubit/operators.hpp"

namespace cfq::io {

/// 12 significant digits, '.' decimal separator, "nan"/"inf"/"-inf" for
/// non-finite values.
std::string format_number(double v);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> columns;
};

/// Header row then one row per index; all columns must have equal length.
/// Throws IoError when the file cannot be written.
void write_csv(const std::string& path, const CsvTable& table);
/// Parses a file written by write_csv. Throws IoError or InputError.
CsvTable read_csv(const std::string& path);

/// `t,sx,sy,sz,trace` with Bloch components of rho / Tr rho.
CsvTable bloch_table(const std::vector<double>& t, const std::vector<qubit::QubitOperator>& states,
                     const std::vector<double>& traces);
/// `t,value,stderr`.
CsvTable curve_table(const std::vector<double>& t, const std::vector<double>& value,
                     const std::vector<double>& stderr_);
/// `theta,pdf`, including the closing point theta = 2 pi (equal to theta = 0).
CsvTable theta_table(const fpe::ThetaPdf& pdf);

}  // namespace cfq::io
