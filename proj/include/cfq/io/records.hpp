#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "cfq/qubit/linear.hpp"

namespace cfq::io {

/// One JSON-lines entry: {"idx":k,"clicks":[...],"logw":x}; a zero weight
/// (logw = -inf) is written as null.
struct RecordLine {
  std::size_t idx = 0;
  qubit::ClickRecord record;
  double log_weight = 0.0;
};

void write_records(const std::string& path, const std::vector<RecordLine>& lines);
std::vector<RecordLine> read_records(const std::string& path);

/// Pretty-printed JSON with a trailing newline. Throws IoError.
void write_json(const std::string& path, const nlohmann::json& doc);
nlohmann::json read_json(const std::string& path);

}  // namespace cfq::io
