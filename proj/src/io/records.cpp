#include "cfq/io/records.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include "cfq/error.hpp"

namespace cfq::io {

void write_records(const std::string& path, const std::vector<RecordLine>& lines) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  for (const auto& l : lines) {
    nlohmann::json j;
    j["idx"] = l.idx;
    j["clicks"] = l.record.times;
    if (std::isfinite(l.log_weight)) {
      j["logw"] = l.log_weight;
    } else {
      j["logw"] = nullptr;
    }
    out << j.dump() << '\n';
  }
  if (!out) throw IoError("failed writing " + path);
}

std::vector<RecordLine> read_records(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::vector<RecordLine> lines;
  std::string text;
  while (std::getline(in, text)) {
    if (text.empty()) continue;
    try {
      const auto j = nlohmann::json::parse(text);
      RecordLine l;
      l.idx = j.at("idx").get<std::size_t>();
      l.record.times = j.at("clicks").get<std::vector<double>>();
      const auto& w = j.at("logw");
      l.log_weight = w.is_null() ? -std::numeric_limits<double>::infinity() : w.get<double>();
      lines.push_back(std::move(l));
    } catch (const nlohmann::json::exception& e) {
      throw InputError(path + ": " + e.what());
    }
  }
  return lines;
}

void write_json(const std::string& path, const nlohmann::json& doc) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << doc.dump(2) << '\n';
  if (!out) throw IoError("failed writing " + path);
}

nlohmann::json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(path + ": " + e.what());
  }
}

}  // namespace cfq::io
