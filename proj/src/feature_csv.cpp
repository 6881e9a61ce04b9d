#include "topo/feature_csv.hpp"

#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace topo {
namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

std::string format_value(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void write_feature_csv(std::ostream& out, const FeatureTable& table) {
  out << "image_id";
  for (const auto& c : table.columns) out << ',' << c;
  out << '\n';
  for (std::size_t i = 0; i < table.ids.size(); ++i) {
    out << table.ids[i];
    const auto row = table.values.row(i);
    for (double v : row) out << ',' << format_value(v);
    out << '\n';
  }
}

FeatureTable read_feature_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) {
    throw std::invalid_argument("feature CSV: missing header");
  }
  auto header = split_csv_line(line);
  if (header.empty() || header.front() != "image_id") {
    throw std::invalid_argument("feature CSV: header must start with image_id");
  }
  FeatureTable table;
  table.columns.assign(header.begin() + 1, header.end());
  table.values.cols = table.columns.size();
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto cells = split_csv_line(line);
    if (cells.size() != header.size()) {
      throw std::invalid_argument("feature CSV: row width mismatch");
    }
    table.ids.push_back(cells.front());
    for (std::size_t c = 1; c < cells.size(); ++c) {
      char* end = nullptr;
      const double v = std::strtod(cells[c].c_str(), &end);
      if (end == cells[c].c_str()) {
        throw std::invalid_argument("feature CSV: bad value '" + cells[c] + "'");
      }
      table.values.data.push_back(v);
    }
    ++table.values.rows;
  }
  return table;
}

void write_schema_json(std::ostream& out, const std::string& feature_set,
                       const std::vector<std::string>& columns) {
  nlohmann::json j;
  j["feature_set"] = feature_set;
  j["column_count"] = columns.size();
  j["columns"] = columns;
  out << j.dump(2) << '\n';
}

LabelTable read_labels_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || split_csv_line(line) !=
                                     std::vector<std::string>{"image_id", "label"}) {
    throw std::invalid_argument("labels CSV: header must be image_id,label");
  }
  LabelTable table;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto cells = split_csv_line(line);
    if (cells.size() != 2) {
      throw std::invalid_argument("labels CSV: bad row '" + line + "'");
    }
    table.ids.push_back(cells[0]);
    table.labels.push_back(std::stoi(cells[1]));
  }
  return table;
}

}  // namespace topo
