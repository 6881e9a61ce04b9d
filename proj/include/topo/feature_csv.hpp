#pragma once
/**
 * @file feature_csv.hpp
 * @brief Feature-table CSV (one row per image, image_id first) with a JSON
 *        schema sidecar, plus the labels CSV.  Values are printed with 17
 *        significant digits so round-trips are bit-exact.
 */

#include <iosfwd>
#include <string>
#include <vector>

#include "topo/svm.hpp"

namespace topo {

struct FeatureTable {
  std::vector<std::string> ids;
  std::vector<std::string> columns;
  FeatureMatrix values;  // rows align with ids
};

void write_feature_csv(std::ostream& out, const FeatureTable& table);
FeatureTable read_feature_csv(std::istream& in);

/// Sidecar schema: feature set name, column count, column names.
void write_schema_json(std::ostream& out, const std::string& feature_set,
                       const std::vector<std::string>& columns);

struct LabelTable {
  std::vector<std::string> ids;
  std::vector<int> labels;
};

/// Labels CSV with header "image_id,label".
LabelTable read_labels_csv(std::istream& in);

}  // namespace topo
