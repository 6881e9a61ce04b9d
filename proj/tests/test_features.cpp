#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>
#include <sstream>

#include "testutil.hpp"
#include "topo/feature_csv.hpp"
#include "topo/features.hpp"

using namespace topo;

TEST_CASE("feature sets have the stated dimensions") {
  CHECK(feature_dim(FeatureSet::ps_rgb) == 114);
  CHECK(feature_dim(FeatureSet::ps_xyz) == 114);
  CHECK(feature_dim(FeatureSet::pc_rgb) == 1530);
  CHECK(feature_dim(FeatureSet::pc_xyz) == 1020);
  CHECK(feature_dim(FeatureSet::all) == 2778);

  const RgbImage img = testutil::constant_rgb(5, 4, 60, 120, 180);
  for (FeatureSet set : {FeatureSet::ps_rgb, FeatureSet::ps_xyz,
                         FeatureSet::pc_rgb, FeatureSet::pc_xyz,
                         FeatureSet::all}) {
    CHECK(compute_features(img, set).size() == feature_dim(set));
    CHECK(feature_names(set).size() == feature_dim(set));
  }
}

TEST_CASE("feature names are unique and structured") {
  for (FeatureSet set : {FeatureSet::ps_rgb, FeatureSet::all}) {
    const auto names = feature_names(set);
    const std::set<std::string> unique(names.begin(), names.end());
    CHECK(unique.size() == names.size());
  }
  const auto ps = feature_names(FeatureSet::ps_rgb);
  CHECK(ps.front() == "ps_rgb_R_dim0_mid_mean");
  CHECK(ps[19] == "ps_rgb_R_dim1_mid_mean");
  CHECK(ps[38] == "ps_rgb_G_dim0_mid_mean");

  const auto pc = feature_names(FeatureSet::pc_xyz);
  CHECK(pc.front() == "pc_xyz_X_beta0_t000");
  CHECK(pc.back() == "pc_xyz_X_entropy1_t254");
}

TEST_CASE("the all set concatenates the four blocks in order") {
  const RgbImage img = testutil::constant_rgb(4, 4, 9, 9, 9);
  const auto all = compute_features(img, FeatureSet::all);
  const auto ps1 = compute_features(img, FeatureSet::ps_rgb);
  const auto pcx = compute_features(img, FeatureSet::pc_xyz);
  for (std::size_t i = 0; i < ps1.size(); ++i) CHECK(all[i] == ps1[i]);
  for (std::size_t i = 0; i < pcx.size(); ++i) {
    CHECK(all[114 + 114 + 1530 + i] == pcx[i]);
  }
}

TEST_CASE("feature set names parse and print") {
  CHECK(parse_feature_set("ps-rgb") == FeatureSet::ps_rgb);
  CHECK(parse_feature_set("all") == FeatureSet::all);
  CHECK(feature_set_name(FeatureSet::pc_xyz) == "pc-xyz");
  CHECK_THROWS_AS((void)parse_feature_set("nope"), std::invalid_argument);
}

TEST_CASE("feature csv round-trips bit-exactly") {
  FeatureTable table;
  table.ids = {"img_a", "img_b"};
  table.columns = {"c0", "c1", "c2"};
  table.values.rows = 2;
  table.values.cols = 3;
  table.values.data = {0.1, -2.5e-17, 3.0, 1e300, 0.30000000000000004, -0.0};

  std::stringstream ss;
  write_feature_csv(ss, table);
  const FeatureTable back = read_feature_csv(ss);
  CHECK(back.ids == table.ids);
  CHECK(back.columns == table.columns);
  REQUIRE(back.values.data.size() == table.values.data.size());
  for (std::size_t i = 0; i < table.values.data.size(); ++i) {
    CHECK(back.values.data[i] == table.values.data[i]);
  }

  std::stringstream again;
  write_feature_csv(again, back);
  CHECK(again.str() == ss.str());
}

TEST_CASE("schema sidecar lists every column") {
  std::stringstream ss;
  write_schema_json(ss, "ps-rgb", feature_names(FeatureSet::ps_rgb));
  CHECK(ss.str().find("\"column_count\": 114") != std::string::npos);
  CHECK(ss.str().find("ps_rgb_B_dim1_count") != std::string::npos);
}

TEST_CASE("labels csv parses and validates") {
  std::stringstream ss("image_id,label\nimg_a,0\nimg_b,2\n");
  const LabelTable labels = read_labels_csv(ss);
  CHECK(labels.ids == std::vector<std::string>{"img_a", "img_b"});
  CHECK(labels.labels == std::vector<int>{0, 2});

  std::stringstream bad("id,label\nx,0\n");
  CHECK_THROWS_AS((void)read_labels_csv(bad), std::invalid_argument);
}
