#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "testutil.hpp"
#include "topo/segmentation.hpp"
#include "topo/synthetic.hpp"

using namespace topo;

TEST_CASE("life spans follow the shrinking threshold exactly") {
  SegmentationConfig cfg;  // T = 50
  // Mean a = 100; thresholds a*(1 - t/50).
  GrayImage img = testutil::gray_image(2, 2, {0.0f, 100.0f, 150.0f, 150.0f});
  const LifeMap life = life_spans(img, cfg);

  // Value 0 satisfies 0 <= a*(1 - 50/50) = 0, so it lives the full T steps.
  CHECK(life.at(0, 0) == 50);
  // Value 100 = a fails even t=1 (threshold 98).
  CHECK(life.at(1, 0) == 0);
  CHECK(life.at(0, 1) == 0);
}

TEST_CASE("life span boundary uses <= as printed") {
  SegmentationConfig cfg;
  // Mean of {0, 200} is 100; value 50 == a*(1 - 25/50) exactly at t=25.
  GrayImage img = testutil::gray_image(3, 1, {0.0f, 50.0f, 250.0f});
  const double a = (0.0 + 50.0 + 250.0) / 3.0;  // 100
  REQUIRE(a == 100.0);
  const LifeMap life = life_spans(img, cfg);
  CHECK(life.at(1, 0) == 25);  // membership holds at equality
}

TEST_CASE("life sets are nested and antitone in the gray value") {
  SegmentationConfig cfg;
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    GrayImage img = testutil::constant_gray(9, 9, 0.0f);
    for (float& v : img.values) v = float(rng() % 256);
    const LifeMap life = life_spans(img, cfg);

    for (int t = 1; t < cfg.total_steps; ++t) {
      const BinaryImage outer = life_threshold(life, t);
      const BinaryImage inner = life_threshold(life, t + 1);
      for (std::size_t i = 0; i < outer.bits.size(); ++i) {
        if (inner.bits[i]) CHECK(outer.bits[i]);
      }
    }
    for (std::size_t i = 0; i < img.values.size(); ++i) {
      for (std::size_t j = 0; j < img.values.size(); ++j) {
        if (img.values[i] <= img.values[j]) {
          CHECK(life.spans[i] >= life.spans[j]);
        }
      }
    }
  }
}

TEST_CASE("threshold selection follows the first component-count increase") {
  SegmentationConfig cfg;
  cfg.total_steps = 50;

  std::vector<int> counts(50, 0);
  counts[0] = 5; counts[1] = 3; counts[2] = 2; counts[3] = 2; counts[4] = 4;
  for (int t = 5; t < 50; ++t) counts[std::size_t(t)] = 1;
  CHECK(select_threshold(counts, cfg) == 2);  // T'' = 4

  std::vector<int> decreasing(50);
  for (int t = 0; t < 50; ++t) decreasing[std::size_t(t)] = 50 - t;
  CHECK(select_threshold(decreasing, cfg) == 1 + 49 / 4);  // T'' = T-1

  std::vector<int> rising(50, 9);
  rising[0] = 1;
  rising[1] = 2;
  CHECK(select_threshold(rising, cfg) == 1);  // T'' = 1, floor -> T' = 1

  CHECK_THROWS_AS((void)select_threshold(std::vector<int>{}, cfg),
                  std::invalid_argument);
}

TEST_CASE("life score evaluates the center-weighted formula") {
  LifeMap life;
  life.width = 31;
  life.height = 31;
  life.spans.assign(31 * 31, 0);
  life.spans[std::size_t(15) * 31 + 5] = 7;  // (5,15)
  life.spans[std::size_t(2) * 31 + 2] = 5;   // (2,2)

  // d(C, center) = 10 from (5,15); d(C, border) = 2 from (2,2); sum L = 12.
  const std::vector<std::pair<int, int>> comp = {{5, 15}, {2, 2}};
  const double score = life_score(comp, life);
  CHECK(score == doctest::Approx(27.0 * 12.0 / 1331.0));
  CHECK(score == doctest::Approx(0.24343).epsilon(1e-4));
}

TEST_CASE("life score degenerate placements") {
  LifeMap life;
  life.width = 11;
  life.height = 11;
  life.spans.assign(121, 1);

  // Component containing the exact midpoint: denominator is 1.
  const std::vector<std::pair<int, int>> center = {{5, 5}};
  CHECK(life_score(center, life) ==
        doctest::Approx(std::pow(1.0 + 5.0, 3.0) * 1.0));

  // Border component: numerator factor collapses to 1.
  const std::vector<std::pair<int, int>> border = {{0, 5}};
  const double d_center = 5.0;
  CHECK(life_score(border, life) ==
        doctest::Approx(1.0 / std::pow(1.0 + d_center, 3.0)));
}

TEST_CASE("convex hull mask is convex and fills known shapes") {
  // Axis-aligned square.
  const std::vector<std::pair<int, int>> square = {{2, 2}, {6, 2}, {2, 6}, {6, 6}};
  const Mask sq = convex_hull_mask(square, 10, 10);
  for (int y = 2; y <= 6; ++y) {
    for (int x = 2; x <= 6; ++x) CHECK(sq.at(x, y));
  }
  CHECK_FALSE(sq.at(1, 2));
  CHECK_FALSE(sq.at(7, 7));

  // Triangle includes its boundary pixels.
  const std::vector<std::pair<int, int>> tri = {{0, 0}, {8, 0}, {0, 8}};
  const Mask tm = convex_hull_mask(tri, 10, 10);
  CHECK(tm.at(4, 4));   // on the hypotenuse
  CHECK(tm.at(2, 3));
  CHECK_FALSE(tm.at(5, 6));

  // Convexity: the midpoint of any two mask pixels is a mask pixel.
  for (int y0 = 0; y0 < 10; ++y0) {
    for (int x0 = 0; x0 < 10; ++x0) {
      if (!tm.at(x0, y0)) continue;
      for (int y1 = 0; y1 < 10; ++y1) {
        for (int x1 = 0; x1 < 10; ++x1) {
          if (!tm.at(x1, y1)) continue;
          if ((x0 + x1) % 2 == 0 && (y0 + y1) % 2 == 0) {
            CHECK(tm.at((x0 + x1) / 2, (y0 + y1) / 2));
          }
        }
      }
    }
  }

  // Degenerate hulls: single point and collinear segment.
  const Mask pt = convex_hull_mask({{{3, 4}}}, 8, 8);
  CHECK(pt.at(3, 4));
  CHECK(std::count(pt.bits.begin(), pt.bits.end(), 1) == 1);

  const Mask seg = convex_hull_mask({{{1, 1}, {5, 5}, {3, 3}}}, 8, 8);
  CHECK(seg.at(1, 1));
  CHECK(seg.at(2, 2));
  CHECK(seg.at(5, 5));
  CHECK_FALSE(seg.at(2, 1));
}

TEST_CASE("clean disk segments to its hull") {
  const LesionScene scene = clean_disk_scene(64, 12, 40, 200);
  const SegmentationResult result = segment(scene.image, SegmentationConfig{});
  CHECK_FALSE(result.degenerate);
  CHECK(iou(result.mask, scene.truth) >= 0.95);
}

TEST_CASE("salt speckles are removed by the tiny-component filter") {
  LesionScene scene = clean_disk_scene(64, 12, 40, 200);
  // Sprinkle isolated dark pixels into the background.
  std::mt19937_64 rng(99);
  for (int s = 0; s < 40; ++s) {
    const int x = int(rng() % 64);
    const int y = int(rng() % 64);
    if (scene.truth.at(x, y)) continue;
    const std::size_t i = std::size_t(y) * 64 + x;
    scene.image.r[i] = scene.image.g[i] = scene.image.b[i] = 40;
  }
  const SegmentationResult result = segment(scene.image, SegmentationConfig{});
  CHECK(iou(result.mask, scene.truth) >= 0.8);
}

TEST_CASE("center blob beats an equally dark corner blob") {
  // Corner smudge hugging (0,0) and a blob at the center, same intensity.
  GrayImage gray = testutil::constant_gray(48, 48, 200.0f);
  const auto put = [&](int x, int y) {
    gray.values[std::size_t(y) * 48 + x] = 40.0f;
  };
  for (int y = 0; y < 6; ++y) {
    for (int x = 0; x < 6; ++x) put(x, y);
  }
  for (int y = 20; y < 28; ++y) {
    for (int x = 20; x < 28; ++x) put(x, y);
  }
  RgbImage img;
  img.width = 48;
  img.height = 48;
  img.r.resize(gray.pixel_count());
  for (std::size_t i = 0; i < gray.values.size(); ++i) {
    img.r[i] = std::uint8_t(gray.values[i]);
  }
  img.g = img.r;
  img.b = img.r;

  const SegmentationResult result = segment(img, SegmentationConfig{});
  // Only the center blob should be kept.
  for (int y = 21; y < 27; ++y) {
    for (int x = 21; x < 27; ++x) CHECK(result.mask.at(x, y));
  }
  CHECK_FALSE(result.mask.at(1, 1));
}

TEST_CASE("constant images degenerate to an all-true mask with a warning") {
  const SegmentationResult result =
      segment(testutil::constant_rgb(8, 8, 120, 120, 120), SegmentationConfig{});
  CHECK(result.degenerate);
  CHECK(std::count(result.mask.bits.begin(), result.mask.bits.end(), 1) == 64);
}

TEST_CASE("segmentation is deterministic") {
  const LesionScene scene = noisy_ellipse_scene(64, 4242);
  const SegmentationResult a = segment(scene.image, SegmentationConfig{});
  const SegmentationResult b = segment(scene.image, SegmentationConfig{});
  CHECK(a.mask.bits == b.mask.bits);
  CHECK(a.t_prime == b.t_prime);
  CHECK(a.component_counts == b.component_counts);
}

TEST_CASE("iou on the worked examples") {
  Mask a{2, 2, {1, 1, 0, 0}};
  CHECK(iou(a, a) == 1.0);

  Mask b{2, 2, {0, 0, 1, 1}};
  CHECK(iou(a, b) == 0.0);
  CHECK(iou(a, b) == iou(b, a));

  Mask empty1{2, 2, {0, 0, 0, 0}};
  Mask empty2{2, 2, {0, 0, 0, 0}};
  CHECK(iou(empty1, empty2) == 1.0);

  Mask c{2, 2, {1, 0, 1, 1}};
  CHECK(iou(a, c) == doctest::Approx(0.25));  // 1 shared of 4 total

  Mask wrong{3, 2, {0, 0, 0, 0, 0, 0}};
  CHECK_THROWS_AS((void)iou(a, wrong), std::invalid_argument);
}
