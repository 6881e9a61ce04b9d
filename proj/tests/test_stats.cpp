#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "testutil.hpp"
#include "topo/stats.hpp"

using namespace topo;

namespace {

PersistenceDiagram diagram(std::initializer_list<DiagramPoint> pts) {
  PersistenceDiagram d;
  d.dimension = 0;
  d.points.assign(pts);
  return d;
}

PersistenceDiagram random_diagram(std::mt19937_64& rng, int points) {
  PersistenceDiagram d;
  d.dimension = 0;
  for (int i = 0; i < points; ++i) {
    const int b = int(rng() % 200);
    d.points.push_back({b, b + 1 + int(rng() % 50)});
  }
  return d;
}

}  // namespace

TEST_CASE("total persistence sums lifespans with the surrogate") {
  CHECK(total_persistence(diagram({{0, 2}, {0, 4}})) == 6.0);
  CHECK(total_persistence(diagram({})) == 0.0);
  CHECK(total_persistence(diagram({{100, kInfiniteDeath}})) == 156.0);
}

TEST_CASE("midlife and lifespan multisets") {
  const auto mids = midlife_set(diagram({{0, 2}, {0, 4}}));
  CHECK(mids == std::vector<double>{1.0, 2.0});
  CHECK(midlife_set(diagram({{1, 3}})) == std::vector<double>{2.0});
  CHECK(midlife_set(diagram({{0, kInfiniteDeath}})) == std::vector<double>{128.0});

  const auto spans = lifespan_set(diagram({{0, 2}, {0, 4}}));
  REQUIRE(spans.size() == 2);
  CHECK(spans[0] == doctest::Approx(1.0 / 3.0));
  CHECK(spans[1] == doctest::Approx(2.0 / 3.0));
  CHECK(lifespan_set(diagram({{9, 17}})) == std::vector<double>{1.0});
  CHECK(lifespan_set(diagram({})).empty());
}

TEST_CASE("lifespans sum to one on random diagrams") {
  std::mt19937_64 rng(15);
  for (int trial = 0; trial < 60; ++trial) {
    const auto spans = lifespan_set(random_diagram(rng, 1 + int(rng() % 30)));
    double total = 0.0;
    for (double s : spans) total += s;
    CHECK(std::abs(total - 1.0) <= 1e-12);
  }
}

TEST_CASE("persistence entropy on the worked examples") {
  CHECK(persistence_entropy(diagram({{0, 2}, {0, 4}})) ==
        doctest::Approx(0.63651).epsilon(1e-4));
  CHECK(persistence_entropy(diagram({{3, 9}})) == 0.0);

  // n equal lifespans: entropy is ln n.
  PersistenceDiagram equal;
  equal.dimension = 0;
  for (int i = 0; i < 7; ++i) equal.points.push_back({i * 10, i * 10 + 5});
  CHECK(persistence_entropy(equal) == doctest::Approx(std::log(7.0)));

  // Bounded by ln |P|.
  std::mt19937_64 rng(16);
  for (int trial = 0; trial < 40; ++trial) {
    const auto d = random_diagram(rng, 1 + int(rng() % 20));
    const double h = persistence_entropy(d);
    CHECK(h >= 0.0);
    CHECK(h <= std::log(double(d.points.size())) + 1e-12);
  }
}

TEST_CASE("ps vector entries in the documented order") {
  const auto ps = ps_vector(diagram({{0, 2}, {0, 4}}));
  // Midlife block {1,2}.
  CHECK(ps[0] == doctest::Approx(1.5));                // mean
  CHECK(ps[1] == doctest::Approx(std::sqrt(0.5)));     // sample std
  CHECK(ps[2] == 0.0);                                 // skewness of a pair
  CHECK(ps[3] == doctest::Approx(1.0));                // kurtosis of a pair
  CHECK(ps[4] == doctest::Approx(1.5));                // median
  CHECK(ps[5] == doctest::Approx(1.25));               // q25, inclusive rule
  CHECK(ps[6] == doctest::Approx(1.75));               // q75
  CHECK(ps[7] == doctest::Approx(0.5));                // iqr
  // Lifespan block {1/3, 2/3}.
  CHECK(ps[8] == doctest::Approx(0.5));
  CHECK(ps[12] == doctest::Approx(0.5));
  // Tail: entropy, total persistence, count.
  CHECK(ps[16] == doctest::Approx(0.63651).epsilon(1e-4));
  CHECK(ps[17] == 6.0);
  CHECK(ps[18] == 2.0);
}

TEST_CASE("ps vector degenerate conventions") {
  const auto solo = ps_vector(diagram({{10, 20}}));
  CHECK(solo[0] == 15.0);  // midlife mean
  CHECK(solo[1] == 0.0);   // std of a singleton
  CHECK(solo[2] == 0.0);
  CHECK(solo[3] == 0.0);
  CHECK(solo[4] == 15.0);
  CHECK(solo[16] == 0.0);  // entropy
  CHECK(solo[18] == 1.0);

  const auto empty = ps_vector(diagram({}));
  for (double v : empty) CHECK(v == 0.0);
}

TEST_CASE("midlife statistics are translation covariant") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 30; ++trial) {
    const PersistenceDiagram base = random_diagram(rng, 2 + int(rng() % 10));
    PersistenceDiagram moved = base;
    const int c = 7;
    for (auto& p : moved.points) {
      p.birth += c;
      p.death += c;
    }
    const auto a = ps_vector(base);
    const auto b = ps_vector(moved);
    for (int i : {0, 4, 5, 6}) {  // mean, median, q25, q75 shift by c
      CHECK(b[std::size_t(i)] == doctest::Approx(a[std::size_t(i)] + c));
    }
    for (int i : {1, 2, 3, 7}) {  // spread and shape stay put
      CHECK(b[std::size_t(i)] == doctest::Approx(a[std::size_t(i)]));
    }
    for (int i = 8; i <= 17; ++i) {  // lifespan block and entropy unchanged
      CHECK(b[std::size_t(i)] == doctest::Approx(a[std::size_t(i)]));
    }
  }
}

TEST_CASE("ps feature vectors have the stated dimensions and block order") {
  const RgbImage img = testutil::constant_rgb(4, 4, 10, 20, 30);
  const auto rgb = ps_rgb(img);
  REQUIRE(rgb.size() == 114);
  const auto xyz = ps_xyz(img);
  REQUIRE(xyz.size() == 114);

  // Each constant channel gives one essential class in dimension 0: the
  // per-diagram count entry (index 18) is 1 and dim-1 blocks are zero.
  CHECK(rgb[18] == 1.0);            // R dim0 count
  CHECK(rgb[19 + 18] == 0.0);       // R dim1 count (empty diagram)
  CHECK(rgb[38 + 18] == 1.0);       // G dim0 count

  // Channel permutation permutes the 38-wide channel blocks.
  const auto swapped = ps_rgb(testutil::constant_rgb(4, 4, 20, 10, 30));
  for (int i = 0; i < 38; ++i) {
    CHECK(rgb[std::size_t(i)] == swapped[std::size_t(i) + 38]);
    CHECK(rgb[std::size_t(i) + 38] == swapped[std::size_t(i)]);
  }
}

TEST_CASE("ps entry names match the vector layout") {
  const auto& names = ps_entry_names();
  CHECK(names.size() == 19);
  CHECK(names[0] == "mid_mean");
  CHECK(names[8] == "life_mean");
  CHECK(names[16] == "entropy");
  CHECK(names[17] == "total_persistence");
  CHECK(names[18] == "count");
}
