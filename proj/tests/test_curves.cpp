#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "testutil.hpp"
#include "topo/curves.hpp"
#include "topo/synthetic.hpp"

using namespace topo;

namespace {

PersistenceDiagram diagram(int dim, std::initializer_list<DiagramPoint> pts) {
  PersistenceDiagram d;
  d.dimension = dim;
  d.points.assign(pts);
  return d;
}

const Statistic kSum = [](std::span<const double> v) {
  return std::accumulate(v.begin(), v.end(), 0.0);
};
const PointFunction kOne = [](const PersistenceDiagram&, double, double,
                              double) { return 1.0; };

PersistenceDiagram random_diagram(std::mt19937_64& rng, int points) {
  PersistenceDiagram d;
  d.dimension = 0;
  for (int i = 0; i < points; ++i) {
    const int b = int(rng() % 250);
    const int span = 1 + int(rng() % 60);
    d.points.push_back({b, std::min(b + span, 255)});
  }
  if (rng() % 2) d.points.push_back({int(rng() % 200), kInfiniteDeath});
  std::sort(d.points.begin(), d.points.end());
  return d;
}

}  // namespace

TEST_CASE("generalized curve on the worked examples") {
  CHECK(persistence_curve(diagram(0, {}), kOne, kSum) ==
        CurveVector(kCurveSamples, 0.0));

  const CurveVector single = persistence_curve(diagram(0, {{0, 2}}), kOne, kSum);
  CHECK(single[0] == 1.0);
  CHECK(single[1] == 1.0);
  CHECK(single[2] == 0.0);

  const CurveVector two =
      persistence_curve(diagram(0, {{0, 2}, {1, 3}}), kOne, kSum);
  CHECK(two[0] == 1.0);
  CHECK(two[1] == 2.0);
  CHECK(two[2] == 1.0);
  CHECK(two[3] == 0.0);
  CHECK(two[100] == 0.0);
}

TEST_CASE("the betti fast path equals the generalized definition") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const PersistenceDiagram d = random_diagram(rng, int(rng() % 20));
    CHECK(betti_curve(d) == persistence_curve(d, kOne, kSum));
  }
}

TEST_CASE("betti curve counts alive points exactly") {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 30; ++trial) {
    const PersistenceDiagram d = random_diagram(rng, 10);
    const CurveVector curve = betti_curve(d);
    for (int t = 0; t < kCurveSamples; t += 7) {
      int alive = 0;
      for (const auto& p : d.points) alive += p.birth <= t && finite_death(p) > t;
      CHECK(curve[std::size_t(t)] == double(alive));
    }
  }
}

TEST_CASE("betti curve of an essential class is a unit step") {
  const DiagramPair pair = sublevel_persistence(testutil::constant_gray(3, 3, 64.0f));
  const CurveVector b0 = betti_curve(pair.p0);
  CHECK(b0[63] == 0.0);
  CHECK(b0[64] == 1.0);
  CHECK(b0[254] == 1.0);
  CHECK(betti_curve(pair.p1) == CurveVector(kCurveSamples, 0.0));
}

TEST_CASE("entropy curve matches the hand evaluation") {
  const PersistenceDiagram d = diagram(0, {{0, 2}, {0, 4}});
  const CurveVector e = entropy_curve(d);
  const double third = 1.0 / 3.0;
  const double both = -third * std::log(third) - 2 * third * std::log(2 * third);
  const double one = -2 * third * std::log(2 * third);
  CHECK(e[0] == doctest::Approx(0.63651).epsilon(1e-4));
  CHECK(e[0] == doctest::Approx(both));
  CHECK(e[1] == doctest::Approx(both));
  CHECK(e[2] == doctest::Approx(one));
  CHECK(e[3] == doctest::Approx(one));
  CHECK(e[4] == 0.0);

  CHECK(entropy_curve(diagram(0, {})) == CurveVector(kCurveSamples, 0.0));

  // A single point carries the whole mass: -1 ln 1 = 0 everywhere.
  const CurveVector solo = entropy_curve(diagram(0, {{5, 9}}));
  CHECK(solo[6] == 0.0);
}

TEST_CASE("entropy terms respect the -q ln q bound") {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 40; ++trial) {
    const PersistenceDiagram d = random_diagram(rng, 1 + int(rng() % 15));
    const double total = [&] {
      double acc = 0.0;
      for (const auto& p : d.points) acc += finite_death(p) - p.birth;
      return acc;
    }();
    for (const auto& p : d.points) {
      const double q = double(finite_death(p) - p.birth) / total;
      const double term = -q * std::log(q);
      CHECK(term >= 0.0);
      CHECK(term <= 1.0 / std::exp(1.0) + 1e-12);
    }
  }
}

TEST_CASE("normalized lifespans sum to one through the curve functional") {
  const PointFunction life_share = [](const PersistenceDiagram& d, double b,
                                      double death, double) {
    double total = 0.0;
    for (const auto& p : d.points) total += finite_death(p) - p.birth;
    return (death - b) / total;
  };
  const PersistenceDiagram d = diagram(0, {{0, 4}, {0, 10}, {0, 250}});
  const CurveVector c = persistence_curve(d, life_share, kSum);
  CHECK(c[0] == doctest::Approx(1.0));
}

TEST_CASE("curves shift with the image values") {
  std::mt19937_64 rng(31);
  GrayImage img = testutil::constant_gray(6, 6, 0.0f);
  for (float& v : img.values) v = float(20 * (rng() % 6));
  GrayImage shifted = img;
  for (float& v : shifted.values) v += 30.0f;

  const CurveVector base = betti_curve(sublevel_persistence(img).p1);
  const CurveVector moved = betti_curve(sublevel_persistence(shifted).p1);
  for (int t = 0; t + 30 < kCurveSamples; ++t) {
    CHECK(moved[std::size_t(t) + 30] == base[std::size_t(t)]);
  }
}

TEST_CASE("pc-rgb layout: 1530 entries, channel blocks permute with channels") {
  const RgbImage img = testutil::constant_rgb(4, 4, 10, 20, 30);
  const std::vector<double> f = pc_rgb(img);
  REQUIRE(f.size() == 1530);

  // Constant channels: beta0 steps at the channel value, beta1 all zero.
  CHECK(f[9] == 0.0);     // R beta0 before t=10
  CHECK(f[10] == 1.0);    // R beta0 from t=10
  CHECK(f[255 + 50] == 0.0);  // R beta1 stays zero
  CHECK(f[2 * 255 + 19] == 0.0);
  CHECK(f[2 * 255 + 20] == 1.0);  // G beta0 steps at 20
  CHECK(f[4 * 255 + 30] == 1.0);  // B beta0 steps at 30

  // Swapping channels permutes the 510-wide blocks.
  const RgbImage swapped = testutil::constant_rgb(4, 4, 20, 10, 30);
  const std::vector<double> g = pc_rgb(swapped);
  for (int i = 0; i < 510; ++i) {
    CHECK(f[std::size_t(i)] == g[std::size_t(i) + 510]);
    CHECK(f[std::size_t(i) + 510] == g[std::size_t(i)]);
  }
}

TEST_CASE("pc-xyz layout: X-channel curves, 1020 entries") {
  const RgbImage img = testutil::constant_rgb(4, 4, 80, 80, 80);
  const std::vector<double> f = pc_xyz(img);
  REQUIRE(f.size() == 1020);

  // Constant image: X is constant, so beta0 is a step, the rest vanish.
  const auto [x, y, z] = rgb_to_xyz(img);
  const int entry = int(std::ceil(x.values[0]));
  CHECK(f[std::size_t(entry) - 1] == 0.0);
  CHECK(f[std::size_t(entry)] == 1.0);
  for (int t = 0; t < kCurveSamples; t += 16) {
    CHECK(f[std::size_t(255 + t)] == 0.0);   // beta1
    CHECK(f[std::size_t(510 + t)] == 0.0);   // E0: single class, zero entropy
    CHECK(f[std::size_t(765 + t)] == 0.0);   // E1
  }
}

TEST_CASE("pc-xyz agrees with curves computed directly on the X channel") {
  std::mt19937_64 rng(77);
  RgbImage img = testutil::constant_rgb(4, 4, 0, 0, 0);
  for (std::size_t i = 0; i < img.pixel_count(); ++i) {
    img.r[i] = std::uint8_t(rng() % 256);
    img.g[i] = img.r[i];
    img.b[i] = img.r[i];
  }
  const auto [x, y, z] = rgb_to_xyz(img);
  const DiagramPair pair = sublevel_persistence(x);
  const std::vector<double> f = pc_xyz(img);
  const CurveVector b0 = betti_curve(pair.p0);
  const CurveVector e1 = entropy_curve(pair.p1);
  for (int t = 0; t < kCurveSamples; ++t) {
    CHECK(f[std::size_t(t)] == b0[std::size_t(t)]);
    CHECK(f[std::size_t(765 + t)] == e1[std::size_t(t)]);
  }
}

TEST_CASE("curve csv has 255 rows") {
  std::stringstream ss;
  write_curve_csv(ss, betti_curve(diagram(0, {{0, 5}})));
  std::string line;
  REQUIRE(std::getline(ss, line));
  CHECK(line == "t,value");
  int rows = 0;
  while (std::getline(ss, line)) {
    if (!line.empty()) ++rows;
  }
  CHECK(rows == 255);
}
