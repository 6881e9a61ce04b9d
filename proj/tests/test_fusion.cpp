#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "testutil.hpp"
#include "topo/fusion.hpp"
#include "topo/synthetic.hpp"

using namespace topo;

namespace {

FusionHead random_head(int backbone_dim, int topo_dim, int reduced_dim,
                       int classes, std::uint64_t seed) {
  FusionHead head = make_fusion_head(backbone_dim, topo_dim, reduced_dim, classes);
  std::mt19937_64 rng(seed);
  const auto draw = [&] { return double(rng() >> 11) * 0x1.0p-53 - 0.5; };
  for (double& w : head.w_red) w = draw();
  for (double& w : head.b_red) w = 0.3 * draw();
  for (double& w : head.w_cls) w = draw();
  for (double& w : head.b_cls) w = 0.3 * draw();
  head.a_raw = draw();
  return head;
}

FusionBatch random_batch(const FusionHead& head, std::size_t n,
                         std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const auto draw = [&] { return 2.0 * (double(rng() >> 11) * 0x1.0p-53) - 1.0; };
  FusionBatch batch;
  batch.size = n;
  for (std::size_t i = 0; i < n; ++i) {
    for (int d = 0; d < head.backbone_dim; ++d) batch.backbone.push_back(draw());
    for (int d = 0; d < head.topo_dim; ++d) batch.topo.push_back(draw());
    batch.labels.push_back(int(rng() % std::uint64_t(head.classes)));
  }
  return batch;
}

// Central finite difference of the batch loss in one parameter slot; the
// slot must point into this head.
double numeric_grad(FusionHead& head, const FusionBatch& batch, double* slot) {
  const double step = 1e-5;
  const double keep = *slot;
  *slot = keep + step;
  const double up = fusion_loss(head, batch);
  *slot = keep - step;
  const double down = fusion_loss(head, batch);
  *slot = keep;
  return (up - down) / (2.0 * step);
}

double rel_err(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-8});
}

}  // namespace

TEST_CASE("sigmoid and the paper's alpha initialization") {
  CHECK(sigmoid(0.0) == 0.5);
  CHECK(sigmoid(0.5) == doctest::Approx(0.62246).epsilon(1e-4));
  const FusionHead head = make_fusion_head(2, 2, 2, 2);
  CHECK(head.alpha() == doctest::Approx(sigmoid(0.5)));
}

TEST_CASE("fuse weights and concatenates") {
  const std::vector<double> vb = {2.0};
  const std::vector<double> vt = {4.0};
  CHECK(fuse(vb, vt, 0.0) == std::vector<double>{1.0, 2.0});  // alpha = 1/2

  const auto off = fuse(vb, vt, -30.0);  // alpha -> 0
  CHECK(off[0] == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(std::abs(off[1]) < 1e-9);

  // Linear in each argument for fixed a_raw.
  const std::vector<double> vb2 = {5.0};
  const auto sum = fuse(std::vector<double>{7.0}, vt, 0.7);
  const auto parts_b = fuse(vb, vt, 0.7);
  const auto parts_b2 = fuse(vb2, vt, 0.7);
  CHECK(sum[0] == doctest::Approx(parts_b[0] + parts_b2[0]));
}

TEST_CASE("reduce is an affine map through a rectifier") {
  FusionHead head = make_fusion_head(1, 3, 2, 2);
  CHECK(reduce(head, std::vector<double>{1, 2, 3}) ==
        std::vector<double>{0.0, 0.0});

  // Identity-like square weights pass positive input through.
  FusionHead id_head = make_fusion_head(1, 2, 2, 2);
  id_head.w_red = {1, 0, 0, 1};
  CHECK(reduce(id_head, std::vector<double>{3.0, 4.0}) ==
        std::vector<double>{3.0, 4.0});

  // Against a naive triple-loop oracle.
  FusionHead rnd = random_head(1, 5, 4, 2, 31);
  const std::vector<double> input = {0.3, -0.8, 1.2, 0.05, -0.4};
  const auto got = reduce(rnd, input);
  for (int j = 0; j < 4; ++j) {
    double u = rnd.b_red[std::size_t(j)];
    for (int c = 0; c < 5; ++c) {
      u += rnd.w_red[std::size_t(j) * 5 + std::size_t(c)] * input[std::size_t(c)];
    }
    CHECK(got[std::size_t(j)] == doctest::Approx(std::max(0.0, u)).epsilon(1e-12));
  }

  CHECK_THROWS_AS((void)reduce(head, std::vector<double>{1.0}),
                  std::invalid_argument);
}

TEST_CASE("forward produces a probability distribution") {
  FusionHead head = make_fusion_head(2, 2, 2, 3);
  const auto uniform = forward(head, std::vector<double>{1, 2},
                               std::vector<double>{3, 4});
  for (double p : uniform) CHECK(p == doctest::Approx(1.0 / 3.0));

  head.b_cls = {30.0, 0.0, 0.0};
  const auto peaked = forward(head, std::vector<double>{1, 2},
                              std::vector<double>{3, 4});
  CHECK(peaked[0] > 1.0 - 1e-9);

  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    FusionHead h = random_head(3, 4, 3, 4, 100 + std::uint64_t(trial));
    const FusionBatch b = random_batch(h, 1, 200 + std::uint64_t(trial));
    const auto p = forward(h, {b.backbone.data(), 3}, {b.topo.data(), 4});
    double total = 0.0;
    for (double v : p) {
      CHECK(v >= 0.0);
      total += v;
    }
    CHECK(std::abs(total - 1.0) <= 1e-12);
  }
}

TEST_CASE("analytic gradients match central differences") {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    FusionHead head = random_head(4, 6, 5, 3, 300 + seed);
    const FusionBatch batch = random_batch(head, 5, 400 + seed);
    const FusionGradients g = backward(head, batch);

    CHECK(rel_err(g.a_raw, numeric_grad(head, batch, &head.a_raw)) <= 1e-4);
    for (std::size_t i = 0; i < head.w_red.size(); i += 7) {
      CHECK(rel_err(g.w_red[i], numeric_grad(head, batch, &head.w_red[i])) <= 1e-4);
    }
    for (std::size_t i = 0; i < head.b_red.size(); ++i) {
      CHECK(rel_err(g.b_red[i], numeric_grad(head, batch, &head.b_red[i])) <= 1e-4);
    }
    for (std::size_t i = 0; i < head.w_cls.size(); i += 5) {
      CHECK(rel_err(g.w_cls[i], numeric_grad(head, batch, &head.w_cls[i])) <= 1e-4);
    }
    for (std::size_t i = 0; i < head.b_cls.size(); ++i) {
      CHECK(rel_err(g.b_cls[i], numeric_grad(head, batch, &head.b_cls[i])) <= 1e-4);
    }
  }
}

TEST_CASE("zero inputs still move the biases") {
  FusionHead head = random_head(2, 3, 2, 2, 17);
  FusionBatch batch;
  batch.size = 1;
  batch.backbone = {0.0, 0.0};
  batch.topo = {0.0, 0.0, 0.0};
  batch.labels = {0};
  const FusionGradients g = backward(head, batch);
  for (double v : g.w_cls) CHECK(v == 0.0);
  bool any_bias = false;
  for (double v : g.b_cls) any_bias = any_bias || v != 0.0;
  CHECK(any_bias);
}

TEST_CASE("zero learning rate leaves the head untouched") {
  FusionHead head = make_fusion_head(4, 4, 3, 2);
  const FusionDataset data = fusion_dataset(10, 4, 4, true, 5);
  FusionTrainConfig cfg;
  cfg.learning_rate = 0.0;
  cfg.epochs = 3;
  cfg.seed = 5;
  train(head, data, cfg);

  FusionHead fresh = make_fusion_head(4, 4, 3, 2);
  FusionTrainConfig same = cfg;
  train(fresh, data, same);
  CHECK(head.a_raw == 0.5);
  CHECK(head.w_red == fresh.w_red);  // both hold the seeded init
  CHECK(head.alpha() == doctest::Approx(sigmoid(0.5)));
}

TEST_CASE("training learns the topo-informative task and raises alpha") {
  FusionHead head = make_fusion_head(8, 8, 6, 2);
  const FusionDataset data = fusion_dataset(40, 8, 8, true, 77);
  FusionTrainConfig cfg;
  cfg.epochs = 120;
  cfg.seed = 77;
  const auto trace = train(head, data, cfg);
  REQUIRE(trace.size() == 120);
  CHECK(trace.back().accuracy >= 0.95);
  CHECK(trace.back().alpha > sigmoid(0.5));
  for (const auto& row : trace) {
    CHECK(row.alpha > 0.0);
    CHECK(row.alpha < 1.0);
  }
}

TEST_CASE("training learns the backbone-informative task too") {
  FusionHead head = make_fusion_head(8, 8, 6, 2);
  const FusionDataset data = fusion_dataset(40, 8, 8, false, 78);
  FusionTrainConfig cfg;
  cfg.epochs = 120;
  cfg.seed = 78;
  const auto trace = train(head, data, cfg);
  CHECK(trace.back().accuracy >= 0.95);
}

TEST_CASE("training is bit-reproducible under a fixed seed") {
  const FusionDataset data = fusion_dataset(20, 6, 6, true, 9);
  FusionTrainConfig cfg;
  cfg.epochs = 15;
  cfg.seed = 42;

  FusionHead a = make_fusion_head(6, 6, 4, 2);
  FusionHead b = make_fusion_head(6, 6, 4, 2);
  const auto ta = train(a, data, cfg);
  const auto tb = train(b, data, cfg);
  CHECK(a.a_raw == b.a_raw);
  CHECK(a.w_red == b.w_red);
  CHECK(a.w_cls == b.w_cls);
  for (std::size_t i = 0; i < ta.size(); ++i) {
    CHECK(ta[i].loss == tb[i].loss);
    CHECK(ta[i].alpha == tb[i].alpha);
  }
}

TEST_CASE("head json round-trips") {
  FusionHead head = random_head(3, 5, 4, 3, 1234);
  head.topo_min = {0, 0, 0, 0, 0};
  head.topo_max = {1, 2, 3, 4, 5};
  std::stringstream ss;
  write_fusion_json(ss, head);
  const FusionHead back = read_fusion_json(ss);
  CHECK(back.a_raw == head.a_raw);
  CHECK(back.w_red == head.w_red);
  CHECK(back.b_red == head.b_red);
  CHECK(back.w_cls == head.w_cls);
  CHECK(back.b_cls == head.b_cls);
  CHECK(back.topo_min == head.topo_min);
  CHECK(back.topo_max == head.topo_max);
}

TEST_CASE("trace csv carries the alpha trajectory") {
  const std::vector<EpochStats> trace = {{1, 0.5, 0.75, 0.6}, {2, 0.4, 0.8, 0.65}};
  std::stringstream ss;
  write_trace_csv(ss, trace);
  std::string line;
  std::getline(ss, line);
  CHECK(line == "epoch,loss,accuracy,alpha");
  std::getline(ss, line);
  CHECK(line.rfind("1,", 0) == 0);
}
