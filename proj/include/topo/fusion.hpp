#pragma once
/**
 * @file fusion.hpp
 * @brief Learnable alpha-weighted fusion of backbone and topological
 *        features: reduction sub-net, weighted concatenation, linear softmax
 *        classifier, analytic backpropagation.
 *
 * The topological rate alpha is stored as a raw scalar and passed through a
 * sigmoid on every use, so alpha stays strictly inside (0, 1) and receives
 * gradient through both halves of the fused vector.
 */

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace topo {

double sigmoid(double t);

/// (1-sigmoid(a_raw)) * backbone concatenated with sigmoid(a_raw) * topo.
std::vector<double> fuse(std::span<const double> backbone,
                         std::span<const double> topo, double a_raw);

struct FusionHead {
  int backbone_dim = 0;
  int topo_dim = 0;
  int reduced_dim = 0;
  int classes = 0;

  double a_raw = 0.5;  // alpha = sigmoid(a_raw); paper init sigmoid(0.5)
  std::vector<double> w_red;  // reduced_dim x topo_dim, row-major
  std::vector<double> b_red;  // reduced_dim
  std::vector<double> w_cls;  // classes x (backbone_dim + reduced_dim)
  std::vector<double> b_cls;  // classes

  // Max-min normalization of topo features fitted on the training set;
  // empty until train() runs.
  std::vector<double> topo_min;
  std::vector<double> topo_max;

  double alpha() const { return sigmoid(a_raw); }
};

/// Head with zero weights and the paper's alpha initialization.
FusionHead make_fusion_head(int backbone_dim, int topo_dim, int reduced_dim,
                            int classes);

/// Rectified affine reduction of the topological features.
std::vector<double> reduce(const FusionHead& head,
                           std::span<const double> topo);

/// Class probabilities: softmax(W_cls * fuse(backbone, reduce(topo)) + b).
std::vector<double> forward(const FusionHead& head,
                            std::span<const double> backbone,
                            std::span<const double> topo);

/// Gradients of the mean cross-entropy over a batch, one slot per
/// parameter block; layout matches FusionHead.
struct FusionGradients {
  double a_raw = 0.0;
  std::vector<double> w_red, b_red, w_cls, b_cls;
};

struct FusionBatch {
  // Row-major: one row per sample.
  std::vector<double> backbone;
  std::vector<double> topo;
  std::vector<int> labels;
  std::size_t size = 0;
};

/// Mean cross-entropy loss of the batch under the head.
double fusion_loss(const FusionHead& head, const FusionBatch& batch);

/// Analytic gradients; a_raw receives contributions from both the scaled
/// backbone half and the scaled reduced-topo half.
FusionGradients backward(const FusionHead& head, const FusionBatch& batch);

struct FusionTrainConfig {
  double learning_rate = 0.05;
  int epochs = 200;
  int batch_size = 16;
  std::uint64_t seed = 1;
  double init_scale = 0.1;  // weight init spread
};

struct EpochStats {
  int epoch = 0;
  double loss = 0.0;
  double accuracy = 0.0;
  double alpha = 0.0;
};

struct FusionDataset {
  FusionBatch samples;  // whole dataset in one block
};

/// Mini-batch gradient descent.  Fits the topo max-min scaler, initializes
/// weights from the seed, and emits one trace row per epoch (loss and
/// accuracy measured on the training set after the epoch).  Deterministic
/// for a fixed seed.  Throws std::invalid_argument on an empty dataset.
std::vector<EpochStats> train(FusionHead& head, const FusionDataset& data,
                              const FusionTrainConfig& cfg);

/// Argmax class of forward(); applies the stored topo scaler when fitted.
int predict(const FusionHead& head, std::span<const double> backbone,
            std::span<const double> topo);

/// JSON serialization: shape header plus row-major values.
void write_fusion_json(std::ostream& out, const FusionHead& head);
FusionHead read_fusion_json(std::istream& in);

/// Alpha-trajectory CSV: "epoch,loss,accuracy,alpha".
void write_trace_csv(std::ostream& out, std::span<const EpochStats> trace);

}  // namespace topo
