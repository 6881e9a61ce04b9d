#pragma once
/**
 * @file svm.hpp
 * @brief Linear SVMs trained by projected stochastic subgradient descent on
 *        the regularized hinge objective, combined one-against-one for
 *        multiclass prediction.
 */

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace topo {

/// Row-major sample matrix.
struct FeatureMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  std::span<const double> row(std::size_t i) const {
    return {data.data() + i * cols, cols};
  }
  std::span<double> row(std::size_t i) {
    return {data.data() + i * cols, cols};
  }
};

/// Per-column affine map learned from training data and reused verbatim on
/// held-out data (values outside the training range extrapolate).
struct MinMaxScaler {
  std::vector<double> min;
  std::vector<double> max;

  void apply(FeatureMatrix& m) const;
  void apply(std::span<double> row) const;
};

/// Maps each column onto [0, 1]; constant columns map to 0.
MinMaxScaler minmax_normalize(FeatureMatrix& m);

struct BinarySvm {
  std::vector<double> weights;
  double bias = 0.0;
  double lambda = 0.0;

  double decision(std::span<const double> x) const;
};

struct SvmTrainConfig {
  double lambda = 1e-3;
  int epochs = 40;
  std::uint64_t seed = 1;
};

/// Labels must be -1/+1 with at least one sample of each sign (throws
/// std::invalid_argument otherwise).  Deterministic under the seed; returns
/// the epoch iterate with the lowest training objective, so the result never
/// scores worse than the zero initialization.
BinarySvm train_binary(const FeatureMatrix& x, std::span<const int> y,
                       const SvmTrainConfig& cfg);

/// Regularized objective lambda/2 ||w||^2 + mean hinge loss.
double svm_objective(const BinarySvm& svm, const FeatureMatrix& x,
                     std::span<const int> y);

struct OvoModel {
  int classes = 0;
  MinMaxScaler scaler;                 // applied to inputs at prediction
  std::vector<BinarySvm> classifiers;  // pairs (i,j), i < j, lexicographic

  static std::size_t pair_count(int classes) {
    return std::size_t(classes) * (classes - 1) / 2;
  }
};

/// One classifier per unordered class pair; labels are 0..classes-1.
OvoModel train_ovo(FeatureMatrix x, std::span<const int> labels, int classes,
                   const SvmTrainConfig& cfg);

/// Majority vote; ties break to the smallest class index.
int predict_ovo(const OvoModel& model, std::span<const double> x);

/// Mean per-class recall.  Throws std::invalid_argument when a label class
/// has no samples or the spans differ in length.
double balanced_accuracy(std::span<const int> predictions,
                         std::span<const int> labels);

/// JSON (de)serialization of the full model.
void write_ovo_json(std::ostream& out, const OvoModel& model);
OvoModel read_ovo_json(std::istream& in);

}  // namespace topo
