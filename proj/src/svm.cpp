#include "topo/svm.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <random>
#include <stdexcept>

#include <json.hpp>

#include "rng_util.hpp"
#include "topo/kernels.hpp"

namespace topo {

using detail::shuffle_indices;

void MinMaxScaler::apply(std::span<double> row) const {
  for (std::size_t c = 0; c < row.size(); ++c) {
    const double range = max[c] - min[c];
    row[c] = range > 0.0 ? (row[c] - min[c]) / range : 0.0;
  }
}

void MinMaxScaler::apply(FeatureMatrix& m) const {
  for (std::size_t i = 0; i < m.rows; ++i) apply(m.row(i));
}

MinMaxScaler minmax_normalize(FeatureMatrix& m) {
  if (m.rows == 0 || m.cols == 0) {
    throw std::invalid_argument("minmax_normalize: empty matrix");
  }
  MinMaxScaler scaler;
  scaler.min.assign(m.cols, std::numeric_limits<double>::infinity());
  scaler.max.assign(m.cols, -std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < m.rows; ++i) {
    const auto row = m.row(i);
    for (std::size_t c = 0; c < m.cols; ++c) {
      scaler.min[c] = std::min(scaler.min[c], row[c]);
      scaler.max[c] = std::max(scaler.max[c], row[c]);
    }
  }
  scaler.apply(m);
  return scaler;
}

double BinarySvm::decision(std::span<const double> x) const {
  if (x.size() != weights.size()) {
    throw std::invalid_argument("BinarySvm: feature dimension mismatch");
  }
  return kernels::dot(weights.data(), x.data(), x.size()) + bias;
}

double svm_objective(const BinarySvm& svm, const FeatureMatrix& x,
                     std::span<const int> y) {
  double hinge = 0.0;
  for (std::size_t i = 0; i < x.rows; ++i) {
    hinge += std::max(0.0, 1.0 - double(y[i]) * svm.decision(x.row(i)));
  }
  const double norm2 =
      kernels::dot(svm.weights.data(), svm.weights.data(), svm.weights.size());
  return svm.lambda / 2.0 * norm2 + hinge / double(x.rows);
}

BinarySvm train_binary(const FeatureMatrix& x, std::span<const int> y,
                       const SvmTrainConfig& cfg) {
  if (x.rows == 0 || x.rows != y.size()) {
    throw std::invalid_argument("train_binary: sample/label size mismatch");
  }
  bool pos = false, neg = false;
  for (int v : y) {
    if (v == 1) pos = true;
    else if (v == -1) neg = true;
    else throw std::invalid_argument("train_binary: labels must be -1/+1");
  }
  if (!pos || !neg) {
    throw std::invalid_argument("train_binary: need both classes present");
  }

  BinarySvm svm;
  svm.lambda = cfg.lambda;
  svm.weights.assign(x.cols, 0.0);

  BinarySvm best = svm;
  double best_objective = svm_objective(svm, x, y);

  std::mt19937_64 rng(cfg.seed);
  std::vector<std::size_t> order(x.rows);
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  const double radius = 1.0 / std::sqrt(cfg.lambda);
  std::size_t step = 0;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    shuffle_indices(order, rng);
    for (std::size_t i : order) {
      ++step;
      const double eta = 1.0 / (cfg.lambda * double(step));
      const auto xi = x.row(i);
      const double yi = double(y[i]);
      const double margin = yi * svm.decision(xi);

      const double shrink = 1.0 - eta * cfg.lambda;
      for (double& w : svm.weights) w *= shrink;
      if (margin < 1.0) {
        kernels::axpy(eta * yi, xi.data(), svm.weights.data(), xi.size());
        svm.bias += eta * yi;
      }
      // Pegasos projection onto the ball of radius 1/sqrt(lambda).
      const double norm2 = kernels::dot(svm.weights.data(), svm.weights.data(),
                                        svm.weights.size());
      if (norm2 > radius * radius) {
        const double scale = radius / std::sqrt(norm2);
        for (double& w : svm.weights) w *= scale;
      }
    }
    const double objective = svm_objective(svm, x, y);
    if (objective < best_objective) {
      best_objective = objective;
      best = svm;
    }
  }
  return best;
}

OvoModel train_ovo(FeatureMatrix x, std::span<const int> labels, int classes,
                   const SvmTrainConfig& cfg) {
  if (classes < 2) throw std::invalid_argument("train_ovo: need >= 2 classes");
  if (x.rows != labels.size()) {
    throw std::invalid_argument("train_ovo: sample/label size mismatch");
  }

  OvoModel model;
  model.classes = classes;
  model.scaler = minmax_normalize(x);
  model.classifiers.reserve(OvoModel::pair_count(classes));

  for (int a = 0; a < classes; ++a) {
    for (int b = a + 1; b < classes; ++b) {
      FeatureMatrix sub;
      sub.cols = x.cols;
      std::vector<int> sub_y;
      for (std::size_t i = 0; i < x.rows; ++i) {
        if (labels[i] != a && labels[i] != b) continue;
        const auto row = x.row(i);
        sub.data.insert(sub.data.end(), row.begin(), row.end());
        ++sub.rows;
        sub_y.push_back(labels[i] == a ? 1 : -1);
      }
      SvmTrainConfig pair_cfg = cfg;
      // Decorrelate pair seeds while keeping the run reproducible.
      pair_cfg.seed = cfg.seed * 1000003ull + std::uint64_t(a) * 131 +
                      std::uint64_t(b);
      model.classifiers.push_back(train_binary(sub, sub_y, pair_cfg));
    }
  }
  return model;
}

int predict_ovo(const OvoModel& model, std::span<const double> x) {
  std::vector<double> scaled(x.begin(), x.end());
  model.scaler.apply(scaled);

  std::vector<int> votes(std::size_t(model.classes), 0);
  std::size_t k = 0;
  for (int a = 0; a < model.classes; ++a) {
    for (int b = a + 1; b < model.classes; ++b) {
      const double d = model.classifiers[k++].decision(scaled);
      ++votes[std::size_t(d > 0.0 ? a : b)];
    }
  }
  int best = 0;
  for (int c = 1; c < model.classes; ++c) {
    if (votes[std::size_t(c)] > votes[std::size_t(best)]) best = c;
  }
  return best;
}

double balanced_accuracy(std::span<const int> predictions,
                         std::span<const int> labels) {
  if (predictions.size() != labels.size() || labels.empty()) {
    throw std::invalid_argument("balanced_accuracy: size mismatch");
  }
  const int classes = *std::max_element(labels.begin(), labels.end()) + 1;
  std::vector<long long> correct(std::size_t(classes), 0);
  std::vector<long long> total(std::size_t(classes), 0);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0) throw std::invalid_argument("balanced_accuracy: bad label");
    ++total[std::size_t(labels[i])];
    if (predictions[i] == labels[i]) ++correct[std::size_t(labels[i])];
  }
  double sum = 0.0;
  for (int c = 0; c < classes; ++c) {
    if (total[std::size_t(c)] == 0) {
      throw std::invalid_argument("balanced_accuracy: empty class " +
                                  std::to_string(c));
    }
    sum += double(correct[std::size_t(c)]) / double(total[std::size_t(c)]);
  }
  return sum / double(classes);
}

void write_ovo_json(std::ostream& out, const OvoModel& model) {
  nlohmann::json j;
  j["classes"] = model.classes;
  j["scaler"]["min"] = model.scaler.min;
  j["scaler"]["max"] = model.scaler.max;
  auto& list = j["classifiers"] = nlohmann::json::array();
  std::size_t k = 0;
  for (int a = 0; a < model.classes; ++a) {
    for (int b = a + 1; b < model.classes; ++b) {
      const BinarySvm& svm = model.classifiers[k++];
      list.push_back({{"pair", {a, b}},
                      {"lambda", svm.lambda},
                      {"bias", svm.bias},
                      {"weights", svm.weights}});
    }
  }
  out << j.dump(2) << '\n';
}

OvoModel read_ovo_json(std::istream& in) {
  nlohmann::json j;
  in >> j;
  OvoModel model;
  model.classes = j.at("classes").get<int>();
  model.scaler.min = j.at("scaler").at("min").get<std::vector<double>>();
  model.scaler.max = j.at("scaler").at("max").get<std::vector<double>>();
  for (const auto& item : j.at("classifiers")) {
    BinarySvm svm;
    svm.lambda = item.at("lambda").get<double>();
    svm.bias = item.at("bias").get<double>();
    svm.weights = item.at("weights").get<std::vector<double>>();
    model.classifiers.push_back(std::move(svm));
  }
  if (model.classifiers.size() != OvoModel::pair_count(model.classes)) {
    throw std::invalid_argument("ovo model: classifier count mismatch");
  }
  return model;
}

}  // namespace topo
