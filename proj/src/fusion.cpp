#include "topo/fusion.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

#include "rng_util.hpp"
#include "topo/kernels.hpp"

namespace topo {
namespace {

struct ForwardState {
  std::vector<double> pre_red;  // W_red v_t + b_red
  std::vector<double> reduced;  // ReLU(pre_red)
  std::vector<double> fused;
  std::vector<double> probs;
};

std::vector<double> softmax(std::vector<double> z) {
  const double zmax = *std::max_element(z.begin(), z.end());
  double total = 0.0;
  for (double& v : z) {
    v = std::exp(v - zmax);
    total += v;
  }
  for (double& v : z) v /= total;
  return z;
}

ForwardState run_forward(const FusionHead& head,
                         std::span<const double> backbone,
                         std::span<const double> topo) {
  if (int(backbone.size()) != head.backbone_dim ||
      int(topo.size()) != head.topo_dim) {
    throw std::invalid_argument("fusion forward: dimension mismatch");
  }
  ForwardState s;
  s.pre_red.resize(std::size_t(head.reduced_dim));
  s.reduced.resize(std::size_t(head.reduced_dim));
  for (int j = 0; j < head.reduced_dim; ++j) {
    const double* row = head.w_red.data() + std::size_t(j) * head.topo_dim;
    const double u =
        kernels::dot(row, topo.data(), topo.size()) + head.b_red[std::size_t(j)];
    s.pre_red[std::size_t(j)] = u;
    s.reduced[std::size_t(j)] = u > 0.0 ? u : 0.0;
  }
  s.fused = fuse(backbone, s.reduced, head.a_raw);

  std::vector<double> z(std::size_t(head.classes));
  for (int k = 0; k < head.classes; ++k) {
    const double* row = head.w_cls.data() + std::size_t(k) * s.fused.size();
    z[std::size_t(k)] =
        kernels::dot(row, s.fused.data(), s.fused.size()) + head.b_cls[std::size_t(k)];
  }
  s.probs = softmax(std::move(z));
  return s;
}

std::span<const double> batch_row(const std::vector<double>& block,
                                  std::size_t i, std::size_t dim) {
  return {block.data() + i * dim, dim};
}

// Applies the fitted scaler to one topo row (no-op when train() never ran).
std::vector<double> scale_topo(const FusionHead& head,
                               std::span<const double> topo) {
  std::vector<double> out(topo.begin(), topo.end());
  if (head.topo_min.empty()) return out;
  for (std::size_t c = 0; c < out.size(); ++c) {
    const double range = head.topo_max[c] - head.topo_min[c];
    out[c] = range > 0.0 ? (out[c] - head.topo_min[c]) / range : 0.0;
  }
  return out;
}

}  // namespace

double sigmoid(double t) { return 1.0 / (1.0 + std::exp(-t)); }

std::vector<double> fuse(std::span<const double> backbone,
                         std::span<const double> topo, double a_raw) {
  const double alpha = sigmoid(a_raw);
  std::vector<double> out;
  out.reserve(backbone.size() + topo.size());
  for (double v : backbone) out.push_back((1.0 - alpha) * v);
  for (double v : topo) out.push_back(alpha * v);
  return out;
}

FusionHead make_fusion_head(int backbone_dim, int topo_dim, int reduced_dim,
                            int classes) {
  if (backbone_dim < 1 || topo_dim < 1 || reduced_dim < 1 || classes < 2) {
    throw std::invalid_argument("make_fusion_head: bad dimensions");
  }
  FusionHead head;
  head.backbone_dim = backbone_dim;
  head.topo_dim = topo_dim;
  head.reduced_dim = reduced_dim;
  head.classes = classes;
  head.a_raw = 0.5;
  head.w_red.assign(std::size_t(reduced_dim) * topo_dim, 0.0);
  head.b_red.assign(std::size_t(reduced_dim), 0.0);
  head.w_cls.assign(std::size_t(classes) * (backbone_dim + reduced_dim), 0.0);
  head.b_cls.assign(std::size_t(classes), 0.0);
  return head;
}

std::vector<double> reduce(const FusionHead& head,
                           std::span<const double> topo) {
  if (int(topo.size()) != head.topo_dim) {
    throw std::invalid_argument("reduce: dimension mismatch");
  }
  std::vector<double> out(std::size_t(head.reduced_dim));
  for (int j = 0; j < head.reduced_dim; ++j) {
    const double* row = head.w_red.data() + std::size_t(j) * head.topo_dim;
    const double u =
        kernels::dot(row, topo.data(), topo.size()) + head.b_red[std::size_t(j)];
    out[std::size_t(j)] = u > 0.0 ? u : 0.0;
  }
  return out;
}

std::vector<double> forward(const FusionHead& head,
                            std::span<const double> backbone,
                            std::span<const double> topo) {
  return run_forward(head, backbone, topo).probs;
}

double fusion_loss(const FusionHead& head, const FusionBatch& batch) {
  if (batch.size == 0) throw std::invalid_argument("fusion_loss: empty batch");
  double loss = 0.0;
  for (std::size_t i = 0; i < batch.size; ++i) {
    const auto state =
        run_forward(head, batch_row(batch.backbone, i, std::size_t(head.backbone_dim)),
                    batch_row(batch.topo, i, std::size_t(head.topo_dim)));
    const double p = state.probs[std::size_t(batch.labels[i])];
    loss -= std::log(std::max(p, 1e-300));
  }
  return loss / double(batch.size);
}

FusionGradients backward(const FusionHead& head, const FusionBatch& batch) {
  if (batch.size == 0) throw std::invalid_argument("backward: empty batch");

  FusionGradients g;
  g.w_red.assign(head.w_red.size(), 0.0);
  g.b_red.assign(head.b_red.size(), 0.0);
  g.w_cls.assign(head.w_cls.size(), 0.0);
  g.b_cls.assign(head.b_cls.size(), 0.0);

  const double alpha = sigmoid(head.a_raw);
  const double dalpha_da = alpha * (1.0 - alpha);
  const std::size_t fused_dim = std::size_t(head.backbone_dim) + std::size_t(head.reduced_dim);

  std::vector<double> dz(std::size_t(head.classes));
  std::vector<double> dfused(fused_dim);
  std::vector<double> dreduced(std::size_t(head.reduced_dim));

  for (std::size_t i = 0; i < batch.size; ++i) {
    const auto backbone =
        batch_row(batch.backbone, i, std::size_t(head.backbone_dim));
    const auto topo = batch_row(batch.topo, i, std::size_t(head.topo_dim));
    const ForwardState state = run_forward(head, backbone, topo);

    for (int k = 0; k < head.classes; ++k) {
      dz[std::size_t(k)] = state.probs[std::size_t(k)];
    }
    dz[std::size_t(batch.labels[i])] -= 1.0;

    // Classifier block: dL/dW_cls[k] = dz[k] * fused, dL/db_cls = dz.
    std::fill(dfused.begin(), dfused.end(), 0.0);
    for (int k = 0; k < head.classes; ++k) {
      double* grow = g.w_cls.data() + std::size_t(k) * fused_dim;
      kernels::axpy(dz[std::size_t(k)], state.fused.data(), grow, fused_dim);
      g.b_cls[std::size_t(k)] += dz[std::size_t(k)];
      const double* wrow = head.w_cls.data() + std::size_t(k) * fused_dim;
      kernels::axpy(dz[std::size_t(k)], wrow, dfused.data(), fused_dim);
    }

    // Alpha gets gradient from both halves: the backbone half carries
    // -(v_b) and the topo half carries +reduced.
    double dalpha = 0.0;
    for (int j = 0; j < head.backbone_dim; ++j) {
      dalpha -= dfused[std::size_t(j)] * backbone[std::size_t(j)];
    }
    for (int j = 0; j < head.reduced_dim; ++j) {
      const double df = dfused[std::size_t(head.backbone_dim + j)];
      dalpha += df * state.reduced[std::size_t(j)];
      dreduced[std::size_t(j)] = alpha * df;
    }
    g.a_raw += dalpha * dalpha_da;

    // Reduction block through the rectifier gate.
    for (int j = 0; j < head.reduced_dim; ++j) {
      if (state.pre_red[std::size_t(j)] <= 0.0) continue;
      const double du = dreduced[std::size_t(j)];
      double* grow = g.w_red.data() + std::size_t(j) * head.topo_dim;
      kernels::axpy(du, topo.data(), grow, topo.size());
      g.b_red[std::size_t(j)] += du;
    }
  }

  const double inv = 1.0 / double(batch.size);
  g.a_raw *= inv;
  for (double& v : g.w_red) v *= inv;
  for (double& v : g.b_red) v *= inv;
  for (double& v : g.w_cls) v *= inv;
  for (double& v : g.b_cls) v *= inv;
  return g;
}

std::vector<EpochStats> train(FusionHead& head, const FusionDataset& data,
                              const FusionTrainConfig& cfg) {
  const FusionBatch& all = data.samples;
  if (all.size == 0) throw std::invalid_argument("train: empty dataset");

  // Fit the topo max-min scaler on the training data and keep it with the
  // head for evaluation-time reuse.
  const std::size_t tdim = std::size_t(head.topo_dim);
  head.topo_min.assign(tdim, std::numeric_limits<double>::infinity());
  head.topo_max.assign(tdim, -std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < all.size; ++i) {
    const auto row = batch_row(all.topo, i, tdim);
    for (std::size_t c = 0; c < tdim; ++c) {
      head.topo_min[c] = std::min(head.topo_min[c], row[c]);
      head.topo_max[c] = std::max(head.topo_max[c], row[c]);
    }
  }
  FusionBatch scaled = all;
  for (std::size_t i = 0; i < all.size; ++i) {
    const auto src = batch_row(all.topo, i, tdim);
    const auto dst = scale_topo(head, src);
    std::copy(dst.begin(), dst.end(), scaled.topo.begin() + std::ptrdiff_t(i * tdim));
  }

  std::mt19937_64 rng(cfg.seed);
  for (double& w : head.w_red) w = detail::uniform_symmetric(rng, cfg.init_scale);
  for (double& w : head.w_cls) w = detail::uniform_symmetric(rng, cfg.init_scale);

  std::vector<std::size_t> order(all.size);
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  const std::size_t bdim = std::size_t(head.backbone_dim);
  std::vector<EpochStats> trace;
  trace.reserve(std::size_t(cfg.epochs));

  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    detail::shuffle_indices(order, rng);
    for (std::size_t start = 0; start < order.size();
         start += std::size_t(cfg.batch_size)) {
      const std::size_t stop =
          std::min(order.size(), start + std::size_t(cfg.batch_size));
      FusionBatch batch;
      batch.size = stop - start;
      batch.backbone.reserve(batch.size * bdim);
      batch.topo.reserve(batch.size * tdim);
      for (std::size_t k = start; k < stop; ++k) {
        const auto brow = batch_row(scaled.backbone, order[k], bdim);
        const auto trow = batch_row(scaled.topo, order[k], tdim);
        batch.backbone.insert(batch.backbone.end(), brow.begin(), brow.end());
        batch.topo.insert(batch.topo.end(), trow.begin(), trow.end());
        batch.labels.push_back(scaled.labels[order[k]]);
      }
      const FusionGradients g = backward(head, batch);
      head.a_raw -= cfg.learning_rate * g.a_raw;
      kernels::axpy(-cfg.learning_rate, g.w_red.data(), head.w_red.data(),
                    head.w_red.size());
      kernels::axpy(-cfg.learning_rate, g.b_red.data(), head.b_red.data(),
                    head.b_red.size());
      kernels::axpy(-cfg.learning_rate, g.w_cls.data(), head.w_cls.data(),
                    head.w_cls.size());
      kernels::axpy(-cfg.learning_rate, g.b_cls.data(), head.b_cls.data(),
                    head.b_cls.size());
    }

    EpochStats stats;
    stats.epoch = epoch;
    stats.loss = fusion_loss(head, scaled);
    std::size_t correct = 0;
    for (std::size_t i = 0; i < scaled.size; ++i) {
      const auto probs =
          run_forward(head, batch_row(scaled.backbone, i, bdim),
                      batch_row(scaled.topo, i, tdim))
              .probs;
      const int guess = int(std::max_element(probs.begin(), probs.end()) -
                            probs.begin());
      correct += guess == scaled.labels[i];
    }
    stats.accuracy = double(correct) / double(scaled.size);
    stats.alpha = head.alpha();
    trace.push_back(stats);
  }
  return trace;
}

int predict(const FusionHead& head, std::span<const double> backbone,
            std::span<const double> topo) {
  const auto scaled = scale_topo(head, topo);
  const auto probs = forward(head, backbone, scaled);
  return int(std::max_element(probs.begin(), probs.end()) - probs.begin());
}

void write_fusion_json(std::ostream& out, const FusionHead& head) {
  nlohmann::json j;
  j["shape"] = {{"backbone_dim", head.backbone_dim},
                {"topo_dim", head.topo_dim},
                {"reduced_dim", head.reduced_dim},
                {"classes", head.classes}};
  j["a_raw"] = head.a_raw;
  j["w_red"] = head.w_red;
  j["b_red"] = head.b_red;
  j["w_cls"] = head.w_cls;
  j["b_cls"] = head.b_cls;
  j["topo_min"] = head.topo_min;
  j["topo_max"] = head.topo_max;
  out << j.dump(2) << '\n';
}

FusionHead read_fusion_json(std::istream& in) {
  nlohmann::json j;
  in >> j;
  const auto& shape = j.at("shape");
  FusionHead head = make_fusion_head(
      shape.at("backbone_dim").get<int>(), shape.at("topo_dim").get<int>(),
      shape.at("reduced_dim").get<int>(), shape.at("classes").get<int>());
  head.a_raw = j.at("a_raw").get<double>();
  head.w_red = j.at("w_red").get<std::vector<double>>();
  head.b_red = j.at("b_red").get<std::vector<double>>();
  head.w_cls = j.at("w_cls").get<std::vector<double>>();
  head.b_cls = j.at("b_cls").get<std::vector<double>>();
  head.topo_min = j.at("topo_min").get<std::vector<double>>();
  head.topo_max = j.at("topo_max").get<std::vector<double>>();
  if (head.w_red.size() != std::size_t(head.reduced_dim) * head.topo_dim ||
      head.w_cls.size() !=
          std::size_t(head.classes) * (head.backbone_dim + head.reduced_dim)) {
    throw std::invalid_argument("fusion model: weight shape mismatch");
  }
  return head;
}

void write_trace_csv(std::ostream& out, std::span<const EpochStats> trace) {
  out << "epoch,loss,accuracy,alpha\n";
  out.precision(17);
  for (const auto& row : trace) {
    out << row.epoch << ',' << row.loss << ',' << row.accuracy << ','
        << row.alpha << '\n';
  }
}

}  // namespace topo
