// topocli: segmentation, topological feature extraction, curves, and
// classifier training/evaluation over image batches.
//
// Exit codes: 0 success, 1 input error, 2 internal invariant violation.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "topo/cubical.hpp"
#include "topo/curves.hpp"
#include "topo/errors.hpp"
#include "topo/feature_csv.hpp"
#include "topo/features.hpp"
#include "topo/fusion.hpp"
#include "topo/image_codec.hpp"
#include "topo/persistence.hpp"
#include "topo/segmentation.hpp"
#include "topo/stats.hpp"
#include "topo/svm.hpp"
#include "topo/synthetic.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitInternal = 2;

struct GlobalConfig {
  std::uint64_t seed = 1;
  int jobs = 0;  // 0 = hardware concurrency
  topo::SegmentationConfig segmentation;
  topo::SvmTrainConfig svm;
  topo::FusionTrainConfig fusion;
  int backbone_dim = 32;
  int reduced_dim = 512;
  int balanced_test = 0;
  std::string feature_set = "all";
  json raw;  // effective snapshot for manifests
};

void load_config_file(GlobalConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw topo::IoError(topo::IoErrorKind::missing_file, path,
                        "cannot open config");
  }
  json j;
  in >> j;
  if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("jobs")) cfg.jobs = j["jobs"].get<int>();
  if (j.contains("feature_set")) cfg.feature_set = j["feature_set"];
  if (j.contains("reduced_dim")) cfg.reduced_dim = j["reduced_dim"];
  if (j.contains("balanced_test")) cfg.balanced_test = j["balanced_test"];
  if (j.contains("backbone_dim")) cfg.backbone_dim = j["backbone_dim"];
  if (j.contains("segmentation")) {
    const auto& s = j["segmentation"];
    if (s.contains("total_steps")) cfg.segmentation.total_steps = s["total_steps"];
    if (s.contains("divisor")) cfg.segmentation.divisor = s["divisor"];
    if (s.contains("tiny_fraction")) cfg.segmentation.tiny_fraction = s["tiny_fraction"];
  }
  if (j.contains("svm")) {
    const auto& s = j["svm"];
    if (s.contains("lambda")) cfg.svm.lambda = s["lambda"];
    if (s.contains("epochs")) cfg.svm.epochs = s["epochs"];
  }
  if (j.contains("fusion")) {
    const auto& f = j["fusion"];
    if (f.contains("learning_rate")) cfg.fusion.learning_rate = f["learning_rate"];
    if (f.contains("epochs")) cfg.fusion.epochs = f["epochs"];
    if (f.contains("batch_size")) cfg.fusion.batch_size = f["batch_size"];
    if (f.contains("init_scale")) cfg.fusion.init_scale = f["init_scale"];
  }
}

json config_snapshot(const GlobalConfig& cfg) {
  json j;
  j["seed"] = cfg.seed;
  j["jobs"] = cfg.jobs;
  j["feature_set"] = cfg.feature_set;
  j["reduced_dim"] = cfg.reduced_dim;
  j["balanced_test"] = cfg.balanced_test;
  j["backbone_dim"] = cfg.backbone_dim;
  j["segmentation"] = {{"total_steps", cfg.segmentation.total_steps},
                       {"divisor", cfg.segmentation.divisor},
                       {"tiny_fraction", cfg.segmentation.tiny_fraction}};
  j["svm"] = {{"lambda", cfg.svm.lambda}, {"epochs", cfg.svm.epochs}};
  j["fusion"] = {{"learning_rate", cfg.fusion.learning_rate},
                 {"epochs", cfg.fusion.epochs},
                 {"batch_size", cfg.fusion.batch_size},
                 {"init_scale", cfg.fusion.init_scale}};
  return j;
}

std::vector<fs::path> list_images(const std::string& dir) {
  if (!fs::is_directory(dir)) {
    throw topo::IoError(topo::IoErrorKind::missing_file, dir,
                        "input directory not found");
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    std::string ext = entry.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return char(std::tolower(c)); });
    if (ext == ".png" || ext == ".ppm" || ext == ".pgm" || ext == ".csv") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  return files;
}

// Runs fn(i) over a worker pool; per-item failures are collected, never
// thrown across threads.  Results land at their input index, so output
// order is independent of scheduling.
void parallel_for(std::size_t n, int jobs,
                  const std::function<void(std::size_t)>& fn) {
  int workers = jobs > 0 ? jobs : int(std::thread::hardware_concurrency());
  workers = std::max(1, std::min<int>(workers, int(n)));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(std::size_t(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
        fn(i);
      }
    });
  }
  for (auto& t : pool) t.join();
}

void write_text_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw topo::IoError(topo::IoErrorKind::write_failure, path.string(),
                        "cannot open for writing");
  }
  out << content;
  if (!out) {
    throw topo::IoError(topo::IoErrorKind::write_failure, path.string(),
                        "write failed");
  }
}

void write_manifest(const fs::path& dir, const std::string& command,
                    const GlobalConfig& cfg,
                    const std::vector<std::string>& inputs,
                    const std::vector<std::string>& outputs,
                    double timing_ms, const json& extra = json::object()) {
  json j;
  j["command"] = command;
  j["config"] = config_snapshot(cfg);
  j["seed"] = cfg.seed;
  j["inputs"] = inputs;
  j["outputs"] = outputs;
  j["timing_ms"] = timing_ms;
  for (auto it = extra.begin(); it != extra.end(); ++it) j[it.key()] = it.value();
  write_text_file(dir / "run_manifest.json", j.dump(2) + "\n");
}

struct Timer {
  std::chrono::steady_clock::time_point start =
      std::chrono::steady_clock::now();
  double ms() const {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - start)
        .count();
  }
};

// ---------------------------------------------------------------------------
// segment
// ---------------------------------------------------------------------------

int cmd_segment(const GlobalConfig& cfg, const std::string& input_dir,
                const std::string& output_dir, const std::string& ref_dir) {
  Timer timer;
  const auto files = list_images(input_dir);
  if (files.empty()) {
    std::cerr << "segment: no images in " << input_dir << "\n";
    return kExitInput;
  }
  fs::create_directories(output_dir);

  struct Item {
    std::optional<topo::SegmentationResult> result;
    std::optional<double> iou_score;
    std::string error;
  };
  std::vector<Item> items(files.size());

  parallel_for(files.size(), cfg.jobs, [&](std::size_t i) {
    try {
      const topo::RgbImage img = topo::load_image(files[i].string());
      items[i].result = topo::segment(img, cfg.segmentation);
      if (!ref_dir.empty()) {
        const fs::path ref = fs::path(ref_dir) / (files[i].stem().string() + ".pgm");
        const topo::Mask truth = topo::load_mask_pgm(ref.string());
        items[i].iou_score = topo::iou(items[i].result->mask, truth);
      }
    } catch (const std::exception& e) {
      items[i].error = e.what();
    }
  });

  std::vector<std::string> inputs, outputs, failures;
  for (std::size_t i = 0; i < files.size(); ++i) {
    inputs.push_back(files[i].string());
    if (!items[i].error.empty()) {
      failures.push_back(files[i].string() + ": " + items[i].error);
      continue;
    }
    const auto& r = *items[i].result;
    const std::string stem = files[i].stem().string();
    const fs::path mask_path = fs::path(output_dir) / (stem + "_mask.pgm");
    topo::save_mask_pgm(mask_path.string(), r.mask);
    outputs.push_back(mask_path.string());

    json report;
    report["image"] = files[i].string();
    report["degenerate"] = r.degenerate;
    report["t_second"] = r.t_second;
    report["t_prime"] = r.t_prime;
    report["component_counts"] = r.component_counts;
    auto& comps = report["components"] = json::array();
    for (const auto& cs : r.scores) {
      comps.push_back({{"label", cs.label},
                       {"area", cs.area},
                       {"life_score", cs.score},
                       {"kept", cs.kept}});
    }
    report["mask"] = mask_path.string();
    if (items[i].iou_score) report["iou"] = *items[i].iou_score;
    const fs::path report_path = fs::path(output_dir) / (stem + "_report.json");
    write_text_file(report_path, report.dump(2) + "\n");
    outputs.push_back(report_path.string());
  }

  write_manifest(output_dir, "segment", cfg, inputs, outputs, timer.ms(),
                 {{"failures", failures}});
  for (const auto& f : failures) std::cerr << "segment: " << f << "\n";
  std::cout << "segment: " << outputs.size() / 2 << "/" << files.size()
            << " images segmented\n";
  return failures.empty() ? kExitOk : kExitInput;
}

// ---------------------------------------------------------------------------
// features
// ---------------------------------------------------------------------------

int cmd_features(const GlobalConfig& cfg, const std::string& input_dir,
                 const std::string& masks_dir, const std::string& out_csv) {
  Timer timer;
  const auto files = list_images(input_dir);
  if (files.empty()) {
    std::cerr << "features: no images in " << input_dir << "\n";
    return kExitInput;
  }
  const topo::FeatureSet set = topo::parse_feature_set(cfg.feature_set);

  struct Item {
    std::vector<double> values;
    std::string error;
  };
  std::vector<Item> items(files.size());

  parallel_for(files.size(), cfg.jobs, [&](std::size_t i) {
    try {
      topo::RgbImage img = topo::load_image(files[i].string());
      if (!masks_dir.empty()) {
        const std::string stem = files[i].stem().string();
        fs::path mask_path = fs::path(masks_dir) / (stem + "_mask.pgm");
        if (!fs::exists(mask_path)) {
          mask_path = fs::path(masks_dir) / (stem + ".pgm");
        }
        const topo::Mask mask = topo::load_mask_pgm(mask_path.string());
        img = topo::apply_mask(img, mask);
      }
      items[i].values = topo::compute_features(img, set);
    } catch (const std::exception& e) {
      items[i].error = e.what();
    }
  });

  topo::FeatureTable table;
  table.columns = topo::feature_names(set);
  table.values.cols = table.columns.size();
  std::vector<std::string> inputs, failures;
  for (std::size_t i = 0; i < files.size(); ++i) {
    inputs.push_back(files[i].string());
    if (!items[i].error.empty()) {
      failures.push_back(files[i].string() + ": " + items[i].error);
      continue;
    }
    table.ids.push_back(files[i].stem().string());
    table.values.data.insert(table.values.data.end(), items[i].values.begin(),
                             items[i].values.end());
    ++table.values.rows;
  }

  const fs::path csv_path(out_csv);
  if (csv_path.has_parent_path()) fs::create_directories(csv_path.parent_path());
  {
    std::ostringstream ss;
    topo::write_feature_csv(ss, table);
    write_text_file(csv_path, ss.str());
  }
  const fs::path schema_path = csv_path.string() + ".schema.json";
  {
    std::ostringstream ss;
    topo::write_schema_json(ss, cfg.feature_set, table.columns);
    write_text_file(schema_path, ss.str());
  }

  const fs::path manifest_dir =
      csv_path.has_parent_path() ? csv_path.parent_path() : fs::path(".");
  write_manifest(manifest_dir, "features", cfg, inputs,
                 {csv_path.string(), schema_path.string()}, timer.ms(),
                 {{"failures", failures}, {"masked", !masks_dir.empty()}});
  for (const auto& f : failures) std::cerr << "features: " << f << "\n";
  std::cout << "features: " << table.values.rows << " rows x "
            << table.values.cols << " columns -> " << out_csv << "\n";
  return failures.empty() ? kExitOk : kExitInput;
}

// ---------------------------------------------------------------------------
// curve
// ---------------------------------------------------------------------------

int cmd_curve(const std::string& image_path, const std::string& channel,
              const std::string& curve, const std::string& out_csv) {
  const topo::RgbImage img = topo::load_image(image_path);

  topo::GrayImage gray;
  if (channel == "r") {
    gray = topo::extract_channel(img, topo::Channel::r);
  } else if (channel == "g") {
    gray = topo::extract_channel(img, topo::Channel::g);
  } else if (channel == "b") {
    gray = topo::extract_channel(img, topo::Channel::b);
  } else if (channel == "gray") {
    gray = topo::rgb_to_gray(img);
  } else if (channel == "x" || channel == "y" || channel == "z") {
    auto [x, y, z] = topo::rgb_to_xyz(img);
    gray = channel == "x" ? std::move(x) : channel == "y" ? std::move(y) : std::move(z);
  } else {
    throw std::invalid_argument("curve: unknown channel '" + channel + "'");
  }

  const topo::DiagramPair pair = topo::sublevel_persistence(gray);
  topo::CurveVector values;
  if (curve == "betti0") {
    values = topo::betti_curve(pair.p0);
  } else if (curve == "betti1") {
    values = topo::betti_curve(pair.p1);
  } else if (curve == "entropy0") {
    values = topo::entropy_curve(pair.p0);
  } else if (curve == "entropy1") {
    values = topo::entropy_curve(pair.p1);
  } else {
    throw std::invalid_argument("curve: unknown curve '" + curve + "'");
  }

  std::ostringstream ss;
  topo::write_curve_csv(ss, values);
  write_text_file(out_csv, ss.str());
  std::cout << "curve: wrote " << out_csv << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// train / eval
// ---------------------------------------------------------------------------

struct JoinedData {
  topo::FeatureMatrix features;
  std::vector<int> labels;
  int classes = 0;
};

JoinedData join_features_labels(const std::string& features_csv,
                                const std::string& labels_csv) {
  std::ifstream fin(features_csv);
  if (!fin) {
    throw topo::IoError(topo::IoErrorKind::missing_file, features_csv,
                        "cannot open features CSV");
  }
  const topo::FeatureTable table = topo::read_feature_csv(fin);

  std::ifstream lin(labels_csv);
  if (!lin) {
    throw topo::IoError(topo::IoErrorKind::missing_file, labels_csv,
                        "cannot open labels CSV");
  }
  const topo::LabelTable labels = topo::read_labels_csv(lin);

  std::map<std::string, int> by_id;
  for (std::size_t i = 0; i < labels.ids.size(); ++i) {
    by_id[labels.ids[i]] = labels.labels[i];
  }

  JoinedData data;
  data.features = table.values;
  data.labels.reserve(table.ids.size());
  for (const auto& id : table.ids) {
    const auto it = by_id.find(id);
    if (it == by_id.end()) {
      throw std::invalid_argument("train: no label for image '" + id + "'");
    }
    data.labels.push_back(it->second);
    data.classes = std::max(data.classes, it->second + 1);
  }
  return data;
}

struct Split {
  std::vector<std::size_t> train, val, test;
};

Split split_dataset(const std::vector<int>& labels, int classes,
                    std::uint64_t seed, int balanced_test) {
  std::vector<std::size_t> order(labels.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::mt19937_64 rng(seed);
  for (std::size_t i = order.size(); i > 1; --i) {
    std::swap(order[i - 1], order[std::size_t(rng() % i)]);
  }

  Split split;
  std::vector<int> taken(std::size_t(classes), 0);
  std::vector<std::size_t> rest;
  for (std::size_t idx : order) {
    if (balanced_test > 0 && taken[std::size_t(labels[idx])] < balanced_test) {
      ++taken[std::size_t(labels[idx])];
      split.test.push_back(idx);
    } else {
      rest.push_back(idx);
    }
  }
  const std::size_t train_count = rest.size() * 7 / 10;
  split.train.assign(rest.begin(), rest.begin() + std::ptrdiff_t(train_count));
  split.val.assign(rest.begin() + std::ptrdiff_t(train_count), rest.end());
  return split;
}

topo::FeatureMatrix gather_rows(const topo::FeatureMatrix& m,
                                const std::vector<std::size_t>& idx) {
  topo::FeatureMatrix out;
  out.cols = m.cols;
  out.rows = idx.size();
  out.data.reserve(idx.size() * m.cols);
  for (std::size_t i : idx) {
    const auto row = m.row(i);
    out.data.insert(out.data.end(), row.begin(), row.end());
  }
  return out;
}

std::vector<int> gather_labels(const std::vector<int>& labels,
                               const std::vector<std::size_t>& idx) {
  std::vector<int> out;
  out.reserve(idx.size());
  for (std::size_t i : idx) out.push_back(labels[i]);
  return out;
}

int cmd_train(const GlobalConfig& cfg, const std::string& features_csv,
              const std::string& labels_csv, const std::string& model_kind,
              const std::string& out_dir) {
  Timer timer;
  JoinedData data = join_features_labels(features_csv, labels_csv);
  if (data.classes < 2) {
    throw std::invalid_argument("train: need at least two classes");
  }
  fs::create_directories(out_dir);
  const Split split =
      split_dataset(data.labels, data.classes, cfg.seed, cfg.balanced_test);
  if (split.train.empty() || split.val.empty()) {
    throw std::invalid_argument("train: split produced an empty subset");
  }

  json metrics;
  metrics["model"] = model_kind;
  metrics["classes"] = data.classes;
  metrics["train_size"] = split.train.size();
  metrics["val_size"] = split.val.size();
  metrics["test_size"] = split.test.size();
  std::vector<std::string> outputs;

  if (model_kind == "svm") {
    topo::SvmTrainConfig svm_cfg = cfg.svm;
    svm_cfg.seed = cfg.seed;
    const topo::OvoModel model =
        topo::train_ovo(gather_rows(data.features, split.train),
                        gather_labels(data.labels, split.train), data.classes,
                        svm_cfg);

    const auto evaluate = [&](const std::vector<std::size_t>& idx) {
      std::vector<int> preds;
      preds.reserve(idx.size());
      for (std::size_t i : idx) {
        preds.push_back(topo::predict_ovo(model, data.features.row(i)));
      }
      return topo::balanced_accuracy(preds, gather_labels(data.labels, idx));
    };
    metrics["balanced_accuracy_val"] = evaluate(split.val);
    if (!split.test.empty()) {
      metrics["balanced_accuracy_test"] = evaluate(split.test);
    }

    const fs::path model_path = fs::path(out_dir) / "svm_model.json";
    std::ostringstream ss;
    topo::write_ovo_json(ss, model);
    write_text_file(model_path, ss.str());
    outputs.push_back(model_path.string());
  } else if (model_kind == "fusion") {
    // The backbone stand-in: seeded noise features, one row per sample.
    std::mt19937_64 rng(cfg.seed ^ 0x9e3779b97f4a7c15ull);
    const std::size_t bdim = std::size_t(cfg.backbone_dim);
    std::vector<double> backbone(data.features.rows * bdim);
    for (double& v : backbone) {
      const double u1 = std::max(double(rng() >> 11) * 0x1.0p-53, 1e-12);
      const double u2 = double(rng() >> 11) * 0x1.0p-53;
      v = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }

    const auto gather_batch = [&](const std::vector<std::size_t>& idx) {
      topo::FusionBatch batch;
      batch.size = idx.size();
      for (std::size_t i : idx) {
        batch.backbone.insert(batch.backbone.end(),
                              backbone.begin() + std::ptrdiff_t(i * bdim),
                              backbone.begin() + std::ptrdiff_t((i + 1) * bdim));
        const auto row = data.features.row(i);
        batch.topo.insert(batch.topo.end(), row.begin(), row.end());
        batch.labels.push_back(data.labels[i]);
      }
      return batch;
    };

    topo::FusionHead head =
        topo::make_fusion_head(cfg.backbone_dim, int(data.features.cols),
                               cfg.reduced_dim, data.classes);
    topo::FusionTrainConfig train_cfg = cfg.fusion;
    train_cfg.seed = cfg.seed;
    topo::FusionDataset train_data{gather_batch(split.train)};
    const auto trace = topo::train(head, train_data, train_cfg);

    const topo::FusionBatch val = gather_batch(split.val);
    std::vector<int> preds;
    for (std::size_t i = 0; i < val.size; ++i) {
      preds.push_back(topo::predict(
          head, {val.backbone.data() + i * bdim, bdim},
          {val.topo.data() + i * data.features.cols, data.features.cols}));
    }
    metrics["balanced_accuracy_val"] =
        topo::balanced_accuracy(preds, val.labels);
    metrics["alpha_final"] = head.alpha();

    const fs::path model_path = fs::path(out_dir) / "fusion_model.json";
    {
      std::ostringstream ss;
      topo::write_fusion_json(ss, head);
      write_text_file(model_path, ss.str());
    }
    const fs::path trace_path = fs::path(out_dir) / "alpha_trace.csv";
    {
      std::ostringstream ss;
      topo::write_trace_csv(ss, trace);
      write_text_file(trace_path, ss.str());
    }
    outputs.push_back(model_path.string());
    outputs.push_back(trace_path.string());
  } else {
    throw std::invalid_argument("train: model must be 'svm' or 'fusion'");
  }

  const fs::path metrics_path = fs::path(out_dir) / "metrics.json";
  write_text_file(metrics_path, metrics.dump(2) + "\n");
  outputs.push_back(metrics_path.string());
  write_manifest(out_dir, "train", cfg, {features_csv, labels_csv}, outputs,
                 timer.ms());
  std::cout << metrics.dump(2) << "\n";
  return kExitOk;
}

int cmd_eval(const GlobalConfig& cfg, const std::string& model_path,
             const std::string& features_csv, const std::string& labels_csv,
             const std::string& out_json) {
  JoinedData data = join_features_labels(features_csv, labels_csv);
  std::ifstream min(model_path);
  if (!min) {
    throw topo::IoError(topo::IoErrorKind::missing_file, model_path,
                        "cannot open model");
  }
  json header;
  min >> header;
  min.clear();
  min.seekg(0);

  std::vector<int> preds;
  std::string kind;
  if (header.contains("classifiers")) {
    kind = "svm";
    const topo::OvoModel model = topo::read_ovo_json(min);
    for (std::size_t i = 0; i < data.features.rows; ++i) {
      preds.push_back(topo::predict_ovo(model, data.features.row(i)));
    }
  } else if (header.contains("shape")) {
    kind = "fusion";
    const topo::FusionHead head = topo::read_fusion_json(min);
    std::mt19937_64 rng(cfg.seed ^ 0x9e3779b97f4a7c15ull);
    const std::size_t bdim = std::size_t(head.backbone_dim);
    std::vector<double> backbone(bdim);
    for (std::size_t i = 0; i < data.features.rows; ++i) {
      for (double& v : backbone) {
        const double u1 = std::max(double(rng() >> 11) * 0x1.0p-53, 1e-12);
        const double u2 = double(rng() >> 11) * 0x1.0p-53;
        v = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
      }
      preds.push_back(topo::predict(head, backbone, data.features.row(i)));
    }
  } else {
    throw std::invalid_argument("eval: unrecognized model file");
  }

  json metrics;
  metrics["model"] = kind;
  metrics["samples"] = data.features.rows;
  metrics["balanced_accuracy"] = topo::balanced_accuracy(preds, data.labels);
  if (!out_json.empty()) write_text_file(out_json, metrics.dump(2) + "\n");
  std::cout << metrics.dump(2) << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// selftest
// ---------------------------------------------------------------------------

int cmd_selftest(std::uint64_t seed, int images, int size, int levels) {
  bool ok = true;

  // Fundamental Lemma: diagram-derived Betti counts match the flood-fill
  // oracle at every threshold, both dimensions.
  for (int n = 0; n < images; ++n) {
    const topo::GrayImage img =
        topo::random_gray_image(size, size, levels, seed + std::uint64_t(n));
    const topo::DiagramPair pair = topo::sublevel_persistence(img);
    const topo::CurveVector c0 = topo::betti_curve(pair.p0);
    const topo::CurveVector c1 = topo::betti_curve(pair.p1);
    for (int t = 0; t < topo::kCurveSamples; ++t) {
      const topo::BettiNumbers oracle = topo::betti(topo::threshold(img, t));
      if (int(c0[std::size_t(t)]) != oracle.b0 ||
          int(c1[std::size_t(t)]) != oracle.b1) {
        std::cout << "selftest: fundamental-lemma MISMATCH image " << n
                  << " t=" << t << "\n";
        ok = false;
      }
    }
  }
  std::cout << "selftest: fundamental lemma on " << images << " images ("
            << size << "x" << size << ", " << levels
            << " levels): " << (ok ? "PASS" : "FAIL") << "\n";

  // Diagram CSV round-trip.
  {
    const topo::GrayImage img = topo::random_gray_image(16, 16, 8, seed ^ 77);
    const topo::DiagramPair pair = topo::sublevel_persistence(img);
    std::stringstream ss;
    const std::vector<topo::PersistenceDiagram> diagrams{pair.p0, pair.p1};
    topo::write_diagrams_csv(ss, diagrams);
    const auto read_back = topo::read_diagrams_csv(ss);
    const bool round_trip = read_back.size() == 2 &&
                            read_back[0].points == pair.p0.points &&
                            read_back[1].points == pair.p1.points;
    std::cout << "selftest: diagram csv round-trip: "
              << (round_trip ? "PASS" : "FAIL") << "\n";
    ok = ok && round_trip;
  }

  std::cout << "selftest: " << (ok ? "PASS" : "FAIL") << "\n";
  return ok ? kExitOk : kExitInternal;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Topological feature pipeline for lesion images"};
  app.require_subcommand(1);

  GlobalConfig cfg;
  std::string config_path;

  // Shared options are registered per subcommand so they appear where used.
  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", cfg.seed, "RNG seed");
    sub->add_option("--jobs", cfg.jobs, "worker threads (0 = logical cores)");
    sub->add_option("--config", config_path, "JSON config file");
  };

  std::string input_dir, output_dir, ref_dir, masks_dir, out_csv;
  std::string image_path, channel = "gray", curve_name = "betti0";
  std::string features_csv, labels_csv, model_kind = "svm", model_path,
              out_json;
  int st_images = 200, st_size = 12, st_levels = 16;

  CLI::App* seg = app.add_subcommand("segment", "Segment a directory of images");
  seg->add_option("input", input_dir, "input image directory")->required();
  seg->add_option("output", output_dir, "output directory")->required();
  seg->add_option("--ref-dir", ref_dir, "reference masks for IOU reporting");
  seg->add_option("--steps", cfg.segmentation.total_steps, "filtration steps T");
  seg->add_option("--divisor", cfg.segmentation.divisor, "threshold divisor");
  seg->add_option("--tiny-fraction", cfg.segmentation.tiny_fraction,
                  "minimum component area fraction");
  add_common(seg);

  CLI::App* feat = app.add_subcommand("features", "Extract feature vectors");
  feat->add_option("input", input_dir, "input image directory")->required();
  feat->add_option("output", out_csv, "output feature CSV")->required();
  feat->add_option("--masks", masks_dir, "mask directory (from segment)");
  feat->add_option("--feature-set", cfg.feature_set,
                   "ps-rgb | ps-xyz | pc-rgb | pc-xyz | all");
  add_common(feat);

  CLI::App* cur = app.add_subcommand("curve", "Export one persistence curve");
  cur->add_option("image", image_path, "input image")->required();
  cur->add_option("output", out_csv, "output CSV")->required();
  cur->add_option("--channel", channel, "r|g|b|gray|x|y|z");
  cur->add_option("--curve", curve_name, "betti0|betti1|entropy0|entropy1");
  add_common(cur);

  CLI::App* tr = app.add_subcommand("train", "Train a classifier");
  tr->add_option("features", features_csv, "feature CSV")->required();
  tr->add_option("labels", labels_csv, "labels CSV")->required();
  tr->add_option("output", output_dir, "output directory")->required();
  tr->add_option("--model", model_kind, "svm | fusion");
  tr->add_option("--reduced-dim", cfg.reduced_dim, "fusion reduction width");
  tr->add_option("--backbone-dim", cfg.backbone_dim,
                 "synthetic backbone feature width");
  tr->add_option("--balanced-test", cfg.balanced_test,
                 "hold out N samples per class as a balanced test set");
  tr->add_option("--epochs", cfg.fusion.epochs, "fusion training epochs");
  tr->add_option("--svm-epochs", cfg.svm.epochs, "svm training epochs");
  add_common(tr);

  CLI::App* ev = app.add_subcommand("eval", "Evaluate a trained model");
  ev->add_option("model", model_path, "model JSON")->required();
  ev->add_option("features", features_csv, "feature CSV")->required();
  ev->add_option("labels", labels_csv, "labels CSV")->required();
  ev->add_option("--out", out_json, "metrics output JSON");
  add_common(ev);

  CLI::App* st = app.add_subcommand(
      "selftest", "Run the fundamental-lemma oracle suite");
  st->add_option("--images", st_images, "number of random images");
  st->add_option("--size", st_size, "image side length");
  st->add_option("--levels", st_levels, "gray levels");
  add_common(st);

  // Config file values load first so that explicit flags override them.
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--config" && i + 1 < argc) {
      config_path = argv[i + 1];
    } else if (arg.rfind("--config=", 0) == 0) {
      config_path = arg.substr(9);
    }
  }
  try {
    if (!config_path.empty()) load_config_file(cfg, config_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }

  CLI11_PARSE(app, argc, argv);

  try {
    if (seg->parsed()) return cmd_segment(cfg, input_dir, output_dir, ref_dir);
    if (feat->parsed()) return cmd_features(cfg, input_dir, masks_dir, out_csv);
    if (cur->parsed())
      return cmd_curve(image_path, channel, curve_name, out_csv);
    if (tr->parsed())
      return cmd_train(cfg, features_csv, labels_csv, model_kind, output_dir);
    if (ev->parsed())
      return cmd_eval(cfg, model_path, features_csv, labels_csv, out_json);
    if (st->parsed()) return cmd_selftest(cfg.seed, st_images, st_size, st_levels);
  } catch (const topo::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitInput;
}
