#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "infosum/features.h"

namespace infosum {

// Two-stage positive-unlabeled learner.
//
// Stage 1 fits a logistic regression treating unlabeled examples as
// negatives. Its mean probability on the labeled positives estimates the
// label frequency e = p(o=1 | y=1). Every unlabeled example is then split
// into a positive copy with weight w = p(y=1 | o=0, x) and a negative copy
// with weight 1 - w, and stage 2 fits a weighted linear SVM on this
// relabeled data. A sigmoid over the SVM margin, fitted on a held-out
// slice, turns margins into probabilities.

struct LinearModel {
  std::vector<double> weights;
  double bias = 0.0;

  double margin(std::span<const double> x) const;
  bool operator==(const LinearModel&) const = default;
};

// Row-compressed sparse matrix; rows are feature vectors.
class DesignMatrix {
 public:
  explicit DesignMatrix(std::size_t cols = 0) : cols_(cols) { offsets_.push_back(0); }

  void add_row(std::span<const double> dense);

  std::size_t rows() const noexcept { return offsets_.size() - 1; }
  std::size_t cols() const noexcept { return cols_; }

  double dot(std::size_t row, std::span<const double> w) const noexcept;
  // out += alpha * row
  void axpy(std::size_t row, double alpha, std::span<double> out) const noexcept;

  // Weighted root-mean-square of every column; 1 for all-zero columns.
  std::vector<double> column_rms(std::span<const double> row_weights) const;
  void scale_columns(std::span<const double> factors);

 private:
  std::size_t cols_;
  std::vector<std::size_t> offsets_;
  std::vector<std::uint32_t> indices_;
  std::vector<double> values_;
};

// Mean weighted logistic loss plus (l2/2)||w||^2 (bias unpenalised):
//   (1/sum(c)) * sum_i c_i * log(1 + exp(-s_i * m_i)),  s_i = 2*y_i - 1.
// When `gradient` is non-null it receives the gradient.
double logistic_objective(const DesignMatrix& x, std::span<const double> targets, std::span<const double> weights,
                          const LinearModel& model, double l2, LinearModel* gradient = nullptr);

// Same shape with the hinge loss max(0, 1 - s_i * m_i); `gradient` receives
// a subgradient (the gradient wherever no example sits exactly on the hinge).
double hinge_objective(const DesignMatrix& x, std::span<const double> targets, std::span<const double> weights,
                       const LinearModel& model, double l2, LinearModel* gradient = nullptr);

struct OptimizerSettings {
  double l2 = 1e-3;
  int epochs = 200;
  double learning_rate = 0.1;

  bool operator==(const OptimizerSettings&) const = default;
};

struct PUExample {
  FeatureVector features;
  bool labeled = false;  // o = 1
  double weight = 1.0;
};

struct Stage1Model {
  std::uint64_t layout_hash = 0;
  LinearModel model;
  OptimizerSettings settings;
  std::vector<double> loss_curve;

  double predict(const FeatureVector& x) const;  // p(o = 1 | x)
};

// Throws Error("degenerate-training-set") without both a labeled and an
// unlabeled example.
Stage1Model train_stage1(std::span<const PUExample> data, const OptimizerSettings& settings = {});

// Mean stage-1 probability over labeled positives.
double estimate_e(const Stage1Model& model, std::span<const PUExample> positives);

// p(y=1 | o=0) for an unlabeled example with stage-1 probability lr_x:
// min(1, lr_x (1 - e) / (e (1 - lr_x))), and lr_x itself when e = 1.
double unlabeled_weight(double lr_x, double e);

struct RelabeledExample {
  const FeatureVector* features = nullptr;  // points into the source data
  int y = 0;
  double weight = 1.0;
  std::size_t source = 0;  // index of the originating PUExample
};

// |P| + 2|U| examples; unlabeled pairs carry weights w and 1 - w.
// The result refers to `data`, which must outlive it.
std::vector<RelabeledExample> build_relabeled(std::span<const PUExample> data, const Stage1Model& model, double e);

struct Stage2Model {
  LinearModel model;
  OptimizerSettings settings;
  std::vector<double> loss_curve;
};

Stage2Model train_stage2(std::span<const RelabeledExample> data, const OptimizerSettings& settings = {});

struct Calibration {
  double a = -1.0;
  double b = 0.0;

  double prob(double margin) const noexcept;
  bool operator==(const Calibration&) const = default;
};

// Sigmoid p = 1 / (1 + exp(a*m + b)) fitted by (weighted) maximum
// likelihood with smoothed targets. Throws Error("degenerate-labels") unless
// both labels carry weight and Error("calibration-failed") if a >= 0.
Calibration calibrate(std::span<const double> margins, std::span<const int> labels,
                      std::span<const double> weights = {});

struct PUHyper {
  OptimizerSettings stage1;
  OptimizerSettings stage2;
  double holdout = 0.2;
  std::uint64_t seed = 0;

  bool operator==(const PUHyper&) const = default;
};

struct TrainingReport {
  std::size_t positives = 0;
  std::size_t unlabeled = 0;
  std::size_t relabeled = 0;
  std::size_t stage2_train = 0;
  std::size_t calibration = 0;
  double e = 0.0;
  std::vector<double> stage1_loss;
  std::vector<double> stage2_loss;
};

struct PUModel {
  static constexpr int kVersion = 1;

  FeatureLayout layout;
  Stage1Model stage1;
  double e = 1.0;
  LinearModel svm;
  Calibration calib;
  PUHyper hyper;

  // Each throws Error("layout-mismatch") for vectors from another layout.
  double margin(const FeatureVector& x) const;
  double predict_prob(const FeatureVector& x) const;
  bool predict_label(const FeatureVector& x) const { return predict_prob(x) >= 0.5; }

  std::string to_json() const;
  static PUModel from_json(std::string_view text);
};

PUModel train_pu(std::span<const PUExample> data, const FeatureLayout& layout, const PUHyper& hyper = {},
                 TrainingReport* report = nullptr);

void save_model(const PUModel& model, const std::string& path);
PUModel load_model(const std::string& path);

}  // namespace infosum
