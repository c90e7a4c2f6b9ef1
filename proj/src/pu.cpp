#include "infosum/pu.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include "json.hpp"

#include "infosum/error.h"
#include "infosum/rng.h"
#include "infosum/text_util.h"

namespace infosum {

using nlohmann::json;

namespace {

double sigmoid(double z) noexcept {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double ez = std::exp(z);
  return ez / (1.0 + ez);
}

// log(1 + exp(z)) without overflow.
double softplus(double z) noexcept { return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z))); }

double dot(std::span<const double> a, std::span<const double> b) noexcept {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void check_inputs(const DesignMatrix& x, std::span<const double> targets, std::span<const double> weights,
                  const LinearModel& model) {
  if (targets.size() != x.rows() || weights.size() != x.rows())
    throw Error("shape-mismatch", "targets/weights must have one entry per row");
  if (model.weights.size() != x.cols()) throw Error("shape-mismatch", "model dimension does not match data");
}

double total_weight(std::span<const double> weights) {
  const double w = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (!(w > 0.0)) throw Error("degenerate-training-set", "total example weight is zero");
  return w;
}

void check_layout(std::uint64_t expected, std::size_t dim, const FeatureVector& x) {
  if (x.layout_hash != expected || x.values.size() != dim)
    throw Error("layout-mismatch", "feature vector layout " + hash_to_hex(x.layout_hash) +
                                       " does not match model layout " + hash_to_hex(expected));
}

// Per-column scaling to unit weighted RMS; the optimisers work in the scaled
// space and the result is mapped back, so the returned model applies to raw
// features.
struct ScaledProblem {
  DesignMatrix x;
  std::vector<double> rms;

  LinearModel to_raw(const LinearModel& scaled) const {
    LinearModel raw = scaled;
    for (std::size_t j = 0; j < rms.size(); ++j) raw.weights[j] = scaled.weights[j] / rms[j];
    return raw;
  }
};

ScaledProblem scale(DesignMatrix x, std::span<const double> weights) {
  ScaledProblem p{std::move(x), {}};
  p.rms = p.x.column_rms(weights);
  std::vector<double> inv(p.rms.size());
  for (std::size_t j = 0; j < inv.size(); ++j) inv[j] = 1.0 / p.rms[j];
  p.x.scale_columns(inv);
  return p;
}

void axpy_model(LinearModel& out, double alpha, const LinearModel& g) {
  for (std::size_t j = 0; j < out.weights.size(); ++j) out.weights[j] += alpha * g.weights[j];
  out.bias += alpha * g.bias;
}

double squared_norm(const LinearModel& g) { return dot(g.weights, g.weights) + g.bias * g.bias; }

// Full-batch gradient descent with backtracking (Armijo) line search; the
// trial step starts at the learning rate and may double after each
// accepted step.
LinearModel minimise_logistic(const DesignMatrix& x, std::span<const double> targets, std::span<const double> weights,
                              const OptimizerSettings& s, std::vector<double>& curve) {
  LinearModel w{std::vector<double>(x.cols(), 0.0), 0.0};
  LinearModel g;
  double f = logistic_objective(x, targets, weights, w, s.l2, &g);
  double step = s.learning_rate;
  for (int epoch = 0; epoch < s.epochs; ++epoch) {
    const double gg = squared_norm(g);
    if (gg == 0.0) {
      curve.push_back(f);
      continue;
    }
    LinearModel trial;
    double ft = 0.0;
    for (int halvings = 0;; ++halvings) {
      trial = w;
      axpy_model(trial, -step, g);
      ft = logistic_objective(x, targets, weights, trial, s.l2);
      if (ft <= f - 0.5 * step * gg || halvings == 60) break;
      step *= 0.5;
    }
    if (ft < f) {
      w = std::move(trial);
      f = logistic_objective(x, targets, weights, w, s.l2, &g);
    }
    curve.push_back(f);
    step *= 2.0;
  }
  return w;
}

// Full-batch subgradient descent, step lr / (1 + l2 * lr * t); returns the
// iterate with the lowest objective seen.
LinearModel minimise_hinge(const DesignMatrix& x, std::span<const double> targets, std::span<const double> weights,
                           const OptimizerSettings& s, std::vector<double>& curve) {
  LinearModel w{std::vector<double>(x.cols(), 0.0), 0.0};
  LinearModel best = w;
  double best_f = std::numeric_limits<double>::infinity();
  LinearModel g;
  for (int epoch = 0; epoch <= s.epochs; ++epoch) {
    const double f = hinge_objective(x, targets, weights, w, s.l2, &g);
    if (f < best_f) {
      best_f = f;
      best = w;
    }
    if (epoch == s.epochs) break;
    curve.push_back(best_f);
    const double eta = s.learning_rate / (1.0 + s.l2 * s.learning_rate * epoch);
    axpy_model(w, -eta, g);
  }
  return best;
}

}  // namespace

double LinearModel::margin(std::span<const double> x) const {
  if (x.size() != weights.size()) throw Error("shape-mismatch", "input dimension does not match model");
  return dot(weights, x) + bias;
}

void DesignMatrix::add_row(std::span<const double> dense) {
  if (dense.size() != cols_) throw Error("shape-mismatch", "row dimension does not match matrix");
  for (std::size_t j = 0; j < dense.size(); ++j) {
    if (dense[j] == 0.0) continue;
    indices_.push_back(static_cast<std::uint32_t>(j));
    values_.push_back(dense[j]);
  }
  offsets_.push_back(values_.size());
}

double DesignMatrix::dot(std::size_t row, std::span<const double> w) const noexcept {
  double s = 0.0;
  for (std::size_t k = offsets_[row]; k < offsets_[row + 1]; ++k) s += values_[k] * w[indices_[k]];
  return s;
}

void DesignMatrix::axpy(std::size_t row, double alpha, std::span<double> out) const noexcept {
  for (std::size_t k = offsets_[row]; k < offsets_[row + 1]; ++k) out[indices_[k]] += alpha * values_[k];
}

std::vector<double> DesignMatrix::column_rms(std::span<const double> row_weights) const {
  std::vector<double> sum(cols_, 0.0);
  double total = 0.0;
  for (std::size_t r = 0; r < rows(); ++r) {
    const double w = row_weights.empty() ? 1.0 : row_weights[r];
    total += w;
    for (std::size_t k = offsets_[r]; k < offsets_[r + 1]; ++k) sum[indices_[k]] += w * values_[k] * values_[k];
  }
  for (auto& s : sum) s = (total > 0.0 && s > 0.0) ? std::sqrt(s / total) : 1.0;
  return sum;
}

void DesignMatrix::scale_columns(std::span<const double> factors) {
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] *= factors[indices_[k]];
}

double logistic_objective(const DesignMatrix& x, std::span<const double> targets, std::span<const double> weights,
                          const LinearModel& model, double l2, LinearModel* gradient) {
  check_inputs(x, targets, weights, model);
  const double total = total_weight(weights);
  if (gradient) *gradient = {std::vector<double>(x.cols(), 0.0), 0.0};
  double loss = 0.0;
  for (std::size_t i = 0; i < x.rows(); ++i) {
    const double m = x.dot(i, model.weights) + model.bias;
    const double sign = targets[i] > 0.5 ? 1.0 : -1.0;
    loss += weights[i] * softplus(-sign * m);
    if (gradient) {
      const double r = weights[i] * (sigmoid(m) - (targets[i] > 0.5 ? 1.0 : 0.0)) / total;
      x.axpy(i, r, gradient->weights);
      gradient->bias += r;
    }
  }
  if (gradient)
    for (std::size_t j = 0; j < x.cols(); ++j) gradient->weights[j] += l2 * model.weights[j];
  return loss / total + 0.5 * l2 * dot(model.weights, model.weights);
}

double hinge_objective(const DesignMatrix& x, std::span<const double> targets, std::span<const double> weights,
                       const LinearModel& model, double l2, LinearModel* gradient) {
  check_inputs(x, targets, weights, model);
  const double total = total_weight(weights);
  if (gradient) *gradient = {std::vector<double>(x.cols(), 0.0), 0.0};
  double loss = 0.0;
  for (std::size_t i = 0; i < x.rows(); ++i) {
    const double sign = targets[i] > 0.5 ? 1.0 : -1.0;
    const double slack = 1.0 - sign * (x.dot(i, model.weights) + model.bias);
    if (slack <= 0.0) continue;
    loss += weights[i] * slack;
    if (gradient) {
      const double r = -weights[i] * sign / total;
      x.axpy(i, r, gradient->weights);
      gradient->bias += r;
    }
  }
  if (gradient)
    for (std::size_t j = 0; j < x.cols(); ++j) gradient->weights[j] += l2 * model.weights[j];
  return loss / total + 0.5 * l2 * dot(model.weights, model.weights);
}

double Stage1Model::predict(const FeatureVector& x) const {
  check_layout(layout_hash, model.weights.size(), x);
  return sigmoid(model.margin(x.values));
}

Stage1Model train_stage1(std::span<const PUExample> data, const OptimizerSettings& settings) {
  std::size_t labeled = 0;
  for (const auto& ex : data) labeled += ex.labeled ? 1 : 0;
  if (labeled == 0 || labeled == data.size())
    throw Error("degenerate-training-set", "stage 1 needs both labeled-positive and unlabeled examples");

  const auto hash = data.front().features.layout_hash;
  const auto dim = data.front().features.values.size();
  DesignMatrix x(dim);
  std::vector<double> targets;
  std::vector<double> weights;
  for (const auto& ex : data) {
    check_layout(hash, dim, ex.features);
    x.add_row(ex.features.values);
    targets.push_back(ex.labeled ? 1.0 : 0.0);
    weights.push_back(ex.weight);
  }

  Stage1Model out;
  out.layout_hash = hash;
  out.settings = settings;
  const auto problem = scale(std::move(x), weights);
  out.model = problem.to_raw(minimise_logistic(problem.x, targets, weights, settings, out.loss_curve));
  return out;
}

double estimate_e(const Stage1Model& model, std::span<const PUExample> positives) {
  if (positives.empty()) throw Error("empty-positive-set", "cannot estimate e without labeled positives");
  double sum = 0.0;
  for (const auto& ex : positives) {
    if (!ex.labeled) throw Error("invalid-argument", "estimate_e expects labeled positives only");
    sum += model.predict(ex.features);
  }
  return sum / static_cast<double>(positives.size());
}

double unlabeled_weight(double lr_x, double e) {
  if (!(lr_x >= 0.0 && lr_x <= 1.0)) throw Error("invalid-argument", "lr_x must lie in [0, 1]");
  if (!(e > 0.0 && e <= 1.0)) throw Error("invalid-argument", "e must lie in (0, 1]");
  if (e == 1.0) return lr_x;
  if (lr_x == 1.0) return 1.0;
  const double raw = (lr_x * (1.0 - e)) / (e * (1.0 - lr_x));
  return std::clamp(raw, 0.0, 1.0);
}

std::vector<RelabeledExample> build_relabeled(std::span<const PUExample> data, const Stage1Model& model, double e) {
  std::vector<RelabeledExample> out;
  out.reserve(2 * data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto& ex = data[i];
    if (ex.labeled) {
      out.push_back({&ex.features, 1, 1.0, i});
    } else {
      const double w = unlabeled_weight(model.predict(ex.features), e);
      out.push_back({&ex.features, 1, w, i});
      out.push_back({&ex.features, 0, 1.0 - w, i});
    }
  }
  return out;
}

Stage2Model train_stage2(std::span<const RelabeledExample> data, const OptimizerSettings& settings) {
  double pos = 0.0;
  double neg = 0.0;
  for (const auto& ex : data) (ex.y == 1 ? pos : neg) += ex.weight;
  if (!(pos > 0.0) || !(neg > 0.0))
    throw Error("degenerate-training-set", "stage 2 needs weight on both classes");

  const auto hash = data.front().features->layout_hash;
  const auto dim = data.front().features->values.size();
  DesignMatrix x(dim);
  std::vector<double> targets;
  std::vector<double> weights;
  for (const auto& ex : data) {
    check_layout(hash, dim, *ex.features);
    if (ex.weight < 0.0) throw Error("invalid-argument", "example weights must be non-negative");
    x.add_row(ex.features->values);
    targets.push_back(static_cast<double>(ex.y));
    weights.push_back(ex.weight);
  }

  Stage2Model out;
  out.settings = settings;
  const auto problem = scale(std::move(x), weights);
  out.model = problem.to_raw(minimise_hinge(problem.x, targets, weights, settings, out.loss_curve));
  return out;
}

double Calibration::prob(double margin) const noexcept { return sigmoid(-(a * margin + b)); }

Calibration calibrate(std::span<const double> margins, std::span<const int> labels, std::span<const double> weights) {
  if (margins.size() != labels.size() || (!weights.empty() && weights.size() != margins.size()))
    throw Error("shape-mismatch", "margins, labels and weights must have equal length");
  auto weight = [&](std::size_t i) { return weights.empty() ? 1.0 : weights[i]; };

  double prior1 = 0.0;
  double prior0 = 0.0;
  for (std::size_t i = 0; i < labels.size(); ++i) (labels[i] == 1 ? prior1 : prior0) += weight(i);
  if (!(prior1 > 0.0) || !(prior0 > 0.0))
    throw Error("degenerate-labels", "calibration needs weight on both labels");

  // Smoothed targets keep the fit finite on separable margins.
  const double hi = (prior1 + 1.0) / (prior1 + 2.0);
  const double lo = 1.0 / (prior0 + 2.0);
  auto target = [&](std::size_t i) { return labels[i] == 1 ? hi : lo; };

  auto objective = [&](double a, double b) {
    double f = 0.0;
    for (std::size_t i = 0; i < margins.size(); ++i) {
      const double z = a * margins[i] + b;
      const double t = target(i);
      f += weight(i) * (z >= 0.0 ? t * z + std::log1p(std::exp(-z)) : (t - 1.0) * z + std::log1p(std::exp(z)));
    }
    return f;
  };

  double a = 0.0;
  double b = std::log((prior0 + 1.0) / (prior1 + 1.0));
  double f = objective(a, b);
  constexpr double kRidge = 1e-12;
  for (int iter = 0; iter < 100; ++iter) {
    double h11 = kRidge, h22 = kRidge, h21 = 0.0, g1 = 0.0, g2 = 0.0;
    for (std::size_t i = 0; i < margins.size(); ++i) {
      const double z = a * margins[i] + b;
      const double p = sigmoid(-z);
      const double q = 1.0 - p;
      const double d2 = weight(i) * p * q;
      const double d1 = weight(i) * (target(i) - p);
      h11 += margins[i] * margins[i] * d2;
      h22 += d2;
      h21 += margins[i] * d2;
      g1 += margins[i] * d1;
      g2 += d1;
    }
    if (std::abs(g1) < 1e-9 && std::abs(g2) < 1e-9) break;
    const double det = h11 * h22 - h21 * h21;
    const double da = -(h22 * g1 - h21 * g2) / det;
    const double db = -(-h21 * g1 + h11 * g2) / det;
    const double gd = g1 * da + g2 * db;
    double step = 1.0;
    while (step >= 1e-10) {
      const double fa = objective(a + step * da, b + step * db);
      if (fa < f + 1e-4 * step * gd) {
        a += step * da;
        b += step * db;
        f = fa;
        break;
      }
      step *= 0.5;
    }
    if (step < 1e-10) break;
  }
  if (!(a < 0.0))
    throw Error("calibration-failed", "margins do not increase with the positive label (A = " + format_double(a) + ")");
  return {a, b};
}

double PUModel::margin(const FeatureVector& x) const {
  check_layout(layout.hash(), layout.total_dim(), x);
  return svm.margin(x.values);
}

double PUModel::predict_prob(const FeatureVector& x) const { return calib.prob(margin(x)); }

PUModel train_pu(std::span<const PUExample> data, const FeatureLayout& layout, const PUHyper& hyper,
                 TrainingReport* report) {
  if (!(hyper.holdout >= 0.0 && hyper.holdout < 1.0))
    throw Error("invalid-config", "holdout fraction must lie in [0, 1)");
  std::vector<PUExample> positives;
  std::vector<std::size_t> pos_idx;
  std::vector<std::size_t> unl_idx;
  for (std::size_t i = 0; i < data.size(); ++i) {
    check_layout(layout.hash(), layout.total_dim(), data[i].features);
    if (data[i].labeled) {
      positives.push_back(data[i]);
      pos_idx.push_back(i);
    } else {
      unl_idx.push_back(i);
    }
  }

  PUModel model;
  model.layout = layout;
  model.hyper = hyper;
  model.stage1 = train_stage1(data, hyper.stage1);
  model.e = estimate_e(model.stage1, positives);
  const auto relabeled = build_relabeled(data, model.stage1, model.e);

  // Stratified split of source examples; both copies of an unlabeled
  // example land on the same side.
  std::vector<bool> held(data.size(), false);
  if (hyper.holdout > 0.0) {
    Rng rng(mix_seed(hyper.seed, 0x5eed));
    for (auto* group : {&pos_idx, &unl_idx}) {
      auto shuffled = *group;
      rng.shuffle(shuffled);
      const auto n = static_cast<std::size_t>(std::llround(hyper.holdout * static_cast<double>(shuffled.size())));
      for (std::size_t k = 0; k < std::min(n, shuffled.size() - 1); ++k) held[shuffled[k]] = true;
    }
  }
  std::vector<RelabeledExample> fit;
  std::vector<RelabeledExample> calib;
  for (const auto& ex : relabeled) (held[ex.source] ? calib : fit).push_back(ex);
  if (calib.empty()) calib = fit;

  const auto stage2 = train_stage2(fit, hyper.stage2);
  model.svm = stage2.model;

  std::vector<double> margins;
  std::vector<int> labels;
  std::vector<double> weights;
  for (const auto& ex : calib) {
    margins.push_back(model.svm.margin(ex.features->values));
    labels.push_back(ex.y);
    weights.push_back(ex.weight);
  }
  model.calib = calibrate(margins, labels, weights);

  if (report) {
    report->positives = pos_idx.size();
    report->unlabeled = unl_idx.size();
    report->relabeled = relabeled.size();
    report->stage2_train = fit.size();
    report->calibration = calib.size();
    report->e = model.e;
    report->stage1_loss = model.stage1.loss_curve;
    report->stage2_loss = stage2.loss_curve;
  }
  return model;
}

namespace {

void write_array(std::ostream& out, const std::vector<double>& values) {
  out << '[';
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) throw Error("non-finite", "model contains a non-finite weight");
    if (i) out << ',';
    out << format_double17(values[i]);
  }
  out << ']';
}

std::string num(double v) {
  if (!std::isfinite(v)) throw Error("non-finite", "model contains a non-finite value");
  return format_double17(v);
}

void write_settings(std::ostream& out, const OptimizerSettings& s) {
  out << "{\"epochs\":" << s.epochs << ",\"l2\":" << num(s.l2) << ",\"learning_rate\":" << num(s.learning_rate)
      << '}';
}

OptimizerSettings read_settings(const json& j) {
  return {j.at("l2").get<double>(), j.at("epochs").get<int>(), j.at("learning_rate").get<double>()};
}

}  // namespace

std::string PUModel::to_json() const {
  std::ostringstream out;
  out << "{\"version\":" << kVersion;
  out << ",\"layout\":" << layout.to_json();
  out << ",\"layout_hash\":\"" << layout.hash_hex() << '"';
  out << ",\"lexicon_hashes\":{";
  for (std::size_t i = 0; i < layout.lexicons().size(); ++i) {
    const auto& l = layout.lexicons()[i];
    out << (i ? "," : "") << json(l.name).dump() << ":\"" << hash_to_hex(l.hash) << '"';
  }
  out << '}';
  out << ",\"stage1\":{\"weights\":";
  write_array(out, stage1.model.weights);
  out << ",\"bias\":" << num(stage1.model.bias) << '}';
  out << ",\"e\":" << num(e);
  out << ",\"svm\":{\"weights\":";
  write_array(out, svm.weights);
  out << ",\"bias\":" << num(svm.bias) << '}';
  out << ",\"calib\":{\"A\":" << num(calib.a) << ",\"B\":" << num(calib.b) << '}';
  out << ",\"hyper\":{\"holdout\":" << num(hyper.holdout) << ",\"stage1\":";
  write_settings(out, hyper.stage1);
  out << ",\"stage2\":";
  write_settings(out, hyper.stage2);
  out << '}';
  out << ",\"seed\":" << hyper.seed << "}\n";
  return out.str();
}

PUModel PUModel::from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error("corrupt-model", std::string("model file is not valid JSON: ") + e.what());
  }
  try {
    if (!j.is_object() || !j.contains("version")) throw Error("corrupt-model", "model file has no version");
    if (j.at("version").get<int>() != kVersion)
      throw Error("version-mismatch", "unsupported model version " + j.at("version").dump());

    PUModel m;
    m.layout = FeatureLayout::from_json(j.at("layout").dump());
    if (hash_from_hex(j.at("layout_hash").get<std::string>()) != m.layout.hash())
      throw Error("hash-mismatch", "stored layout hash does not match the layout");
    const auto& lex = j.at("lexicon_hashes");
    if (lex.size() != m.layout.lexicons().size())
      throw Error("hash-mismatch", "lexicon hash table does not match the layout");
    for (const auto& l : m.layout.lexicons())
      if (hash_from_hex(lex.at(l.name).get<std::string>()) != l.hash)
        throw Error("hash-mismatch", "lexicon '" + l.name + "' hash does not match the layout");

    const auto dim = m.layout.total_dim();
    m.stage1.layout_hash = m.layout.hash();
    m.stage1.model.weights = j.at("stage1").at("weights").get<std::vector<double>>();
    m.stage1.model.bias = j.at("stage1").at("bias").get<double>();
    m.e = j.at("e").get<double>();
    m.svm.weights = j.at("svm").at("weights").get<std::vector<double>>();
    m.svm.bias = j.at("svm").at("bias").get<double>();
    m.calib = {j.at("calib").at("A").get<double>(), j.at("calib").at("B").get<double>()};
    const auto& hyper = j.at("hyper");
    m.hyper.holdout = hyper.at("holdout").get<double>();
    m.hyper.stage1 = read_settings(hyper.at("stage1"));
    m.hyper.stage2 = read_settings(hyper.at("stage2"));
    m.hyper.seed = j.at("seed").get<std::uint64_t>();
    m.stage1.settings = m.hyper.stage1;
    if (m.stage1.model.weights.size() != dim || m.svm.weights.size() != dim)
      throw Error("corrupt-model", "weight vectors do not match the layout dimension");
    if (!(m.e > 0.0 && m.e <= 1.0)) throw Error("corrupt-model", "label frequency e outside (0, 1]");
    return m;
  } catch (const json::exception& e) {
    throw Error("corrupt-model", std::string("malformed model file: ") + e.what());
  }
}

void save_model(const PUModel& model, const std::string& path) {
  const auto text = model.to_json();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("io", "cannot write model '" + path + "'");
  out << text;
}

PUModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("io", "cannot open model '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return PUModel::from_json(buf.str());
}

}  // namespace infosum
