#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "infosum/error.h"
#include "infosum/pu.h"
#include "infosum/rng.h"
#include "oracles.h"

using namespace infosum;

namespace {

std::string error_code(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return {};
}

PUHyper with_seed(std::uint64_t seed) {
  PUHyper h;
  h.seed = seed;
  return h;
}

const FeatureLayout kLayout2 = FeatureLayout::dense(2);

FeatureVector vec(std::vector<double> v, const FeatureLayout& layout = kLayout2) {
  return {layout.hash(), std::move(v)};
}

// Positives around (+1.5, +1.5), unlabeled around (-1.5, -1.5).
std::vector<PUExample> separable(std::uint64_t seed, std::size_t per_side = 40) {
  Rng rng(seed);
  std::vector<PUExample> out;
  for (std::size_t i = 0; i < per_side; ++i) {
    out.push_back({vec({1.5 + 0.3 * rng.normal(), 1.5 + 0.3 * rng.normal()}), true});
    out.push_back({vec({-1.5 + 0.3 * rng.normal(), -1.5 + 0.3 * rng.normal()}), false});
  }
  return out;
}

double logit(double p) { return std::log(p / (1.0 - p)); }

double boundary_distance(const LinearModel& a, const LinearModel& b) {
  // compare normalised hyperplanes
  const auto norm = [](const LinearModel& m) {
    double s = m.bias * m.bias;
    for (double w : m.weights) s += w * w;
    return std::sqrt(s);
  };
  const double na = norm(a), nb = norm(b);
  double d = std::fabs(a.bias / na - b.bias / nb);
  for (std::size_t i = 0; i < a.weights.size(); ++i) d = std::max(d, std::fabs(a.weights[i] / na - b.weights[i] / nb));
  return d;
}

}  // namespace

TEST_CASE("DesignMatrix stores sparse rows") {
  DesignMatrix x(3);
  const std::vector<double> r0{1, 0, 2}, r1{0, 0, 0};
  x.add_row(r0);
  x.add_row(r1);
  CHECK(x.rows() == 2);
  const std::vector<double> w{1, 5, 3};
  CHECK(x.dot(0, w) == 7.0);
  CHECK(x.dot(1, w) == 0.0);
  std::vector<double> acc(3, 0.0);
  x.axpy(0, 2.0, acc);
  CHECK(acc == std::vector<double>{2, 0, 4});
  const std::vector<double> rw{1, 1};
  const auto rms = x.column_rms(rw);
  CHECK(rms[0] == doctest::Approx(std::sqrt(0.5)));
  CHECK(rms[1] == 1.0);
  const std::vector<double> f{2, 1, 0.5};
  x.scale_columns(f);
  CHECK(x.dot(0, w) == doctest::Approx(2 + 3));
  const std::vector<double> wrong{1};
  CHECK(error_code([&] { x.add_row(wrong); }) == "shape-mismatch");
}

TEST_CASE("objective gradients match finite differences") {
  Rng rng(11);
  for (int trial = 0; trial < 5; ++trial) {
    const std::size_t dim = 1 + rng.below(6);
    const std::size_t rows = 5 + rng.below(10);
    DesignMatrix x(dim);
    std::vector<double> t, w;
    for (std::size_t i = 0; i < rows; ++i) {
      std::vector<double> row(dim);
      for (auto& v : row) v = rng.normal();
      x.add_row(row);
      t.push_back(rng.bernoulli(0.5) ? 1.0 : 0.0);
      w.push_back(0.1 + rng.uniform());
    }
    LinearModel m{std::vector<double>(dim), 0.1 * rng.normal()};
    for (auto& v : m.weights) v = 0.5 * rng.normal();

    for (auto objective : {&logistic_objective, &hinge_objective}) {
      LinearModel g;
      objective(x, t, w, m, 0.3, &g);
      std::vector<double> params = m.weights;
      params.push_back(m.bias);
      const auto f = [&](const std::vector<double>& p) {
        LinearModel q{std::vector<double>(p.begin(), p.end() - 1), p.back()};
        return objective(x, t, w, q, 0.3, nullptr);
      };
      auto analytic = g.weights;
      analytic.push_back(g.bias);
      CHECK(oracle::relative_error(analytic, oracle::numeric_gradient(f, params)) < 1e-6);
    }
  }
}

TEST_CASE("objective value checks") {
  DesignMatrix x(1);
  const std::vector<double> a{2.0}, b{-1.0};
  x.add_row(a);
  x.add_row(b);
  const std::vector<double> t{1, 0}, w{1, 3};
  const LinearModel m{{0.5}, 0.0};
  // logistic: (1*log(1+e^-1) + 3*log(1+e^-0.5)) / 4 + 0.5*0.1*0.25
  CHECK(logistic_objective(x, t, w, m, 0.1) ==
        doctest::Approx((std::log1p(std::exp(-1.0)) + 3 * std::log1p(std::exp(-0.5))) / 4 + 0.0125));
  // hinge: (1*0 + 3*0.5) / 4 + 0.0125
  CHECK(hinge_objective(x, t, w, m, 0.1) == doctest::Approx(1.5 / 4 + 0.0125));
  const std::vector<double> zero{0, 0};
  CHECK(error_code([&] { hinge_objective(x, t, zero, m, 0.1); }) == "degenerate-training-set");
}

TEST_CASE("stage 1 on a separable toy set") {
  const auto data = separable(1);
  const auto s1 = train_stage1(data);
  for (const auto& ex : data)
    if (ex.labeled) CHECK(s1.predict(ex.features) > 0.5);
    else CHECK(s1.predict(ex.features) < 0.5);
  CHECK(s1.loss_curve.size() >= 2);
  CHECK(s1.loss_curve.back() < s1.loss_curve.front());
  CHECK(std::is_sorted(s1.loss_curve.rbegin(), s1.loss_curve.rend()));
}

TEST_CASE("stage 1 preconditions") {
  auto data = separable(2, 3);
  for (auto& ex : data) ex.labeled = true;
  CHECK(error_code([&] { train_stage1(data); }) == "degenerate-training-set");
  for (auto& ex : data) ex.labeled = false;
  CHECK(error_code([&] { train_stage1(data); }) == "degenerate-training-set");
  data[0].labeled = true;
  data[1].features = vec({1, 2, 3}, FeatureLayout::dense(3));
  CHECK(error_code([&] { train_stage1(data); }) == "layout-mismatch");
}

TEST_CASE("duplicating the dataset keeps the stage-1 boundary") {
  const auto data = separable(3);
  auto twice = data;
  twice.insert(twice.end(), data.begin(), data.end());
  const auto a = train_stage1(data).model;
  const auto b = train_stage1(twice).model;
  CHECK(boundary_distance(a, b) < 1e-6);
}

TEST_CASE("estimate_e averages stage-1 probabilities over positives") {
  const auto layout = FeatureLayout::dense(1);
  Stage1Model s1;
  s1.layout_hash = layout.hash();
  s1.model = {{1.0}, 0.0};
  const std::vector<PUExample> pos{{vec({logit(0.8)}, layout), true}, {vec({logit(0.6)}, layout), true}};
  CHECK(estimate_e(s1, pos) == doctest::Approx(0.7).epsilon(1e-12));

  const std::vector<PUExample> sure{{vec({40.0}, layout), true}, {vec({50.0}, layout), true}};
  CHECK(estimate_e(s1, sure) == doctest::Approx(1.0));

  CHECK(error_code([&] { estimate_e(s1, {}); }) == "empty-positive-set");
  const std::vector<PUExample> unl{{vec({0.0}, layout), false}};
  CHECK(error_code([&] { estimate_e(s1, unl); }) == "invalid-argument");
}

TEST_CASE("unlabeled_weight") {
  CHECK(unlabeled_weight(0.5, 0.8) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(unlabeled_weight(0.7, 0.7) == 1.0);
  CHECK(unlabeled_weight(0.0, 0.7) == 0.0);
  CHECK(unlabeled_weight(1e-12, 0.7) < 1e-11);
  CHECK(unlabeled_weight(0.9, 0.7) == 1.0);
  CHECK(unlabeled_weight(1.0, 0.7) == 1.0);
  CHECK(unlabeled_weight(0.3, 1.0) == 0.3);
  CHECK(error_code([] { unlabeled_weight(1.5, 0.5); }) == "invalid-argument");
  CHECK(error_code([] { unlabeled_weight(0.5, 0.0); }) == "invalid-argument");

  Rng rng(5);
  for (int i = 0; i < 200; ++i) {
    const double lr = rng.uniform(), e = 0.01 + 0.98 * rng.uniform();
    const double w = unlabeled_weight(lr, e);
    CHECK(w >= 0.0);
    CHECK(w <= 1.0);
    CHECK(w == doctest::Approx(oracle::unlabeled_weight(lr, e)).epsilon(1e-12));
    // monotone in lr
    CHECK(unlabeled_weight(std::min(1.0, lr + 0.01), e) >= w);
  }
}

TEST_CASE("build_relabeled") {
  const auto layout = FeatureLayout::dense(1);
  Stage1Model s1;
  s1.layout_hash = layout.hash();
  s1.model = {{1.0}, 0.0};
  std::vector<PUExample> data{{vec({1.0}, layout), true},
                              {vec({2.0}, layout), true},
                              {vec({0.5}, layout), false},
                              {vec({3.0}, layout), true},
                              {vec({-800.0}, layout), false}};
  const auto r = build_relabeled(data, s1, 0.8);
  CHECK(r.size() == 7);
  std::size_t pos = 0;
  for (const auto& ex : r) pos += ex.y;
  CHECK(pos == 5);
  for (std::size_t i = 0; i + 1 < r.size(); ++i)
    if (r[i].source == r[i + 1].source) {
      CHECK(r[i].y == 1);
      CHECK(r[i + 1].y == 0);
      CHECK(r[i].weight + r[i + 1].weight == doctest::Approx(1.0).epsilon(1e-15));
      CHECK(r[i].features == &data[r[i].source].features);
    }
  // the far-negative unlabeled example: positive copy kept with weight 0
  CHECK(r[5].source == 4);
  CHECK(r[5].weight == 0.0);
  CHECK(r[6].weight == 1.0);
}

TEST_CASE("stage 2 on a separable toy set has no hinge violations") {
  std::vector<FeatureVector> feats;
  std::vector<RelabeledExample> data;
  Rng rng(7);
  for (int i = 0; i < 60; ++i) feats.push_back(vec({3.0 + 0.3 * rng.normal(), rng.normal()}));
  for (int i = 0; i < 60; ++i) feats.push_back(vec({-3.0 + 0.3 * rng.normal(), rng.normal()}));
  for (std::size_t i = 0; i < feats.size(); ++i) data.push_back({&feats[i], i < 60 ? 1 : 0, 1.0, i});
  const auto s2 = train_stage2(data);
  for (const auto& ex : data) {
    const double m = s2.model.margin(ex.features->values);
    CHECK((ex.y ? m : -m) >= 1.0);
  }
}

TEST_CASE("stage 2 weight semantics") {
  std::vector<FeatureVector> feats;
  Rng rng(9);
  for (int i = 0; i < 80; ++i) feats.push_back(vec({rng.normal() + (i % 2 ? 1.0 : -1.0), rng.normal()}));
  std::vector<RelabeledExample> base;
  for (std::size_t i = 0; i < feats.size(); ++i) base.push_back({&feats[i], static_cast<int>(i % 2), 0.2 + rng.uniform(), i});
  const auto reference = train_stage2(base).model;

  SUBCASE("zero-weight example is inert") {
    auto with = base;
    FeatureVector outlier = vec({50.0, -50.0});
    with.insert(with.begin() + 10, RelabeledExample{&outlier, 1, 0.0, 999});
    const auto m = train_stage2(with).model;
    CHECK(boundary_distance(m, reference) < 1e-6);
  }
  SUBCASE("doubling every weight") {
    auto doubled = base;
    for (auto& ex : doubled) ex.weight *= 2.0;
    CHECK(boundary_distance(train_stage2(doubled).model, reference) < 1e-6);
  }
  SUBCASE("degenerate inputs") {
    auto one_class = base;
    for (auto& ex : one_class) ex.y = 1;
    CHECK(error_code([&] { train_stage2(one_class); }) == "degenerate-training-set");
    auto negative = base;
    negative[0].weight = -1.0;
    CHECK(error_code([&] { train_stage2(negative); }) == "invalid-argument");
  }
}

TEST_CASE("calibration") {
  SUBCASE("separated margins") {
    const std::vector<double> m{-3, -2, -1.5, -1, 1, 1.5, 2, 3};
    const std::vector<int> y{0, 0, 0, 0, 1, 1, 1, 1};
    const auto c = calibrate(m, y);
    CHECK(c.a < 0);
    for (std::size_t i = 0; i < m.size(); ++i) CHECK((c.prob(m[i]) > 0.5) == (y[i] == 1));
    for (double t = -5; t < 5; t += 0.25) CHECK(c.prob(t + 0.25) > c.prob(t));
  }
  SUBCASE("symmetric margins give B near 0") {
    std::vector<double> m;
    std::vector<int> y;
    for (double v : {0.5, 1.0, 2.0}) {
      m.insert(m.end(), {v, -v, v, -v});
      y.insert(y.end(), {1, 0, 0, 1});
    }
    m.insert(m.end(), {3.0, -3.0});
    y.insert(y.end(), {1, 0});
    const auto c = calibrate(m, y);
    CHECK(std::fabs(c.b) < 1e-9);
    CHECK(c.prob(0.0) == doctest::Approx(0.5));
  }
  SUBCASE("weights act like repetition") {
    const std::vector<double> m{-2, -1, 0.5, 1, 2, -0.3};
    const std::vector<int> y{0, 0, 1, 1, 1, 1};
    const std::vector<double> w{1, 2, 1, 1, 3, 1};
    const std::vector<double> mr{-2, -1, -1, 0.5, 1, 2, 2, 2, -0.3};
    const std::vector<int> yr{0, 0, 0, 1, 1, 1, 1, 1, 1};
    const auto a = calibrate(m, y, w);
    const auto b = calibrate(mr, yr);
    CHECK(a.a == doctest::Approx(b.a).epsilon(1e-6));
    CHECK(a.b == doctest::Approx(b.b).epsilon(1e-6));
  }
  const std::vector<double> m{1, 2};
  const std::vector<int> same{1, 1};
  CHECK(error_code([&] { calibrate(m, same); }) == "degenerate-labels");
  const std::vector<double> mm{-2, -1, 1, 2};
  const std::vector<int> flipped{1, 1, 0, 0};
  CHECK(error_code([&] { calibrate(mm, flipped); }) == "calibration-failed");
}

TEST_CASE("train_pu on a separable toy set") {
  auto data = separable(4, 60);
  // hide a third of the positives among the unlabeled
  for (std::size_t i = 0; i < data.size(); i += 6) data[i].labeled = false;
  TrainingReport report;
  const auto model = train_pu(data, kLayout2, with_seed(3), &report);
  CHECK(report.positives + report.unlabeled == data.size());
  CHECK(report.relabeled == report.positives + 2 * report.unlabeled);
  CHECK(report.stage2_train + report.calibration == report.relabeled);
  CHECK(report.e == model.e);
  CHECK(model.e > 0.0);
  CHECK(model.e <= 1.0);

  double pos = 0, neg = 0;
  std::size_t np = 0, nn = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double p = model.predict_prob(data[i].features);
    CHECK(p == model.predict_prob(data[i].features));
    if (data[i].features.values[0] > 0) {
      pos += p;
      ++np;
      CHECK(model.predict_label(data[i].features));
    } else {
      neg += p;
      ++nn;
    }
  }
  CHECK(pos / static_cast<double>(np) > neg / static_cast<double>(nn));

  // probabilities are ordered by margin
  std::vector<std::pair<double, double>> mp;
  for (const auto& ex : data) mp.emplace_back(model.margin(ex.features), model.predict_prob(ex.features));
  std::sort(mp.begin(), mp.end());
  for (std::size_t i = 1; i < mp.size(); ++i)
    if (mp[i].first > mp[i - 1].first) CHECK(mp[i].second >= mp[i - 1].second);

  CHECK(error_code([&] { model.margin(vec({1, 2, 3}, FeatureLayout::dense(3))); }) == "layout-mismatch");
  CHECK(error_code([&] { train_pu(data, kLayout2, [] { PUHyper h; h.holdout = 1.0; return h; }()); }) == "invalid-config");
  CHECK(train_pu(data, kLayout2, with_seed(3)).to_json() == model.to_json());
}

TEST_CASE("model JSON round-trip and corruption") {
  const auto data = separable(5, 30);
  const auto model = train_pu(data, kLayout2, with_seed(1));
  const auto text = model.to_json();
  const auto back = PUModel::from_json(text);
  CHECK(back.to_json() == text);
  CHECK(back.svm == model.svm);
  CHECK(back.calib == model.calib);
  CHECK(back.e == model.e);
  CHECK(back.hyper == model.hyper);
  Rng rng(17);
  for (int i = 0; i < 100; ++i) {
    const auto x = vec({3 * rng.normal(), 3 * rng.normal()});
    CHECK(back.predict_prob(x) == model.predict_prob(x));
  }

  const auto path = (std::filesystem::temp_directory_path() / "infosum_test_model.json").string();
  save_model(model, path);
  CHECK(load_model(path).to_json() == text);
  std::filesystem::remove(path);
  CHECK(error_code([&] { load_model(path); }) == "io");

  CHECK(error_code([] { PUModel::from_json("{not json"); }) == "corrupt-model");
  CHECK(error_code([] { PUModel::from_json("[]"); }) == "corrupt-model");
  auto j = text;
  j.replace(j.find("\"version\":1"), 11, "\"version\":7");
  CHECK(error_code([&] { PUModel::from_json(j); }) == "version-mismatch");
  auto h = text;
  const auto at = h.find("\"layout_hash\":\"") + 15;
  h[at] = h[at] == '0' ? '1' : '0';
  CHECK(error_code([&] { PUModel::from_json(h); }) == "hash-mismatch");
}
