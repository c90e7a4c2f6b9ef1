#include <cmath>

#include "doctest.h"
#include "infosum/error.h"
#include "infosum/eval.h"
#include "infosum/rng.h"
#include "oracles.h"

using namespace infosum;

namespace {

std::vector<Sentence> sents(std::vector<std::string> texts) { return make_sentences(texts); }

std::string error_code(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return {};
}

}  // namespace

TEST_CASE("rouge_n examples") {
  const auto ref = sents({"The cat sat."});
  CHECK(rouge_n(ref, ref, 1).recall == 1.0);
  CHECK(rouge_n(ref, ref, 2).recall == 1.0);
  const auto r1 = rouge_n(ref, sents({"the dog sat"}), 1);
  CHECK(r1.recall == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(r1.overlap == 2);
  CHECK(r1.ref_count == 3);
  CHECK(rouge_n(ref, sents({"Markets fell."}), 1).recall == 0.0);
  CHECK(rouge_n(ref, sents({}), 1).recall == 0.0);
  CHECK(rouge_n(sents({}), ref, 1).recall == 0.0);
  // clipped counts
  const auto clip = rouge_n(sents({"the the cat"}), sents({"the the the the"}), 1);
  CHECK(clip.overlap == 2);
  CHECK(clip.precision == 0.5);
  CHECK(error_code([&] { rouge_n(ref, ref, 0); }) == "invalid-argument");
}

TEST_CASE("rouge_n matches brute-force enumeration") {
  Rng rng(21);
  const std::vector<std::string> vocab{"a", "b", "c", "d", "e", "f"};
  for (int t = 0; t < 100; ++t) {
    std::string r, c;
    const auto lr = 1 + rng.below(10), lc = 1 + rng.below(10);
    for (std::uint64_t i = 0; i < lr; ++i) r += vocab[rng.below(vocab.size())] + " ";
    for (std::uint64_t i = 0; i < lc; ++i) c += vocab[rng.below(vocab.size())] + " ";
    for (int n : {1, 2}) {
      const auto lib = rouge_n(sents({r}), sents({c}), n);
      const auto o = oracle::ngram_overlap(oracle::words(r), oracle::words(c), static_cast<std::size_t>(n));
      CHECK(lib.overlap == o.overlap);
      CHECK(lib.ref_count == o.ref_total);
      if (o.ref_total) CHECK(lib.recall == static_cast<double>(o.overlap) / static_cast<double>(o.ref_total));
    }
  }
}

TEST_CASE("rouge properties") {
  const auto ref = sents({"Officials said talks would resume.", "Markets rallied."});
  CHECK(rouge_n(ref, ref, 2).recall == 1.0);
  auto cand = sents({"Talks resume."});
  double prev = rouge_n(ref, cand, 1).recall;
  for (const auto& s : ref) {
    cand.push_back(s);
    const double now = rouge_n(ref, cand, 1).recall;
    CHECK(now >= prev);
    prev = now;
  }
  // case and punctuation are ignored
  CHECK(rouge_n(sents({"Talks, RESUME!"}), sents({"talks resume"}), 2).recall == 1.0);
}

TEST_CASE("prf") {
  const auto nyt = prf(492372, 353628, 89628, 0);
  CHECK(nyt.precision == doctest::Approx(0.582).epsilon(1e-12));
  CHECK(nyt.recall == doctest::Approx(0.846).epsilon(1e-12));
  CHECK(std::fabs(nyt.f1 - 0.689) <= 0.001);

  const auto baseline = prf(451, 549, 0, 0);
  CHECK(baseline.precision == 0.451);
  CHECK(baseline.recall == 1.0);
  CHECK(std::fabs(baseline.f1 - 0.621) <= 0.001);

  const auto zero = prf(0, 0, 0, 10);
  CHECK(zero.precision == 0.0);
  CHECK(zero.recall == 0.0);
  CHECK(zero.f1 == 0.0);

  Rng rng(3);
  for (int i = 0; i < 200; ++i) {
    const auto r = prf(rng.below(50), rng.below(50), rng.below(50), rng.below(50));
    CHECK(r.f1 >= 0.0);
    CHECK(r.f1 <= 1.0);
    CHECK(r.f1 <= std::min(2 * r.precision, 2 * r.recall) + 1e-15);
    CHECK(r.f1 <= r.precision + r.recall + 1e-15);
  }
}

TEST_CASE("classification_report counts") {
  const std::vector<int> pred{1, 1, 0, 0, 1}, truth{1, 0, 1, 0, 1};
  const auto r = classification_report(pred, truth);
  CHECK(r.tp == 2);
  CHECK(r.fp == 1);
  CHECK(r.fn == 1);
  CHECK(r.tn == 1);
  CHECK(classification_report(truth, truth).f1 == 1.0);
  const std::vector<int> shorter{1};
  CHECK(error_code([&] { classification_report(shorter, truth); }) == "length-mismatch");
}

TEST_CASE("chi-square and normal tails") {
  for (double x : {0.1, 0.5, 1.0, 3.841458820694124, 49.0 / 12.0, 10.0})
    CHECK(chi_square_sf(x, 1) == doctest::Approx(oracle::chi_square_tail(x, 1)).epsilon(1e-9));
  for (double x : {0.5, 2.0, 7.8})
    CHECK(chi_square_sf(x, 3) == doctest::Approx(oracle::chi_square_tail(x, 3)).epsilon(1e-9));
  CHECK(chi_square_sf(0.0, 1) == 1.0);
  CHECK(chi_square_sf(3.841458820694124, 1) == doctest::Approx(0.05).epsilon(1e-12));
  CHECK(normal_sf(0.0) == 0.5);
  CHECK(normal_sf(1.959963984540054) == doctest::Approx(0.025).epsilon(1e-12));
  CHECK(normal_sf(-1.0) == doctest::Approx(1.0 - normal_sf(1.0)).epsilon(1e-15));
}

TEST_CASE("mcnemar") {
  const auto t = mcnemar_counts(10, 2);
  CHECK(t.statistic == doctest::Approx(49.0 / 12.0).epsilon(1e-15));
  CHECK(t.p_value == doctest::Approx(0.04330814).epsilon(1e-6));
  CHECK(t.p_value == doctest::Approx(oracle::chi_square_tail(49.0 / 12.0, 1)).epsilon(1e-9));
  CHECK(mcnemar_counts(0, 0).p_value == 1.0);
  CHECK(mcnemar_counts(3, 3).statistic == 0.0);
  CHECK(mcnemar_counts(3, 3).p_value == 1.0);

  // exact: two-sided binomial on min(b, c) = 2 of 12
  const auto exact = mcnemar_counts(10, 2, McNemarMode::exact);
  CHECK(exact.p_value == doctest::Approx(2.0 * (1 + 12 + 66) / 4096.0).epsilon(1e-12));

  const std::vector<int> truth{1, 1, 0, 0, 1, 0, 1, 0};
  const std::vector<int> a{1, 1, 0, 0, 0, 1, 1, 0};
  const std::vector<int> b{0, 1, 1, 0, 1, 1, 0, 1};
  const auto ab = mcnemar(a, b, truth), ba = mcnemar(b, a, truth);
  CHECK(ab.statistic == ba.statistic);
  CHECK(ab.p_value == ba.p_value);
  CHECK(mcnemar(a, a, truth).p_value == 1.0);
  const std::vector<int> shorter{1};
  CHECK(error_code([&] { mcnemar(a, shorter, truth); }) == "length-mismatch");
}

TEST_CASE("wilcoxon signed-rank") {
  const std::vector<double> x{1, 2, 3, 4, 5}, zero(5, 0.0);
  const auto exact = wilcoxon_signed_rank(x, zero, WilcoxonMode::exact);
  CHECK(exact.p_value == doctest::Approx(0.0625).epsilon(1e-15));
  CHECK(exact.statistic == 0.0);
  CHECK(wilcoxon_signed_rank(x, x).p_value == 1.0);
  CHECK(wilcoxon_signed_rank(zero, x, WilcoxonMode::exact).p_value == exact.p_value);

  Rng rng(8);
  SUBCASE("exact matches sign enumeration, ties included") {
    for (int t = 0; t < 40; ++t) {
      const auto n = 1 + rng.below(12);
      std::vector<double> a(n), b(n), d(n);
      for (std::size_t i = 0; i < n; ++i) {
        a[i] = static_cast<double>(rng.below(6));
        b[i] = static_cast<double>(rng.below(6));
        d[i] = a[i] - b[i];
      }
      const auto lib = wilcoxon_signed_rank(a, b, WilcoxonMode::exact);
      CHECK(lib.p_value == doctest::Approx(oracle::wilcoxon_exact(d)).epsilon(1e-12));
      CHECK(wilcoxon_signed_rank(b, a, WilcoxonMode::exact).p_value == lib.p_value);
    }
  }
  SUBCASE("normal approximation is close to exact at n = 25") {
    for (int t = 0; t < 20; ++t) {
      std::vector<double> a(25), b(25);
      for (std::size_t i = 0; i < 25; ++i) {
        a[i] = rng.normal() + 0.3;
        b[i] = rng.normal();
      }
      const double pe = wilcoxon_signed_rank(a, b, WilcoxonMode::exact).p_value;
      const double pn = wilcoxon_signed_rank(a, b, WilcoxonMode::normal).p_value;
      CHECK(std::fabs(pe - pn) <= 0.02);
      CHECK(wilcoxon_signed_rank(a, b).p_value == pe);
    }
  }
  SUBCASE("large samples use the normal approximation") {
    std::vector<double> a(40), b(40);
    for (std::size_t i = 0; i < 40; ++i) {
      a[i] = rng.normal() + 1.0;
      b[i] = rng.normal();
    }
    const auto r = wilcoxon_signed_rank(a, b);
    CHECK(r.p_value == wilcoxon_signed_rank(a, b, WilcoxonMode::normal).p_value);
    CHECK(r.p_value < 0.01);
    CHECK(r.p_value >= 0.0);
  }
}

TEST_CASE("ranks and correlations") {
  const std::vector<double> v{10, 20, 20, 5};
  CHECK(average_ranks(v) == std::vector<double>{2, 3.5, 3.5, 1});
  CHECK(average_ranks(v) == oracle::ranks(v));

  const std::vector<double> a{1, 2, 3, 4}, b{1, 3, 2, 4};
  CHECK(spearman(a, b) == doctest::Approx(0.8).epsilon(1e-12));
  const std::vector<double> up{2, 4, 8, 16}, down{9, 7, 3, 1};
  CHECK(spearman(a, up) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(spearman(a, down) == doctest::Approx(-1.0).epsilon(1e-15));
  const std::vector<double> flat{3, 3, 3, 3};
  CHECK(error_code([&] { spearman(a, flat); }) == "zero-variance");

  Rng rng(4);
  for (int t = 0; t < 30; ++t) {
    std::vector<double> x(12), y(12), yt(12);
    for (std::size_t i = 0; i < 12; ++i) {
      x[i] = static_cast<double>(rng.below(8));
      y[i] = rng.normal();
      yt[i] = std::exp(3 * y[i]) + 7;  // strictly monotone
    }
    CHECK(spearman(x, y) == doctest::Approx(oracle::spearman(x, y)).epsilon(1e-12));
    CHECK(spearman(x, yt) == doctest::Approx(spearman(x, y)).epsilon(1e-12));
    CHECK(pearson(x, y) == doctest::Approx(oracle::pearson(x, y)).epsilon(1e-12));
  }
}

TEST_CASE("agreement and kappa") {
  const std::vector<int> a{1, 1, 0, 0}, b{1, 0, 1, 0};
  CHECK(cohen_kappa(a, a) == 1.0);
  CHECK(cohen_kappa(a, b) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(agreement_rate(a, b) == 0.5);
  const std::vector<int> ones{1, 1, 1}, ones2{1, 1, 1}, other{0, 0, 0};
  CHECK(cohen_kappa(ones, ones2) == 1.0);
  CHECK(cohen_kappa(ones, other) == 0.0);

  Rng rng(6);
  for (int t = 0; t < 50; ++t) {
    std::vector<int> x(20), y(20);
    for (std::size_t i = 0; i < 20; ++i) {
      x[i] = static_cast<int>(rng.below(2));
      y[i] = rng.bernoulli(0.8) ? x[i] : 1 - x[i];
    }
    double pe = 0;
    for (int label : {0, 1}) {
      const double px = static_cast<double>(std::count(x.begin(), x.end(), label)) / 20.0;
      const double py = static_cast<double>(std::count(y.begin(), y.end(), label)) / 20.0;
      pe += px * py;
    }
    if (pe == 1.0) continue;
    const double k = cohen_kappa(x, y);
    // p_o recovered from kappa equals the reported agreement rate
    CHECK(agreement_rate(x, y) == doctest::Approx(k * (1 - pe) + pe).epsilon(1e-12));
  }
}

TEST_CASE("majority vote") {
  const std::vector<std::vector<int>> votes{{1, 1, 0}, {0, 0, 1}, {1, 1, 1}, {0, 0, 0, 1, 1}};
  CHECK(majority_vote(votes) == std::vector<int>{1, 0, 1, 0});
  const std::vector<std::vector<int>> even{{1, 0}};
  CHECK(error_code([&] { majority_vote(even); }) == "tie-possible");

  // 1000 three-annotator items, 451 with a positive majority
  std::vector<std::vector<int>> items;
  Rng rng(12);
  for (int i = 0; i < 1000; ++i) {
    const bool positive = i < 451;
    const int minority = static_cast<int>(rng.below(2));
    items.push_back(positive ? std::vector<int>{1, 1, minority} : std::vector<int>{0, 0, minority});
    rng.shuffle(items.back());
  }
  const auto labels = majority_vote(items);
  CHECK(std::count(labels.begin(), labels.end(), 1) == 451);
}
