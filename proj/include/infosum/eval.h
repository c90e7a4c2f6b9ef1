#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "infosum/corpus.h"

namespace infosum {

// ROUGE-N over the casefolded word tokens of each side (punctuation
// dropped, no stemming, no stopword removal). Sentences are concatenated
// into one token stream per side; overlap uses clipped n-gram counts.
struct RougeScore {
  int n = 1;
  double recall = 0.0;
  double precision = 0.0;
  double f1 = 0.0;
  std::size_t overlap = 0;
  std::size_t ref_count = 0;
  std::size_t cand_count = 0;
};

RougeScore rouge_n(std::span<const Sentence> reference, std::span<const Sentence> candidate, int n);

struct ClassificationReport {
  std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// 0/0 ratios are reported as 0.
ClassificationReport prf(std::size_t tp, std::size_t fp, std::size_t fn, std::size_t tn);
ClassificationReport classification_report(std::span<const int> predicted, std::span<const int> truth);

struct TestResult {
  double statistic = 0.0;
  double p_value = 1.0;
  std::string method;
};

// Upper tail of the chi-square distribution.
double chi_square_sf(double x, double dof);
// Upper tail of the standard normal.
double normal_sf(double z);

enum class McNemarMode { chi_square, exact };

// b = A right & B wrong, c = A wrong & B right. chi_square mode:
// (|b - c| - 1)^2 / (b + c) against chi-square(1), clamped at 0 when b = c;
// exact mode: two-sided binomial test on min(b, c). p = 1 when b + c = 0.
TestResult mcnemar(std::span<const int> pred_a, std::span<const int> pred_b, std::span<const int> truth,
                   McNemarMode mode = McNemarMode::chi_square);
TestResult mcnemar_counts(std::size_t b, std::size_t c, McNemarMode mode = McNemarMode::chi_square);

enum class WilcoxonMode { automatic, exact, normal };

// Two-sided signed-rank test on x - y. Zero differences are dropped; tied
// |differences| get average ranks. automatic = exact for n <= 25, else the
// tie-corrected normal approximation with continuity correction.
// statistic = min(W+, W-).
TestResult wilcoxon_signed_rank(std::span<const double> x, std::span<const double> y,
                                WilcoxonMode mode = WilcoxonMode::automatic);

// 1-based ranks; ties share the average rank.
std::vector<double> average_ranks(std::span<const double> values);

double pearson(std::span<const double> x, std::span<const double> y);
// Throws Error("zero-variance") for a constant input.
double spearman(std::span<const double> x, std::span<const double> y);

double agreement_rate(std::span<const int> a, std::span<const int> b);
double cohen_kappa(std::span<const int> a, std::span<const int> b);

// 1 iff more than half of the votes are 1. Throws Error("tie-possible") for
// an even number of votes.
std::vector<int> majority_vote(std::span<const std::vector<int>> votes);

}  // namespace infosum
