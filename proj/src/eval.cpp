#include "infosum/eval.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include <boost/math/special_functions/gamma.hpp>

#include "infosum/error.h"

namespace infosum {

namespace {

std::vector<std::string> word_stream(std::span<const Sentence> sentences) {
  std::vector<std::string> out;
  for (const auto& s : sentences)
    for (const auto& t : s.tokens)
      if (t.is_word) out.push_back(t.lower);
  return out;
}

std::map<std::vector<std::string>, std::size_t> ngram_counts(const std::vector<std::string>& words, int n) {
  std::map<std::vector<std::string>, std::size_t> out;
  const auto len = static_cast<std::size_t>(n);
  for (std::size_t i = 0; i + len <= words.size(); ++i)
    ++out[std::vector<std::string>(words.begin() + static_cast<std::ptrdiff_t>(i),
                                   words.begin() + static_cast<std::ptrdiff_t>(i + len))];
  return out;
}

double ratio(double num, double den) { return den > 0.0 ? num / den : 0.0; }

double harmonic(double p, double r) { return p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0; }

void require_same_length(std::size_t a, std::size_t b, const char* what) {
  if (a != b) throw Error("length-mismatch", std::string(what) + ": inputs must have equal length");
}

}  // namespace

RougeScore rouge_n(std::span<const Sentence> reference, std::span<const Sentence> candidate, int n) {
  if (n < 1) throw Error("invalid-argument", "ROUGE n must be positive");
  const auto ref = ngram_counts(word_stream(reference), n);
  const auto cand = ngram_counts(word_stream(candidate), n);
  RougeScore r;
  r.n = n;
  for (const auto& [g, c] : ref) {
    r.ref_count += c;
    if (const auto it = cand.find(g); it != cand.end()) r.overlap += std::min(c, it->second);
  }
  for (const auto& [g, c] : cand) r.cand_count += c;
  r.recall = ratio(static_cast<double>(r.overlap), static_cast<double>(r.ref_count));
  r.precision = ratio(static_cast<double>(r.overlap), static_cast<double>(r.cand_count));
  r.f1 = harmonic(r.precision, r.recall);
  return r;
}

ClassificationReport prf(std::size_t tp, std::size_t fp, std::size_t fn, std::size_t tn) {
  ClassificationReport r{tp, fp, fn, tn};
  r.precision = ratio(static_cast<double>(tp), static_cast<double>(tp + fp));
  r.recall = ratio(static_cast<double>(tp), static_cast<double>(tp + fn));
  r.f1 = harmonic(r.precision, r.recall);
  return r;
}

ClassificationReport classification_report(std::span<const int> predicted, std::span<const int> truth) {
  require_same_length(predicted.size(), truth.size(), "classification_report");
  std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    const bool p = predicted[i] != 0;
    const bool t = truth[i] != 0;
    if (p && t) ++tp;
    else if (p) ++fp;
    else if (t) ++fn;
    else ++tn;
  }
  return prf(tp, fp, fn, tn);
}

double chi_square_sf(double x, double dof) {
  if (!(dof > 0.0)) throw Error("invalid-argument", "chi-square dof must be positive");
  if (!(x > 0.0)) return 1.0;
  return boost::math::gamma_q(dof / 2.0, x / 2.0);
}

double normal_sf(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

TestResult mcnemar_counts(std::size_t b, std::size_t c, McNemarMode mode) {
  if (b + c == 0) return {0.0, 1.0, mode == McNemarMode::exact ? "mcnemar-exact" : "mcnemar"};
  if (mode == McNemarMode::exact) {
    const auto n = b + c;
    const auto k = std::min(b, c);
    // P(X <= k), X ~ Binomial(n, 1/2), summed in log space.
    double tail = 0.0;
    for (std::size_t i = 0; i <= k; ++i) {
      const double log_p = std::lgamma(static_cast<double>(n) + 1) - std::lgamma(static_cast<double>(i) + 1) -
                           std::lgamma(static_cast<double>(n - i) + 1) - static_cast<double>(n) * std::log(2.0);
      tail += std::exp(log_p);
    }
    return {static_cast<double>(k), std::min(1.0, 2.0 * tail), "mcnemar-exact"};
  }
  const double diff = std::max(0.0, std::abs(static_cast<double>(b) - static_cast<double>(c)) - 1.0);
  const double stat = diff * diff / static_cast<double>(b + c);
  return {stat, chi_square_sf(stat, 1.0), "mcnemar"};
}

TestResult mcnemar(std::span<const int> pred_a, std::span<const int> pred_b, std::span<const int> truth,
                   McNemarMode mode) {
  require_same_length(pred_a.size(), truth.size(), "mcnemar");
  require_same_length(pred_b.size(), truth.size(), "mcnemar");
  if (truth.empty()) throw Error("invalid-argument", "mcnemar needs at least one item");
  std::size_t b = 0, c = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const bool a_ok = (pred_a[i] != 0) == (truth[i] != 0);
    const bool b_ok = (pred_b[i] != 0) == (truth[i] != 0);
    if (a_ok && !b_ok) ++b;
    if (!a_ok && b_ok) ++c;
  }
  return mcnemar_counts(b, c, mode);
}

std::vector<double> average_ranks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    const double r = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
    i = j + 1;
  }
  return ranks;
}

TestResult wilcoxon_signed_rank(std::span<const double> x, std::span<const double> y, WilcoxonMode mode) {
  require_same_length(x.size(), y.size(), "wilcoxon_signed_rank");
  std::vector<double> diffs;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] - y[i] != 0.0) diffs.push_back(x[i] - y[i]);
  const std::size_t n = diffs.size();
  if (n == 0) return {0.0, 1.0, "wilcoxon"};

  std::vector<double> abs_diffs(n);
  std::transform(diffs.begin(), diffs.end(), abs_diffs.begin(), [](double d) { return std::abs(d); });
  const auto ranks = average_ranks(abs_diffs);
  double w_plus = 0.0;
  double w_minus = 0.0;
  for (std::size_t i = 0; i < n; ++i) (diffs[i] > 0 ? w_plus : w_minus) += ranks[i];
  const double w = std::min(w_plus, w_minus);

  const bool exact = mode == WilcoxonMode::exact || (mode == WilcoxonMode::automatic && n <= 25);
  if (exact) {
    // Doubled ranks are integers even with ties; count sign assignments by
    // the doubled positive-rank sum.
    std::vector<std::size_t> doubled(n);
    std::size_t total = 0;
    for (std::size_t i = 0; i < n; ++i) total += doubled[i] = static_cast<std::size_t>(std::llround(2.0 * ranks[i]));
    std::vector<double> count(total + 1, 0.0);
    count[0] = 1.0;
    for (auto r : doubled)
      for (std::size_t s = total; s >= r; --s) {
        count[s] += count[s - r];
        if (s == r) break;
      }
    const auto limit = static_cast<std::size_t>(std::llround(2.0 * w));
    double tail = 0.0;
    for (std::size_t s = 0; s <= limit; ++s) tail += count[s];
    const double p = std::min(1.0, 2.0 * tail / std::ldexp(1.0, static_cast<int>(n)));
    return {w, p, "wilcoxon-exact"};
  }

  const double nn = static_cast<double>(n);
  double tie_term = 0.0;
  {
    auto sorted = abs_diffs;
    std::sort(sorted.begin(), sorted.end());
    std::size_t i = 0;
    while (i < sorted.size()) {
      std::size_t j = i;
      while (j + 1 < sorted.size() && sorted[j + 1] == sorted[i]) ++j;
      const double t = static_cast<double>(j - i + 1);
      tie_term += t * t * t - t;
      i = j + 1;
    }
  }
  const double mean = nn * (nn + 1.0) / 4.0;
  const double var = nn * (nn + 1.0) * (2.0 * nn + 1.0) / 24.0 - tie_term / 48.0;
  if (!(var > 0.0)) return {w, 1.0, "wilcoxon-normal"};
  const double z = std::max(0.0, std::abs(w - mean) - 0.5) / std::sqrt(var);
  return {w, std::min(1.0, 2.0 * normal_sf(z)), "wilcoxon-normal"};
}

double pearson(std::span<const double> x, std::span<const double> y) {
  require_same_length(x.size(), y.size(), "pearson");
  if (x.size() < 2) throw Error("invalid-argument", "correlation needs at least two points");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) throw Error("zero-variance", "correlation undefined for a constant input");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double spearman(std::span<const double> x, std::span<const double> y) {
  require_same_length(x.size(), y.size(), "spearman");
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  return pearson(rx, ry);
}

double agreement_rate(std::span<const int> a, std::span<const int> b) {
  require_same_length(a.size(), b.size(), "agreement_rate");
  if (a.empty()) throw Error("invalid-argument", "agreement needs at least one item");
  std::size_t same = 0;
  for (std::size_t i = 0; i < a.size(); ++i) same += a[i] == b[i] ? 1 : 0;
  return static_cast<double>(same) / static_cast<double>(a.size());
}

double cohen_kappa(std::span<const int> a, std::span<const int> b) {
  const double p_o = agreement_rate(a, b);
  std::map<int, std::pair<double, double>> marginals;
  for (std::size_t i = 0; i < a.size(); ++i) {
    marginals[a[i]].first += 1.0;
    marginals[b[i]].second += 1.0;
  }
  const double n = static_cast<double>(a.size());
  double p_e = 0.0;
  for (const auto& [label, m] : marginals) p_e += (m.first / n) * (m.second / n);
  if (p_e >= 1.0) {
    if (p_o == 1.0) return 1.0;
    throw Error("degenerate-kappa", "kappa undefined: chance agreement is 1");
  }
  return (p_o - p_e) / (1.0 - p_e);
}

std::vector<int> majority_vote(std::span<const std::vector<int>> votes) {
  std::vector<int> out;
  out.reserve(votes.size());
  for (std::size_t i = 0; i < votes.size(); ++i) {
    const auto& v = votes[i];
    if (v.empty()) throw Error("invalid-argument", "item " + std::to_string(i) + " has no votes");
    if (v.size() % 2 == 0)
      throw Error("tie-possible", "item " + std::to_string(i) + " has an even number of votes");
    const auto yes = static_cast<std::size_t>(std::count_if(v.begin(), v.end(), [](int x) { return x != 0; }));
    out.push_back(2 * yes > v.size() ? 1 : 0);
  }
  return out;
}

}  // namespace infosum
