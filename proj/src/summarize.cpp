#include "infosum/summarize.h"

#include <algorithm>
#include <istream>
#include <numeric>
#include <ostream>

#include "json.hpp"

#include "infosum/error.h"
#include "infosum/hash.h"
#include "infosum/rng.h"
#include "infosum/text_util.h"

namespace infosum {

using nlohmann::json;

void SummaryBudget::validate() const {
  if (max_words < 1) throw Error("invalid-config", "summary budget must allow at least one word");
}

std::string_view to_string(BudgetMode mode) noexcept {
  return mode == BudgetMode::whole_sentence ? "whole-sentence" : "truncate-words";
}

BudgetMode parse_budget_mode(std::string_view text) {
  if (text == "whole-sentence") return BudgetMode::whole_sentence;
  if (text == "truncate-words") return BudgetMode::truncate_words;
  throw Error("invalid-config", "unknown budget mode '" + std::string(text) + "'");
}

namespace {

enum class OnOverflow { skip, stop };

// Prefix of the sentence text ending with its n-th word token.
std::string leading_words(const Sentence& s, std::size_t n) {
  std::size_t seen = 0;
  for (const auto& t : s.tokens) {
    if (t.is_word && ++seen == n) return s.text.substr(0, t.end);
  }
  return s.text;
}

// Walks `order`, adding sentences while the budget allows. In
// truncate-words mode the first sentence that overflows is cut to the
// remaining words and the walk ends.
SummaryResult fill(const Document& doc, std::span<const std::size_t> order, SummaryBudget budget,
                   OnOverflow on_overflow, std::string system) {
  budget.validate();
  SummaryResult r;
  r.doc_id = doc.doc_id;
  r.system = std::move(system);

  std::vector<std::size_t> partial_words(doc.sentences.size(), 0);
  for (auto id : order) {
    const auto words = doc.sentences[id].word_count();
    if (words == 0) continue;
    if (r.word_total + words <= budget.max_words) {
      r.selected.push_back(id);
      r.word_total += words;
      continue;
    }
    if (budget.mode == BudgetMode::truncate_words) {
      const auto remaining = budget.max_words - r.word_total;
      if (remaining > 0) {
        r.selected.push_back(id);
        partial_words[id] = remaining;
        r.word_total += remaining;
      }
      break;
    }
    if (on_overflow == OnOverflow::stop) break;
  }

  std::sort(r.selected.begin(), r.selected.end());
  for (auto id : r.selected) {
    if (!r.text.empty()) r.text += ' ';
    const auto& s = doc.sentences[id];
    r.text += partial_words[id] ? leading_words(s, partial_words[id]) : s.text;
  }
  return r;
}

std::vector<std::size_t> document_order(const Document& doc) {
  std::vector<std::size_t> order(doc.sentences.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  return order;
}

}  // namespace

SummaryResult lead_words(const Document& doc, SummaryBudget budget) {
  return fill(doc, document_order(doc), budget, OnOverflow::stop, "leadwords");
}

SummaryResult info_rank(const Document& doc, std::span<const double> probabilities, SummaryBudget budget) {
  if (probabilities.size() != doc.sentences.size())
    throw Error("shape-mismatch", "one probability per sentence required");
  auto order = document_order(doc);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return probabilities[a] > probabilities[b]; });
  return fill(doc, order, budget, OnOverflow::skip, "inforank");
}

SummaryResult info_filter(const Document& doc, const std::vector<bool>& important, SummaryBudget budget) {
  if (important.size() != doc.sentences.size())
    throw Error("shape-mismatch", "one importance label per sentence required");
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < important.size(); ++i)
    if (important[i] && doc.sentences[i].word_count() > 0) kept.push_back(i);

  if (kept.empty()) {
    auto r = fill(doc, document_order(doc), budget, OnOverflow::stop, "infofilter");
    r.fallback = true;
    return r;
  }

  auto r = fill(doc, kept, budget, OnOverflow::stop, "infofilter");
  // Selected is a prefix of `kept`; the scan stopped at the first kept
  // sentence that did not fit. Removed = unimportant sentences before that.
  const auto stop = r.selected.size() < kept.size() ? kept[r.selected.size()] : doc.sentences.size();
  for (std::size_t i = 0; i < stop; ++i)
    if (!important[i]) r.removed.push_back(i);
  return r;
}

SummaryResult random_rank(const Document& doc, SummaryBudget budget, std::uint64_t seed) {
  auto order = document_order(doc);
  Rng rng(mix_seed(seed, fnv1a(doc.doc_id)));
  rng.shuffle(order);
  return fill(doc, order, budget, OnOverflow::skip, "randomrank");
}

SentenceScores score_document(const Document& doc, const PUModel& model, const FeatureExtractor& extractor) {
  SentenceScores out;
  out.probability.reserve(doc.sentences.size());
  for (const auto& s : doc.sentences) {
    if (s.word_count() == 0) {
      out.probability.push_back(0.0);
      out.important.push_back(false);
      continue;
    }
    const double p = model.predict_prob(extractor.extract(s));
    out.probability.push_back(p);
    out.important.push_back(p >= 0.5);
  }
  return out;
}

SummaryResult info_rank(const Document& doc, const PUModel& model, const FeatureExtractor& extractor,
                        SummaryBudget budget) {
  return info_rank(doc, score_document(doc, model, extractor).probability, budget);
}

SummaryResult info_filter(const Document& doc, const PUModel& model, const FeatureExtractor& extractor,
                          SummaryBudget budget) {
  return info_filter(doc, score_document(doc, model, extractor).important, budget);
}

void write_summaries(std::ostream& out, std::span<const SummaryResult> summaries) {
  for (const auto& s : summaries) {
    json j{{"doc_id", s.doc_id},   {"system", s.system},         {"selected", s.selected},
           {"removed", s.removed}, {"text", s.text},             {"word_total", s.word_total},
           {"fallback", s.fallback}};
    out << j.dump() << '\n';
  }
}

std::vector<SummaryResult> read_summaries(std::istream& in) {
  std::vector<SummaryResult> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    try {
      const auto j = json::parse(line);
      SummaryResult s;
      s.doc_id = j.at("doc_id").get<std::string>();
      s.system = j.at("system").get<std::string>();
      s.selected = j.at("selected").get<std::vector<std::size_t>>();
      s.removed = j.value("removed", std::vector<std::size_t>{});
      s.text = j.at("text").get<std::string>();
      s.word_total = j.at("word_total").get<std::size_t>();
      s.fallback = j.value("fallback", false);
      out.push_back(std::move(s));
    } catch (const json::exception& e) {
      throw ParseError(line_no, std::string("malformed summary record: ") + e.what());
    }
  }
  return out;
}

}  // namespace infosum
