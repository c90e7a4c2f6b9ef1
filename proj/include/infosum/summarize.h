#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "infosum/corpus.h"
#include "infosum/features.h"
#include "infosum/pu.h"

namespace infosum {

enum class BudgetMode { whole_sentence, truncate_words };

struct SummaryBudget {
  std::size_t max_words = 100;
  BudgetMode mode = BudgetMode::whole_sentence;

  void validate() const;
};

std::string_view to_string(BudgetMode mode) noexcept;
BudgetMode parse_budget_mode(std::string_view text);

struct SummaryResult {
  std::string doc_id;
  std::string system;
  std::vector<std::size_t> selected;  // document order
  std::vector<std::size_t> removed;   // InfoFilter: skipped as unimportant
  std::string text;
  std::size_t word_total = 0;
  bool fallback = false;  // InfoFilter found no important sentence

  bool operator==(const SummaryResult&) const = default;
};

// First max_words words of the document. In whole-sentence mode, stops
// before the first sentence that would overflow.
SummaryResult lead_words(const Document& doc, SummaryBudget budget = {100, BudgetMode::truncate_words});

// Sentences by descending probability (ties: lower id first); sentences
// that do not fit are skipped. Output in document order.
SummaryResult info_rank(const Document& doc, std::span<const double> probabilities, SummaryBudget budget = {});

// Document-order scan keeping sentences labelled important until the next
// kept sentence would overflow. Falls back to lead selection when nothing
// is labelled important.
SummaryResult info_filter(const Document& doc, const std::vector<bool>& important, SummaryBudget budget = {});

// Seeded uniform ranking, then InfoRank's budget fill. The permutation
// depends on (seed, doc_id) only.
SummaryResult random_rank(const Document& doc, SummaryBudget budget, std::uint64_t seed);

struct SentenceScores {
  std::vector<double> probability;
  std::vector<bool> important;
};

// Sentences without word tokens get probability 0 and are not important.
SentenceScores score_document(const Document& doc, const PUModel& model, const FeatureExtractor& extractor);

SummaryResult info_rank(const Document& doc, const PUModel& model, const FeatureExtractor& extractor,
                        SummaryBudget budget = {});
SummaryResult info_filter(const Document& doc, const PUModel& model, const FeatureExtractor& extractor,
                          SummaryBudget budget = {});

// JSONL: {doc_id, system, selected, removed, text, word_total, fallback}
void write_summaries(std::ostream& out, std::span<const SummaryResult> summaries);
std::vector<SummaryResult> read_summaries(std::istream& in);

}  // namespace infosum
