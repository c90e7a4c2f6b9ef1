#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "infosum/corpus.h"

namespace infosum {

enum class LabelFlag { positive, unlabeled, excluded };

std::string_view to_string(LabelFlag flag) noexcept;
LabelFlag parse_label_flag(std::string_view text);

struct WeakLabel {
  std::string doc_id;
  std::size_t sentence_id = 0;
  LabelFlag flag = LabelFlag::unlabeled;
  std::optional<double> align_score;

  bool operator==(const WeakLabel&) const = default;
};

struct LabelConfig {
  double t_pos = 14.0;  // best alignment score must exceed this to be positive
  double t_unl = 10.0;  // best alignment score at or below this is unlabeled
  double balance_ratio = 1.2;
  std::uint64_t seed = 0;

  // Throws Error("invalid-config") unless t_unl < t_pos and balance_ratio > 0.
  void validate() const;
};

using IdfLookup = std::function<double(std::string_view)>;

IdfLookup idf_of(const Corpus& corpus);

// Sum of idf over the distinct lowercased word types shared by both
// sentences. Symmetric; punctuation ignored.
double align_score(const Sentence& source, const Sentence& target, const IdfLookup& idf);

struct Alignment {
  std::size_t target = 0;
  double score = 0.0;
};

// Highest-scoring summary sentence; ties go to the lowest id.
Alignment best_alignment(const Sentence& source, std::span<const Sentence> summary, const IdfLookup& idf);

// positive if best score > t_pos, unlabeled if <= t_unl, excluded between.
std::vector<WeakLabel> label_by_alignment(const Document& doc, const LabelConfig& config, const IdfLookup& idf);

// positive iff the sentence id occurs in any extract; otherwise unlabeled.
std::vector<WeakLabel> label_by_extract(const Document& doc, std::span<const std::vector<std::size_t>> extracts);

// Article sentence ids whose token sequence (casefolded) equals that of some
// summary sentence. Recovers extract membership when the summary is a
// verbatim extract.
std::vector<std::size_t> extract_ids_from_summary(const Document& doc);

// Keeps every positive and a seeded uniform subset of the unlabeled labels
// of size min(pool, round(balance_ratio * positives)). Excluded labels are
// dropped. Input order is preserved.
std::vector<WeakLabel> sample_unlabeled(std::span<const WeakLabel> labels, const LabelConfig& config);

struct LabelCounts {
  std::size_t positive = 0;
  std::size_t unlabeled = 0;
  std::size_t excluded = 0;

  std::size_t total() const noexcept { return positive + unlabeled + excluded; }
};

LabelCounts count_labels(std::span<const WeakLabel> labels) noexcept;

// JSONL: {"doc_id", "sentence_id", "flag", "align_score"}; align_score is
// null for extract labels.
void write_labels(std::ostream& out, std::span<const WeakLabel> labels);
std::vector<WeakLabel> read_labels(std::istream& in);

}  // namespace infosum
