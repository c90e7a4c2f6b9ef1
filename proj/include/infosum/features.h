#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "infosum/corpus.h"
#include "infosum/lexicons.h"

namespace infosum {

enum class FeatureMode { dictionary, dictionary_no_general, bag_of_words };

std::string_view to_string(FeatureMode mode) noexcept;
FeatureMode parse_feature_mode(std::string_view text);

enum class BlockKind { scored, category, general, bag_of_words, dense };

struct FeatureBlock {
  std::string name;
  BlockKind kind = BlockKind::dense;
  std::size_t offset = 0;
  std::size_t width = 0;
  std::string lexicon;    // scored / category blocks
  std::string attribute;  // scored blocks

  bool operator==(const FeatureBlock&) const = default;
};

struct LexiconRef {
  std::string name;
  std::string kind;  // "scored" | "category"
  std::uint64_t hash = 0;

  bool operator==(const LexiconRef&) const = default;
};

inline constexpr std::size_t kGeneralWidth = 6;

// Fixed block structure of a feature vector. Two layouts with equal hash()
// produce interchangeable vectors; the hash covers block order, widths and
// the content hash of every lexicon involved.
class FeatureLayout {
 public:
  static constexpr int kVersion = 1;

  FeatureLayout() = default;

  // A single anonymous block of `dim` features, for data that is already
  // in feature space.
  static FeatureLayout dense(std::size_t dim);

  FeatureMode mode() const noexcept { return mode_; }
  const std::vector<FeatureBlock>& blocks() const noexcept { return blocks_; }
  const std::vector<LexiconRef>& lexicons() const noexcept { return lexicons_; }
  const std::vector<std::string>& vocabulary() const noexcept { return vocabulary_; }
  std::size_t total_dim() const noexcept { return total_dim_; }
  const FeatureBlock* find_block(std::string_view name) const;

  std::uint64_t hash() const noexcept { return hash_; }
  std::string hash_hex() const;

  // Canonical JSON text (sorted keys, no whitespace); hash() is over this.
  std::string to_json() const;
  static FeatureLayout from_json(std::string_view text);

  bool operator==(const FeatureLayout& o) const { return hash_ == o.hash_ && to_json() == o.to_json(); }

 private:
  friend class FeatureExtractor;
  void add_block(FeatureBlock block);
  void seal();

  FeatureMode mode_ = FeatureMode::dictionary;
  bool dense_ = false;
  std::vector<FeatureBlock> blocks_;
  std::vector<LexiconRef> lexicons_;
  std::vector<std::string> vocabulary_;
  std::size_t total_dim_ = 0;
  std::uint64_t hash_ = 0;
};

std::string hash_to_hex(std::uint64_t hash);
std::uint64_t hash_from_hex(std::string_view hex);

struct FeatureVector {
  std::uint64_t layout_hash = 0;
  std::vector<double> values;

  bool operator==(const FeatureVector&) const = default;
};

// Per-bin fraction of the sentence's word tokens whose score for
// `attribute` falls in that bin. Throws Error("empty-sentence") when the
// sentence has no word tokens.
std::vector<double> interval_fractions(const Sentence& sentence, const ScoredLexicon& lexicon,
                                       std::string_view attribute);

// Fraction of word tokens carrying each category; a word in several
// categories counts once in each. Throws Error("empty-sentence").
std::vector<double> category_histogram(const Sentence& sentence, const CategoryLexicon& lexicon);

// [tokens, punctuation tokens, has '!', has '?', has ':', has double quote]
std::array<double, kGeneralWidth> general_features(const Sentence& sentence);

// Word types with document frequency >= min_df over the corpus articles,
// sorted.
std::vector<std::string> build_vocabulary(const Corpus& corpus, std::size_t min_df = 2);

class FeatureExtractor {
 public:
  static FeatureExtractor dictionary(std::vector<ScoredLexicon> scored, std::vector<CategoryLexicon> category,
                                     bool include_general = true);
  static FeatureExtractor bag_of_words(std::vector<std::string> vocabulary);

  const FeatureLayout& layout() const noexcept { return layout_; }

  // Throws Error("empty-sentence") for sentences without word tokens.
  FeatureVector extract(const Sentence& sentence) const;

 private:
  FeatureLayout layout_;
  std::shared_ptr<const std::vector<ScoredLexicon>> scored_;
  std::shared_ptr<const std::vector<CategoryLexicon>> category_;
  std::shared_ptr<const std::unordered_map<std::string, std::size_t>> vocabulary_index_;
};

}  // namespace infosum
