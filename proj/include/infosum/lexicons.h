#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace infosum {

inline constexpr std::size_t kDefaultBins = 230;

struct ScoreRange {
  double min = 0.0;
  double max = 0.0;

  bool contains(double x) const noexcept { return x >= min && x <= max; }
  bool operator==(const ScoreRange&) const = default;
};

// Uniform-width interval index of `score` within `range`, clamped to
// [0, bins). A degenerate range (min >= max) maps everything to bin 0.
std::size_t bin_index(double score, ScoreRange range, std::size_t bins) noexcept;

// Word -> per-attribute real score (MRC style).
//
// File format (UTF-8):
//   #scored <name> attr1,...,attrK [attr:min:max ...]
//   word<TAB>attribute<TAB>score
// Other '#' lines are comments. Attribute ranges not declared in the header
// are taken from the observed scores. Repeated (word, attribute) rows: the
// last one wins.
class ScoredLexicon {
 public:
  ScoredLexicon() = default;

  const std::string& name() const noexcept { return name_; }
  const std::vector<std::string>& attributes() const noexcept { return attributes_; }
  std::size_t bins() const noexcept { return bins_; }
  std::size_t size() const noexcept { return entries_.size(); }

  std::optional<std::size_t> attribute_index(std::string_view attribute) const;
  ScoreRange range(std::size_t attribute) const { return ranges_.at(attribute); }

  // `word` must already be casefolded (Token::lower).
  std::optional<double> score(std::string_view word, std::size_t attribute) const;

  std::uint64_t content_hash() const;

 private:
  friend ScoredLexicon load_scored_lexicon(std::istream&, std::size_t);

  std::string name_;
  std::vector<std::string> attributes_;
  std::vector<ScoreRange> ranges_;
  std::unordered_map<std::string, std::vector<std::optional<double>>> entries_;
  std::size_t bins_ = kDefaultBins;
};

ScoredLexicon load_scored_lexicon(std::istream& in, std::size_t bins = kDefaultBins);
ScoredLexicon load_scored_lexicon(const std::string& path, std::size_t bins = kDefaultBins);

// Word -> set of categories (LIWC / General Inquirer style).
//
// File format (UTF-8):
//   #categories <name> cat1,...,catK
//   word<TAB>cat1,cat2,...
// A word ending in '*' is a prefix pattern. Lookup returns the union of the
// exact entry and every matching prefix pattern.
class CategoryLexicon {
 public:
  CategoryLexicon() = default;

  const std::string& name() const noexcept { return name_; }
  const std::vector<std::string>& categories() const noexcept { return categories_; }
  std::size_t size() const noexcept { return exact_.size() + prefixes_.size(); }

  std::optional<std::size_t> category_index(std::string_view category) const;

  // Sorted, duplicate-free category indices. Casefolds `word` first.
  std::vector<std::size_t> lookup(std::string_view word) const;
  // Same, for a word that is already casefolded.
  std::vector<std::size_t> lookup_folded(std::string_view word) const;

  std::uint64_t content_hash() const;

 private:
  friend CategoryLexicon load_category_lexicon(std::istream&);

  std::string name_;
  std::vector<std::string> categories_;
  std::unordered_map<std::string, std::vector<std::size_t>> exact_;
  std::unordered_map<std::string, std::vector<std::size_t>> prefixes_;
  std::size_t longest_prefix_ = 0;
};

CategoryLexicon load_category_lexicon(std::istream& in);
CategoryLexicon load_category_lexicon(const std::string& path);

}  // namespace infosum
