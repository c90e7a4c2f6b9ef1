#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace infosum {

struct Token {
  std::string surface;
  std::string lower;  // casefold(surface)
  bool is_word = false;
  bool is_punct = false;
  // Byte range of the token inside the sentence text.
  std::size_t begin = 0;
  std::size_t end = 0;

  bool operator==(const Token&) const = default;
};

// Splits on Unicode whitespace; inside each chunk, every maximal run of
// punctuation characters is one punctuation token and every maximal run of
// other characters is one word token. An apostrophe with a word character
// on both sides stays inside the word ("We're").
std::vector<Token> tokenize(std::string_view text);

struct Sentence {
  std::size_t id = 0;
  std::string text;
  std::vector<Token> tokens;

  static Sentence make(std::size_t id, std::string text);

  std::size_t word_count() const noexcept;
  bool operator==(const Sentence&) const = default;
};

// Builds sentences with contiguous ids 0..n-1.
std::vector<Sentence> make_sentences(std::span<const std::string> texts);

std::size_t word_count(std::span<const Sentence> sentences) noexcept;

struct Document {
  std::string doc_id;
  std::string section;
  std::vector<Sentence> sentences;
  std::optional<std::vector<Sentence>> summary;

  bool has_summary() const noexcept { return summary.has_value() && !summary->empty(); }
  bool operator==(const Document&) const = default;
};

// Immutable document collection plus the document-frequency table over
// article word types (summaries are not counted).
class Corpus {
 public:
  Corpus() = default;
  explicit Corpus(std::vector<Document> documents);

  const std::vector<Document>& documents() const noexcept { return documents_; }
  std::size_t size() const noexcept { return documents_.size(); }
  bool empty() const noexcept { return documents_.empty(); }

  const Document* find(std::string_view doc_id) const;

  std::size_t document_frequency(std::string_view lower) const;

  // ln((1 + N) / (1 + df)) + 1. Unseen types get the df = 0 value.
  double idf(std::string_view lower) const;

  // Every observed type with its idf, ordered by type.
  std::map<std::string, double> idf_table() const;

  bool operator==(const Corpus& other) const { return documents_ == other.documents_; }

 private:
  std::vector<Document> documents_;
  std::unordered_map<std::string, std::size_t> index_;
  std::unordered_map<std::string, std::size_t> df_;
};

// Line-delimited JSON, one document per line:
//   {"doc_id": str, "section": str, "sentences": [str], "summary": [str]?}
// Unknown fields are ignored, blank lines skipped.
Corpus parse_corpus(std::istream& in);
Corpus load_corpus(const std::string& path);

void write_corpus(std::ostream& out, const Corpus& corpus);

}  // namespace infosum
