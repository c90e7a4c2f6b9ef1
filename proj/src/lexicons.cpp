#include "infosum/lexicons.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <set>

#include "infosum/error.h"
#include "infosum/hash.h"
#include "infosum/text_util.h"
#include "infosum/unicode.h"

namespace infosum {

std::size_t bin_index(double score, ScoreRange range, std::size_t bins) noexcept {
  if (bins <= 1 || !(range.min < range.max)) return 0;
  const double t = std::floor((score - range.min) / (range.max - range.min) * static_cast<double>(bins));
  if (!(t > 0.0)) return 0;  // also catches NaN
  if (t >= static_cast<double>(bins - 1)) return bins - 1;
  return static_cast<std::size_t>(t);
}

namespace {

// Splits a header line "#<kind> <name> rest..." into its whitespace fields.
std::vector<std::string> header_fields(std::string_view line) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    if (j > i) out.emplace_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

}  // namespace

std::optional<std::size_t> ScoredLexicon::attribute_index(std::string_view attribute) const {
  for (std::size_t i = 0; i < attributes_.size(); ++i)
    if (attributes_[i] == attribute) return i;
  return std::nullopt;
}

std::optional<double> ScoredLexicon::score(std::string_view word, std::size_t attribute) const {
  const auto it = entries_.find(std::string(word));
  if (it == entries_.end()) return std::nullopt;
  return it->second.at(attribute);
}

std::uint64_t ScoredLexicon::content_hash() const {
  Fnv1a h;
  h.update("scored\n" + name_ + "\n" + std::to_string(bins_) + "\n");
  for (std::size_t a = 0; a < attributes_.size(); ++a)
    h.update(attributes_[a] + ":" + format_double17(ranges_[a].min) + ":" + format_double17(ranges_[a].max) + "\n");
  std::map<std::string_view, const std::vector<std::optional<double>>*> sorted;
  for (const auto& [w, s] : entries_) sorted.emplace(w, &s);
  for (const auto& [word, scores] : sorted) {
    h.update(word);
    for (const auto& s : *scores) h.update(s ? "\t" + format_double17(*s) : std::string("\t-"));
    h.update("\n");
  }
  return h.digest();
}

ScoredLexicon load_scored_lexicon(std::istream& in, std::size_t bins) {
  if (bins == 0) throw Error("invalid-lexicon", "scored lexicon needs at least one bin");
  ScoredLexicon lex;
  lex.bins_ = bins;
  std::vector<bool> declared;
  bool have_header = false;

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (trim(line).empty()) continue;
    if (line.front() == '#') {
      if (have_header || line.rfind("#scored", 0) != 0) continue;
      const auto fields = header_fields(line);
      if (fields.size() < 3 || fields[0] != "#scored")
        throw ParseError(line_no, "header must be '#scored <name> attr1,...,attrK [attr:min:max ...]'");
      lex.name_ = fields[1];
      for (auto a : split(fields[2], ',')) {
        if (a.empty()) throw ParseError(line_no, "empty attribute name");
        if (lex.attribute_index(a)) throw ParseError(line_no, "duplicate attribute '" + std::string(a) + "'");
        lex.attributes_.emplace_back(a);
      }
      lex.ranges_.assign(lex.attributes_.size(), ScoreRange{});
      declared.assign(lex.attributes_.size(), false);
      for (std::size_t f = 3; f < fields.size(); ++f) {
        const auto parts = split(fields[f], ':');
        if (parts.size() != 3) throw ParseError(line_no, "range must be attr:min:max, got '" + fields[f] + "'");
        const auto idx = lex.attribute_index(parts[0]);
        if (!idx) throw ParseError(line_no, "range for unknown attribute '" + std::string(parts[0]) + "'");
        const auto lo = parse_double(parts[1]);
        const auto hi = parse_double(parts[2]);
        if (!lo || !hi || !(*lo < *hi)) throw ParseError(line_no, "invalid range '" + fields[f] + "'");
        lex.ranges_[*idx] = {*lo, *hi};
        declared[*idx] = true;
      }
      have_header = true;
      continue;
    }
    if (!have_header) throw ParseError(line_no, "data row before '#scored' header");

    const auto cols = split(line, '\t');
    if (cols.size() != 3) throw ParseError(line_no, "expected word<TAB>attribute<TAB>score");
    const auto word = unicode::casefold(trim(cols[0]));
    if (word.empty()) throw ParseError(line_no, "empty word");
    const auto attr = lex.attribute_index(trim(cols[1]));
    if (!attr) throw ParseError(line_no, "unknown attribute '" + std::string(trim(cols[1])) + "'");
    const auto value = parse_double(cols[2]);
    if (!value) throw ParseError(line_no, "non-numeric score '" + std::string(cols[2]) + "'");
    if (declared[*attr] && !lex.ranges_[*attr].contains(*value))
      throw ParseError(line_no, "score " + std::string(trim(cols[2])) + " outside declared range of '" +
                                    lex.attributes_[*attr] + "'");
    auto& scores = lex.entries_[word];
    scores.resize(lex.attributes_.size());
    scores[*attr] = *value;
  }
  if (!have_header) {
    if (line_no == 0) throw Error("invalid-lexicon", "empty scored lexicon stream");
    throw ParseError(line_no, "missing '#scored' header");
  }

  for (std::size_t a = 0; a < lex.attributes_.size(); ++a) {
    if (declared[a]) continue;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& [w, scores] : lex.entries_) {
      if (!scores[a]) continue;
      lo = std::min(lo, *scores[a]);
      hi = std::max(hi, *scores[a]);
    }
    lex.ranges_[a] = lo <= hi ? ScoreRange{lo, hi} : ScoreRange{};
  }
  return lex;
}

ScoredLexicon load_scored_lexicon(const std::string& path, std::size_t bins) {
  std::ifstream in(path);
  if (!in) throw Error("io", "cannot open lexicon '" + path + "'");
  return load_scored_lexicon(in, bins);
}

std::optional<std::size_t> CategoryLexicon::category_index(std::string_view category) const {
  for (std::size_t i = 0; i < categories_.size(); ++i)
    if (categories_[i] == category) return i;
  return std::nullopt;
}

std::vector<std::size_t> CategoryLexicon::lookup(std::string_view word) const {
  return lookup_folded(unicode::casefold(word));
}

std::vector<std::size_t> CategoryLexicon::lookup_folded(std::string_view word) const {
  std::vector<std::size_t> out;
  if (const auto it = exact_.find(std::string(word)); it != exact_.end()) out = it->second;
  const auto max_len = std::min(word.size(), longest_prefix_);
  std::string prefix;
  for (std::size_t len = 1; len <= max_len; ++len) {
    prefix.assign(word.substr(0, len));
    if (const auto it = prefixes_.find(prefix); it != prefixes_.end())
      out.insert(out.end(), it->second.begin(), it->second.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::uint64_t CategoryLexicon::content_hash() const {
  Fnv1a h;
  h.update("categories\n" + name_ + "\n");
  for (const auto& c : categories_) h.update(c + "\n");
  auto emit = [&h](const auto& table, std::string_view marker) {
    std::map<std::string_view, const std::vector<std::size_t>*> sorted;
    for (const auto& [w, cats] : table) sorted.emplace(w, &cats);
    for (const auto& [w, cats] : sorted) {
      h.update(w);
      h.update(marker);
      for (auto c : *cats) h.update("\t" + std::to_string(c));
      h.update("\n");
    }
  };
  emit(exact_, "");
  emit(prefixes_, "*");
  return h.digest();
}

CategoryLexicon load_category_lexicon(std::istream& in) {
  CategoryLexicon lex;
  bool have_header = false;
  std::map<std::string, std::set<std::size_t>> exact;
  std::map<std::string, std::set<std::size_t>> prefixes;

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (trim(line).empty()) continue;
    if (line.front() == '#') {
      if (have_header || line.rfind("#categories", 0) != 0) continue;
      const auto fields = header_fields(line);
      if (fields.size() != 3 || fields[0] != "#categories")
        throw ParseError(line_no, "header must be '#categories <name> cat1,...,catK'");
      lex.name_ = fields[1];
      for (auto c : split(fields[2], ',')) {
        if (c.empty()) throw ParseError(line_no, "empty category name");
        if (lex.category_index(c)) throw ParseError(line_no, "duplicate category '" + std::string(c) + "'");
        lex.categories_.emplace_back(c);
      }
      have_header = true;
      continue;
    }
    if (!have_header) throw ParseError(line_no, "data row before '#categories' header");

    const auto cols = split(line, '\t');
    if (cols.size() != 2) throw ParseError(line_no, "expected word<TAB>cat1,cat2,...");
    auto word = unicode::casefold(trim(cols[0]));
    const bool wildcard = !word.empty() && word.back() == '*';
    if (wildcard) word.pop_back();
    if (word.empty()) throw ParseError(line_no, "empty word");
    auto& cats = (wildcard ? prefixes : exact)[word];
    for (auto c : split(cols[1], ',')) {
      c = trim(c);
      if (c.empty()) continue;
      const auto idx = lex.category_index(c);
      if (!idx) throw ParseError(line_no, "unknown category '" + std::string(c) + "'");
      cats.insert(*idx);
    }
  }
  if (!have_header) {
    if (line_no == 0) throw Error("invalid-lexicon", "empty category lexicon stream");
    throw ParseError(line_no, "missing '#categories' header");
  }

  for (auto& [w, cats] : exact) lex.exact_.emplace(w, std::vector<std::size_t>(cats.begin(), cats.end()));
  for (auto& [w, cats] : prefixes) {
    lex.prefixes_.emplace(w, std::vector<std::size_t>(cats.begin(), cats.end()));
    lex.longest_prefix_ = std::max(lex.longest_prefix_, w.size());
  }
  return lex;
}

CategoryLexicon load_category_lexicon(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("io", "cannot open lexicon '" + path + "'");
  return load_category_lexicon(in);
}

}  // namespace infosum
