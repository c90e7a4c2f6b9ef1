#include "infosum/corpus.h"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>

#include "json.hpp"

#include "infosum/error.h"
#include "infosum/unicode.h"

namespace infosum {

using nlohmann::json;

std::vector<Token> tokenize(std::string_view text) {
  struct Unit {
    std::size_t begin;
    std::size_t end;
    bool punct;
  };

  std::vector<Token> tokens;
  std::vector<Unit> chunk;

  auto flush = [&] {
    // An apostrophe flanked by non-punctuation on both sides is part of a word.
    for (std::size_t i = 1; i + 1 < chunk.size(); ++i) {
      if (!chunk[i].punct) continue;
      const auto cp = unicode::decode(text, chunk[i].begin).cp;
      if (unicode::is_apostrophe(cp) && !chunk[i - 1].punct && !chunk[i + 1].punct)
        chunk[i].punct = false;
    }
    std::size_t i = 0;
    while (i < chunk.size()) {
      std::size_t j = i;
      while (j + 1 < chunk.size() && chunk[j + 1].punct == chunk[i].punct) ++j;
      Token t;
      t.begin = chunk[i].begin;
      t.end = chunk[j].end;
      t.surface = std::string(text.substr(t.begin, t.end - t.begin));
      t.lower = unicode::casefold(t.surface);
      t.is_punct = chunk[i].punct;
      t.is_word = !t.is_punct;
      tokens.push_back(std::move(t));
      i = j + 1;
    }
    chunk.clear();
  };

  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto [cp, len] = unicode::decode(text, pos);
    if (unicode::is_space(cp)) {
      flush();
    } else {
      chunk.push_back({pos, pos + len, unicode::is_punctuation(cp)});
    }
    pos += len;
  }
  flush();
  return tokens;
}

Sentence Sentence::make(std::size_t id, std::string text) {
  Sentence s;
  s.id = id;
  s.tokens = tokenize(text);
  s.text = std::move(text);
  return s;
}

std::size_t Sentence::word_count() const noexcept {
  std::size_t n = 0;
  for (const auto& t : tokens) n += t.is_word ? 1 : 0;
  return n;
}

std::vector<Sentence> make_sentences(std::span<const std::string> texts) {
  std::vector<Sentence> out;
  out.reserve(texts.size());
  for (std::size_t i = 0; i < texts.size(); ++i) out.push_back(Sentence::make(i, texts[i]));
  return out;
}

std::size_t word_count(std::span<const Sentence> sentences) noexcept {
  std::size_t n = 0;
  for (const auto& s : sentences) n += s.word_count();
  return n;
}

Corpus::Corpus(std::vector<Document> documents) : documents_(std::move(documents)) {
  for (std::size_t i = 0; i < documents_.size(); ++i) {
    const auto& doc = documents_[i];
    if (!index_.emplace(doc.doc_id, i).second)
      throw Error("duplicate-doc-id", "duplicate doc_id '" + doc.doc_id + "'");
    std::set<std::string_view> types;
    for (const auto& s : doc.sentences)
      for (const auto& t : s.tokens)
        if (t.is_word) types.insert(t.lower);
    for (auto t : types) ++df_[std::string(t)];
  }
}

const Document* Corpus::find(std::string_view doc_id) const {
  const auto it = index_.find(std::string(doc_id));
  return it == index_.end() ? nullptr : &documents_[it->second];
}

std::size_t Corpus::document_frequency(std::string_view lower) const {
  const auto it = df_.find(std::string(lower));
  return it == df_.end() ? 0 : it->second;
}

double Corpus::idf(std::string_view lower) const {
  const double n = static_cast<double>(documents_.size());
  const double df = static_cast<double>(document_frequency(lower));
  return std::log((1.0 + n) / (1.0 + df)) + 1.0;
}

std::map<std::string, double> Corpus::idf_table() const {
  std::map<std::string, double> out;
  for (const auto& [type, df] : df_) out.emplace(type, idf(type));
  return out;
}

namespace {

std::vector<std::string> string_array(const json& j, const char* field, std::size_t line) {
  if (!j.is_array()) throw ParseError(line, std::string("field '") + field + "' must be an array of strings");
  std::vector<std::string> out;
  out.reserve(j.size());
  for (const auto& item : j) {
    if (!item.is_string())
      throw ParseError(line, std::string("field '") + field + "' must contain only strings");
    out.push_back(item.get<std::string>());
  }
  return out;
}

Document parse_document(const std::string& text, std::size_t line) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(line, std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw ParseError(line, "record must be a JSON object");

  Document doc;
  const auto id = j.find("doc_id");
  if (id == j.end() || !id->is_string()) throw ParseError(line, "missing string field 'doc_id'");
  doc.doc_id = id->get<std::string>();

  const auto section = j.find("section");
  if (section != j.end()) {
    if (!section->is_string()) throw ParseError(line, "field 'section' must be a string");
    doc.section = section->get<std::string>();
  }

  const auto sentences = j.find("sentences");
  if (sentences == j.end()) throw ParseError(line, "missing field 'sentences'");
  const auto texts = string_array(*sentences, "sentences", line);
  if (texts.empty()) throw ParseError(line, "document '" + doc.doc_id + "' has no sentences");
  doc.sentences = make_sentences(texts);

  const auto summary = j.find("summary");
  if (summary != j.end() && !summary->is_null())
    doc.summary = make_sentences(string_array(*summary, "summary", line));
  return doc;
}

}  // namespace

Corpus parse_corpus(std::istream& in) {
  std::vector<Document> docs;
  std::set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto doc = parse_document(line, line_no);
    if (!seen.insert(doc.doc_id).second)
      throw ParseError(line_no, "duplicate doc_id '" + doc.doc_id + "'");
    docs.push_back(std::move(doc));
  }
  return Corpus(std::move(docs));
}

Corpus load_corpus(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("io", "cannot open corpus '" + path + "'");
  return parse_corpus(in);
}

void write_corpus(std::ostream& out, const Corpus& corpus) {
  for (const auto& doc : corpus.documents()) {
    json j;
    j["doc_id"] = doc.doc_id;
    j["section"] = doc.section;
    auto& sentences = j["sentences"] = json::array();
    for (const auto& s : doc.sentences) sentences.push_back(s.text);
    if (doc.summary) {
      auto& summary = j["summary"] = json::array();
      for (const auto& s : *doc.summary) summary.push_back(s.text);
    }
    out << j.dump() << '\n';
  }
}

}  // namespace infosum
