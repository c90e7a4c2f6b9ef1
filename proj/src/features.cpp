#include "infosum/features.h"

#include <algorithm>
#include <set>

#include "json.hpp"

#include "infosum/error.h"
#include "infosum/hash.h"

namespace infosum {

using nlohmann::json;

std::string_view to_string(FeatureMode mode) noexcept {
  switch (mode) {
    case FeatureMode::dictionary: return "dictionary";
    case FeatureMode::dictionary_no_general: return "dictionary-no-general";
    case FeatureMode::bag_of_words: return "bow";
  }
  return "dictionary";
}

FeatureMode parse_feature_mode(std::string_view text) {
  if (text == "dictionary") return FeatureMode::dictionary;
  if (text == "dictionary-no-general") return FeatureMode::dictionary_no_general;
  if (text == "bow") return FeatureMode::bag_of_words;
  throw Error("invalid-config", "unknown feature mode '" + std::string(text) + "'");
}

namespace {

std::string_view kind_name(BlockKind kind) {
  switch (kind) {
    case BlockKind::scored: return "scored";
    case BlockKind::category: return "category";
    case BlockKind::general: return "general";
    case BlockKind::bag_of_words: return "bow";
    case BlockKind::dense: return "dense";
  }
  return "dense";
}

BlockKind parse_kind(std::string_view text) {
  if (text == "scored") return BlockKind::scored;
  if (text == "category") return BlockKind::category;
  if (text == "general") return BlockKind::general;
  if (text == "bow") return BlockKind::bag_of_words;
  if (text == "dense") return BlockKind::dense;
  throw Error("invalid-layout", "unknown block kind '" + std::string(text) + "'");
}

void require_words(const Sentence& sentence, std::size_t words) {
  if (words == 0)
    throw Error("empty-sentence", "sentence " + std::to_string(sentence.id) + " has no word tokens");
}

void fill_fractions(const Sentence& sentence, const ScoredLexicon& lexicon, std::size_t attribute,
                    double* out) {
  const auto words = sentence.word_count();
  require_words(sentence, words);
  const auto range = lexicon.range(attribute);
  const double unit = 1.0 / static_cast<double>(words);
  for (const auto& t : sentence.tokens) {
    if (!t.is_word) continue;
    if (const auto s = lexicon.score(t.lower, attribute)) out[bin_index(*s, range, lexicon.bins())] += unit;
  }
}

void fill_histogram(const Sentence& sentence, const CategoryLexicon& lexicon, double* out) {
  const auto words = sentence.word_count();
  require_words(sentence, words);
  const double unit = 1.0 / static_cast<double>(words);
  for (const auto& t : sentence.tokens) {
    if (!t.is_word) continue;
    for (auto c : lexicon.lookup_folded(t.lower)) out[c] += unit;
  }
}

}  // namespace

std::string hash_to_hex(std::uint64_t hash) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i, hash >>= 4) out[static_cast<std::size_t>(i)] = kDigits[hash & 0xF];
  return out;
}

std::uint64_t hash_from_hex(std::string_view hex) {
  if (hex.size() != 16) throw Error("invalid-hash", "hash must be 16 hex digits");
  std::uint64_t out = 0;
  for (char c : hex) {
    int d = 0;
    if (c >= '0' && c <= '9') d = c - '0';
    else if (c >= 'a' && c <= 'f') d = c - 'a' + 10;
    else throw Error("invalid-hash", "hash must be lowercase hex");
    out = (out << 4) | static_cast<std::uint64_t>(d);
  }
  return out;
}

FeatureLayout FeatureLayout::dense(std::size_t dim) {
  FeatureLayout layout;
  layout.dense_ = true;
  layout.add_block({"dense", BlockKind::dense, 0, dim, "", ""});
  layout.seal();
  return layout;
}

const FeatureBlock* FeatureLayout::find_block(std::string_view name) const {
  for (const auto& b : blocks_)
    if (b.name == name) return &b;
  return nullptr;
}

std::string FeatureLayout::hash_hex() const { return hash_to_hex(hash_); }

void FeatureLayout::add_block(FeatureBlock block) {
  block.offset = total_dim_;
  total_dim_ += block.width;
  blocks_.push_back(std::move(block));
}

void FeatureLayout::seal() { hash_ = fnv1a(to_json()); }

std::string FeatureLayout::to_json() const {
  json j;
  j["version"] = kVersion;
  j["mode"] = dense_ ? std::string("dense") : std::string(to_string(mode_));
  j["total_dim"] = total_dim_;
  auto& blocks = j["blocks"] = json::array();
  for (const auto& b : blocks_) {
    json jb{{"name", b.name}, {"kind", kind_name(b.kind)}, {"offset", b.offset}, {"width", b.width}};
    if (!b.lexicon.empty()) jb["lexicon"] = b.lexicon;
    if (!b.attribute.empty()) jb["attribute"] = b.attribute;
    blocks.push_back(std::move(jb));
  }
  auto& lexicons = j["lexicons"] = json::array();
  for (const auto& l : lexicons_)
    lexicons.push_back({{"name", l.name}, {"kind", l.kind}, {"hash", hash_to_hex(l.hash)}});
  j["vocabulary"] = vocabulary_;
  return j.dump();
}

FeatureLayout FeatureLayout::from_json(std::string_view text) {
  try {
    const auto j = json::parse(text);
    if (j.at("version").get<int>() != kVersion)
      throw Error("version-mismatch", "unsupported layout version " + j.at("version").dump());
    FeatureLayout layout;
    const auto mode = j.at("mode").get<std::string>();
    if (mode == "dense") layout.dense_ = true;
    else layout.mode_ = parse_feature_mode(mode);
    for (const auto& jb : j.at("blocks")) {
      FeatureBlock b;
      b.name = jb.at("name").get<std::string>();
      b.kind = parse_kind(jb.at("kind").get<std::string>());
      b.width = jb.at("width").get<std::size_t>();
      b.lexicon = jb.value("lexicon", "");
      b.attribute = jb.value("attribute", "");
      const auto offset = jb.at("offset").get<std::size_t>();
      layout.add_block(std::move(b));
      if (layout.blocks_.back().offset != offset)
        throw Error("invalid-layout", "blocks are not contiguous at '" + layout.blocks_.back().name + "'");
    }
    for (const auto& jl : j.at("lexicons"))
      layout.lexicons_.push_back({jl.at("name").get<std::string>(), jl.at("kind").get<std::string>(),
                                  hash_from_hex(jl.at("hash").get<std::string>())});
    layout.vocabulary_ = j.at("vocabulary").get<std::vector<std::string>>();
    if (j.at("total_dim").get<std::size_t>() != layout.total_dim_)
      throw Error("invalid-layout", "total_dim does not match block widths");
    layout.seal();
    return layout;
  } catch (const json::exception& e) {
    throw Error("invalid-layout", std::string("malformed layout: ") + e.what());
  }
}

std::vector<double> interval_fractions(const Sentence& sentence, const ScoredLexicon& lexicon,
                                       std::string_view attribute) {
  const auto idx = lexicon.attribute_index(attribute);
  if (!idx) throw Error("unknown-attribute", "lexicon '" + lexicon.name() + "' has no attribute '" +
                                                 std::string(attribute) + "'");
  std::vector<double> out(lexicon.bins(), 0.0);
  fill_fractions(sentence, lexicon, *idx, out.data());
  return out;
}

std::vector<double> category_histogram(const Sentence& sentence, const CategoryLexicon& lexicon) {
  std::vector<double> out(lexicon.categories().size(), 0.0);
  fill_histogram(sentence, lexicon, out.data());
  return out;
}

std::array<double, kGeneralWidth> general_features(const Sentence& sentence) {
  std::array<double, kGeneralWidth> out{};
  out[0] = static_cast<double>(sentence.tokens.size());
  for (const auto& t : sentence.tokens) out[1] += t.is_punct ? 1.0 : 0.0;
  const std::string_view text = sentence.text;
  auto has = [&](std::string_view needle) { return text.find(needle) != std::string_view::npos; };
  out[2] = has("!") ? 1.0 : 0.0;
  out[3] = has("?") ? 1.0 : 0.0;
  out[4] = has(":") ? 1.0 : 0.0;
  out[5] = (has("\"") || has("“") || has("”") || has("''") || has("``")) ? 1.0 : 0.0;
  return out;
}

std::vector<std::string> build_vocabulary(const Corpus& corpus, std::size_t min_df) {
  std::set<std::string> types;
  for (const auto& doc : corpus.documents())
    for (const auto& s : doc.sentences)
      for (const auto& t : s.tokens)
        if (t.is_word && corpus.document_frequency(t.lower) >= min_df) types.insert(t.lower);
  return {types.begin(), types.end()};
}

FeatureExtractor FeatureExtractor::dictionary(std::vector<ScoredLexicon> scored,
                                              std::vector<CategoryLexicon> category, bool include_general) {
  FeatureExtractor fx;
  auto& layout = fx.layout_;
  layout.mode_ = include_general ? FeatureMode::dictionary : FeatureMode::dictionary_no_general;

  std::set<std::string> names;
  auto claim = [&names](const std::string& name) {
    if (!names.insert(name).second) throw Error("invalid-layout", "duplicate lexicon name '" + name + "'");
  };
  for (const auto& lex : scored) {
    claim(lex.name());
    layout.lexicons_.push_back({lex.name(), "scored", lex.content_hash()});
    for (const auto& attr : lex.attributes())
      layout.add_block({lex.name() + "/" + attr, BlockKind::scored, 0, lex.bins(), lex.name(), attr});
  }
  for (const auto& lex : category) {
    claim(lex.name());
    layout.lexicons_.push_back({lex.name(), "category", lex.content_hash()});
    layout.add_block({lex.name(), BlockKind::category, 0, lex.categories().size(), lex.name(), ""});
  }
  if (include_general) layout.add_block({"general", BlockKind::general, 0, kGeneralWidth, "", ""});
  if (layout.total_dim_ == 0) throw Error("invalid-layout", "feature layout is empty");
  layout.seal();

  fx.scored_ = std::make_shared<const std::vector<ScoredLexicon>>(std::move(scored));
  fx.category_ = std::make_shared<const std::vector<CategoryLexicon>>(std::move(category));
  return fx;
}

FeatureExtractor FeatureExtractor::bag_of_words(std::vector<std::string> vocabulary) {
  std::sort(vocabulary.begin(), vocabulary.end());
  vocabulary.erase(std::unique(vocabulary.begin(), vocabulary.end()), vocabulary.end());
  if (vocabulary.empty()) throw Error("invalid-layout", "bag-of-words vocabulary is empty");

  FeatureExtractor fx;
  auto& layout = fx.layout_;
  layout.mode_ = FeatureMode::bag_of_words;
  layout.add_block({"bow", BlockKind::bag_of_words, 0, vocabulary.size(), "", ""});
  auto index = std::make_shared<std::unordered_map<std::string, std::size_t>>();
  for (std::size_t i = 0; i < vocabulary.size(); ++i) index->emplace(vocabulary[i], i);
  layout.vocabulary_ = std::move(vocabulary);
  layout.seal();
  fx.vocabulary_index_ = std::move(index);
  return fx;
}

FeatureVector FeatureExtractor::extract(const Sentence& sentence) const {
  require_words(sentence, sentence.word_count());
  FeatureVector fv{layout_.hash(), std::vector<double>(layout_.total_dim(), 0.0)};

  if (layout_.mode() == FeatureMode::bag_of_words) {
    for (const auto& t : sentence.tokens) {
      if (!t.is_word) continue;
      if (const auto it = vocabulary_index_->find(t.lower); it != vocabulary_index_->end())
        fv.values[it->second] += 1.0;
    }
    return fv;
  }

  std::size_t scored_lex = 0;
  std::size_t scored_attr = 0;
  std::size_t category_lex = 0;
  for (const auto& block : layout_.blocks()) {
    double* out = fv.values.data() + block.offset;
    switch (block.kind) {
      case BlockKind::scored: {
        const auto& lex = (*scored_)[scored_lex];
        fill_fractions(sentence, lex, scored_attr, out);
        if (++scored_attr == lex.attributes().size()) ++scored_lex, scored_attr = 0;
        break;
      }
      case BlockKind::category:
        fill_histogram(sentence, (*category_)[category_lex++], out);
        break;
      case BlockKind::general: {
        const auto g = general_features(sentence);
        std::copy(g.begin(), g.end(), out);
        break;
      }
      default:
        break;
    }
  }
  return fv;
}

}  // namespace infosum
