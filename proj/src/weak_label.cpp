#include "infosum/weak_label.h"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <unordered_set>

#include "json.hpp"

#include "infosum/error.h"
#include "infosum/rng.h"
#include "infosum/text_util.h"

namespace infosum {

using nlohmann::json;

std::string_view to_string(LabelFlag flag) noexcept {
  switch (flag) {
    case LabelFlag::positive: return "positive";
    case LabelFlag::unlabeled: return "unlabeled";
    case LabelFlag::excluded: return "excluded";
  }
  return "excluded";
}

LabelFlag parse_label_flag(std::string_view text) {
  if (text == "positive") return LabelFlag::positive;
  if (text == "unlabeled") return LabelFlag::unlabeled;
  if (text == "excluded") return LabelFlag::excluded;
  throw Error("invalid-label", "unknown label flag '" + std::string(text) + "'");
}

void LabelConfig::validate() const {
  if (!(t_unl < t_pos))
    throw Error("invalid-config", "t_unl (" + format_double(t_unl) + ") must be below t_pos (" +
                                      format_double(t_pos) + ")");
  if (!(balance_ratio > 0.0)) throw Error("invalid-config", "balance_ratio must be positive");
}

IdfLookup idf_of(const Corpus& corpus) {
  return [&corpus](std::string_view t) { return corpus.idf(t); };
}

namespace {

std::set<std::string_view> word_types(const Sentence& s) {
  std::set<std::string_view> out;
  for (const auto& t : s.tokens)
    if (t.is_word) out.insert(t.lower);
  return out;
}

}  // namespace

double align_score(const Sentence& source, const Sentence& target, const IdfLookup& idf) {
  const auto a = word_types(source);
  const auto b = word_types(target);
  // Iterate the shared types in sorted order so the sum is order-independent.
  double score = 0.0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      score += idf(*ia);
      ++ia, ++ib;
    }
  }
  return score;
}

Alignment best_alignment(const Sentence& source, std::span<const Sentence> summary, const IdfLookup& idf) {
  if (summary.empty()) throw Error("empty-summary", "cannot align against an empty summary");
  Alignment best{0, align_score(source, summary[0], idf)};
  for (std::size_t i = 1; i < summary.size(); ++i) {
    const double s = align_score(source, summary[i], idf);
    if (s > best.score) best = {i, s};
  }
  return best;
}

std::vector<WeakLabel> label_by_alignment(const Document& doc, const LabelConfig& config, const IdfLookup& idf) {
  config.validate();
  if (!doc.has_summary())
    throw Error("missing-summary", "document '" + doc.doc_id + "' has no summary to align against");
  std::vector<WeakLabel> out;
  out.reserve(doc.sentences.size());
  for (const auto& s : doc.sentences) {
    const auto best = best_alignment(s, *doc.summary, idf);
    LabelFlag flag = LabelFlag::excluded;
    if (best.score > config.t_pos) flag = LabelFlag::positive;
    else if (best.score <= config.t_unl) flag = LabelFlag::unlabeled;
    out.push_back({doc.doc_id, s.id, flag, best.score});
  }
  return out;
}

std::vector<WeakLabel> label_by_extract(const Document& doc, std::span<const std::vector<std::size_t>> extracts) {
  std::vector<bool> chosen(doc.sentences.size(), false);
  for (const auto& extract : extracts) {
    for (auto id : extract) {
      if (id >= doc.sentences.size())
        throw Error("invalid-extract", "extract id " + std::to_string(id) + " out of range for document '" +
                                           doc.doc_id + "'");
      chosen[id] = true;
    }
  }
  std::vector<WeakLabel> out;
  out.reserve(doc.sentences.size());
  for (const auto& s : doc.sentences)
    out.push_back({doc.doc_id, s.id, chosen[s.id] ? LabelFlag::positive : LabelFlag::unlabeled, std::nullopt});
  return out;
}

std::vector<std::size_t> extract_ids_from_summary(const Document& doc) {
  auto key = [](const Sentence& s) {
    std::string k;
    for (const auto& t : s.tokens) {
      k += t.lower;
      k += '\x1f';
    }
    return k;
  };
  std::unordered_set<std::string> summary_keys;
  if (doc.summary)
    for (const auto& s : *doc.summary) summary_keys.insert(key(s));
  std::vector<std::size_t> ids;
  for (const auto& s : doc.sentences)
    if (summary_keys.count(key(s))) ids.push_back(s.id);
  return ids;
}

std::vector<WeakLabel> sample_unlabeled(std::span<const WeakLabel> labels, const LabelConfig& config) {
  config.validate();
  std::vector<std::size_t> pool;
  std::size_t positives = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i].flag == LabelFlag::positive) ++positives;
    if (labels[i].flag == LabelFlag::unlabeled) pool.push_back(i);
  }
  const auto target = static_cast<std::size_t>(std::llround(config.balance_ratio * static_cast<double>(positives)));
  std::vector<bool> keep(labels.size(), false);
  if (pool.size() <= target) {
    for (auto i : pool) keep[i] = true;
  } else {
    Rng rng(config.seed);
    rng.shuffle(pool);
    for (std::size_t k = 0; k < target; ++k) keep[pool[k]] = true;
  }
  std::vector<WeakLabel> out;
  out.reserve(positives + std::min(target, pool.size()));
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i].flag == LabelFlag::positive || keep[i]) out.push_back(labels[i]);
  return out;
}

LabelCounts count_labels(std::span<const WeakLabel> labels) noexcept {
  LabelCounts c;
  for (const auto& l : labels) {
    switch (l.flag) {
      case LabelFlag::positive: ++c.positive; break;
      case LabelFlag::unlabeled: ++c.unlabeled; break;
      case LabelFlag::excluded: ++c.excluded; break;
    }
  }
  return c;
}

void write_labels(std::ostream& out, std::span<const WeakLabel> labels) {
  for (const auto& l : labels) {
    json j{{"doc_id", l.doc_id}, {"sentence_id", l.sentence_id}, {"flag", to_string(l.flag)}};
    j["align_score"] = l.align_score ? json(*l.align_score) : json(nullptr);
    out << j.dump() << '\n';
  }
}

std::vector<WeakLabel> read_labels(std::istream& in) {
  std::vector<WeakLabel> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    try {
      const auto j = json::parse(line);
      WeakLabel l;
      l.doc_id = j.at("doc_id").get<std::string>();
      l.sentence_id = j.at("sentence_id").get<std::size_t>();
      l.flag = parse_label_flag(j.at("flag").get<std::string>());
      if (const auto it = j.find("align_score"); it != j.end() && !it->is_null()) l.align_score = it->get<double>();
      out.push_back(std::move(l));
    } catch (const json::exception& e) {
      throw ParseError(line_no, std::string("malformed label record: ") + e.what());
    } catch (const Error& e) {
      throw ParseError(line_no, e.what());
    }
  }
  return out;
}

}  // namespace infosum
