#include "infosum/synth.h"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <sstream>

#include "infosum/hash.h"
#include "infosum/rng.h"
#include "infosum/text_util.h"

namespace infosum::synth {

GaussianData gaussian_pu(const GaussianSpec& spec) {
  GaussianData out;
  out.layout = FeatureLayout::dense(spec.dim);
  Rng rng(spec.seed);
  for (std::size_t i = 0; i < spec.count; ++i) {
    const int y = rng.bernoulli(spec.positive_prior) ? 1 : 0;
    FeatureVector fv{out.layout.hash(), std::vector<double>(spec.dim)};
    for (auto& v : fv.values) v = rng.normal();
    fv.values[0] += (y ? 0.5 : -0.5) * spec.separation;
    const bool labeled = y == 1 && rng.bernoulli(spec.label_frequency);
    out.examples.push_back({std::move(fv), labeled, 1.0});
    out.truth.push_back(y);
  }
  return out;
}

namespace {

constexpr std::array kFunction = {"the", "a",    "of",  "to",   "in",    "and",  "that", "for", "on",
                                  "with", "as",  "at",  "by",   "from",  "its",  "was",  "is",  "has",
                                  "will", "said", "this", "after", "over", "than", "an",   "it"};

constexpr std::array kInformative = {
    "company",  "profit",    "shares",   "revenue",    "quarter",   "billion",   "million",  "percent",
    "market",   "investors", "merger",   "earnings",   "sales",     "stock",     "dividend", "acquisition",
    "bank",     "loan",      "debt",     "bonds",      "factory",   "workers",   "contract", "budget",
    "chairman", "executive", "board",    "regulators", "lawsuit",   "settlement", "tariff",  "exports",
    "imports",  "prices",    "interest", "rates",      "inflation", "growth",    "forecast", "analysts",
    "deal",     "offer",     "bid",      "unit",       "plant",     "layoffs",   "investment", "investing",
    "fund",     "assets",    "capital",  "trading",    "index",     "results",   "agreed",   "announced",
    "reported", "rose",      "fell",     "cut"};

constexpr std::array kFiller = {"perhaps", "maybe",  "wonder",   "imagine",  "really",  "feel",     "think",
                                "something", "somehow", "never", "always",   "ever",    "quite",    "just",
                                "everyone", "nobody",  "story",  "moment",   "strange", "familiar", "different",
                                "again",    "insist",  "remember", "seems",  "sort",    "kind",     "thing",
                                "happy",    "happily", "wonderful", "afraid", "hope",   "believe",  "whatever"};

constexpr std::array kSyllables = {"ka", "lo", "ven", "tor", "mi", "zan", "dra", "pel", "qui", "rus",
                                   "sol", "bex", "nor", "tav", "gri", "hul", "jem", "ox",  "wyn", "cor"};

std::string entity(Rng& rng) {
  std::string name;
  const auto parts = 2 + rng.below(2);
  for (std::uint64_t i = 0; i < parts; ++i) name += kSyllables[rng.below(kSyllables.size())];
  name[0] = static_cast<char>(name[0] - 'a' + 'A');
  return name;
}

template <typename Pool>
std::string pick(Rng& rng, const Pool& pool) {
  return pool[rng.below(pool.size())];
}

std::string join(const std::vector<std::string>& words) {
  std::string out;
  for (const auto& w : words) {
    if (!out.empty()) out += ' ';
    out += w;
  }
  return out;
}

struct DraftSentence {
  std::string text;
  std::vector<std::string> content;  // informative + entity words, in order
  bool important = false;
};

DraftSentence important_sentence(Rng& rng, const std::vector<std::string>& entities) {
  DraftSentence s;
  s.important = true;
  std::vector<std::string> words;
  const auto length = 12 + rng.below(10);
  for (std::uint64_t i = 0; i < length; ++i) {
    const double u = rng.uniform();
    if (u < 0.40) {
      words.push_back(pick(rng, kFunction));
    } else if (u < 0.72) {
      words.push_back(pick(rng, kInformative));
      s.content.push_back(words.back());
    } else if (u < 0.85) {
      words.push_back(entities[rng.below(entities.size())]);
      s.content.push_back(words.back());
    } else if (u < 0.92) {
      words.push_back(std::to_string(2 + rng.below(97)));
    } else {
      words.push_back(pick(rng, kFiller));
    }
  }
  words.front()[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(words.front()[0])));
  s.text = join(words);
  if (rng.bernoulli(0.3)) {
    // Attach a trailing clause after a comma.
    s.text += ", " + pick(rng, kFunction) + " " + pick(rng, kInformative) + " " + pick(rng, kInformative);
  }
  s.text += ".";
  return s;
}

DraftSentence filler_sentence(Rng& rng, const std::vector<std::string>& entities) {
  DraftSentence s;
  std::vector<std::string> words;
  const auto length = 6 + rng.below(10);
  for (std::uint64_t i = 0; i < length; ++i) {
    const double u = rng.uniform();
    if (u < 0.45) words.push_back(pick(rng, kFunction));
    else if (u < 0.82) words.push_back(pick(rng, kFiller));
    else if (u < 0.93) words.push_back(pick(rng, kInformative));
    else words.push_back(entities[rng.below(entities.size())]);
  }
  words.front()[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(words.front()[0])));
  const double style = rng.uniform();
  if (style < 0.25) s.text = join(words) + "?";
  else if (style < 0.4) s.text = join(words) + "!";
  else if (style < 0.6) s.text = "''" + join(words) + ",'' " + entities[0] + " said.";
  else if (style < 0.7) s.text = join(words) + ": " + pick(rng, kFiller) + ".";
  else s.text = join(words) + ".";
  return s;
}

std::string summary_sentence(Rng& rng, const DraftSentence& source) {
  std::vector<std::string> words;
  for (const auto& w : source.content) {
    if (rng.bernoulli(0.8)) words.push_back(w);
    if (rng.bernoulli(0.25)) words.push_back(pick(rng, kFunction));
  }
  if (words.empty()) words.push_back(source.content.empty() ? std::string("report") : source.content.front());
  words.front()[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(words.front()[0])));
  return join(words) + ".";
}

Document make_document(Rng& rng, const CorpusSpec& spec, std::string doc_id, std::vector<int>& truth) {
  std::vector<std::string> entities;
  for (int i = 0; i < 3; ++i) entities.push_back(entity(rng));

  const auto count = 8 + rng.below(7);
  std::vector<DraftSentence> drafts;
  for (std::uint64_t i = 0; i < count; ++i) {
    bool important = rng.bernoulli(spec.important_rate);
    if (i == 0 && rng.bernoulli(spec.teaser_rate)) important = false;
    drafts.push_back(important ? important_sentence(rng, entities) : filler_sentence(rng, entities));
  }
  if (std::none_of(drafts.begin(), drafts.end(), [](const auto& d) { return d.important; }))
    drafts[1] = important_sentence(rng, entities);

  std::vector<std::string> texts;
  std::vector<std::string> summary;
  for (const auto& d : drafts) {
    texts.push_back(d.text);
    truth.push_back(d.important ? 1 : 0);
    if (d.important && rng.bernoulli(spec.summarised_rate)) summary.push_back(summary_sentence(rng, d));
  }
  if (summary.empty())
    for (const auto& d : drafts)
      if (d.important) {
        summary.push_back(summary_sentence(rng, d));
        break;
      }

  Document doc;
  doc.doc_id = std::move(doc_id);
  doc.section = rng.bernoulli(0.5) ? "Business" : "Politics";
  doc.sentences = make_sentences(texts);
  doc.summary = make_sentences(summary);
  return doc;
}

// Deterministic pseudo-score in [lo, hi] for (word, attribute).
double score_for(std::string_view word, std::string_view attribute, double lo, double hi) {
  const auto h = mix_seed(fnv1a(word), fnv1a(attribute));
  const double u = static_cast<double>(h >> 11) * 0x1.0p-53;
  return std::round(lo + u * (hi - lo));
}

std::string scored_lexicon_text() {
  static constexpr std::array kAttributes = {"imagery",     "concreteness",     "familiarity",
                                             "aoa",         "meaningfulness_c", "meaningfulness_p"};
  std::ostringstream out;
  out << "# synthetic MRC-style norms\n#scored mrc ";
  for (std::size_t i = 0; i < kAttributes.size(); ++i) out << (i ? "," : "") << kAttributes[i];
  for (auto a : kAttributes) out << ' ' << a << ":100:700";
  out << '\n';
  for (auto w : kInformative)
    for (auto a : kAttributes) out << w << '\t' << a << '\t' << score_for(w, a, 430, 700) << '\n';
  for (auto w : kFiller)
    for (auto a : kAttributes) out << w << '\t' << a << '\t' << score_for(w, a, 100, 380) << '\n';
  for (auto w : kFunction) {
    out << w << "\tfamiliarity\t" << score_for(w, "familiarity", 550, 700) << '\n';
    out << w << "\timagery\t" << score_for(w, "imagery", 100, 250) << '\n';
  }
  return out.str();
}

std::string liwc_lexicon_text() {
  std::ostringstream out;
  out << "#categories liwc funct,posemo,negemo,cogmech,tentat,certain,social,money,work,number,time,achieve\n";
  for (auto w : kFunction) out << w << "\tfunct\n";
  const std::array<std::pair<const char*, const char*>, 18> entries{{
      {"perhaps", "tentat,cogmech"}, {"maybe", "tentat,cogmech"},   {"wonder", "cogmech"},
      {"imagine", "cogmech"},        {"think", "cogmech"},          {"believe", "cogmech,certain"},
      {"never", "certain"},          {"always", "certain"},         {"happ*", "posemo"},
      {"wonderful", "posemo"},       {"afraid", "negemo"},          {"strange", "negemo,tentat"},
      {"everyone", "social"},        {"nobody", "social"},          {"invest*", "money"},
      {"profit", "money,achieve"},   {"earnings", "money,achieve"}, {"workers", "work,social"},
  }};
  for (const auto& [w, c] : entries) out << w << '\t' << c << '\n';
  for (auto w : {"revenue", "billion", "million", "dividend", "loan", "debt", "bonds", "capital", "fund", "assets"})
    out << w << "\tmoney\n";
  for (auto w : {"company", "factory", "contract", "board", "executive", "chairman", "plant", "unit"})
    out << w << "\twork\n";
  for (auto w : {"percent", "quarter", "index"}) out << w << "\tnumber\n";
  for (auto w : {"quarter", "again", "moment", "forecast"}) out << w << "\ttime\n";
  return out.str();
}

std::string inquirer_lexicon_text() {
  std::ostringstream out;
  out << "#categories inquirer Positiv,Negativ,Strong,Weak,Econ,Quan,Know,Ovrst,Undrst,Legal\n";
  for (auto w : kInformative) {
    const auto h = fnv1a(w);
    out << w << "\tEcon" << ((h & 1) ? ",Strong" : "") << ((h & 2) ? ",Quan" : "") << '\n';
  }
  const std::array<std::pair<const char*, const char*>, 12> entries{{
      {"perhaps", "Undrst"},      {"maybe", "Undrst"},       {"afraid", "Negativ,Weak"},
      {"happy", "Positiv"},       {"wonderful", "Positiv"},  {"strange", "Negativ"},
      {"always", "Ovrst"},        {"never", "Ovrst"},        {"remember", "Know"},
      {"lawsuit", "Econ,Legal"},  {"settlement", "Legal"},   {"absurd", "Negativ,Weak"},
  }};
  for (const auto& [w, c] : entries) out << w << '\t' << c << '\n';
  return out.str();
}

}  // namespace

SyntheticCorpus news_corpus(const CorpusSpec& spec) {
  SyntheticCorpus out;
  Rng rng(spec.seed);
  std::vector<Document> train;
  for (std::size_t i = 0; i < spec.train_documents; ++i) {
    std::vector<int> ignored;
    train.push_back(make_document(rng, spec, "train-" + std::to_string(i), ignored));
  }
  std::vector<Document> test;
  for (std::size_t i = 0; i < spec.test_documents; ++i) {
    std::vector<int> truth;
    test.push_back(make_document(rng, spec, "test-" + std::to_string(i), truth));
    for (std::size_t s = 0; s < truth.size(); ++s) out.gold.push_back({test.back().doc_id, s, truth[s]});
  }
  out.train = Corpus(std::move(train));
  out.test = Corpus(std::move(test));
  out.scored_lexicon = scored_lexicon_text();
  out.liwc_lexicon = liwc_lexicon_text();
  out.inquirer_lexicon = inquirer_lexicon_text();
  return out;
}

}  // namespace infosum::synth
