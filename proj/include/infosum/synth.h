#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "infosum/corpus.h"
#include "infosum/features.h"
#include "infosum/pu.h"

namespace infosum::synth {

// Two unit-variance Gaussian clusters whose means differ by `separation`
// along the first axis. A positive is labeled (o = 1) with probability
// `label_frequency`.
struct GaussianSpec {
  std::size_t count = 2000;
  std::size_t dim = 2;
  double separation = 6.0;
  double positive_prior = 0.5;
  double label_frequency = 0.7;
  std::uint64_t seed = 0;
};

struct GaussianData {
  FeatureLayout layout;
  std::vector<PUExample> examples;
  std::vector<int> truth;  // y
};

GaussianData gaussian_pu(const GaussianSpec& spec);

// Small news-like corpus with lexicons. Important sentences draw on a
// concrete, economic vocabulary; unimportant ones on tentative filler words.
// Summaries paraphrase most (not all) important sentences, so labels
// derived from them are positive-unlabeled.
struct CorpusSpec {
  std::size_t train_documents = 240;
  std::size_t test_documents = 60;
  double important_rate = 0.45;
  double summarised_rate = 0.8;
  double teaser_rate = 0.35;
  std::uint64_t seed = 0;
};

struct GoldLabel {
  std::string doc_id;
  std::size_t sentence_id = 0;
  int label = 0;
};

struct SyntheticCorpus {
  Corpus train;
  Corpus test;
  std::vector<GoldLabel> gold;  // for every test sentence
  std::string scored_lexicon;   // TSV text
  std::string liwc_lexicon;
  std::string inquirer_lexicon;
};

SyntheticCorpus news_corpus(const CorpusSpec& spec);

}  // namespace infosum::synth
