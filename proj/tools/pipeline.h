#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "infosum/features.h"
#include "infosum/pu.h"
#include "infosum/summarize.h"
#include "infosum/weak_label.h"
#include "json.hpp"

namespace infosum::cli {

// Run configuration. Relative paths are resolved against the directory of
// the config file; the resolved-config copy keeps them as written so that
// two runs from identical inputs produce identical bytes.
struct RunConfig {
  std::filesystem::path base_dir;

  std::uint64_t seed = 0;
  std::string train_corpus;
  std::string test_corpus;
  std::string gold;  // optional

  std::vector<std::string> scored_lexicons;
  std::vector<std::string> category_lexicons;
  std::size_t bins = 230;

  std::string label_mode = "alignment";  // or "extract"
  LabelConfig labels;
  bool balance = true;

  FeatureMode feature_mode = FeatureMode::dictionary;
  std::size_t bow_min_df = 2;

  PUHyper hyper;
  SummaryBudget budget;

  std::vector<std::string> systems{"inforank", "infofilter", "leadwords", "randomrank"};
  std::vector<std::pair<std::string, std::string>> compare;
  std::string output_dir = "run";

  std::filesystem::path resolve(const std::string& path) const;
  std::filesystem::path output(const std::string& name) const;

  nlohmann::ordered_json to_json() const;
};

// Throws Error("invalid-config") for unknown keys, wrong types, bad values
// or referenced input files that do not exist.
RunConfig parse_config(const nlohmann::json& doc, const std::filesystem::path& base_dir);

// "a.b.c=value"; value is parsed as JSON when possible, else taken as a string.
void apply_override(nlohmann::json& doc, std::string_view assignment);

RunConfig load_config(const std::filesystem::path& path, const std::vector<std::string>& overrides = {});

extern const std::vector<std::string> kSystems;

void cmd_label(const RunConfig& config, std::ostream& log);
void cmd_train(const RunConfig& config, std::ostream& log);
void cmd_predict(const RunConfig& config, std::ostream& log);
// Runs every configured system, or only `only` when non-empty.
void cmd_summarize(const RunConfig& config, std::ostream& log, const std::string& only = {});
void cmd_evaluate(const RunConfig& config, std::ostream& log);

struct SynthOptions {
  std::uint64_t seed = 0;
  std::size_t train_documents = 240;
  std::size_t test_documents = 60;
};

// Writes the synthetic corpus, gold labels, lexicons and a config.json
// that runs the whole pipeline on them.
void cmd_synth(const std::filesystem::path& dir, const SynthOptions& options, std::ostream& log);

// Feature extractor matching the config (bag-of-words vocabulary comes from
// the training corpus).
FeatureExtractor make_extractor(const RunConfig& config);

}  // namespace infosum::cli
