#include "pipeline.h"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>

#include "infosum/corpus.h"
#include "infosum/error.h"
#include "infosum/eval.h"
#include "infosum/lexicons.h"
#include "infosum/synth.h"
#include "infosum/text_util.h"

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace infosum::cli {

const std::vector<std::string> kSystems{"inforank", "infofilter", "leadwords", "randomrank"};

namespace {

[[noreturn]] void invalid(const std::string& message) { throw Error("invalid-config", message); }

void check_keys(const json& object, const std::string& where, std::initializer_list<std::string_view> allowed) {
  if (!object.is_object()) invalid(where + " must be an object");
  for (const auto& [key, value] : object.items())
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      invalid("unknown key '" + key + "' in " + where);
}

template <typename T>
T get(const json& object, const std::string& key, const std::string& where, T fallback) {
  const auto it = object.find(key);
  if (it == object.end() || it->is_null()) return fallback;
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    invalid(where + "." + key + " has the wrong type");
  }
}

std::string get_string(const json& object, const std::string& key, const std::string& where) {
  return get<std::string>(object, key, where, {});
}

std::uint64_t get_count(const json& object, const std::string& key, const std::string& where, std::uint64_t fallback) {
  const auto it = object.find(key);
  if (it == object.end() || it->is_null()) return fallback;
  if (!it->is_number_unsigned()) invalid(where + "." + key + " must be a non-negative integer");
  return it->get<std::uint64_t>();
}

OptimizerSettings parse_optimizer(const json& object, const std::string& where) {
  OptimizerSettings s;
  if (object.is_null()) return s;
  check_keys(object, where, {"l2", "epochs", "learning_rate"});
  s.l2 = get<double>(object, "l2", where, s.l2);
  s.epochs = static_cast<int>(get_count(object, "epochs", where, static_cast<std::uint64_t>(s.epochs)));
  s.learning_rate = get<double>(object, "learning_rate", where, s.learning_rate);
  if (!(s.l2 >= 0.0)) invalid(where + ".l2 must be non-negative");
  if (s.epochs < 1) invalid(where + ".epochs must be at least 1");
  if (!(s.learning_rate > 0.0)) invalid(where + ".learning_rate must be positive");
  return s;
}

ordered_json optimizer_json(const OptimizerSettings& s) {
  return {{"l2", s.l2}, {"epochs", s.epochs}, {"learning_rate", s.learning_rate}};
}

void require_file(const RunConfig& config, const std::string& path, const std::string& what) {
  if (path.empty()) invalid(what + " is not configured");
  if (!fs::is_regular_file(config.resolve(path))) invalid(what + " '" + path + "' does not exist");
}

void require_output(const RunConfig& config, const std::string& name, const std::string& producer) {
  if (!fs::is_regular_file(config.output(name)))
    invalid(config.output(name).string() + " is missing; run '" + producer + "' first");
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("io", "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("io", "cannot write " + path.string());
  out << content;
  if (!out) throw Error("io", "failed writing " + path.string());
}

void write_resolved_config(const RunConfig& config) {
  write_file(config.output("config.resolved.json"), config.to_json().dump(2) + "\n");
}

std::vector<ScoredLexicon> load_scored(const RunConfig& config) {
  std::vector<ScoredLexicon> out;
  for (const auto& p : config.scored_lexicons) out.push_back(load_scored_lexicon(config.resolve(p).string(), config.bins));
  return out;
}

std::vector<CategoryLexicon> load_categories(const RunConfig& config) {
  std::vector<CategoryLexicon> out;
  for (const auto& p : config.category_lexicons) out.push_back(load_category_lexicon(config.resolve(p).string()));
  return out;
}

using SentenceKey = std::pair<std::string, std::size_t>;

std::map<SentenceKey, int> read_gold(const fs::path& path) {
  std::istringstream in(read_file(path));
  std::map<SentenceKey, int> gold;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    try {
      const auto j = json::parse(line);
      const int label = j.at("label").get<int>();
      if (label != 0 && label != 1) throw ParseError(line_no, "label must be 0 or 1");
      gold[{j.at("doc_id").get<std::string>(), j.at("sentence_id").get<std::size_t>()}] = label;
    } catch (const json::exception& e) {
      throw ParseError(line_no, std::string("malformed gold record: ") + e.what());
    }
  }
  return gold;
}

struct Prediction {
  double prob = 0.0;
  int label = 0;
};

std::map<SentenceKey, Prediction> read_predictions(const fs::path& path) {
  std::istringstream in(read_file(path));
  std::map<SentenceKey, Prediction> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    try {
      const auto j = json::parse(line);
      out[{j.at("doc_id").get<std::string>(), j.at("sentence_id").get<std::size_t>()}] = {
          j.at("prob").get<double>(), j.at("label").get<int>()};
    } catch (const json::exception& e) {
      throw ParseError(line_no, std::string("malformed prediction record: ") + e.what());
    }
  }
  return out;
}

PUModel load_checked_model(const RunConfig& config, const FeatureExtractor& extractor) {
  require_output(config, "model.json", "train");
  auto model = load_model(config.output("model.json").string());
  if (model.layout.hash() != extractor.layout().hash())
    throw Error("layout-mismatch", "model layout " + model.layout.hash_hex() +
                                       " does not match the configured features " + extractor.layout().hash_hex());
  return model;
}

std::string fixed(double value, int digits = 3) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(digits) << value;
  return out.str();
}

ordered_json report_json(const ClassificationReport& r) {
  return {{"tp", r.tp},       {"fp", r.fp}, {"fn", r.fn}, {"tn", r.tn}, {"precision", r.precision},
          {"recall", r.recall}, {"f1", r.f1}};
}

ordered_json test_json(const TestResult& t) {
  return {{"statistic", t.statistic}, {"p_value", t.p_value}, {"method", t.method}};
}

std::string display_name(const std::string& system) {
  if (system == "inforank") return "InfoRank";
  if (system == "infofilter") return "InfoFilter";
  if (system == "leadwords") return "LeadWords";
  if (system == "randomrank") return "RandomRank";
  return system;
}

}  // namespace

fs::path RunConfig::resolve(const std::string& path) const {
  const fs::path p(path);
  return p.is_absolute() ? p : base_dir / p;
}

fs::path RunConfig::output(const std::string& name) const { return resolve(output_dir) / name; }

ordered_json RunConfig::to_json() const {
  ordered_json compare_json = ordered_json::array();
  for (const auto& [a, b] : compare) compare_json.push_back({a, b});
  return {
      {"seed", seed},
      {"corpus", {{"train", train_corpus}, {"test", test_corpus}}},
      {"gold", gold.empty() ? ordered_json(nullptr) : ordered_json(gold)},
      {"lexicons", {{"scored", scored_lexicons}, {"category", category_lexicons}, {"bins", bins}}},
      {"labels",
       {{"mode", label_mode},
        {"t_pos", labels.t_pos},
        {"t_unl", labels.t_unl},
        {"balance", balance},
        {"balance_ratio", labels.balance_ratio}}},
      {"features", {{"mode", std::string(to_string(feature_mode))}, {"bow_min_df", bow_min_df}}},
      {"train",
       {{"stage1", optimizer_json(hyper.stage1)}, {"stage2", optimizer_json(hyper.stage2)}, {"holdout", hyper.holdout}}},
      {"budget", {{"max_words", budget.max_words}, {"mode", std::string(to_string(budget.mode))}}},
      {"systems", systems},
      {"compare", compare_json},
      {"output_dir", output_dir},
  };
}

RunConfig parse_config(const json& doc, const fs::path& base_dir) {
  check_keys(doc, "config",
             {"seed", "corpus", "gold", "lexicons", "labels", "features", "train", "budget", "systems", "compare",
              "output_dir"});
  RunConfig c;
  c.base_dir = base_dir;

  if (!doc.contains("seed") || doc["seed"].is_null()) invalid("seed is mandatory");
  c.seed = get_count(doc, "seed", "config", 0);

  const json corpus = doc.value("corpus", json::object());
  check_keys(corpus, "corpus", {"train", "test"});
  c.train_corpus = get_string(corpus, "train", "corpus");
  c.test_corpus = get_string(corpus, "test", "corpus");
  c.gold = get_string(doc, "gold", "config");

  const json lex = doc.value("lexicons", json::object());
  check_keys(lex, "lexicons", {"scored", "category", "bins"});
  c.scored_lexicons = get<std::vector<std::string>>(lex, "scored", "lexicons", {});
  c.category_lexicons = get<std::vector<std::string>>(lex, "category", "lexicons", {});
  c.bins = get_count(lex, "bins", "lexicons", c.bins);
  if (c.bins < 1) invalid("lexicons.bins must be at least 1");

  const json labels = doc.value("labels", json::object());
  check_keys(labels, "labels", {"mode", "t_pos", "t_unl", "balance", "balance_ratio"});
  c.label_mode = get<std::string>(labels, "mode", "labels", c.label_mode);
  if (c.label_mode != "alignment" && c.label_mode != "extract")
    invalid("labels.mode must be 'alignment' or 'extract'");
  c.labels.t_pos = get<double>(labels, "t_pos", "labels", c.labels.t_pos);
  c.labels.t_unl = get<double>(labels, "t_unl", "labels", c.labels.t_unl);
  c.labels.balance_ratio = get<double>(labels, "balance_ratio", "labels", c.labels.balance_ratio);
  c.balance = get<bool>(labels, "balance", "labels", c.balance);
  c.labels.seed = c.seed;
  c.labels.validate();

  const json features = doc.value("features", json::object());
  check_keys(features, "features", {"mode", "bow_min_df"});
  try {
    c.feature_mode = parse_feature_mode(get<std::string>(features, "mode", "features", "dictionary"));
  } catch (const Error& e) {
    invalid(e.what());
  }
  c.bow_min_df = get_count(features, "bow_min_df", "features", c.bow_min_df);

  const json train = doc.value("train", json::object());
  check_keys(train, "train", {"stage1", "stage2", "holdout"});
  c.hyper.stage1 = parse_optimizer(train.value("stage1", json()), "train.stage1");
  c.hyper.stage2 = parse_optimizer(train.value("stage2", json()), "train.stage2");
  c.hyper.holdout = get<double>(train, "holdout", "train", c.hyper.holdout);
  if (!(c.hyper.holdout > 0.0 && c.hyper.holdout < 1.0)) invalid("train.holdout must lie in (0, 1)");
  c.hyper.seed = c.seed;

  const json budget = doc.value("budget", json::object());
  check_keys(budget, "budget", {"max_words", "mode"});
  c.budget.max_words = get_count(budget, "max_words", "budget", c.budget.max_words);
  try {
    c.budget.mode = parse_budget_mode(get<std::string>(budget, "mode", "budget", "whole-sentence"));
    c.budget.validate();
  } catch (const Error& e) {
    invalid(e.what());
  }

  c.systems = get<std::vector<std::string>>(doc, "systems", "config", c.systems);
  for (const auto& s : c.systems)
    if (std::find(kSystems.begin(), kSystems.end(), s) == kSystems.end()) invalid("unknown system '" + s + "'");
  std::set<std::string> unique(c.systems.begin(), c.systems.end());
  if (unique.size() != c.systems.size()) invalid("systems lists a system twice");

  const auto pairs = get<std::vector<std::vector<std::string>>>(doc, "compare", "config", {});
  for (const auto& p : pairs) {
    if (p.size() != 2) invalid("every compare entry must name two systems");
    for (const auto& s : p)
      if (!unique.count(s)) invalid("compare names '" + s + "', which is not in systems");
    c.compare.emplace_back(p[0], p[1]);
  }

  c.output_dir = get<std::string>(doc, "output_dir", "config", c.output_dir);
  if (c.output_dir.empty()) invalid("output_dir must not be empty");

  require_file(c, c.train_corpus, "corpus.train");
  if (!c.test_corpus.empty()) require_file(c, c.test_corpus, "corpus.test");
  if (!c.gold.empty()) require_file(c, c.gold, "gold");
  for (const auto& p : c.scored_lexicons) require_file(c, p, "scored lexicon");
  for (const auto& p : c.category_lexicons) require_file(c, p, "category lexicon");
  if (c.feature_mode == FeatureMode::dictionary_no_general && c.scored_lexicons.empty() &&
      c.category_lexicons.empty())
    invalid("dictionary-no-general mode needs at least one lexicon");
  return c;
}

void apply_override(json& doc, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0) invalid("override '" + std::string(assignment) + "' is not key=value");
  const auto key = assignment.substr(0, eq);
  const std::string text(assignment.substr(eq + 1));

  json value = json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;

  json* node = &doc;
  for (const auto part : split(key, '.')) {
    if (part.empty()) invalid("override key '" + std::string(key) + "' has an empty component");
    if (node->is_null()) *node = json::object();
    if (!node->is_object()) invalid("override key '" + std::string(key) + "' descends into a non-object");
    node = &(*node)[std::string(part)];
  }
  *node = std::move(value);
}

RunConfig load_config(const fs::path& path, const std::vector<std::string>& overrides) {
  if (!fs::is_regular_file(path)) invalid("config file '" + path.string() + "' does not exist");
  json doc = json::parse(read_file(path), nullptr, false);
  if (doc.is_discarded()) invalid("config file '" + path.string() + "' is not valid JSON");
  for (const auto& o : overrides) apply_override(doc, o);
  return parse_config(doc, path.parent_path());
}

FeatureExtractor make_extractor(const RunConfig& config) {
  if (config.feature_mode == FeatureMode::bag_of_words)
    return FeatureExtractor::bag_of_words(
        build_vocabulary(load_corpus(config.resolve(config.train_corpus).string()), config.bow_min_df));
  return FeatureExtractor::dictionary(load_scored(config), load_categories(config),
                                      config.feature_mode == FeatureMode::dictionary);
}

void cmd_label(const RunConfig& config, std::ostream& log) {
  const auto corpus = load_corpus(config.resolve(config.train_corpus).string());
  std::vector<WeakLabel> all;
  if (config.label_mode == "alignment") {
    const auto idf = idf_of(corpus);
    for (const auto& doc : corpus.documents()) {
      auto labels = label_by_alignment(doc, config.labels, idf);
      all.insert(all.end(), labels.begin(), labels.end());
    }
  } else {
    for (const auto& doc : corpus.documents()) {
      const std::vector<std::vector<std::size_t>> extracts{extract_ids_from_summary(doc)};
      auto labels = label_by_extract(doc, extracts);
      all.insert(all.end(), labels.begin(), labels.end());
    }
  }
  const auto counts = count_labels(all);
  log << "labels: " << counts.positive << " positive, " << counts.unlabeled << " unlabeled, " << counts.excluded
      << " excluded\n";

  std::vector<WeakLabel> kept;
  if (config.balance) {
    kept = sample_unlabeled(all, config.labels);
    const auto k = count_labels(kept);
    log << "sampled: " << k.positive << " positive, " << k.unlabeled << " unlabeled\n";
  } else {
    std::copy_if(all.begin(), all.end(), std::back_inserter(kept),
                 [](const WeakLabel& l) { return l.flag != LabelFlag::excluded; });
  }

  std::ostringstream out;
  write_labels(out, kept);
  write_file(config.output("labels.jsonl"), out.str());
  write_resolved_config(config);
}

void cmd_train(const RunConfig& config, std::ostream& log) {
  require_output(config, "labels.jsonl", "label");
  const auto corpus = load_corpus(config.resolve(config.train_corpus).string());
  std::istringstream label_text(read_file(config.output("labels.jsonl")));
  const auto labels = read_labels(label_text);
  const auto extractor = make_extractor(config);

  std::vector<PUExample> data;
  std::size_t skipped = 0;
  for (const auto& l : labels) {
    if (l.flag == LabelFlag::excluded) continue;
    const auto* doc = corpus.find(l.doc_id);
    if (doc == nullptr) throw Error("invalid-argument", "label refers to unknown document '" + l.doc_id + "'");
    if (l.sentence_id >= doc->sentences.size())
      throw Error("invalid-argument", "label refers to sentence " + std::to_string(l.sentence_id) + " of '" +
                                          l.doc_id + "', which does not exist");
    const auto& sentence = doc->sentences[l.sentence_id];
    if (sentence.word_count() == 0) {
      ++skipped;
      continue;
    }
    data.push_back({extractor.extract(sentence), l.flag == LabelFlag::positive, 1.0});
  }

  TrainingReport report;
  const auto model = train_pu(data, extractor.layout(), config.hyper, &report);
  save_model(model, config.output("model.json").string());

  log << "features: " << to_string(config.feature_mode) << ", " << extractor.layout().total_dim()
      << " dimensions\n";
  log << "training: " << report.positives << " positive, " << report.unlabeled << " unlabeled";
  if (skipped) log << " (" << skipped << " sentences without words skipped)";
  log << "\n";
  log << "e = " << format_double(report.e) << "\n";
  log << "stage 2: " << report.stage2_train << " relabeled examples, " << report.calibration
      << " held out for calibration\n";

  ordered_json train_log{
      {"feature_mode", std::string(to_string(config.feature_mode))},
      {"total_dim", extractor.layout().total_dim()},
      {"positives", report.positives},
      {"unlabeled", report.unlabeled},
      {"skipped_without_words", skipped},
      {"relabeled", report.relabeled},
      {"stage2_train", report.stage2_train},
      {"calibration", report.calibration},
      {"e", report.e},
      {"calibration_sigmoid", {{"A", model.calib.a}, {"B", model.calib.b}}},
      {"stage1_loss", report.stage1_loss},
      {"stage2_loss", report.stage2_loss},
  };
  write_file(config.output("train_log.json"), train_log.dump(2) + "\n");
  write_resolved_config(config);
}

void cmd_predict(const RunConfig& config, std::ostream& log) {
  require_file(config, config.test_corpus, "corpus.test");
  const auto corpus = load_corpus(config.resolve(config.test_corpus).string());
  const auto extractor = make_extractor(config);
  const auto model = load_checked_model(config, extractor);

  std::ostringstream out;
  std::size_t positives = 0, total = 0;
  for (const auto& doc : corpus.documents()) {
    const auto scores = score_document(doc, model, extractor);
    for (std::size_t i = 0; i < doc.sentences.size(); ++i) {
      ordered_json row{{"doc_id", doc.doc_id},
                       {"sentence_id", i},
                       {"prob", scores.probability[i]},
                       {"label", scores.important[i] ? 1 : 0}};
      out << row.dump() << '\n';
      positives += scores.important[i];
      ++total;
    }
  }
  write_file(config.output("predictions.jsonl"), out.str());
  write_resolved_config(config);
  log << "predictions: " << positives << " of " << total << " sentences predicted important\n";
}

void cmd_summarize(const RunConfig& config, std::ostream& log, const std::string& only) {
  require_file(config, config.test_corpus, "corpus.test");
  std::vector<std::string> systems = config.systems;
  if (!only.empty()) {
    if (std::find(kSystems.begin(), kSystems.end(), only) == kSystems.end()) invalid("unknown system '" + only + "'");
    systems = {only};
  }
  const auto corpus = load_corpus(config.resolve(config.test_corpus).string());

  const bool needs_model = std::any_of(systems.begin(), systems.end(),
                                       [](const auto& s) { return s == "inforank" || s == "infofilter"; });
  std::optional<FeatureExtractor> extractor;
  std::optional<PUModel> model;
  std::vector<SentenceScores> scores;
  if (needs_model) {
    extractor = make_extractor(config);
    model = load_checked_model(config, *extractor);
    for (const auto& doc : corpus.documents()) scores.push_back(score_document(doc, *model, *extractor));
  }

  for (const auto& system : systems) {
    std::vector<SummaryResult> results;
    const auto& docs = corpus.documents();
    for (std::size_t d = 0; d < docs.size(); ++d) {
      if (system == "inforank") results.push_back(info_rank(docs[d], scores[d].probability, config.budget));
      else if (system == "infofilter") results.push_back(info_filter(docs[d], scores[d].important, config.budget));
      else if (system == "leadwords") results.push_back(lead_words(docs[d], config.budget));
      else results.push_back(random_rank(docs[d], config.budget, config.seed));
    }
    std::ostringstream out;
    write_summaries(out, results);
    write_file(config.output("summaries_" + system + ".jsonl"), out.str());
    log << system << ": " << results.size() << " summaries\n";

    if (system == "infofilter") {
      std::map<std::size_t, std::size_t> histogram;
      std::size_t fallbacks = 0;
      for (const auto& r : results) {
        ++histogram[r.removed.size()];
        fallbacks += r.fallback;
      }
      log << "  removed sentences per document:";
      for (const auto& [removed, count] : histogram) log << ' ' << removed << ':' << count;
      log << "\n  lead fallbacks: " << fallbacks << "\n";
    }
  }
  write_resolved_config(config);
}

void cmd_evaluate(const RunConfig& config, std::ostream& log) {
  const bool have_predictions = fs::is_regular_file(config.output("predictions.jsonl"));
  std::vector<std::string> systems;
  for (const auto& s : config.systems)
    if (fs::is_regular_file(config.output("summaries_" + s + ".jsonl"))) systems.push_back(s);
  if (!have_predictions && systems.empty()) invalid("nothing to evaluate; run 'predict' or 'summarize' first");

  ordered_json report = ordered_json::object();
  std::ostringstream table;

  if (have_predictions) {
    if (config.gold.empty()) invalid("gold labels are required to evaluate predictions");
    const auto gold = read_gold(config.resolve(config.gold));
    const auto predictions = read_predictions(config.output("predictions.jsonl"));
    std::vector<int> truth, model, baseline;
    for (const auto& [key, label] : gold) {
      const auto it = predictions.find(key);
      if (it == predictions.end())
        throw Error("invalid-argument",
                    "no prediction for gold sentence " + key.first + "#" + std::to_string(key.second));
      truth.push_back(label);
      model.push_back(it->second.label);
      baseline.push_back(1);
    }
    const auto model_report = classification_report(model, truth);
    const auto baseline_report = classification_report(baseline, truth);
    const auto test = mcnemar(model, baseline, truth);
    report["classification"] = {{"sentences", truth.size()},
                                {"positives", std::count(truth.begin(), truth.end(), 1)},
                                {"model", report_json(model_report)},
                                {"all_positive", report_json(baseline_report)},
                                {"mcnemar", test_json(test)}};

    table << "Classification (" << truth.size() << " sentences)\n";
    table << std::left << std::setw(24) << "" << std::right << std::setw(10) << "Precision" << std::setw(8)
          << "Recall" << std::setw(8) << "F-1" << "\n";
    const auto row = [&](const std::string& name, const ClassificationReport& r) {
      table << std::left << std::setw(24) << name << std::right << std::setw(10) << fixed(r.precision)
            << std::setw(8) << fixed(r.recall) << std::setw(8) << fixed(r.f1) << "\n";
    };
    row("Baseline (all positive)", baseline_report);
    row("Model", model_report);
    table << "McNemar model vs baseline: statistic " << fixed(test.statistic, 4) << ", p " << format_double(test.p_value)
          << "\n";
  }

  if (!systems.empty()) {
    require_file(config, config.test_corpus, "corpus.test");
    const auto corpus = load_corpus(config.resolve(config.test_corpus).string());
    std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> scores;
    ordered_json rouge = ordered_json::object();
    ordered_json per_document = ordered_json::object();
    std::size_t without_reference = 0;

    for (const auto& system : systems) {
      std::istringstream in(read_file(config.output("summaries_" + system + ".jsonl")));
      const auto summaries = read_summaries(in);
      std::map<std::string, const SummaryResult*> by_doc;
      for (const auto& s : summaries) by_doc[s.doc_id] = &s;

      auto& [r1, r2] = scores[system];
      ordered_json docs = ordered_json::array();
      without_reference = 0;
      for (const auto& doc : corpus.documents()) {
        if (!doc.has_summary()) {
          ++without_reference;
          continue;
        }
        const auto it = by_doc.find(doc.doc_id);
        if (it == by_doc.end())
          throw Error("missing-summary", "system " + system + " has no summary for '" + doc.doc_id + "'");
        const std::vector<Sentence> candidate{Sentence::make(0, it->second->text)};
        const double a = rouge_n(*doc.summary, candidate, 1).recall;
        const double b = rouge_n(*doc.summary, candidate, 2).recall;
        r1.push_back(a);
        r2.push_back(b);
        docs.push_back({{"doc_id", doc.doc_id}, {"rouge1", a}, {"rouge2", b}});
      }
      const auto mean = [](const std::vector<double>& v) {
        double s = 0.0;
        for (double x : v) s += x;
        return v.empty() ? 0.0 : s / static_cast<double>(v.size());
      };
      rouge[system] = {{"documents", r1.size()}, {"rouge1", mean(r1)}, {"rouge2", mean(r2)}};
      per_document[system] = std::move(docs);
    }
    report["rouge"] = rouge;
    report["rouge_per_document"] = per_document;

    if (have_predictions) table << "\n";
    table << "ROUGE recall (" << scores.begin()->second.first.size() << " documents";
    if (without_reference) table << ", " << without_reference << " without reference skipped";
    table << ")\n";
    table << std::left << std::setw(14) << "System" << std::right << std::setw(8) << "R-1" << std::setw(8) << "R-2"
          << "\n";
    for (const auto& system : systems)
      table << std::left << std::setw(14) << display_name(system) << std::right << std::setw(8)
            << fixed(rouge[system]["rouge1"].get<double>()) << std::setw(8)
            << fixed(rouge[system]["rouge2"].get<double>()) << "\n";

    ordered_json comparisons = ordered_json::array();
    bool header = false;
    for (const auto& [a, b] : config.compare) {
      if (!scores.count(a) || !scores.count(b)) continue;
      if (scores[a].first.empty()) continue;
      const auto t1 = wilcoxon_signed_rank(scores[a].first, scores[b].first);
      const auto t2 = wilcoxon_signed_rank(scores[a].second, scores[b].second);
      comparisons.push_back({{"a", a}, {"b", b}, {"rouge1", test_json(t1)}, {"rouge2", test_json(t2)}});
      if (!header) {
        table << "\nWilcoxon signed-rank (two-sided p)\n";
        header = true;
      }
      table << std::left << std::setw(28) << (display_name(a) + " vs " + display_name(b)) << "R-1 "
            << format_double(t1.p_value) << "   R-2 " << format_double(t2.p_value) << "\n";
    }
    report["wilcoxon"] = comparisons;
  }

  write_file(config.output("report.json"), report.dump(2) + "\n");
  write_file(config.output("report.txt"), table.str());
  write_resolved_config(config);
  log << table.str();
}

void cmd_synth(const fs::path& dir, const SynthOptions& options, std::ostream& log) {
  synth::CorpusSpec spec;
  spec.seed = options.seed;
  spec.train_documents = options.train_documents;
  spec.test_documents = options.test_documents;
  if (spec.train_documents == 0 || spec.test_documents == 0) invalid("synth needs at least one document per split");
  const auto data = synth::news_corpus(spec);

  std::ostringstream train, test, gold;
  write_corpus(train, data.train);
  write_corpus(test, data.test);
  for (const auto& g : data.gold)
    gold << ordered_json{{"doc_id", g.doc_id}, {"sentence_id", g.sentence_id}, {"label", g.label}}.dump() << '\n';

  write_file(dir / "train.jsonl", train.str());
  write_file(dir / "test.jsonl", test.str());
  write_file(dir / "gold.jsonl", gold.str());
  write_file(dir / "mrc.tsv", data.scored_lexicon);
  write_file(dir / "liwc.tsv", data.liwc_lexicon);
  write_file(dir / "inquirer.tsv", data.inquirer_lexicon);

  RunConfig config;
  config.seed = options.seed;
  config.train_corpus = "train.jsonl";
  config.test_corpus = "test.jsonl";
  config.gold = "gold.jsonl";
  config.scored_lexicons = {"mrc.tsv"};
  config.category_lexicons = {"liwc.tsv", "inquirer.tsv"};
  config.compare = {{"inforank", "leadwords"}, {"infofilter", "leadwords"}, {"inforank", "randomrank"}};
  write_file(dir / "config.json", config.to_json().dump(2) + "\n");

  log << "synth: " << data.train.size() << " training and " << data.test.size() << " test documents in "
      << dir.string() << "\n";
}

}  // namespace infosum::cli
