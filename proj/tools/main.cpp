#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "infosum/error.h"
#include "pipeline.h"

namespace {

constexpr int kValidationError = 2;
constexpr int kRuntimeError = 1;

bool is_validation(const infosum::Error& e) {
  const auto& code = e.code();
  return code == "invalid-config" || code == "invalid-argument";
}

}  // namespace

int main(int argc, char** argv) {
  using namespace infosum::cli;

  CLI::App app{"Informativeness classification and summarization pipeline"};
  app.require_subcommand(1);

  std::string config_path = "config.json";
  std::vector<std::string> overrides;
  std::string output_dir;
  std::string system;
  std::uint64_t seed = 0;

  const auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("-c,--config", config_path, "Run configuration (JSON)")->capture_default_str();
    cmd->add_option("--set", overrides, "Override a config value, e.g. --set labels.t_pos=12");
    cmd->add_option("--seed", seed, "Override the seed");
    cmd->add_option("-o,--output-dir", output_dir, "Override the output directory");
  };

  auto* label = app.add_subcommand("label", "Weakly label the training sentences");
  auto* train = app.add_subcommand("train", "Train the two-stage positive-unlabeled classifier");
  auto* predict = app.add_subcommand("predict", "Score every test sentence");
  auto* summarize = app.add_subcommand("summarize", "Write summaries for the configured systems");
  auto* evaluate = app.add_subcommand("evaluate", "Classification report, ROUGE and significance tests");
  for (auto* cmd : {label, train, predict, summarize, evaluate}) add_common(cmd);
  summarize->add_option("--system", system, "Run only this system")
      ->check(CLI::IsMember({"inforank", "infofilter", "leadwords", "randomrank"}));

  SynthOptions synth_options;
  std::string synth_dir;
  auto* synth = app.add_subcommand("synth", "Write a synthetic corpus, lexicons and config");
  synth->add_option("dir", synth_dir, "Destination directory")->required();
  synth->add_option("--seed", synth_options.seed, "Generator seed")->capture_default_str();
  synth->add_option("--train-docs", synth_options.train_documents, "Training documents")->capture_default_str();
  synth->add_option("--test-docs", synth_options.test_documents, "Test documents")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kValidationError;
  }

  try {
    if (synth->parsed()) {
      cmd_synth(synth_dir, synth_options, std::cout);
      return 0;
    }

    auto* cmd = app.get_subcommands().front();
    std::vector<std::string> all = overrides;
    if (cmd->count("--seed")) all.push_back("seed=" + std::to_string(seed));
    if (!output_dir.empty()) all.push_back("output_dir=\"" + output_dir + "\"");
    const auto config = load_config(config_path, all);

    if (cmd == label) cmd_label(config, std::cout);
    else if (cmd == train) cmd_train(config, std::cout);
    else if (cmd == predict) cmd_predict(config, std::cout);
    else if (cmd == summarize) cmd_summarize(config, std::cout, system);
    else cmd_evaluate(config, std::cout);
    return 0;
  } catch (const infosum::Error& e) {
    std::cerr << "error [" << e.code() << "]: " << e.what() << "\n";
    return is_validation(e) ? kValidationError : kRuntimeError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntimeError;
  }
}
