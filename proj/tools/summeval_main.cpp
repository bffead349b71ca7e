// summeval — config-driven summarization evaluation pipeline.
//
// Subcommands: clean, chunk, validate, lda-fit, lda-topics, evaluate,
// generate, report. Exit codes: 0 success, 1 data/runtime error,
// 2 configuration error.

#include <string>
#include <vector>

#include "CLI11.hpp"
#include "summeval/pipeline.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Summarization evaluation toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> set_overrides;
  summeval::CliOverrides cli;
  std::int64_t seed_value = -1;
  std::string output_dir;
  std::string format;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "Path to the JSON pipeline config")
        ->required();
    sub->add_option("--set", set_overrides,
                    "Override a config value as key=value (dotted keys, repeatable)");
    sub->add_option("--seed", seed_value, "Override every stage seed");
    sub->add_option("--output", output_dir, "Override the output directory");
    sub->add_option("--format", format, "Output format for the report subcommand")
        ->check(CLI::IsMember({"csv", "json", "markdown"}));
    sub->add_flag("--no-filter", cli.no_filter, "Skip invalid-summary filtering");
    sub->add_flag("--include-oov-pairs", cli.include_oov_pairs,
                  "Keep out-of-vocabulary TS pairs in aggregate means");
    return sub;
  };

  add_common(app.add_subcommand("clean", "Apply the OCR-noise cleaning filters to a corpus"));
  add_common(app.add_subcommand("chunk", "Tokenize and chunk the corpus"));
  add_common(app.add_subcommand("validate", "Run the invalid-summary heuristics"));
  add_common(app.add_subcommand("lda-fit", "Fit the LDA topic model"));
  auto* topics_cmd =
      add_common(app.add_subcommand("lda-topics", "Print top words per fitted topic"));
  topics_cmd->add_option("--top", cli.top_words, "Words to print per topic")
      ->default_val(10);
  add_common(app.add_subcommand("evaluate", "Run the full evaluation and write reports"));
  add_common(app.add_subcommand("generate", "Generate summaries via an HTTP completion endpoint"));
  add_common(app.add_subcommand("report", "Re-render an existing report"));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // bad flags are configuration errors
  }

  if (seed_value >= 0) cli.seed = static_cast<std::uint64_t>(seed_value);
  if (!output_dir.empty()) cli.output = output_dir;
  if (!format.empty()) cli.format = format;

  const auto* sub = app.get_subcommands().front();
  return summeval::run_subcommand(sub->get_name(), config_path, set_overrides, cli);
}
