#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace summeval {

// Flags shared by every subcommand. Values here override the config file.
struct CliOverrides {
  std::optional<std::uint64_t> seed;           // replaces every stage seed
  std::optional<std::filesystem::path> output; // replaces output_dir
  std::optional<std::string> format;           // csv | json | markdown
  bool no_filter = false;                      // skip validity filtering
  bool include_oov_pairs = false;              // keep uniform-fallback TS pairs
  int top_words = 10;                          // lda-topics
};

// A parsed config file plus --set overrides. Relative paths inside the file
// resolve against the file's directory.
class PipelineConfig {
 public:
  static PipelineConfig load(const std::filesystem::path& config_path,
                             const std::vector<std::string>& set_overrides = {});

  const nlohmann::json& raw() const { return raw_; }
  const std::filesystem::path& base_dir() const { return base_dir_; }

  // Dotted lookup ("lda.topics"); nullptr when absent.
  const nlohmann::json* find(const std::string& dotted_key) const;

  bool has(const std::string& dotted_key) const { return find(dotted_key) != nullptr; }

  std::string require_string(const std::string& dotted_key) const;
  std::string get_string(const std::string& dotted_key, const std::string& fallback) const;
  double get_double(const std::string& dotted_key, double fallback) const;
  std::int64_t get_int(const std::string& dotted_key, std::int64_t fallback) const;
  bool get_bool(const std::string& dotted_key, bool fallback) const;

  // Resolves a config-relative path and, when must_exist, checks it up front
  // so a bad path fails before any stage runs.
  std::filesystem::path resolve_path(const std::string& value, bool must_exist,
                                     const std::string& field_name) const;
  std::filesystem::path require_existing_path(const std::string& dotted_key) const;

 private:
  nlohmann::json raw_;
  std::filesystem::path base_dir_;
};

// Subcommand bodies. They throw ConfigError/DataError; run_subcommand maps
// those to exit codes 2/1 and returns 0 on success.
void cmd_clean(const PipelineConfig& config, const CliOverrides& cli);
void cmd_chunk(const PipelineConfig& config, const CliOverrides& cli);
void cmd_validate(const PipelineConfig& config, const CliOverrides& cli);
void cmd_lda_fit(const PipelineConfig& config, const CliOverrides& cli);
void cmd_lda_topics(const PipelineConfig& config, const CliOverrides& cli);
void cmd_evaluate(const PipelineConfig& config, const CliOverrides& cli);
void cmd_generate(const PipelineConfig& config, const CliOverrides& cli);
void cmd_report(const PipelineConfig& config, const CliOverrides& cli);

int run_subcommand(const std::string& name, const std::filesystem::path& config_path,
                   const std::vector<std::string>& set_overrides, const CliOverrides& cli);

}  // namespace summeval
