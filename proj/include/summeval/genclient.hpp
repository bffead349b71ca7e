#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "summeval/corpus.hpp"
#include "summeval/records.hpp"

namespace summeval {

struct GenerationConfig {
  std::string endpoint_url;       // e.g. http://localhost:8080/v1/completions
  std::string model_name;
  std::size_t max_input_chars = 5000;
  double temperature = 0.7;
  int max_tokens = 256;
  int max_retries = 3;
  double request_timeout_s = 30.0;
  double rate_limit_rps = 0.0;    // 0 disables pacing
  int concurrency = 4;
  std::string body_shape = "prompt";  // "prompt" or "messages"
  std::string api_key_env = "SUMMEVAL_API_KEY";
  double retry_base_delay_s = 0.5;

  static GenerationConfig from_json(const nlohmann::json& value);
};

// The summarization prompt with the article truncated to max_input_chars
// characters (codepoints). The output always ends with "SUMMARY:".
std::string build_prompt(std::string_view article_text, std::size_t max_input_chars);

struct RequestStats {
  int attempts = 0;
  int last_status = 0;
};

// One completion round-trip. Retries transient failures (HTTP 429/5xx,
// timeouts) with exponential backoff up to max_retries; other HTTP errors
// and unparseable bodies fail immediately. The API credential is read from
// the environment and never logged.
std::string request_summary(const GenerationConfig& config, const std::string& prompt,
                            RequestStats* stats = nullptr);

struct BatchStats {
  std::size_t attempted = 0;  // records not already present at output_path
  std::size_t succeeded = 0;
  std::size_t skipped_existing = 0;
};

// runs x |articles| records with run_id 0..runs-1, appended to output_path
// as summary-record JSONL, flushing after every record. Existing
// (article_id, run_id, model_tag) keys at output_path are skipped, so
// interrupted runs resume without duplicates. Failed records are logged and
// skipped. Returns the records written by this call, in task order.
std::vector<SummaryRecord> batch_generate(const GenerationConfig& config,
                                          const std::vector<Document>& articles, int runs,
                                          const std::string& model_tag,
                                          const std::filesystem::path& output_path,
                                          BatchStats* stats = nullptr);

}  // namespace summeval
