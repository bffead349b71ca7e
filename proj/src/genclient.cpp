#include "summeval/genclient.hpp"

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <mutex>
#include <set>
#include <thread>

#include "httplib.h"
#include "summeval/errors.hpp"
#include "summeval/jsonl.hpp"
#include "summeval/text.hpp"

namespace summeval {

namespace {

constexpr std::string_view kPromptPrefix =
    "Write a summary of the following text\n"
    "delimited by triple backticks. Return\n"
    "your response which covers the key points\n"
    "of the text.\n```";
constexpr std::string_view kPromptSuffix = "```\nSUMMARY:";

struct SplitUrl {
  std::string base;  // scheme://host[:port]
  std::string path;  // /v1/completions
};

SplitUrl split_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw ConfigError("endpoint_url must start with http:// or https://");
  }
  const auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

bool is_transient_status(int status) {
  return status == 429 || (status >= 500 && status <= 599);
}

std::string extract_completion(const std::string& body, const std::string& body_shape) {
  const nlohmann::json response = nlohmann::json::parse(body, nullptr, false);
  if (response.is_discarded() || !response.is_object()) {
    throw DataError("unparseable completion response body");
  }
  if (response.contains("choices") && response["choices"].is_array() &&
      !response["choices"].empty()) {
    const auto& choice = response["choices"][0];
    if (body_shape == "messages" && choice.contains("message") &&
        choice["message"].contains("content") && choice["message"]["content"].is_string()) {
      return choice["message"]["content"].get<std::string>();
    }
    if (choice.contains("text") && choice["text"].is_string()) {
      return choice["text"].get<std::string>();
    }
    if (choice.contains("message") && choice["message"].contains("content") &&
        choice["message"]["content"].is_string()) {
      return choice["message"]["content"].get<std::string>();
    }
  }
  for (const char* field : {"text", "content", "completion"}) {
    if (response.contains(field) && response[field].is_string()) {
      return response[field].get<std::string>();
    }
  }
  throw DataError("completion response carries no text field");
}

// Global pacing shared by all workers of one batch_generate call.
class RateLimiter {
 public:
  explicit RateLimiter(double requests_per_second) : rps_(requests_per_second) {}

  void acquire() {
    if (rps_ <= 0.0) return;
    std::chrono::steady_clock::time_point wake;
    {
      std::lock_guard<std::mutex> lock(mutex_);
      const auto now = std::chrono::steady_clock::now();
      const auto interval =
          std::chrono::duration_cast<std::chrono::steady_clock::duration>(
              std::chrono::duration<double>(1.0 / rps_));
      next_ = std::max(next_, now);
      wake = next_;
      next_ += interval;
    }
    std::this_thread::sleep_until(wake);
  }

 private:
  double rps_;
  std::mutex mutex_;
  std::chrono::steady_clock::time_point next_{};
};

void log_warn(const std::string& message) {
  std::cerr << "WARN " << message << "\n";
}

}  // namespace

GenerationConfig GenerationConfig::from_json(const nlohmann::json& value) {
  GenerationConfig config;
  if (!value.is_object()) throw ConfigError("generation config must be an object");
  const auto get = [&](const char* key, auto& out) {
    if (value.contains(key)) out = value.at(key).get<std::decay_t<decltype(out)>>();
  };
  get("endpoint_url", config.endpoint_url);
  get("model_name", config.model_name);
  get("max_input_chars", config.max_input_chars);
  get("temperature", config.temperature);
  get("max_tokens", config.max_tokens);
  get("max_retries", config.max_retries);
  get("request_timeout_s", config.request_timeout_s);
  get("rate_limit_rps", config.rate_limit_rps);
  get("concurrency", config.concurrency);
  get("body_shape", config.body_shape);
  get("api_key_env", config.api_key_env);
  get("retry_base_delay_s", config.retry_base_delay_s);
  if (config.endpoint_url.empty()) throw ConfigError("generation config: missing endpoint_url");
  if (config.max_input_chars == 0) throw ConfigError("max_input_chars must be positive");
  if (config.max_retries < 0) throw ConfigError("max_retries must be >= 0");
  if (config.temperature < 0.0) throw ConfigError("temperature must be >= 0");
  if (config.concurrency < 1) throw ConfigError("concurrency must be >= 1");
  if (config.body_shape != "prompt" && config.body_shape != "messages") {
    throw ConfigError("body_shape must be 'prompt' or 'messages'");
  }
  return config;
}

std::string build_prompt(std::string_view article_text, std::size_t max_input_chars) {
  std::string prompt;
  const std::string truncated = truncate_codepoints(article_text, max_input_chars);
  prompt.reserve(kPromptPrefix.size() + truncated.size() + kPromptSuffix.size());
  prompt += kPromptPrefix;
  prompt += truncated;
  prompt += kPromptSuffix;
  return prompt;
}

std::string request_summary(const GenerationConfig& config, const std::string& prompt,
                            RequestStats* stats) {
  const SplitUrl url = split_url(config.endpoint_url);

  nlohmann::json body{{"model", config.model_name},
                      {"temperature", config.temperature},
                      {"max_tokens", config.max_tokens}};
  if (config.body_shape == "messages") {
    body["messages"] = nlohmann::json::array({{{"role", "user"}, {"content", prompt}}});
  } else {
    body["prompt"] = prompt;
  }
  const std::string payload = body.dump();

  httplib::Client client(url.base);
  client.set_connection_timeout(std::chrono::duration<double>(config.request_timeout_s));
  client.set_read_timeout(std::chrono::duration<double>(config.request_timeout_s));
  client.set_write_timeout(std::chrono::duration<double>(config.request_timeout_s));
  httplib::Headers headers;
  if (const char* key = std::getenv(config.api_key_env.c_str()); key != nullptr && *key != '\0') {
    headers.emplace("Authorization", std::string("Bearer ") + key);
  }

  std::string last_error;
  for (int attempt = 0; attempt <= config.max_retries; ++attempt) {
    if (attempt > 0) {
      const double delay = config.retry_base_delay_s * static_cast<double>(1 << (attempt - 1));
      std::this_thread::sleep_for(std::chrono::duration<double>(delay));
    }
    if (stats != nullptr) ++stats->attempts;
    auto result = client.Post(url.path, headers, payload, "application/json");
    if (!result) {
      last_error = "network error: " + httplib::to_string(result.error());
      continue;  // connection failures and timeouts are transient
    }
    if (stats != nullptr) stats->last_status = result->status;
    if (result->status >= 200 && result->status < 300) {
      return extract_completion(result->body, config.body_shape);
    }
    if (is_transient_status(result->status)) {
      last_error = "transient HTTP " + std::to_string(result->status);
      continue;
    }
    throw DataError("completion request failed with HTTP " + std::to_string(result->status));
  }
  throw DataError("completion request failed after " + std::to_string(config.max_retries + 1) +
                  " attempts (" + last_error + ")");
}

std::vector<SummaryRecord> batch_generate(const GenerationConfig& config,
                                          const std::vector<Document>& articles, int runs,
                                          const std::string& model_tag,
                                          const std::filesystem::path& output_path,
                                          BatchStats* stats) {
  if (runs < 1) throw ConfigError("batch_generate requires runs >= 1");

  std::set<std::tuple<std::string, int, std::string>> existing;
  if (std::filesystem::exists(output_path)) {
    for (const auto& record : load_summary_records(output_path)) {
      existing.insert({record.article_id, record.run_id, record.model_tag});
    }
  }

  struct Task {
    const Document* article;
    int run_id;
  };
  std::vector<Task> tasks;
  std::size_t skipped_existing = 0;
  for (const auto& article : articles) {
    for (int run = 0; run < runs; ++run) {
      if (existing.count({article.id, run, model_tag}) > 0) {
        ++skipped_existing;
        continue;
      }
      tasks.push_back({&article, run});
    }
  }

  std::ofstream out(output_path, std::ios::app);
  if (!out) throw DataError("cannot open output file: " + output_path.string());

  std::vector<std::optional<SummaryRecord>> produced(tasks.size());
  std::atomic<std::size_t> next_task{0};
  std::mutex output_mutex;
  RateLimiter limiter(config.rate_limit_rps);

  const auto worker = [&]() {
    for (;;) {
      const std::size_t index = next_task.fetch_add(1);
      if (index >= tasks.size()) return;
      const Task& task = tasks[index];
      limiter.acquire();
      try {
        const std::string prompt = build_prompt(task.article->text, config.max_input_chars);
        const std::string completion = request_summary(config, prompt);
        SummaryRecord record;
        record.article_id = task.article->id;
        record.summary_id = make_summary_id(task.article->id, model_tag, task.run_id);
        record.run_id = task.run_id;
        record.model_tag = model_tag;
        record.text = completion;
        {
          std::lock_guard<std::mutex> lock(output_mutex);
          out << summary_record_to_jsonl(record);
          out.flush();
        }
        produced[index] = std::move(record);
      } catch (const Error& e) {
        std::lock_guard<std::mutex> lock(output_mutex);
        log_warn("stage=generate article=" + task.article->id +
                 " run=" + std::to_string(task.run_id) + " error=\"" + e.what() + "\"");
      }
    }
  };

  const int thread_count =
      std::max(1, std::min<int>(config.concurrency, static_cast<int>(tasks.size())));
  std::vector<std::thread> threads;
  threads.reserve(static_cast<std::size_t>(thread_count));
  for (int i = 0; i < thread_count; ++i) threads.emplace_back(worker);
  for (auto& thread : threads) thread.join();

  std::vector<SummaryRecord> records;
  records.reserve(tasks.size());
  for (auto& maybe : produced) {
    if (maybe) records.push_back(std::move(*maybe));
  }
  if (stats != nullptr) {
    stats->attempted = tasks.size();
    stats->succeeded = records.size();
    stats->skipped_existing = skipped_existing;
  }
  return records;
}

}  // namespace summeval
