#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace summeval {

// One generated or reference summary. (article_id, run_id, model_tag)
// identifies at most one record; summary_id is unique within a file.
struct SummaryRecord {
  std::string article_id;
  std::string summary_id;
  int run_id = 0;
  std::string model_tag;
  std::string text;

  bool operator==(const SummaryRecord&) const = default;
};

std::string make_summary_id(const std::string& article_id, const std::string& model_tag,
                            int run_id);

// JSONL schema: {article_id, summary_id, run_id, model_tag, text}
std::vector<SummaryRecord> load_summary_records(const std::filesystem::path& path);
std::string summary_record_to_jsonl(const SummaryRecord& record);

}  // namespace summeval
