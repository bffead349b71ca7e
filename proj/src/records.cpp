#include "summeval/records.hpp"

#include <set>

#include "summeval/errors.hpp"
#include "summeval/jsonl.hpp"

namespace summeval {

std::string make_summary_id(const std::string& article_id, const std::string& model_tag,
                            int run_id) {
  return article_id + ":" + model_tag + ":r" + std::to_string(run_id);
}

std::vector<SummaryRecord> load_summary_records(const std::filesystem::path& path) {
  std::vector<SummaryRecord> records;
  std::set<std::string> seen_summary_ids;
  std::set<std::tuple<std::string, int, std::string>> seen_keys;
  for_each_jsonl(path, [&](std::size_t line_number, const nlohmann::json& value) {
    const auto fail = [&](const std::string& what) {
      throw DataError(path.string() + ": line " + std::to_string(line_number) + ": " + what);
    };
    if (!value.is_object()) fail("expected an object");
    for (const char* field : {"article_id", "summary_id", "model_tag", "text"}) {
      if (!value.contains(field) || !value[field].is_string()) {
        fail(std::string("missing string field '") + field + "'");
      }
    }
    if (!value.contains("run_id") || !value["run_id"].is_number_integer()) {
      fail("missing integer field 'run_id'");
    }
    SummaryRecord record;
    record.article_id = value["article_id"].get<std::string>();
    record.summary_id = value["summary_id"].get<std::string>();
    record.run_id = value["run_id"].get<int>();
    record.model_tag = value["model_tag"].get<std::string>();
    record.text = value["text"].get<std::string>();
    if (!seen_summary_ids.insert(record.summary_id).second) {
      fail("duplicate summary_id '" + record.summary_id + "'");
    }
    if (!seen_keys.insert({record.article_id, record.run_id, record.model_tag}).second) {
      fail("duplicate (article_id, run_id, model_tag) key for article '" + record.article_id + "'");
    }
    records.push_back(std::move(record));
  });
  return records;
}

std::string summary_record_to_jsonl(const SummaryRecord& record) {
  nlohmann::json value{{"article_id", record.article_id},
                       {"summary_id", record.summary_id},
                       {"run_id", record.run_id},
                       {"model_tag", record.model_tag},
                       {"text", record.text}};
  return to_jsonl_line(value);
}

}  // namespace summeval
