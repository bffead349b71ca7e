#include "summeval/validity.hpp"

#include <fstream>

#include "summeval/errors.hpp"
#include "summeval/jsonl.hpp"
#include "summeval/text.hpp"

namespace summeval {

namespace {

bool is_word_char(char c) {
  return is_ascii_alnum(c) || c == '_';
}

// "def" at a word boundary, optional whitespace, identifier, optional
// whitespace, "(".
bool has_python_signature(std::string_view text) {
  for (std::size_t i = 0; i + 3 <= text.size(); ++i) {
    if (text.compare(i, 3, "def") != 0) continue;
    if (i > 0 && is_word_char(text[i - 1])) continue;
    std::size_t pos = i + 3;
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos >= text.size()) continue;
    if (!is_ascii_letter(text[pos]) && text[pos] != '_') continue;
    while (pos < text.size() && is_word_char(text[pos])) ++pos;
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos < text.size() && text[pos] == '(') return true;
  }
  return false;
}

// Case-insensitive whole-word occurrences ("summaries" does not count).
std::size_t count_whole_word(std::string_view text, std::string_view word) {
  const std::string haystack = to_lower_ascii(text);
  std::size_t count = 0;
  std::size_t pos = 0;
  while ((pos = haystack.find(word, pos)) != std::string::npos) {
    const bool left_ok = pos == 0 || !is_word_char(haystack[pos - 1]);
    const std::size_t end = pos + word.size();
    const bool right_ok = end >= haystack.size() || !is_word_char(haystack[end]);
    if (left_ok && right_ok) ++count;
    pos += 1;
  }
  return count;
}

bool contains_ci(std::string_view text, std::string_view needle) {
  return to_lower_ascii(text).find(needle) != std::string::npos;
}

bool has_no_letters(std::string_view text) {
  for (const char c : text) {
    if (is_ascii_letter(c)) return false;
  }
  return true;
}

std::size_t count_char(std::string_view text, char c) {
  std::size_t count = 0;
  for (const char x : text) {
    if (x == c) ++count;
  }
  return count;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  for (const char c : line) {
    if (c == ',') {
      fields.push_back(field);
      field.clear();
    } else {
      field += c;
    }
  }
  fields.push_back(field);
  return fields;
}

}  // namespace

const std::vector<ValidityRule>& default_rules() {
  static const std::vector<ValidityRule> rules = {
      {"R1", "Python function signature seen in the summary",
       [](std::string_view s) { return has_python_signature(s); }},
      {"R2", "the word \"summary\" occurs three or more times",
       [](std::string_view s) { return count_whole_word(s, "summary") >= 3; }},
      {"R3", "the phrase \"adobe reader\" appears",
       [](std::string_view s) { return contains_ci(s, "adobe reader"); }},
      {"R4", "no letter from the English alphabet",
       [](std::string_view s) { return has_no_letters(s); }},
      {"R5", "'=' occurs two or more times",
       [](std::string_view s) { return count_char(s, '=') >= 2; }},
  };
  return rules;
}

ValidityVerdict check_with(const std::vector<ValidityRule>& rules, std::string_view summary,
                           std::string_view summary_id) {
  ValidityVerdict verdict;
  verdict.summary_id = std::string(summary_id);
  for (const auto& rule : rules) {
    if (rule.fires(summary)) verdict.triggered_rules.insert(rule.id);
  }
  verdict.is_valid = verdict.triggered_rules.empty();
  return verdict;
}

ValidityVerdict check(std::string_view summary, std::string_view summary_id) {
  return check_with(default_rules(), summary, summary_id);
}

ValidityPartition filter_valid(const std::vector<SummaryRecord>& records) {
  ValidityPartition result;
  for (const auto& record : records) {
    if (check(record.text, record.summary_id).is_valid) {
      result.valid.push_back(record);
    } else {
      result.invalid.push_back(record);
    }
  }
  result.proportion_invalid =
      records.empty() ? 0.0
                      : static_cast<double>(result.invalid.size()) /
                            static_cast<double>(records.size());
  return result;
}

ConfusionMatrix confusion(const std::vector<ValidityVerdict>& verdicts,
                          const std::map<std::string, HumanLabel>& labels) {
  ConfusionMatrix m;
  for (const auto& verdict : verdicts) {
    const auto it = labels.find(verdict.summary_id);
    if (it == labels.end()) {
      throw DataError("no human label for summary id '" + verdict.summary_id + "'");
    }
    const bool detector_invalid = !verdict.is_valid;
    const bool label_invalid = it->second == HumanLabel::Invalid;
    if (detector_invalid && label_invalid) ++m.tp;
    if (detector_invalid && !label_invalid) ++m.fp;
    if (!detector_invalid && !label_invalid) ++m.tn;
    if (!detector_invalid && label_invalid) ++m.fn;
  }
  return m;
}

ConfusionRates rates(const ConfusionMatrix& m) {
  ConfusionRates r;
  if (m.fp + m.tn > 0) r.fpr = static_cast<double>(m.fp) / static_cast<double>(m.fp + m.tn);
  if (m.fn + m.tp > 0) r.fnr = static_cast<double>(m.fn) / static_cast<double>(m.fn + m.tp);
  return r;
}

std::map<std::string, HumanLabel> load_validity_labels(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open label file: " + path.string());
  std::map<std::string, HumanLabel> labels;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (line_number == 1 && fields.size() >= 2 && fields[0] == "id") continue;  // header
    if (fields.size() != 2) {
      throw DataError(path.string() + ": line " + std::to_string(line_number) +
                      ": expected 'id,label'");
    }
    const std::string label = to_lower_ascii(fields[1]);
    if (label == "valid") {
      labels[fields[0]] = HumanLabel::Valid;
    } else if (label == "invalid") {
      labels[fields[0]] = HumanLabel::Invalid;
    } else {
      throw DataError(path.string() + ": line " + std::to_string(line_number) +
                      ": label must be 'valid' or 'invalid', got '" + fields[1] + "'");
    }
  }
  return labels;
}

std::map<std::string, int> load_usefulness_labels(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open usefulness file: " + path.string());
  std::map<std::string, int> labels;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (line_number == 1 && fields.size() >= 2 && fields[0] == "id") continue;
    if (fields.size() != 2 || fields[1].size() != 1 || fields[1][0] < '0' || fields[1][0] > '2') {
      throw DataError(path.string() + ": line " + std::to_string(line_number) +
                      ": expected 'id,usefulness' with usefulness in {0,1,2}");
    }
    labels[fields[0]] = fields[1][0] - '0';
  }
  return labels;
}

std::string verdict_to_jsonl(const ValidityVerdict& verdict) {
  nlohmann::json rules = nlohmann::json::array();
  for (const auto& rule : verdict.triggered_rules) rules.push_back(rule);
  nlohmann::json value{
      {"id", verdict.summary_id}, {"is_valid", verdict.is_valid}, {"rules", rules}};
  return to_jsonl_line(value);
}

}  // namespace summeval
