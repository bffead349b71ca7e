#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "summeval/records.hpp"

namespace summeval {

struct ValidityVerdict {
  std::string summary_id;
  bool is_valid = true;
  std::set<std::string> triggered_rules;  // empty iff is_valid
};

// A registered heuristic. New rules can be added without touching the
// verdict type; ids must be unique within a table.
struct ValidityRule {
  std::string id;
  std::string description;
  std::function<bool(std::string_view)> fires;
};

// The five stock heuristics:
//   R1  Python function signature ("def", optional whitespace, identifier, "(")
//   R2  whole word "summary" occurs three or more times (case-insensitive)
//   R3  substring "adobe reader" (case-insensitive)
//   R4  no A-Z/a-z letter at all
//   R5  two or more '=' characters
const std::vector<ValidityRule>& default_rules();

// Evaluates every rule (no short-circuit) and reports all that fired.
ValidityVerdict check(std::string_view summary, std::string_view summary_id = {});
ValidityVerdict check_with(const std::vector<ValidityRule>& rules, std::string_view summary,
                           std::string_view summary_id = {});

struct ValidityPartition {
  std::vector<SummaryRecord> valid;
  std::vector<SummaryRecord> invalid;
  double proportion_invalid = 0.0;  // 0 for empty input
};

ValidityPartition filter_valid(const std::vector<SummaryRecord>& records);

enum class HumanLabel { Valid, Invalid };

// Positive class is "invalid summary".
struct ConfusionMatrix {
  long long tp = 0;
  long long fp = 0;
  long long tn = 0;
  long long fn = 0;

  bool operator==(const ConfusionMatrix&) const = default;
};

// Every verdict id must have a label; a missing label is a DataError.
ConfusionMatrix confusion(const std::vector<ValidityVerdict>& verdicts,
                          const std::map<std::string, HumanLabel>& labels);

// fpr = fp/(fp+tn), fnr = fn/(fn+tp); nullopt when a denominator is zero.
struct ConfusionRates {
  std::optional<double> fpr;
  std::optional<double> fnr;
};

ConfusionRates rates(const ConfusionMatrix& m);

// CSV "id,label" with label in {valid, invalid}.
std::map<std::string, HumanLabel> load_validity_labels(const std::filesystem::path& path);

// CSV "id,usefulness" with usefulness in {0,1,2}.
std::map<std::string, int> load_usefulness_labels(const std::filesystem::path& path);

// JSONL {id, is_valid, rules:[...]}
std::string verdict_to_jsonl(const ValidityVerdict& verdict);

}  // namespace summeval
