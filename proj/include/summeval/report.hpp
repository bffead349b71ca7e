#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "summeval/metrics.hpp"
#include "summeval/records.hpp"
#include "summeval/validity.hpp"

namespace summeval {

struct AggregateStats {
  double mean = 0.0;
  double stddev = 0.0;  // sample (n-1); 0 when n == 1
  std::size_t n = 0;
};

AggregateStats aggregate(std::span<const double> scores);

// Seeded derangement baseline: every article is paired with the summary of a
// different article. Returns (article_id, summary_id) pairs in input order.
std::vector<std::pair<std::string, std::string>> random_pairing(
    const std::vector<std::string>& article_ids, const std::vector<SummaryRecord>& summaries,
    std::uint64_t seed);

// (after - before) / |before| * 100
double percent_change(double before, double after);

// One internally computed (article, summary) score.
struct PairScore {
  std::string article_id;
  std::string summary_id;
  std::string metric;
  double value = 0.0;
  bool oov = false;  // either side of the TS pair fell back to uniform
};

// One random-baseline score, already grouped by run by the caller.
struct RandomBaselineScore {
  int run_id = 0;
  std::string metric;
  std::string variant;  // "all" or "valid_only"
  double value = 0.0;
  bool oov = false;
};

struct AggregateRow {
  std::string label;
  int run_id = 0;
  std::string metric;
  std::string variant;  // "all" or "valid_only"
  bool defined = true;  // false renders as n/a
  double mean = 0.0;
  double stddev = 0.0;
  std::size_t n = 0;

  bool operator==(const AggregateRow&) const = default;
};

struct UsefulnessRow {
  std::string categorization;  // "binary" or "rated"
  std::string category;        // "Not Useful"/"Useful" or "0"/"1"/"2"
  std::string metric;
  double mean = 0.0;
  std::size_t n = 0;

  bool operator==(const UsefulnessRow&) const = default;
};

struct EvaluationReport {
  std::size_t total_records = 0;
  bool has_verdicts = false;
  std::size_t valid_records = 0;
  std::size_t invalid_records = 0;
  double proportion_invalid = 0.0;
  std::size_t oov_excluded_scores = 0;
  std::optional<ConfusionMatrix> detector_confusion;
  std::optional<double> detector_fpr;
  std::optional<double> detector_fnr;
  std::vector<AggregateRow> rows;
  std::vector<UsefulnessRow> usefulness;

  bool operator==(const EvaluationReport&) const = default;
};

struct ReportOptions {
  bool include_oov_pairs = false;
};

// Joins records, verdicts, internal and external scores, human labels and
// baseline scores into the aggregate tables. Every score must reference a
// known (article_id, summary_id) pair; dangling references abort.
EvaluationReport build_report(const std::vector<SummaryRecord>& records,
                              const std::optional<std::vector<ValidityVerdict>>& verdicts,
                              const std::vector<PairScore>& pair_scores,
                              const std::vector<ExternalScore>& external_scores,
                              const std::map<std::string, HumanLabel>& validity_labels,
                              const std::map<std::string, int>& usefulness_labels,
                              const std::vector<RandomBaselineScore>& random_scores,
                              const ReportOptions& options = {});

enum class RenderFormat { Csv, Json, Markdown };

// Markdown formats cells as "mean±stddev" at two decimals; CSV and JSON keep
// full precision. Output is deterministic and locale-independent.
std::string render(const EvaluationReport& report, RenderFormat format);

EvaluationReport report_from_json(const std::string& json_text);

}  // namespace summeval
