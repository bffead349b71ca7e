#include "summeval/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <random>
#include <set>

#include "json.hpp"
#include "summeval/errors.hpp"
#include "summeval/rng.hpp"

namespace summeval {

namespace {

std::string format_double(double value) {
  char buf[32];
  const auto result = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, result.ptr);
}

std::string format_2dp(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", value);
  return std::string(buf);
}

std::string display_tag(const std::string& tag) {
  if (tag.empty()) return tag;
  std::string out = tag;
  if (out[0] >= 'a' && out[0] <= 'z') out[0] = static_cast<char>(out[0] - 'a' + 'A');
  return out;
}

std::string comparison_label(const std::string& tag) {
  return "Article - " + display_tag(tag) + " Summary";
}

constexpr const char* kRandomLabel = "Article - Random Summary";

struct CellKey {
  std::string metric;
  std::string variant;
  std::string label;
  int run_id;

  bool operator<(const CellKey& other) const {
    return std::tie(metric, variant, label, run_id) <
           std::tie(other.metric, other.variant, other.label, other.run_id);
  }
};

}  // namespace

AggregateStats aggregate(std::span<const double> scores) {
  if (scores.empty()) throw DataError("aggregate requires at least one score");
  AggregateStats stats;
  stats.n = scores.size();
  double sum = 0.0;
  for (const double s : scores) sum += s;
  stats.mean = sum / static_cast<double>(scores.size());
  if (scores.size() > 1) {
    double ss = 0.0;
    for (const double s : scores) {
      const double d = s - stats.mean;
      ss += d * d;
    }
    stats.stddev = std::sqrt(ss / static_cast<double>(scores.size() - 1));
  }
  return stats;
}

std::vector<std::pair<std::string, std::string>> random_pairing(
    const std::vector<std::string>& article_ids, const std::vector<SummaryRecord>& summaries,
    std::uint64_t seed) {
  if (article_ids.size() < 2) throw DataError("random_pairing requires at least 2 articles");
  std::set<std::string> distinct(article_ids.begin(), article_ids.end());
  if (distinct.size() != article_ids.size()) {
    throw DataError("random_pairing: duplicate article ids");
  }

  std::map<std::string, const SummaryRecord*> first_summary;
  for (const auto& record : summaries) {
    first_summary.try_emplace(record.article_id, &record);
  }
  for (const auto& id : article_ids) {
    if (first_summary.find(id) == first_summary.end()) {
      throw DataError("random_pairing: no summary for article '" + id + "'");
    }
  }

  // Rejection-sampled derangement keeps the distribution uniform over
  // derangements for the statistical baseline property.
  const std::size_t n = article_ids.size();
  std::vector<std::size_t> target(n);
  std::mt19937_64 rng(seed);
  for (;;) {
    for (std::size_t i = 0; i < n; ++i) target[i] = i;
    rng_shuffle(target, rng);
    bool has_fixed_point = false;
    for (std::size_t i = 0; i < n; ++i) {
      if (target[i] == i) {
        has_fixed_point = true;
        break;
      }
    }
    if (!has_fixed_point) break;
  }

  std::vector<std::pair<std::string, std::string>> pairs;
  pairs.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    pairs.emplace_back(article_ids[i], first_summary.at(article_ids[target[i]])->summary_id);
  }
  return pairs;
}

double percent_change(double before, double after) {
  if (before == 0.0) throw DataError("percent_change undefined for before == 0");
  return (after - before) / std::abs(before) * 100.0;
}

EvaluationReport build_report(const std::vector<SummaryRecord>& records,
                              const std::optional<std::vector<ValidityVerdict>>& verdicts,
                              const std::vector<PairScore>& pair_scores,
                              const std::vector<ExternalScore>& external_scores,
                              const std::map<std::string, HumanLabel>& validity_labels,
                              const std::map<std::string, int>& usefulness_labels,
                              const std::vector<RandomBaselineScore>& random_scores,
                              const ReportOptions& options) {
  EvaluationReport report;
  report.total_records = records.size();

  std::map<std::string, const SummaryRecord*> by_summary_id;
  std::vector<std::string> tag_order;
  for (const auto& record : records) {
    if (!by_summary_id.emplace(record.summary_id, &record).second) {
      throw DataError("duplicate summary_id '" + record.summary_id + "'");
    }
    if (std::find(tag_order.begin(), tag_order.end(), record.model_tag) == tag_order.end()) {
      tag_order.push_back(record.model_tag);
    }
  }

  std::map<std::string, bool> valid_by_id;
  if (verdicts) {
    for (const auto& verdict : *verdicts) {
      valid_by_id[verdict.summary_id] = verdict.is_valid;
      if (by_summary_id.find(verdict.summary_id) == by_summary_id.end()) {
        throw DataError("verdict references unknown summary_id '" + verdict.summary_id + "'");
      }
    }
    for (const auto& record : records) {
      if (valid_by_id.find(record.summary_id) == valid_by_id.end()) {
        throw DataError("no verdict for summary_id '" + record.summary_id + "'");
      }
      if (valid_by_id[record.summary_id]) {
        ++report.valid_records;
      } else {
        ++report.invalid_records;
      }
    }
    report.has_verdicts = true;
    report.proportion_invalid =
        records.empty() ? 0.0
                        : static_cast<double>(report.invalid_records) /
                              static_cast<double>(records.size());

    if (!validity_labels.empty()) {
      // Human labels usually cover a subset; score the detector on it.
      std::vector<ValidityVerdict> labeled;
      for (const auto& verdict : *verdicts) {
        if (validity_labels.count(verdict.summary_id) > 0) labeled.push_back(verdict);
      }
      if (!labeled.empty()) {
        report.detector_confusion = confusion(labeled, validity_labels);
        const auto r = rates(*report.detector_confusion);
        report.detector_fpr = r.fpr;
        report.detector_fnr = r.fnr;
      }
    }
  }

  // Merge internal and external scores into one stream keyed by record.
  struct MergedScore {
    const SummaryRecord* record;
    std::string metric;
    double value;
    bool oov;
  };
  std::vector<MergedScore> merged;
  merged.reserve(pair_scores.size() + external_scores.size());
  const auto resolve = [&](const std::string& article_id, const std::string& summary_id,
                           const std::string& metric) -> const SummaryRecord* {
    const auto it = by_summary_id.find(summary_id);
    if (it == by_summary_id.end()) {
      throw DataError("score for metric '" + metric + "' references unknown summary_id '" +
                      summary_id + "'");
    }
    if (it->second->article_id != article_id) {
      throw DataError("score for summary_id '" + summary_id + "' names article '" + article_id +
                      "' but the record belongs to '" + it->second->article_id + "'");
    }
    return it->second;
  };
  for (const auto& score : pair_scores) {
    merged.push_back(
        {resolve(score.article_id, score.summary_id, score.metric), score.metric, score.value,
         score.oov});
  }
  for (const auto& score : external_scores) {
    merged.push_back({resolve(score.article_id, score.summary_id, score.metric_name),
                      score.metric_name, score.value, false});
  }

  std::map<CellKey, std::vector<double>> cells;
  std::set<std::pair<std::string, std::string>> valid_only_groups;  // (metric, label)
  for (const auto& score : merged) {
    if (score.oov && !options.include_oov_pairs) {
      ++report.oov_excluded_scores;
      continue;
    }
    const std::string label = comparison_label(score.record->model_tag);
    cells[{score.metric, "all", label, score.record->run_id}].push_back(score.value);
    if (report.has_verdicts) {
      valid_only_groups.insert({score.metric, label});
      if (valid_by_id.at(score.record->summary_id)) {
        cells[{score.metric, "valid_only", label, score.record->run_id}].push_back(score.value);
      }
    }
  }
  for (const auto& score : random_scores) {
    if (score.oov && !options.include_oov_pairs) {
      ++report.oov_excluded_scores;
      continue;
    }
    cells[{score.metric, score.variant, kRandomLabel, score.run_id}].push_back(score.value);
  }

  // A valid-only cell with everything filtered away must still appear (as
  // n/a), so add empty placeholders for every (metric, label, run) that has
  // an unfiltered counterpart.
  if (report.has_verdicts) {
    for (const auto& [key, values] : std::map<CellKey, std::vector<double>>(cells)) {
      if (key.variant != "all") continue;
      if (valid_only_groups.count({key.metric, key.label}) == 0) continue;  // random rows
      cells.try_emplace({key.metric, "valid_only", key.label, key.run_id});
    }
  }

  // Deterministic row order: metric, variant, label (tag order, random
  // last), run.
  std::map<std::string, std::size_t> label_rank;
  for (const auto& tag : tag_order) {
    label_rank.emplace(comparison_label(tag), label_rank.size());
  }
  label_rank.emplace(kRandomLabel, label_rank.size());

  std::vector<CellKey> keys;
  keys.reserve(cells.size());
  for (const auto& [key, values] : cells) keys.push_back(key);
  std::sort(keys.begin(), keys.end(), [&](const CellKey& a, const CellKey& b) {
    const std::size_t ra = label_rank.count(a.label) ? label_rank.at(a.label) : label_rank.size();
    const std::size_t rb = label_rank.count(b.label) ? label_rank.at(b.label) : label_rank.size();
    return std::tie(a.metric, a.variant, ra, a.label, a.run_id) <
           std::tie(b.metric, b.variant, rb, b.label, b.run_id);
  });

  for (const auto& key : keys) {
    const auto& values = cells.at(key);
    AggregateRow row;
    row.label = key.label;
    row.run_id = key.run_id;
    row.metric = key.metric;
    row.variant = key.variant;
    if (values.empty()) {
      row.defined = false;
    } else {
      const auto stats = aggregate(values);
      row.mean = stats.mean;
      row.stddev = stats.stddev;
      row.n = stats.n;
    }
    report.rows.push_back(std::move(row));
  }

  // Usefulness cross-tabulation over labeled summaries.
  if (!usefulness_labels.empty()) {
    std::map<std::pair<std::string, std::string>, std::map<std::string, std::vector<double>>>
        tab;  // (categorization, category) -> metric -> values
    for (const auto& score : merged) {
      const auto it = usefulness_labels.find(score.record->summary_id);
      if (it == usefulness_labels.end()) continue;
      if (score.oov && !options.include_oov_pairs) continue;
      const int rating = it->second;
      tab[{"binary", rating >= 1 ? "Useful" : "Not Useful"}][score.metric].push_back(score.value);
      tab[{"rated", std::to_string(rating)}][score.metric].push_back(score.value);
    }
    const std::vector<std::pair<std::string, std::string>> category_order = {
        {"binary", "Not Useful"}, {"binary", "Useful"},
        {"rated", "0"},           {"rated", "1"},
        {"rated", "2"}};
    for (const auto& cat : category_order) {
      const auto it = tab.find(cat);
      if (it == tab.end()) continue;
      for (const auto& [metric, values] : it->second) {
        UsefulnessRow row;
        row.categorization = cat.first;
        row.category = cat.second;
        row.metric = metric;
        const auto stats = aggregate(values);
        row.mean = stats.mean;
        row.n = stats.n;
        report.usefulness.push_back(std::move(row));
      }
    }
  }

  return report;
}

namespace {

nlohmann::json report_to_json(const EvaluationReport& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : report.rows) {
    rows.push_back({{"label", row.label},
                    {"run_id", row.run_id},
                    {"metric", row.metric},
                    {"variant", row.variant},
                    {"defined", row.defined},
                    {"mean", row.mean},
                    {"stddev", row.stddev},
                    {"n", row.n}});
  }
  nlohmann::json usefulness = nlohmann::json::array();
  for (const auto& row : report.usefulness) {
    usefulness.push_back({{"categorization", row.categorization},
                          {"category", row.category},
                          {"metric", row.metric},
                          {"mean", row.mean},
                          {"n", row.n}});
  }
  nlohmann::json confusion_json = nullptr;
  if (report.detector_confusion) {
    confusion_json = {{"tp", report.detector_confusion->tp},
                      {"fp", report.detector_confusion->fp},
                      {"tn", report.detector_confusion->tn},
                      {"fn", report.detector_confusion->fn},
                      {"fpr", report.detector_fpr ? nlohmann::json(*report.detector_fpr)
                                                  : nlohmann::json(nullptr)},
                      {"fnr", report.detector_fnr ? nlohmann::json(*report.detector_fnr)
                                                  : nlohmann::json(nullptr)}};
  }
  return nlohmann::json{{"format_version", 1},
                        {"counts",
                         {{"total", report.total_records},
                          {"has_verdicts", report.has_verdicts},
                          {"valid", report.valid_records},
                          {"invalid", report.invalid_records},
                          {"proportion_invalid", report.proportion_invalid},
                          {"oov_excluded_scores", report.oov_excluded_scores}}},
                        {"confusion", confusion_json},
                        {"rows", rows},
                        {"usefulness", usefulness}};
}

std::string render_markdown(const EvaluationReport& report) {
  std::string out = "# Evaluation Report\n";

  out += "\n## Summary counts\n\n";
  out += "- total records: " + std::to_string(report.total_records) + "\n";
  if (report.has_verdicts) {
    out += "- valid: " + std::to_string(report.valid_records) + "\n";
    out += "- invalid: " + std::to_string(report.invalid_records) + "\n";
    out += "- proportion invalid: " + format_2dp(report.proportion_invalid) + "\n";
  }
  if (report.oov_excluded_scores > 0) {
    out += "- scores excluded as out-of-vocabulary: " +
           std::to_string(report.oov_excluded_scores) + "\n";
  }

  if (report.detector_confusion) {
    const auto& m = *report.detector_confusion;
    out += "\n## Invalid-summary detector vs human labels\n\n";
    out += "| TP | FP | TN | FN | FPR | FNR |\n|---|---|---|---|---|---|\n";
    out += "| " + std::to_string(m.tp) + " | " + std::to_string(m.fp) + " | " +
           std::to_string(m.tn) + " | " + std::to_string(m.fn) + " | " +
           (report.detector_fpr ? format_2dp(*report.detector_fpr) : "n/a") + " | " +
           (report.detector_fnr ? format_2dp(*report.detector_fnr) : "n/a") + " |\n";
  }

  // Group rows into (metric, variant) tables with runs as columns.
  std::vector<std::pair<std::string, std::string>> sections;
  for (const auto& row : report.rows) {
    const std::pair<std::string, std::string> key{row.metric, row.variant};
    if (std::find(sections.begin(), sections.end(), key) == sections.end()) {
      sections.push_back(key);
    }
  }
  for (const auto& [metric, variant] : sections) {
    std::vector<int> runs;
    std::vector<std::string> labels;
    for (const auto& row : report.rows) {
      if (row.metric != metric || row.variant != variant) continue;
      if (std::find(runs.begin(), runs.end(), row.run_id) == runs.end()) runs.push_back(row.run_id);
      if (std::find(labels.begin(), labels.end(), row.label) == labels.end()) {
        labels.push_back(row.label);
      }
    }
    std::sort(runs.begin(), runs.end());

    out += "\n## " + metric + (variant == "valid_only" ? " (valid only)" : " (all pairs)") +
           " — mean±stddev\n\n";
    out += "| Comparison |";
    for (const int run : runs) out += " Run " + std::to_string(run) + " |";
    out += "\n|---|";
    for (std::size_t i = 0; i < runs.size(); ++i) out += "---|";
    out += "\n";
    for (const auto& label : labels) {
      out += "| " + label + " |";
      for (const int run : runs) {
        const auto it = std::find_if(report.rows.begin(), report.rows.end(), [&](const auto& r) {
          return r.metric == metric && r.variant == variant && r.label == label && r.run_id == run;
        });
        if (it == report.rows.end() || !it->defined) {
          out += " n/a |";
        } else {
          out += " " + format_2dp(it->mean) + "±" + format_2dp(it->stddev) + " |";
        }
      }
      out += "\n";
    }
  }

  if (!report.usefulness.empty()) {
    for (const auto& [categorization, heading] :
         std::vector<std::pair<std::string, std::string>>{{"binary", "Categorization I"},
                                                          {"rated", "Categorization II"}}) {
      std::vector<std::string> metrics;
      std::vector<std::string> categories;
      for (const auto& row : report.usefulness) {
        if (row.categorization != categorization) continue;
        if (std::find(metrics.begin(), metrics.end(), row.metric) == metrics.end()) {
          metrics.push_back(row.metric);
        }
        if (std::find(categories.begin(), categories.end(), row.category) == categories.end()) {
          categories.push_back(row.category);
        }
      }
      if (categories.empty()) continue;
      out += "\n## Usefulness (" + heading + ")\n\n|  |";
      for (const auto& metric : metrics) out += " " + metric + " |";
      out += "\n|---|";
      for (std::size_t i = 0; i < metrics.size(); ++i) out += "---|";
      out += "\n";
      for (const auto& category : categories) {
        out += "| " + (categorization == "rated" ? "Useful Rated: " + category : category) + " |";
        for (const auto& metric : metrics) {
          const auto it = std::find_if(
              report.usefulness.begin(), report.usefulness.end(), [&](const auto& r) {
                return r.categorization == categorization && r.category == category &&
                       r.metric == metric;
              });
          out += it == report.usefulness.end() ? " n/a |" : " " + format_2dp(it->mean) + " |";
        }
        out += "\n";
      }
    }
  }
  return out;
}

std::string render_csv(const EvaluationReport& report) {
  std::string out = "kind,label,run_id,metric,variant,mean,stddev,n\n";
  for (const auto& row : report.rows) {
    out += "aggregate," + row.label + "," + std::to_string(row.run_id) + "," + row.metric + "," +
           row.variant + ",";
    if (row.defined) {
      out += format_double(row.mean) + "," + format_double(row.stddev) + "," +
             std::to_string(row.n);
    } else {
      out += "n/a,n/a,0";
    }
    out += "\n";
  }
  for (const auto& row : report.usefulness) {
    out += "usefulness," + row.category + ",," + row.metric + "," + row.categorization + "," +
           format_double(row.mean) + ",," + std::to_string(row.n) + "\n";
  }
  return out;
}

}  // namespace

std::string render(const EvaluationReport& report, RenderFormat format) {
  switch (format) {
    case RenderFormat::Json:
      return report_to_json(report).dump(2) + "\n";
    case RenderFormat::Csv:
      return render_csv(report);
    case RenderFormat::Markdown:
      return render_markdown(report);
  }
  throw ConfigError("unknown render format");
}

EvaluationReport report_from_json(const std::string& json_text) {
  const nlohmann::json doc = nlohmann::json::parse(json_text, nullptr, false);
  if (doc.is_discarded()) throw DataError("malformed report JSON");
  EvaluationReport report;
  const auto& counts = doc.at("counts");
  report.total_records = counts.at("total").get<std::size_t>();
  report.has_verdicts = counts.at("has_verdicts").get<bool>();
  report.valid_records = counts.at("valid").get<std::size_t>();
  report.invalid_records = counts.at("invalid").get<std::size_t>();
  report.proportion_invalid = counts.at("proportion_invalid").get<double>();
  report.oov_excluded_scores = counts.at("oov_excluded_scores").get<std::size_t>();
  if (!doc.at("confusion").is_null()) {
    const auto& c = doc.at("confusion");
    ConfusionMatrix m;
    m.tp = c.at("tp").get<long long>();
    m.fp = c.at("fp").get<long long>();
    m.tn = c.at("tn").get<long long>();
    m.fn = c.at("fn").get<long long>();
    report.detector_confusion = m;
    if (!c.at("fpr").is_null()) report.detector_fpr = c.at("fpr").get<double>();
    if (!c.at("fnr").is_null()) report.detector_fnr = c.at("fnr").get<double>();
  }
  for (const auto& r : doc.at("rows")) {
    AggregateRow row;
    row.label = r.at("label").get<std::string>();
    row.run_id = r.at("run_id").get<int>();
    row.metric = r.at("metric").get<std::string>();
    row.variant = r.at("variant").get<std::string>();
    row.defined = r.at("defined").get<bool>();
    row.mean = r.at("mean").get<double>();
    row.stddev = r.at("stddev").get<double>();
    row.n = r.at("n").get<std::size_t>();
    report.rows.push_back(std::move(row));
  }
  for (const auto& r : doc.at("usefulness")) {
    UsefulnessRow row;
    row.categorization = r.at("categorization").get<std::string>();
    row.category = r.at("category").get<std::string>();
    row.metric = r.at("metric").get<std::string>();
    row.mean = r.at("mean").get<double>();
    row.n = r.at("n").get<std::size_t>();
    report.usefulness.push_back(std::move(row));
  }
  return report;
}

}  // namespace summeval
