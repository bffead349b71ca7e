#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "summeval/errors.hpp"
#include "summeval/report.hpp"
#include "summeval/rng.hpp"

using namespace summeval;

namespace {

SummaryRecord rec(const std::string& article, const std::string& tag, int run,
                  const std::string& text = "summary text") {
  SummaryRecord r;
  r.article_id = article;
  r.summary_id = make_summary_id(article, tag, run);
  r.run_id = run;
  r.model_tag = tag;
  r.text = text;
  return r;
}

}  // namespace

TEST_CASE("aggregate documented examples") {
  const std::vector<double> v123 = {1.0, 2.0, 3.0};
  const auto stats = aggregate(v123);
  CHECK(stats.mean == doctest::Approx(2.0));
  CHECK(stats.stddev == doctest::Approx(1.0));  // sample stddev
  CHECK(stats.n == 3);

  const std::vector<double> single = {0.5};
  CHECK(aggregate(single).mean == doctest::Approx(0.5));
  CHECK(aggregate(single).stddev == doctest::Approx(0.0));

  const std::vector<double> constant = {0.7, 0.7, 0.7};
  CHECK(aggregate(constant).stddev == doctest::Approx(0.0));

  CHECK_THROWS_AS(aggregate(std::vector<double>{}), DataError);
}

TEST_CASE("aggregate matches the two-pass oracle") {
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> values;
    const std::size_t n = 1 + rng_below(rng, 40);
    for (std::size_t i = 0; i < n; ++i) values.push_back(rng_uniform01(rng) * 10.0 - 5.0);
    const auto stats = aggregate(values);

    double sum = 0.0;
    for (const double v : values) sum += v;
    const double mean = sum / static_cast<double>(n);
    double ss = 0.0;
    for (const double v : values) ss += (v - mean) * (v - mean);
    const double stddev = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1)) : 0.0;

    CHECK(stats.mean == doctest::Approx(mean).epsilon(1e-12));
    CHECK(stats.stddev == doctest::Approx(stddev).epsilon(1e-12));
  }
}

TEST_CASE("random_pairing is a derangement, deterministic per seed") {
  SUBCASE("two articles force the swap") {
    const std::vector<SummaryRecord> summaries = {rec("a", "m", 0), rec("b", "m", 0)};
    const auto pairs = random_pairing({"a", "b"}, summaries, 5);
    REQUIRE(pairs.size() == 2);
    CHECK(pairs[0].second == make_summary_id("b", "m", 0));
    CHECK(pairs[1].second == make_summary_id("a", "m", 0));
  }
  SUBCASE("never a fixed point, any size or seed") {
    for (std::size_t n : {2, 3, 5, 9}) {
      std::vector<std::string> ids;
      std::vector<SummaryRecord> summaries;
      for (std::size_t i = 0; i < n; ++i) {
        ids.push_back("a" + std::to_string(i));
        summaries.push_back(rec(ids.back(), "m", 0));
      }
      for (std::uint64_t seed = 0; seed < 100; ++seed) {
        for (const auto& [article, summary] : random_pairing(ids, summaries, seed)) {
          CHECK(summary != make_summary_id(article, "m", 0));
        }
      }
    }
  }
  SUBCASE("same seed twice is identical") {
    std::vector<std::string> ids;
    std::vector<SummaryRecord> summaries;
    for (int i = 0; i < 7; ++i) {
      ids.push_back("a" + std::to_string(i));
      summaries.push_back(rec(ids.back(), "m", 0));
    }
    CHECK(random_pairing(ids, summaries, 42) == random_pairing(ids, summaries, 42));
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(random_pairing({"only"}, {rec("only", "m", 0)}, 1), DataError);
    CHECK_THROWS_AS(random_pairing({"a", "b"}, {rec("a", "m", 0)}, 1), DataError);
  }
}

TEST_CASE("random_pairing marginals are uniform over non-self targets") {
  // n = 5: each article should hit each other article's summary 1/4 of the
  // time. 10,000 seeds, 3-sigma band.
  const std::size_t n = 5;
  std::vector<std::string> ids;
  std::vector<SummaryRecord> summaries;
  for (std::size_t i = 0; i < n; ++i) {
    ids.push_back("a" + std::to_string(i));
    summaries.push_back(rec(ids.back(), "m", 0));
  }
  std::map<std::pair<std::string, std::string>, int> counts;
  const int trials = 10000;
  for (int seed = 0; seed < trials; ++seed) {
    for (const auto& pair : random_pairing(ids, summaries, static_cast<std::uint64_t>(seed))) {
      ++counts[pair];
    }
  }
  const double p = 1.0 / static_cast<double>(n - 1);
  const double sigma = std::sqrt(p * (1.0 - p) / trials);
  for (const auto& article : ids) {
    for (const auto& other : ids) {
      if (article == other) continue;
      const auto key = std::make_pair(article, make_summary_id(other, "m", 0));
      const double freq = static_cast<double>(counts[key]) / trials;
      CHECK(std::abs(freq - p) <= 3.0 * sigma);
    }
  }
}

TEST_CASE("percent_change reproduces the published comparisons") {
  // Mean TS across runs, unfiltered vs filtered.
  const double before = (0.69 + 0.70 + 0.69) / 3.0;
  const double after = (0.90 + 0.88 + 0.89) / 3.0;
  CHECK(percent_change(before, after) == doctest::Approx(28.0).epsilon(0.036));
  CHECK(percent_change(0.36, 0.45) == doctest::Approx(25.0));
  CHECK(percent_change(1.0, 1.0) == doctest::Approx(0.0));
  CHECK(percent_change(0.5, 0.25) == doctest::Approx(-50.0));
  CHECK_THROWS_AS(percent_change(0.0, 1.0), DataError);
}

TEST_CASE("build_report groups scores per tag, run, metric and variant") {
  std::vector<SummaryRecord> records;
  std::vector<PairScore> scores;
  std::vector<ValidityVerdict> verdicts;
  // Two articles, foundation tag, runs 0 and 1. One summary of run 0 is
  // invalid.
  for (const std::string article : {"a1", "a2"}) {
    for (int run = 0; run < 2; ++run) {
      records.push_back(rec(article, "foundation", run));
      PairScore score;
      score.article_id = article;
      score.summary_id = records.back().summary_id;
      score.metric = "ts";
      score.value = article == "a1" ? 0.9 : 0.5;
      scores.push_back(score);

      ValidityVerdict verdict;
      verdict.summary_id = records.back().summary_id;
      verdict.is_valid = !(article == "a2" && run == 0);
      if (!verdict.is_valid) verdict.triggered_rules.insert("R4");
      verdicts.push_back(verdict);
    }
  }

  const auto report = build_report(records, verdicts, scores, {}, {}, {}, {});
  CHECK(report.total_records == 4);
  CHECK(report.valid_records == 3);
  CHECK(report.invalid_records == 1);
  CHECK(report.proportion_invalid == doctest::Approx(0.25));

  // all-pairs rows: run 0 mean (0.9+0.5)/2, run 1 same.
  const auto find_row = [&](const std::string& variant, int run) {
    for (const auto& row : report.rows) {
      if (row.variant == variant && row.run_id == run &&
          row.label == "Article - Foundation Summary") {
        return row;
      }
    }
    REQUIRE(false);
    return AggregateRow{};
  };
  CHECK(find_row("all", 0).mean == doctest::Approx(0.7));
  CHECK(find_row("all", 0).n == 2);
  // valid-only removes the invalid a2 run-0 summary.
  CHECK(find_row("valid_only", 0).mean == doctest::Approx(0.9));
  CHECK(find_row("valid_only", 0).n == 1);
  CHECK(find_row("valid_only", 1).n == 2);

  // Unfiltered n = valid n + invalid n per cell.
  CHECK(find_row("all", 0).n ==
        find_row("valid_only", 0).n + 1);
}

TEST_CASE("build_report renders n/a for cells with zero valid pairs") {
  std::vector<SummaryRecord> records = {rec("a1", "foundation", 0, "text")};
  std::vector<PairScore> scores = {{"a1", records[0].summary_id, "ts", 0.4, false}};
  std::vector<ValidityVerdict> verdicts(1);
  verdicts[0].summary_id = records[0].summary_id;
  verdicts[0].is_valid = false;
  verdicts[0].triggered_rules.insert("R4");

  const auto report = build_report(records, verdicts, scores, {}, {}, {}, {});
  bool found_undefined = false;
  for (const auto& row : report.rows) {
    if (row.variant == "valid_only") {
      CHECK_FALSE(row.defined);
      found_undefined = true;
    }
  }
  CHECK(found_undefined);
  const auto markdown = render(report, RenderFormat::Markdown);
  CHECK(markdown.find("n/a") != std::string::npos);
}

TEST_CASE("build_report rejects dangling score references") {
  std::vector<SummaryRecord> records = {rec("a1", "foundation", 0)};
  std::vector<PairScore> bad_summary = {{"a1", "nope", "ts", 0.4, false}};
  CHECK_THROWS_AS(build_report(records, std::nullopt, bad_summary, {}, {}, {}, {}), DataError);

  std::vector<PairScore> bad_article = {{"a9", records[0].summary_id, "ts", 0.4, false}};
  CHECK_THROWS_AS(build_report(records, std::nullopt, bad_article, {}, {}, {}, {}), DataError);

  std::vector<ExternalScore> bad_external = {{"a1", "nope", "alignscore", 0.4}};
  CHECK_THROWS_AS(build_report(records, std::nullopt, {}, bad_external, {}, {}, {}), DataError);
}

TEST_CASE("build_report excludes OOV scores by default and counts them") {
  std::vector<SummaryRecord> records = {rec("a1", "foundation", 0), rec("a2", "foundation", 0)};
  std::vector<PairScore> scores = {
      {"a1", records[0].summary_id, "ts", 0.9, false},
      {"a2", records[1].summary_id, "ts", 0.5, true},  // uniform fallback
  };
  const auto excluded = build_report(records, std::nullopt, scores, {}, {}, {}, {});
  CHECK(excluded.oov_excluded_scores == 1);
  CHECK(excluded.rows.at(0).n == 1);
  CHECK(excluded.rows.at(0).mean == doctest::Approx(0.9));

  ReportOptions include;
  include.include_oov_pairs = true;
  const auto kept = build_report(records, std::nullopt, scores, {}, {}, {}, {}, include);
  CHECK(kept.oov_excluded_scores == 0);
  CHECK(kept.rows.at(0).n == 2);
}

TEST_CASE("build_report usefulness cross-tabulation reproduces the published shape") {
  std::vector<SummaryRecord> records;
  std::vector<PairScore> ts_scores;
  std::vector<ExternalScore> align_scores;
  std::map<std::string, int> usefulness;
  // Fixture values chosen so the class means land on the published cells:
  // Not Useful -> (TS 0.81, AlignScore 0.40); Useful -> (TS 0.99, 0.54).
  int i = 0;
  const auto add = [&](int rating, double ts, double align, int count) {
    for (int j = 0; j < count; ++j) {
      const std::string article = "a" + std::to_string(i++);
      records.push_back(rec(article, "foundation", 0));
      const auto& id = records.back().summary_id;
      ts_scores.push_back({article, id, "ts", ts, false});
      align_scores.push_back({article, id, "alignscore", align});
      usefulness[id] = rating;
    }
  };
  add(0, 0.81, 0.40, 10);
  add(1, 0.97, 0.47, 10);
  add(2, 0.98, 0.56, 10);
  // Binary "Useful" mean over ratings 1 and 2: ts (0.97+0.98)/2 != 0.99, so
  // feed the exact published binary means through the rated cells instead:
  // use rating-specific values but check the rated table, and check the
  // binary table against the arithmetic mean of its members.

  const auto report =
      build_report(records, std::nullopt, ts_scores, align_scores, {}, usefulness, {});

  const auto cell = [&](const std::string& categorization, const std::string& category,
                        const std::string& metric) {
    for (const auto& row : report.usefulness) {
      if (row.categorization == categorization && row.category == category &&
          row.metric == metric) {
        return row.mean;
      }
    }
    REQUIRE(false);
    return 0.0;
  };
  CHECK(cell("rated", "0", "ts") == doctest::Approx(0.81));
  CHECK(cell("rated", "0", "alignscore") == doctest::Approx(0.40));
  CHECK(cell("rated", "1", "ts") == doctest::Approx(0.97));
  CHECK(cell("rated", "2", "alignscore") == doctest::Approx(0.56));
  CHECK(cell("binary", "Not Useful", "ts") == doctest::Approx(0.81));
  CHECK(cell("binary", "Not Useful", "alignscore") == doctest::Approx(0.40));
  CHECK(cell("binary", "Useful", "ts") == doctest::Approx(0.975));
  CHECK(cell("binary", "Useful", "alignscore") == doctest::Approx(0.515));

  const auto markdown = render(report, RenderFormat::Markdown);
  CHECK(markdown.find("Categorization I") != std::string::npos);
  CHECK(markdown.find("Categorization II") != std::string::npos);
  CHECK(markdown.find("Not Useful") != std::string::npos);
  CHECK(markdown.find("Useful Rated: 2") != std::string::npos);
}

TEST_CASE("markdown rendering uses the two-decimal mean±stddev cell format") {
  EvaluationReport report;
  report.total_records = 3;
  AggregateRow row;
  row.label = "Article - Foundation Summary";
  row.run_id = 0;
  row.metric = "ts";
  row.variant = "all";
  row.mean = 0.693;
  row.stddev = 0.401;
  row.n = 3;
  report.rows.push_back(row);

  const auto markdown = render(report, RenderFormat::Markdown);
  CHECK(markdown.find("0.69±0.40") != std::string::npos);
  CHECK(markdown.find("Article - Foundation Summary") != std::string::npos);
  CHECK(markdown.find("Run 0") != std::string::npos);
}

TEST_CASE("JSON rendering round-trips exactly") {
  std::vector<SummaryRecord> records = {rec("a1", "foundation", 0), rec("a2", "foundation", 0)};
  std::vector<PairScore> scores = {
      {"a1", records[0].summary_id, "ts", 1.0 / 3.0, false},
      {"a2", records[1].summary_id, "ts", 0.123456789012345, false},
  };
  std::vector<ValidityVerdict> verdicts;
  for (const auto& record : records) {
    ValidityVerdict v;
    v.summary_id = record.summary_id;
    v.is_valid = true;
    verdicts.push_back(v);
  }
  std::map<std::string, HumanLabel> labels = {
      {records[0].summary_id, HumanLabel::Valid},
      {records[1].summary_id, HumanLabel::Invalid},
  };
  const auto report = build_report(records, verdicts, scores, {}, labels, {}, {});
  REQUIRE(report.detector_confusion.has_value());

  const auto json_text = render(report, RenderFormat::Json);
  const auto parsed = report_from_json(json_text);
  CHECK(parsed == report);

  // Rendering is deterministic.
  CHECK(render(report, RenderFormat::Json) == json_text);
  CHECK(render(parsed, RenderFormat::Json) == json_text);
}

TEST_CASE("empty report renders valid skeletons in all formats") {
  EvaluationReport empty;
  const auto markdown = render(empty, RenderFormat::Markdown);
  CHECK(markdown.find("# Evaluation Report") != std::string::npos);
  const auto csv = render(empty, RenderFormat::Csv);
  CHECK(csv.find("kind,label,run_id,metric,variant,mean,stddev,n") == 0);
  const auto parsed = report_from_json(render(empty, RenderFormat::Json));
  CHECK(parsed == empty);
}

TEST_CASE("CSV rendering is locale-independent full precision") {
  EvaluationReport report;
  AggregateRow row;
  row.label = "Article - Foundation Summary";
  row.run_id = 0;
  row.metric = "ts";
  row.variant = "all";
  row.mean = 0.5;
  row.stddev = 0.125;
  row.n = 4;
  report.rows.push_back(row);
  const auto csv = render(report, RenderFormat::Csv);
  CHECK(csv.find("0.5,0.125,4") != std::string::npos);
  CHECK(csv.find(',') != std::string::npos);
  CHECK(csv.find("0,5") == std::string::npos);  // no decimal commas
}
