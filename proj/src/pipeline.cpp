#include "summeval/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <set>

#include "summeval/corpus.hpp"
#include "summeval/errors.hpp"
#include "summeval/genclient.hpp"
#include "summeval/jsonl.hpp"
#include "summeval/metrics.hpp"
#include "summeval/records.hpp"
#include "summeval/report.hpp"
#include "summeval/rng.hpp"
#include "summeval/topics.hpp"
#include "summeval/validity.hpp"

namespace summeval {

namespace {

void log_info(const std::string& message) {
  std::cerr << "INFO " << message << "\n";
}

void log_warn(const std::string& message) {
  std::cerr << "WARN " << message << "\n";
}

std::vector<std::string> split_dotted(const std::string& key) {
  std::vector<std::string> parts;
  std::string part;
  for (const char c : key) {
    if (c == '.') {
      parts.push_back(part);
      part.clear();
    } else {
      part += c;
    }
  }
  parts.push_back(part);
  return parts;
}

CorpusFormat parse_corpus_format(const std::string& format) {
  if (format == "jsonl") return CorpusFormat::Jsonl;
  if (format == "dir" || format == "directory" || format == "txt") {
    return CorpusFormat::TextDirectory;
  }
  throw ConfigError("corpus.format must be 'jsonl' or 'dir', got '" + format + "'");
}

std::filesystem::path effective_output_dir(const PipelineConfig& config,
                                           const CliOverrides& cli) {
  std::filesystem::path dir;
  if (cli.output) {
    dir = *cli.output;
  } else {
    dir = config.resolve_path(config.get_string("output_dir", "out"), /*must_exist=*/false,
                              "output_dir");
  }
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output_dir: " + dir.string());
  return dir;
}

std::uint64_t effective_seed(const PipelineConfig& config, const CliOverrides& cli,
                             const std::string& dotted_key, std::uint64_t fallback) {
  if (cli.seed) return *cli.seed;
  return static_cast<std::uint64_t>(config.get_int(dotted_key, static_cast<std::int64_t>(fallback)));
}

std::vector<Document> load_configured_corpus(const PipelineConfig& config) {
  const auto path = config.require_existing_path("corpus.path");
  const auto format = parse_corpus_format(config.get_string("corpus.format", "jsonl"));
  LoadOptions options;
  options.keep_empty = config.get_bool("corpus.keep_empty", false);
  return load_corpus(path, format, options);
}

LdaParams lda_params_from_config(const PipelineConfig& config, const CliOverrides& cli) {
  LdaParams params;
  params.topics = static_cast<int>(config.get_int("lda.topics", 8));
  params.iterations = static_cast<int>(config.get_int("lda.iterations", 30));
  params.alpha = config.get_double("lda.alpha", 0.0);
  params.beta = config.get_double("lda.beta", 0.01);
  params.seed = effective_seed(config, cli, "lda.seed", 1);
  params.min_doc_freq = static_cast<std::size_t>(config.get_int("lda.min_doc_freq", 1));
  if (config.has("lda.stopwords")) {
    params.stopwords = load_dictionary(config.require_existing_path("lda.stopwords"));
  }
  return params;
}

struct MetricSelection {
  bool ts = false;
  bool rouge1 = false;
  bool rouge2 = false;
  bool rouge_l = false;
  bool bleu = false;
  bool meteor = false;
};

MetricSelection parse_metric_selection(const PipelineConfig& config) {
  MetricSelection selection;
  std::vector<std::string> names = {"ts", "rouge1", "rouge2", "rougeL", "bleu", "meteor"};
  if (const auto* metrics = config.find("metrics")) {
    if (!metrics->is_array()) throw ConfigError("config field 'metrics' must be an array");
    names = metrics->get<std::vector<std::string>>();
  }
  for (const auto& name : names) {
    if (name == "ts") {
      selection.ts = true;
    } else if (name == "rouge1") {
      selection.rouge1 = true;
    } else if (name == "rouge2") {
      selection.rouge2 = true;
    } else if (name == "rougeL") {
      selection.rouge_l = true;
    } else if (name == "bleu") {
      selection.bleu = true;
    } else if (name == "meteor") {
      selection.meteor = true;
    } else {
      throw ConfigError("unknown metric '" + name + "' in config field 'metrics'");
    }
  }
  return selection;
}

constexpr const char* kReferenceTag = "reference";

}  // namespace

PipelineConfig PipelineConfig::load(const std::filesystem::path& config_path,
                                    const std::vector<std::string>& set_overrides) {
  std::error_code ec;
  if (!std::filesystem::exists(config_path, ec) || ec) {
    throw ConfigError("config file not found: " + config_path.string());
  }
  PipelineConfig config;
  config.raw_ = nlohmann::json::parse(read_file(config_path), nullptr, false);
  if (config.raw_.is_discarded() || !config.raw_.is_object()) {
    throw ConfigError("config file is not a JSON object: " + config_path.string());
  }
  config.base_dir_ = std::filesystem::absolute(config_path).parent_path();

  for (const auto& override_expr : set_overrides) {
    const auto eq = override_expr.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw ConfigError("--set expects key=value, got '" + override_expr + "'");
    }
    const std::string key = override_expr.substr(0, eq);
    const std::string value_text = override_expr.substr(eq + 1);
    nlohmann::json value = nlohmann::json::parse(value_text, nullptr, false);
    if (value.is_discarded()) value = value_text;  // bare strings are fine

    nlohmann::json* node = &config.raw_;
    const auto parts = split_dotted(key);
    for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
      if (!node->is_object()) throw ConfigError("--set key '" + key + "' crosses a non-object");
      node = &(*node)[parts[i]];
      if (node->is_null()) *node = nlohmann::json::object();
    }
    if (!node->is_object()) throw ConfigError("--set key '" + key + "' crosses a non-object");
    (*node)[parts.back()] = value;
  }
  return config;
}

const nlohmann::json* PipelineConfig::find(const std::string& dotted_key) const {
  const nlohmann::json* node = &raw_;
  for (const auto& part : split_dotted(dotted_key)) {
    if (!node->is_object()) return nullptr;
    const auto it = node->find(part);
    if (it == node->end()) return nullptr;
    node = &*it;
  }
  if (node->is_null()) return nullptr;
  return node;
}

std::string PipelineConfig::require_string(const std::string& dotted_key) const {
  const auto* node = find(dotted_key);
  if (node == nullptr) throw ConfigError("config field '" + dotted_key + "' is required");
  if (!node->is_string()) throw ConfigError("config field '" + dotted_key + "' must be a string");
  return node->get<std::string>();
}

std::string PipelineConfig::get_string(const std::string& dotted_key,
                                       const std::string& fallback) const {
  const auto* node = find(dotted_key);
  if (node == nullptr) return fallback;
  if (!node->is_string()) throw ConfigError("config field '" + dotted_key + "' must be a string");
  return node->get<std::string>();
}

double PipelineConfig::get_double(const std::string& dotted_key, double fallback) const {
  const auto* node = find(dotted_key);
  if (node == nullptr) return fallback;
  if (!node->is_number()) throw ConfigError("config field '" + dotted_key + "' must be a number");
  return node->get<double>();
}

std::int64_t PipelineConfig::get_int(const std::string& dotted_key, std::int64_t fallback) const {
  const auto* node = find(dotted_key);
  if (node == nullptr) return fallback;
  if (!node->is_number_integer()) {
    throw ConfigError("config field '" + dotted_key + "' must be an integer");
  }
  return node->get<std::int64_t>();
}

bool PipelineConfig::get_bool(const std::string& dotted_key, bool fallback) const {
  const auto* node = find(dotted_key);
  if (node == nullptr) return fallback;
  if (!node->is_boolean()) throw ConfigError("config field '" + dotted_key + "' must be a boolean");
  return node->get<bool>();
}

std::filesystem::path PipelineConfig::resolve_path(const std::string& value, bool must_exist,
                                                   const std::string& field_name) const {
  std::filesystem::path path(value);
  if (path.is_relative()) path = base_dir_ / path;
  if (must_exist) {
    std::error_code ec;
    if (!std::filesystem::exists(path, ec) || ec) {
      throw ConfigError("config field '" + field_name + "': path not found: " + path.string());
    }
  }
  return path;
}

std::filesystem::path PipelineConfig::require_existing_path(const std::string& dotted_key) const {
  return resolve_path(require_string(dotted_key), /*must_exist=*/true, dotted_key);
}

void cmd_clean(const PipelineConfig& config, const CliOverrides& cli) {
  const auto dictionary_path = config.require_existing_path("dictionary");
  const auto docs = load_configured_corpus(config);
  const auto dictionary = load_dictionary(dictionary_path);
  const double alnum_threshold = config.get_double("cleaning.alnum_threshold", 0.7);
  const double dict_threshold = config.get_double("cleaning.dict_threshold", 0.7);
  const auto out_dir = effective_output_dir(config, cli);

  const auto [kept, report] = filter_clean(docs, alnum_threshold, dict_threshold, dictionary);

  std::string corpus_out;
  for (const auto& doc : kept) {
    nlohmann::json line{{"id", doc.id}, {"text", doc.text}};
    if (!doc.metadata.empty()) line["meta"] = doc.metadata;
    corpus_out += to_jsonl_line(line);
  }
  write_file(out_dir / "cleaned_corpus.jsonl", corpus_out);
  write_file(out_dir / "cleaning_report.csv", report.to_csv());

  log_info("stage=clean alnum_threshold=" + std::to_string(alnum_threshold) +
           " dict_threshold=" + std::to_string(dict_threshold));
  std::cout << "kept=" << report.kept_count << " rejected=" << report.rejected_count << "\n";
}

void cmd_chunk(const PipelineConfig& config, const CliOverrides& cli) {
  const auto docs = load_configured_corpus(config);
  const auto chunk_length = static_cast<std::size_t>(config.get_int("chunking.chunk_length", 512));
  const auto overlap = static_cast<std::size_t>(config.get_int("chunking.overlap", 64));
  const auto out_dir = effective_output_dir(config, cli);

  std::string out;
  std::size_t chunk_count = 0;
  for (const auto& doc : docs) {
    const auto tokens = tokenize(doc.text);
    for (const auto& chunk : chunk_tokens(tokens, chunk_length, overlap, doc.id)) {
      out += to_jsonl_line(nlohmann::json{{"doc_id", chunk.doc_id},
                                          {"index", chunk.index},
                                          {"start_offset", chunk.start_offset},
                                          {"tokens", chunk.tokens}});
      ++chunk_count;
    }
  }
  write_file(out_dir / "chunks.jsonl", out);
  log_info("stage=chunk chunk_length=" + std::to_string(chunk_length) +
           " overlap=" + std::to_string(overlap));
  std::cout << "documents=" << docs.size() << " chunks=" << chunk_count << "\n";
}

void cmd_validate(const PipelineConfig& config, const CliOverrides& cli) {
  const auto summaries_path = config.require_existing_path("summaries");
  const auto out_dir = effective_output_dir(config, cli);
  const auto records = load_summary_records(summaries_path);

  std::string out;
  std::vector<ValidityVerdict> verdicts;
  verdicts.reserve(records.size());
  for (const auto& record : records) {
    verdicts.push_back(check(record.text, record.summary_id));
    out += verdict_to_jsonl(verdicts.back());
  }
  write_file(out_dir / "verdicts.jsonl", out);

  const auto partition = filter_valid(records);
  std::cout << "records=" << records.size() << " invalid=" << partition.invalid.size()
            << " proportion_invalid=" << partition.proportion_invalid << "\n";

  if (config.has("labels.validity")) {
    const auto labels = load_validity_labels(config.require_existing_path("labels.validity"));
    std::vector<ValidityVerdict> labeled;
    for (const auto& verdict : verdicts) {
      if (labels.count(verdict.summary_id) > 0) labeled.push_back(verdict);
    }
    if (labeled.empty()) {
      log_warn("stage=validate no verdict ids matched the label file");
    } else {
      const auto m = confusion(labeled, labels);
      const auto r = rates(m);
      std::cout << "tp=" << m.tp << " fp=" << m.fp << " tn=" << m.tn << " fn=" << m.fn;
      if (r.fpr) std::cout << " fpr=" << *r.fpr;
      if (r.fnr) std::cout << " fnr=" << *r.fnr;
      std::cout << "\n";
    }
  }
}

namespace {

// Tokenized article + summary documents for a joint LDA fit, per the
// evaluation protocol: every document the model scores is in-distribution.
struct EvaluationTexts {
  std::vector<std::vector<std::string>> joint_docs;
  std::map<std::string, std::vector<std::string>> article_tokens;
  std::map<std::string, std::vector<std::string>> summary_tokens;  // by summary_id
};

EvaluationTexts tokenize_for_evaluation(const std::vector<Document>& docs,
                                        const std::vector<SummaryRecord>& records) {
  EvaluationTexts texts;
  for (const auto& doc : docs) {
    auto tokens = tokenize(doc.text, /*lowercase=*/true);
    texts.joint_docs.push_back(tokens);
    texts.article_tokens.emplace(doc.id, std::move(tokens));
  }
  for (const auto& record : records) {
    auto tokens = tokenize(record.text, /*lowercase=*/true);
    texts.joint_docs.push_back(tokens);
    texts.summary_tokens.emplace(record.summary_id, std::move(tokens));
  }
  return texts;
}

}  // namespace

void cmd_evaluate(const PipelineConfig& config, const CliOverrides& cli) {
  // Validate every referenced path before any stage runs.
  const auto summaries_path = config.require_existing_path("summaries");
  std::vector<std::filesystem::path> external_paths;
  if (const auto* externals = config.find("external_scores")) {
    if (!externals->is_array()) {
      throw ConfigError("config field 'external_scores' must be an array of paths");
    }
    for (const auto& entry : *externals) {
      external_paths.push_back(
          config.resolve_path(entry.get<std::string>(), /*must_exist=*/true, "external_scores"));
    }
  }
  std::optional<std::filesystem::path> validity_labels_path;
  if (config.has("labels.validity")) {
    validity_labels_path = config.require_existing_path("labels.validity");
  }
  std::optional<std::filesystem::path> usefulness_labels_path;
  if (config.has("labels.usefulness")) {
    usefulness_labels_path = config.require_existing_path("labels.usefulness");
  }
  const auto selection = parse_metric_selection(config);
  const auto out_dir = effective_output_dir(config, cli);

  const auto docs = load_configured_corpus(config);
  const auto records = load_summary_records(summaries_path);
  if (records.empty()) throw DataError("no summary records in " + summaries_path.string());

  std::map<std::string, const Document*> docs_by_id;
  for (const auto& doc : docs) docs_by_id.emplace(doc.id, &doc);
  for (const auto& record : records) {
    if (docs_by_id.find(record.article_id) == docs_by_id.end()) {
      throw DataError("summary '" + record.summary_id + "' references unknown article '" +
                      record.article_id + "'");
    }
  }

  // Validity filtering.
  std::optional<std::vector<ValidityVerdict>> verdicts;
  if (!cli.no_filter) {
    verdicts.emplace();
    std::string verdict_lines;
    for (const auto& record : records) {
      verdicts->push_back(check(record.text, record.summary_id));
      verdict_lines += verdict_to_jsonl(verdicts->back());
    }
    write_file(out_dir / "verdicts.jsonl", verdict_lines);
  }
  std::map<std::string, bool> valid_by_id;
  if (verdicts) {
    for (const auto& verdict : *verdicts) valid_by_id[verdict.summary_id] = verdict.is_valid;
  }

  std::vector<PairScore> pair_scores;
  std::vector<RandomBaselineScore> random_scores;

  // Topic Similarity with a joint article+summary fit.
  std::map<std::string, TopicVector> article_vectors;
  std::map<std::string, TopicVector> summary_vectors;
  if (selection.ts) {
    const auto texts = tokenize_for_evaluation(docs, records);
    const auto params = lda_params_from_config(config, cli);
    log_info("stage=lda topics=" + std::to_string(params.topics) +
             " iterations=" + std::to_string(params.iterations) +
             " seed=" + std::to_string(params.seed));
    const auto model = fit_lda(texts.joint_docs, params);
    model.save(out_dir / "topic_model.json");

    for (const auto& doc : docs) {
      article_vectors.emplace(doc.id, infer(model, texts.article_tokens.at(doc.id)));
    }
    for (const auto& record : records) {
      summary_vectors.emplace(record.summary_id,
                              infer(model, texts.summary_tokens.at(record.summary_id)));
    }
    for (const auto& record : records) {
      const auto& va = article_vectors.at(record.article_id);
      const auto& vs = summary_vectors.at(record.summary_id);
      pair_scores.push_back({record.article_id, record.summary_id, "ts",
                             topic_similarity(va, vs), va.oov_fallback || vs.oov_fallback});
    }

    // Random-summary baseline, per run, derangement over that run's articles.
    if (config.get_bool("baseline.random", true)) {
      const auto baseline_seed = effective_seed(config, cli, "baseline.seed", 1);
      log_info("stage=baseline seed=" + std::to_string(baseline_seed));
      std::set<int> run_ids;
      for (const auto& record : records) run_ids.insert(record.run_id);

      const auto add_baseline = [&](const std::vector<SummaryRecord>& pool, int run,
                                    const std::string& variant, std::uint64_t seed) {
        std::vector<std::string> article_ids;
        for (const auto& record : pool) {
          if (std::find(article_ids.begin(), article_ids.end(), record.article_id) ==
              article_ids.end()) {
            article_ids.push_back(record.article_id);
          }
        }
        if (article_ids.size() < 2) {
          log_warn("stage=baseline run=" + std::to_string(run) + " variant=" + variant +
                   " skipped=too_few_articles");
          return;
        }
        for (const auto& [article_id, summary_id] : random_pairing(article_ids, pool, seed)) {
          const auto& va = article_vectors.at(article_id);
          const auto& vs = summary_vectors.at(summary_id);
          random_scores.push_back({run, "ts", variant, topic_similarity(va, vs),
                                   va.oov_fallback || vs.oov_fallback});
        }
      };

      for (const int run : run_ids) {
        std::vector<SummaryRecord> run_records;
        for (const auto& record : records) {
          if (record.run_id == run) run_records.push_back(record);
        }
        add_baseline(run_records, run, "all", mix_seed(baseline_seed, static_cast<std::uint64_t>(run)));
        if (verdicts) {
          std::vector<SummaryRecord> valid_records;
          for (const auto& record : run_records) {
            if (valid_by_id.at(record.summary_id)) valid_records.push_back(record);
          }
          add_baseline(valid_records, run, "valid_only",
                       mix_seed(baseline_seed, 1000003ULL + static_cast<std::uint64_t>(run)));
        }
      }
    }
  }

  // Classical reference-based metrics.
  const bool wants_classical = selection.rouge1 || selection.rouge2 || selection.rouge_l ||
                               selection.bleu || selection.meteor;
  if (wants_classical) {
    std::map<std::string, std::vector<const SummaryRecord*>> references_by_article;
    for (const auto& record : records) {
      if (record.model_tag == kReferenceTag) {
        references_by_article[record.article_id].push_back(&record);
      }
    }
    if (references_by_article.empty()) {
      log_warn("stage=metrics classical metrics requested but no 'reference' records present");
    } else {
      std::vector<Tokens> corpus_candidates;
      std::vector<std::vector<Tokens>> corpus_references;
      for (const auto& record : records) {
        if (record.model_tag == kReferenceTag) continue;
        const auto refs_it = references_by_article.find(record.article_id);
        if (refs_it == references_by_article.end()) continue;
        const Tokens candidate = tokenize(record.text, /*lowercase=*/true);
        std::vector<Tokens> references;
        for (const auto* ref : refs_it->second) {
          references.push_back(tokenize(ref->text, /*lowercase=*/true));
        }

        const auto push = [&](const std::string& metric, double value) {
          pair_scores.push_back({record.article_id, record.summary_id, metric, value, false});
        };
        const auto push_prf = [&](const std::string& metric, const PRF& prf) {
          push(metric, prf.f1);
          push(metric + "_precision", prf.precision);
          push(metric + "_recall", prf.recall);
        };
        if (selection.rouge1) push_prf("rouge1", rouge_n(candidate, references.front(), 1));
        if (selection.rouge2) push_prf("rouge2", rouge_n(candidate, references.front(), 2));
        if (selection.rouge_l) push_prf("rougeL", rouge_l(candidate, references.front()));
        if (selection.bleu) {
          const auto detail = bleu_detail(candidate, references);
          if (detail.empty_candidate) {
            log_warn("stage=metrics summary=" + record.summary_id + " empty_candidate=true");
          }
          push("bleu", detail.score);
        }
        if (selection.meteor) push("meteor", meteor(candidate, references.front()));
        corpus_candidates.push_back(candidate);
        corpus_references.push_back(references);
      }
      if (selection.bleu && config.get_bool("corpus_bleu", false) && !corpus_candidates.empty()) {
        const double pooled = corpus_bleu(corpus_candidates, corpus_references);
        write_file(out_dir / "corpus_bleu.json",
                   nlohmann::json{{"corpus_bleu", pooled}}.dump(2) + "\n");
      }
    }
  }

  // Externally computed scores (BERTScore, AlignScore, ...).
  std::vector<ExternalScore> external_scores;
  for (const auto& path : external_paths) {
    auto scores = ingest_external_scores(path);
    external_scores.insert(external_scores.end(), scores.begin(), scores.end());
  }

  std::map<std::string, HumanLabel> validity_labels;
  if (validity_labels_path) validity_labels = load_validity_labels(*validity_labels_path);
  std::map<std::string, int> usefulness_labels;
  if (usefulness_labels_path) usefulness_labels = load_usefulness_labels(*usefulness_labels_path);

  ReportOptions options;
  options.include_oov_pairs = cli.include_oov_pairs;
  const auto report = build_report(records, verdicts, pair_scores, external_scores,
                                   validity_labels, usefulness_labels, random_scores, options);

  // Per-pair scores, deterministically ordered, same schema as external
  // score files so everything merges.
  std::sort(pair_scores.begin(), pair_scores.end(), [](const PairScore& a, const PairScore& b) {
    return std::tie(a.metric, a.article_id, a.summary_id) <
           std::tie(b.metric, b.article_id, b.summary_id);
  });
  std::string score_lines;
  for (const auto& score : pair_scores) {
    score_lines += to_jsonl_line(nlohmann::json{{"article_id", score.article_id},
                                                {"summary_id", score.summary_id},
                                                {"metric", score.metric},
                                                {"value", score.value}});
  }
  write_file(out_dir / "pair_scores.jsonl", score_lines);

  write_file(out_dir / "report.json", render(report, RenderFormat::Json));
  write_file(out_dir / "report.csv", render(report, RenderFormat::Csv));
  write_file(out_dir / "report.md", render(report, RenderFormat::Markdown));
  log_info("stage=evaluate records=" + std::to_string(records.size()) +
           " scores=" + std::to_string(pair_scores.size()) + " output=" + out_dir.string());
}

void cmd_lda_fit(const PipelineConfig& config, const CliOverrides& cli) {
  const auto docs = load_configured_corpus(config);
  const auto out_dir = effective_output_dir(config, cli);

  std::vector<std::vector<std::string>> token_docs;
  for (const auto& doc : docs) token_docs.push_back(tokenize(doc.text, /*lowercase=*/true));
  if (config.has("summaries")) {
    // Joint fit over articles and the summaries under comparison.
    for (const auto& record : load_summary_records(config.require_existing_path("summaries"))) {
      token_docs.push_back(tokenize(record.text, /*lowercase=*/true));
    }
  }

  const auto params = lda_params_from_config(config, cli);
  log_info("stage=lda-fit topics=" + std::to_string(params.topics) +
           " iterations=" + std::to_string(params.iterations) +
           " seed=" + std::to_string(params.seed));
  const auto model = fit_lda(token_docs, params);

  const auto model_path = config.has("model_path")
                              ? config.resolve_path(config.require_string("model_path"),
                                                    /*must_exist=*/false, "model_path")
                              : out_dir / "topic_model.json";
  model.save(model_path);
  std::cout << "documents=" << token_docs.size() << " vocabulary=" << model.vocabulary.size()
            << " topics=" << model.k << "\n";
}

void cmd_lda_topics(const PipelineConfig& config, const CliOverrides& cli) {
  const auto model_path =
      config.has("model_path")
          ? config.require_existing_path("model_path")
          : effective_output_dir(config, cli) / "topic_model.json";
  if (!std::filesystem::exists(model_path)) {
    throw ConfigError("config field 'model_path': path not found: " + model_path.string());
  }
  const auto model = TopicModel::load(model_path);
  const auto n = static_cast<std::size_t>(std::max(1, cli.top_words));
  for (int topic = 0; topic < model.k; ++topic) {
    std::cout << "Topic " << topic << ":";
    for (const auto& [term, count] : model.top_words(topic, n)) std::cout << " " << term;
    std::cout << "\n";
  }
}

void cmd_generate(const PipelineConfig& config, const CliOverrides& cli) {
  const auto* generation = config.find("generation");
  if (generation == nullptr) throw ConfigError("config field 'generation' is required");
  const auto gen_config = GenerationConfig::from_json(*generation);
  const int runs = static_cast<int>(config.get_int("generation.runs", 3));
  const std::string model_tag = config.get_string("generation.model_tag", "foundation");
  const auto out_dir = effective_output_dir(config, cli);
  const auto output_path =
      config.has("generation.output")
          ? config.resolve_path(config.require_string("generation.output"), false,
                                "generation.output")
          : out_dir / "generated_summaries.jsonl";

  const auto docs = load_configured_corpus(config);
  log_info("stage=generate articles=" + std::to_string(docs.size()) +
           " runs=" + std::to_string(runs) + " model_tag=" + model_tag);
  BatchStats stats;
  const auto written = batch_generate(gen_config, docs, runs, model_tag, output_path, &stats);
  // Individual failures are skipped, but zero successes with work to do
  // means the endpoint itself is broken.
  if (stats.attempted > 0 && stats.succeeded == 0) {
    throw DataError("all " + std::to_string(stats.attempted) +
                    " generation requests failed against " + gen_config.endpoint_url);
  }
  std::cout << "written=" << written.size() << " skipped_existing=" << stats.skipped_existing
            << " failed=" << stats.attempted - stats.succeeded << "\n";
}

void cmd_report(const PipelineConfig& config, const CliOverrides& cli) {
  const auto report_path =
      config.has("report_path")
          ? config.require_existing_path("report_path")
          : effective_output_dir(config, cli) / "report.json";
  if (!std::filesystem::exists(report_path)) {
    throw ConfigError("config field 'report_path': path not found: " + report_path.string());
  }
  const auto report = report_from_json(read_file(report_path));
  const std::string format = cli.format.value_or("markdown");
  RenderFormat render_format;
  if (format == "markdown") {
    render_format = RenderFormat::Markdown;
  } else if (format == "csv") {
    render_format = RenderFormat::Csv;
  } else if (format == "json") {
    render_format = RenderFormat::Json;
  } else {
    throw ConfigError("--format must be csv, json or markdown, got '" + format + "'");
  }
  std::cout << render(report, render_format);
}

int run_subcommand(const std::string& name, const std::filesystem::path& config_path,
                   const std::vector<std::string>& set_overrides, const CliOverrides& cli) {
  try {
    const auto config = PipelineConfig::load(config_path, set_overrides);
    if (name == "clean") {
      cmd_clean(config, cli);
    } else if (name == "chunk") {
      cmd_chunk(config, cli);
    } else if (name == "validate") {
      cmd_validate(config, cli);
    } else if (name == "lda-fit") {
      cmd_lda_fit(config, cli);
    } else if (name == "lda-topics") {
      cmd_lda_topics(config, cli);
    } else if (name == "evaluate") {
      cmd_evaluate(config, cli);
    } else if (name == "generate") {
      cmd_generate(config, cli);
    } else if (name == "report") {
      cmd_report(config, cli);
    } else {
      throw ConfigError("unknown subcommand '" + name + "'");
    }
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "ERROR kind=config message=\"" << e.what() << "\"\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "ERROR kind=data message=\"" << e.what() << "\"\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "ERROR kind=internal message=\"" << e.what() << "\"\n";
    return 1;
  }
}

}  // namespace summeval
