#include "summeval/topics.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"
#include "summeval/errors.hpp"
#include "summeval/jsonl.hpp"
#include "summeval/lda_gibbs.hpp"
#include "summeval/rng.hpp"
#include "summeval/text.hpp"

namespace summeval {

namespace {

constexpr int kModelFormatVersion = 1;
constexpr int kInferBurnInSweeps = 20;
constexpr int kInferAveragedSweeps = 10;

std::vector<std::vector<std::size_t>> docs_to_ids(
    const std::vector<std::vector<std::string>>& docs, const Vocabulary& vocab) {
  std::vector<std::vector<std::size_t>> ids(docs.size());
  for (std::size_t d = 0; d < docs.size(); ++d) {
    ids[d].reserve(docs[d].size());
    for (const auto& token : docs[d]) {
      if (const auto idx = vocab.lookup(token)) ids[d].push_back(*idx);
    }
  }
  return ids;
}

int sample_index(const std::vector<double>& weights, double total, std::mt19937_64& rng) {
  const double u = rng_uniform01(rng) * total;
  double cumulative = 0.0;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    cumulative += weights[k];
    if (u < cumulative) return static_cast<int>(k);
  }
  return static_cast<int>(weights.size()) - 1;  // u landed on the fp boundary
}

}  // namespace

GibbsSampler::GibbsSampler(std::vector<std::vector<std::size_t>> docs, std::size_t vocab_size,
                           int topics, double alpha, double beta, std::uint64_t seed)
    : docs_(std::move(docs)),
      vocab_size_(vocab_size),
      topics_(topics),
      alpha_(alpha),
      beta_(beta),
      rng_(seed) {
  if (topics_ < 2) throw ConfigError("LDA requires at least 2 topics");
  if (vocab_size_ == 0) throw DataError("LDA requires a non-empty vocabulary");
  const auto k = static_cast<std::size_t>(topics_);
  assignments_.resize(docs_.size());
  doc_topic_.assign(docs_.size(), std::vector<long long>(k, 0));
  topic_word_.assign(k, std::vector<long long>(vocab_size_, 0));
  topic_totals_.assign(k, 0);
  weights_.assign(k, 0.0);

  for (std::size_t d = 0; d < docs_.size(); ++d) {
    assignments_[d].resize(docs_[d].size());
    for (std::size_t i = 0; i < docs_[d].size(); ++i) {
      const auto topic = static_cast<int>(rng_below(rng_, static_cast<std::uint64_t>(topics_)));
      assignments_[d][i] = topic;
      ++doc_topic_[d][static_cast<std::size_t>(topic)];
      ++topic_word_[static_cast<std::size_t>(topic)][docs_[d][i]];
      ++topic_totals_[static_cast<std::size_t>(topic)];
    }
  }
}

void GibbsSampler::sweep() {
  const double v_beta = static_cast<double>(vocab_size_) * beta_;
  for (std::size_t d = 0; d < docs_.size(); ++d) {
    for (std::size_t i = 0; i < docs_[d].size(); ++i) {
      const std::size_t word = docs_[d][i];
      const auto old_topic = static_cast<std::size_t>(assignments_[d][i]);
      --doc_topic_[d][old_topic];
      --topic_word_[old_topic][word];
      --topic_totals_[old_topic];

      double total = 0.0;
      for (std::size_t k = 0; k < weights_.size(); ++k) {
        const double w = (static_cast<double>(doc_topic_[d][k]) + alpha_) *
                         (static_cast<double>(topic_word_[k][word]) + beta_) /
                         (static_cast<double>(topic_totals_[k]) + v_beta);
        weights_[k] = w;
        total += w;
      }
      const int new_topic = sample_index(weights_, total, rng_);

      assignments_[d][i] = new_topic;
      ++doc_topic_[d][static_cast<std::size_t>(new_topic)];
      ++topic_word_[static_cast<std::size_t>(new_topic)][word];
      ++topic_totals_[static_cast<std::size_t>(new_topic)];
    }
  }
}

bool GibbsSampler::counts_consistent() const {
  long long grand_total = 0;
  for (std::size_t k = 0; k < topic_word_.size(); ++k) {
    long long row = 0;
    for (const long long c : topic_word_[k]) {
      if (c < 0) return false;
      row += c;
    }
    if (row != topic_totals_[k]) return false;
    grand_total += row;
  }
  long long token_count = 0;
  for (const auto& doc : docs_) token_count += static_cast<long long>(doc.size());
  return grand_total == token_count;
}

std::optional<std::size_t> Vocabulary::lookup(std::string_view term) const {
  const auto it = term_to_index.find(to_lower_ascii(term));
  if (it == term_to_index.end()) return std::nullopt;
  return it->second;
}

Vocabulary build_vocab(const std::vector<std::vector<std::string>>& docs,
                       std::size_t min_doc_freq, const WordSet& stopwords) {
  if (docs.empty()) throw DataError("build_vocab requires at least one document");

  // First pass: document frequency, preserving first-occurrence order.
  std::unordered_map<std::string, std::size_t> df;
  std::vector<std::string> order;
  for (const auto& doc : docs) {
    WordSet seen;
    for (const auto& raw : doc) {
      const std::string term = to_lower_ascii(raw);
      if (stopwords.count(term) > 0) continue;
      if (!seen.insert(term).second) continue;
      auto [it, inserted] = df.try_emplace(term, 0);
      if (inserted) order.push_back(term);
      ++it->second;
    }
  }

  Vocabulary vocab;
  for (const auto& term : order) {
    if (df[term] < min_doc_freq) continue;
    vocab.term_to_index.emplace(term, vocab.index_to_term.size());
    vocab.index_to_term.push_back(term);
    vocab.doc_freq.push_back(df[term]);
  }
  if (vocab.index_to_term.empty()) {
    throw DataError("vocabulary is empty after filtering");
  }
  return vocab;
}

TopicModel fit_lda(const std::vector<std::vector<std::string>>& docs, const LdaParams& params) {
  if (params.topics < 2) throw ConfigError("LDA requires at least 2 topics");
  if (params.iterations < 1) throw ConfigError("LDA requires at least 1 iteration");
  if (params.beta <= 0.0) throw ConfigError("beta must be positive");

  Vocabulary vocab = build_vocab(docs, params.min_doc_freq, params.stopwords);
  GibbsSampler sampler(docs_to_ids(docs, vocab), vocab.size(), params.topics,
                       params.effective_alpha(), params.beta, params.seed);
  for (int it = 0; it < params.iterations; ++it) sampler.sweep();

  TopicModel model;
  model.k = params.topics;
  model.alpha = params.effective_alpha();
  model.beta = params.beta;
  model.iterations = params.iterations;
  model.seed = params.seed;
  model.topic_word_counts = sampler.topic_word();
  model.topic_totals = sampler.topic_totals();
  model.vocabulary = std::move(vocab);
  return model;
}

TopicModel fit_lda(const std::vector<std::vector<std::string>>& docs, int topics, int iterations,
                   double alpha, double beta, std::uint64_t seed) {
  LdaParams params;
  params.topics = topics;
  params.iterations = iterations;
  params.alpha = alpha;
  params.beta = beta;
  params.seed = seed;
  return fit_lda(docs, params);
}

std::vector<std::pair<std::string, long long>> TopicModel::top_words(int topic,
                                                                     std::size_t n) const {
  const auto& row = topic_word_counts.at(static_cast<std::size_t>(topic));
  std::vector<std::size_t> idx(row.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    if (row[a] != row[b]) return row[a] > row[b];
    return a < b;
  });
  std::vector<std::pair<std::string, long long>> out;
  for (std::size_t i = 0; i < std::min(n, idx.size()); ++i) {
    out.emplace_back(vocabulary.index_to_term[idx[i]], row[idx[i]]);
  }
  return out;
}

void TopicModel::save(const std::filesystem::path& path) const {
  nlohmann::json doc{
      {"format_version", kModelFormatVersion},
      {"k", k},
      {"alpha", alpha},
      {"beta", beta},
      {"iterations", iterations},
      {"seed", seed},
      {"vocabulary", nlohmann::json{{"terms", vocabulary.index_to_term},
                                    {"doc_freq", vocabulary.doc_freq}}},
      {"topic_word_counts", topic_word_counts},
      {"topic_totals", topic_totals},
  };
  write_file(path, doc.dump(2) + "\n");
}

TopicModel TopicModel::load(const std::filesystem::path& path) {
  nlohmann::json doc = nlohmann::json::parse(read_file(path), nullptr, false);
  if (doc.is_discarded()) throw DataError("malformed topic model file: " + path.string());
  if (!doc.contains("format_version") || doc["format_version"].get<int>() != kModelFormatVersion) {
    throw DataError("unsupported topic model format in " + path.string());
  }
  TopicModel model;
  model.k = doc.at("k").get<int>();
  model.alpha = doc.at("alpha").get<double>();
  model.beta = doc.at("beta").get<double>();
  model.iterations = doc.at("iterations").get<int>();
  model.seed = doc.at("seed").get<std::uint64_t>();
  model.topic_word_counts = doc.at("topic_word_counts").get<std::vector<std::vector<long long>>>();
  model.topic_totals = doc.at("topic_totals").get<std::vector<long long>>();
  model.vocabulary.index_to_term = doc.at("vocabulary").at("terms").get<std::vector<std::string>>();
  model.vocabulary.doc_freq = doc.at("vocabulary").at("doc_freq").get<std::vector<std::size_t>>();
  for (std::size_t i = 0; i < model.vocabulary.index_to_term.size(); ++i) {
    model.vocabulary.term_to_index.emplace(model.vocabulary.index_to_term[i], i);
  }

  if (model.topic_word_counts.size() != static_cast<std::size_t>(model.k) ||
      model.topic_totals.size() != static_cast<std::size_t>(model.k)) {
    throw DataError("topic model count matrix has wrong shape: " + path.string());
  }
  for (std::size_t k = 0; k < model.topic_word_counts.size(); ++k) {
    if (model.topic_word_counts[k].size() != model.vocabulary.size()) {
      throw DataError("topic model count matrix has wrong shape: " + path.string());
    }
    long long row = 0;
    for (const long long c : model.topic_word_counts[k]) row += c;
    if (row != model.topic_totals[k]) {
      throw DataError("topic model counts are inconsistent: " + path.string());
    }
  }
  return model;
}

TopicVector infer(const TopicModel& model, const std::vector<std::string>& doc_tokens) {
  if (model.k < 2 || model.vocabulary.size() == 0) {
    throw DataError("infer requires a fitted model");
  }
  const auto k = static_cast<std::size_t>(model.k);

  std::vector<std::size_t> words;
  words.reserve(doc_tokens.size());
  for (const auto& token : doc_tokens) {
    if (const auto idx = model.vocabulary.lookup(token)) words.push_back(*idx);
  }

  TopicVector result;
  if (words.empty()) {
    result.probs.assign(k, 1.0 / static_cast<double>(model.k));
    result.oov_fallback = true;
    return result;
  }

  std::mt19937_64 rng(mix_seed(model.seed, fnv1a_tokens(doc_tokens)));
  std::vector<int> assignments(words.size());
  std::vector<long long> local_topic(k, 0);
  for (std::size_t i = 0; i < words.size(); ++i) {
    const auto topic = static_cast<int>(rng_below(rng, static_cast<std::uint64_t>(model.k)));
    assignments[i] = topic;
    ++local_topic[static_cast<std::size_t>(topic)];
  }

  const double v_beta = static_cast<double>(model.vocabulary.size()) * model.beta;
  std::vector<double> weights(k, 0.0);
  std::vector<double> accumulated(k, 0.0);
  const double n_tokens = static_cast<double>(words.size());
  const double k_alpha = static_cast<double>(model.k) * model.alpha;

  for (int sweep = 0; sweep < kInferBurnInSweeps + kInferAveragedSweeps; ++sweep) {
    for (std::size_t i = 0; i < words.size(); ++i) {
      const std::size_t word = words[i];
      --local_topic[static_cast<std::size_t>(assignments[i])];
      double total = 0.0;
      for (std::size_t t = 0; t < k; ++t) {
        const double w = (static_cast<double>(local_topic[t]) + model.alpha) *
                         (static_cast<double>(model.topic_word_counts[t][word]) + model.beta) /
                         (static_cast<double>(model.topic_totals[t]) + v_beta);
        weights[t] = w;
        total += w;
      }
      const int new_topic = sample_index(weights, total, rng);
      assignments[i] = new_topic;
      ++local_topic[static_cast<std::size_t>(new_topic)];
    }
    if (sweep >= kInferBurnInSweeps) {
      for (std::size_t t = 0; t < k; ++t) {
        accumulated[t] +=
            (static_cast<double>(local_topic[t]) + model.alpha) / (n_tokens + k_alpha);
      }
    }
  }

  result.probs.resize(k);
  double sum = 0.0;
  for (std::size_t t = 0; t < k; ++t) {
    result.probs[t] = accumulated[t] / kInferAveragedSweeps;
    sum += result.probs[t];
  }
  for (double& p : result.probs) p /= sum;  // remove residual fp drift
  return result;
}

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DataError("cosine_similarity: dimension mismatch");
  double dot = 0.0;
  double na = 0.0;
  double nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) throw DataError("cosine_similarity: zero vector");
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

double topic_similarity(const TopicVector& article, const TopicVector& summary) {
  return cosine_similarity(article.probs, summary.probs);
}

std::vector<double> ts_pairs(
    const TopicModel& model,
    const std::vector<std::pair<std::vector<std::string>, std::vector<std::string>>>& pairs) {
  std::vector<double> scores;
  scores.reserve(pairs.size());
  for (const auto& [article, summary] : pairs) {
    scores.push_back(topic_similarity(infer(model, article), infer(model, summary)));
  }
  return scores;
}

}  // namespace summeval
