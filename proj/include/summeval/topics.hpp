#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "summeval/corpus.hpp"

namespace summeval {

struct Vocabulary {
  std::unordered_map<std::string, std::size_t> term_to_index;
  std::vector<std::string> index_to_term;
  std::vector<std::size_t> doc_freq;

  std::size_t size() const { return index_to_term.size(); }
  std::optional<std::size_t> lookup(std::string_view term) const;
};

// Lowercases, drops stopwords and terms in fewer than min_doc_freq
// documents. Index order is first occurrence, so vocabularies are
// reproducible from document order alone.
Vocabulary build_vocab(const std::vector<std::vector<std::string>>& docs,
                       std::size_t min_doc_freq = 1, const WordSet& stopwords = {});

struct LdaParams {
  int topics = 8;
  int iterations = 30;
  double alpha = 0.0;  // <= 0 selects the 50/K default
  double beta = 0.01;
  std::uint64_t seed = 1;
  std::size_t min_doc_freq = 1;
  WordSet stopwords;

  double effective_alpha() const {
    return alpha > 0.0 ? alpha : 50.0 / static_cast<double>(topics);
  }
};

struct TopicModel {
  int k = 0;
  double alpha = 0.0;
  double beta = 0.0;
  int iterations = 0;
  std::uint64_t seed = 0;
  std::vector<std::vector<long long>> topic_word_counts;  // K x V
  std::vector<long long> topic_totals;                    // K
  Vocabulary vocabulary;

  // Top-n (term, count) pairs for one topic; ties break on vocabulary index.
  std::vector<std::pair<std::string, long long>> top_words(int topic, std::size_t n) const;

  void save(const std::filesystem::path& path) const;
  static TopicModel load(const std::filesystem::path& path);
};

// Collapsed Gibbs sampling for `iterations` full sweeps over all tokens.
// Deterministic for a fixed seed.
TopicModel fit_lda(const std::vector<std::vector<std::string>>& docs, const LdaParams& params);
TopicModel fit_lda(const std::vector<std::vector<std::string>>& docs, int topics, int iterations,
                   double alpha, double beta, std::uint64_t seed);

struct TopicVector {
  std::vector<double> probs;       // length K, non-negative, sums to 1
  bool oov_fallback = false;       // true when no token was in-vocabulary
};

// Held-out inference with the model's counts frozen: 20 burn-in sweeps, then
// 10 sweeps whose smoothed proportions (n_k + alpha)/(N + K*alpha) are
// averaged. Seeded from (model seed, token content), so identical documents
// always get identical vectors. All-OOV documents fall back to the uniform
// vector with oov_fallback set.
TopicVector infer(const TopicModel& model, const std::vector<std::string>& doc_tokens);

double cosine_similarity(std::span<const double> a, std::span<const double> b);

// Eq-style Topic Similarity: cosine of the two LDA probability vectors.
double topic_similarity(const TopicVector& article, const TopicVector& summary);

std::vector<double> ts_pairs(
    const TopicModel& model,
    const std::vector<std::pair<std::vector<std::string>, std::vector<std::string>>>& pairs);

}  // namespace summeval
