#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace summeval {

// Collapsed Gibbs sampler state over word-id documents. Exposed separately
// from fit_lda so tests can drive sweeps one at a time and inspect counts.
class GibbsSampler {
 public:
  GibbsSampler(std::vector<std::vector<std::size_t>> docs, std::size_t vocab_size, int topics,
               double alpha, double beta, std::uint64_t seed);

  // One full sweep: every token of every document is resampled from its
  // collapsed conditional.
  void sweep();

  // Sum_v topic_word[k][v] == topic_totals[k] for all k, and the totals sum
  // to the corpus token count.
  bool counts_consistent() const;

  int topics() const { return topics_; }
  std::size_t vocab_size() const { return vocab_size_; }
  const std::vector<std::vector<std::size_t>>& docs() const { return docs_; }
  const std::vector<std::vector<int>>& assignments() const { return assignments_; }
  const std::vector<std::vector<long long>>& doc_topic() const { return doc_topic_; }
  const std::vector<std::vector<long long>>& topic_word() const { return topic_word_; }
  const std::vector<long long>& topic_totals() const { return topic_totals_; }

 private:
  std::vector<std::vector<std::size_t>> docs_;
  std::size_t vocab_size_;
  int topics_;
  double alpha_;
  double beta_;
  std::mt19937_64 rng_;

  std::vector<std::vector<int>> assignments_;
  std::vector<std::vector<long long>> doc_topic_;
  std::vector<std::vector<long long>> topic_word_;
  std::vector<long long> topic_totals_;
  std::vector<double> weights_;  // scratch for the conditional
};

}  // namespace summeval
