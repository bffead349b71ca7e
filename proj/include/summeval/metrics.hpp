#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

namespace summeval {

using Tokens = std::vector<std::string>;

struct PRF {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// Clipped n-gram overlap. Zero n-gram counts on either side yield zero
// components instead of NaN.
PRF rouge_n(const Tokens& candidate, const Tokens& reference, int n);

// Longest common subsequence, beta = 1.
PRF rouge_l(const Tokens& candidate, const Tokens& reference);

enum class BleuSmoothing { None, AddEpsilon };

struct BleuDetail {
  double score = 0.0;
  bool empty_candidate = false;
  std::vector<double> precisions;
  double brevity_penalty = 1.0;
};

// Modified n-gram precision BLEU with brevity penalty against the
// closest-length reference (ties resolved toward the shorter reference).
// With BleuSmoothing::None any zero precision makes the score 0; AddEpsilon
// adds 1e-9 to zero match counts so short candidates still rank.
BleuDetail bleu_detail(const Tokens& candidate, const std::vector<Tokens>& references,
                       int max_n = 4, BleuSmoothing smoothing = BleuSmoothing::AddEpsilon);
double bleu(const Tokens& candidate, const std::vector<Tokens>& references, int max_n = 4,
            BleuSmoothing smoothing = BleuSmoothing::AddEpsilon);

// Corpus-level BLEU: n-gram match/total counts pooled over all pairs before
// the geometric mean.
double corpus_bleu(const std::vector<Tokens>& candidates,
                   const std::vector<std::vector<Tokens>>& references_per_candidate,
                   int max_n = 4, BleuSmoothing smoothing = BleuSmoothing::AddEpsilon);

struct MeteorDetail {
  double score = 0.0;
  std::size_t matches = 0;
  std::size_t chunks = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f_mean = 0.0;
  double penalty = 0.0;
};

// Unigram matching in two stages (exact lowercase, then Porter stems),
// F_mean = 10PR/(R+9P), fragmentation penalty 0.5*(chunks/matches)^3.
// The WordNet synonym stage is not included.
MeteorDetail meteor_detail(const Tokens& candidate, const Tokens& reference);
double meteor(const Tokens& candidate, const Tokens& reference);

enum class ChunkAggregation { GlobalMax, MaxThenMean };

using PairScorer = std::function<double(const Tokens& reference_chunk, const Tokens& candidate)>;

// Splits a long reference into overlapping chunks and aggregates per-chunk
// scores. GlobalMax takes the best chunk; MaxThenMean splits the candidate
// into sentences at ./!/? tokens, takes each sentence's best chunk score and
// averages those.
double chunked_aggregate(const PairScorer& pair_scorer, const Tokens& long_reference,
                         const Tokens& candidate, std::size_t chunk_length, std::size_t overlap,
                         ChunkAggregation mode = ChunkAggregation::GlobalMax);

// Scores computed by external model-based tools (BERTScore, AlignScore, ...),
// merged into reports alongside internally computed metrics.
struct ExternalScore {
  std::string article_id;
  std::string summary_id;
  std::string metric_name;
  double value = 0.0;
};

// JSONL {article_id, summary_id, metric, value}; non-finite values and
// malformed lines are rejected with the line number.
std::vector<ExternalScore> ingest_external_scores(const std::filesystem::path& path);

}  // namespace summeval
