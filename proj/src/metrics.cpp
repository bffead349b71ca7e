#include "summeval/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "summeval/corpus.hpp"
#include "summeval/errors.hpp"
#include "summeval/jsonl.hpp"
#include "summeval/stemmer.hpp"
#include "summeval/text.hpp"

namespace summeval {

namespace {

constexpr double kBleuEpsilon = 1e-9;

// Length-prefixed join, collision-free for arbitrary token content.
std::string ngram_key(const Tokens& tokens, std::size_t start, int n) {
  std::string key;
  for (int i = 0; i < n; ++i) {
    const std::string& tok = tokens[start + static_cast<std::size_t>(i)];
    key += std::to_string(tok.size());
    key += ':';
    key += tok;
  }
  return key;
}

std::map<std::string, long long> ngram_counts(const Tokens& tokens, int n) {
  std::map<std::string, long long> counts;
  if (static_cast<std::size_t>(n) > tokens.size()) return counts;
  for (std::size_t i = 0; i + static_cast<std::size_t>(n) <= tokens.size(); ++i) {
    ++counts[ngram_key(tokens, i, n)];
  }
  return counts;
}

long long clipped_matches(const std::map<std::string, long long>& cand,
                          const std::map<std::string, long long>& ref) {
  long long matches = 0;
  for (const auto& [key, count] : cand) {
    const auto it = ref.find(key);
    if (it != ref.end()) matches += std::min(count, it->second);
  }
  return matches;
}

double harmonic_f1(double p, double r) {
  if (p + r == 0.0) return 0.0;
  return 2.0 * p * r / (p + r);
}

std::size_t lcs_length(const Tokens& a, const Tokens& b) {
  if (a.empty() || b.empty()) return 0;
  std::vector<std::size_t> prev(b.size() + 1, 0);
  std::vector<std::size_t> cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      if (a[i - 1] == b[j - 1]) {
        cur[j] = prev[j - 1] + 1;
      } else {
        cur[j] = std::max(prev[j], cur[j - 1]);
      }
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

// Greedy in-order unigram alignment used by both METEOR stages: each
// candidate position takes the first unmatched reference position with an
// equal key. On identical texts this reduces to the diagonal.
void align_stage(const std::vector<std::string>& cand_keys,
                 const std::vector<std::string>& ref_keys, std::vector<bool>& cand_matched,
                 std::vector<bool>& ref_matched,
                 std::vector<std::pair<std::size_t, std::size_t>>& pairs) {
  for (std::size_t i = 0; i < cand_keys.size(); ++i) {
    if (cand_matched[i]) continue;
    for (std::size_t j = 0; j < ref_keys.size(); ++j) {
      if (ref_matched[j]) continue;
      if (cand_keys[i] == ref_keys[j]) {
        cand_matched[i] = true;
        ref_matched[j] = true;
        pairs.emplace_back(i, j);
        break;
      }
    }
  }
}

struct PooledBleuCounts {
  std::vector<long long> matches;  // per n
  std::vector<long long> totals;   // per n
  std::size_t candidate_length = 0;
  std::size_t effective_ref_length = 0;
};

void accumulate_bleu_counts(const Tokens& candidate, const std::vector<Tokens>& references,
                            int max_n, PooledBleuCounts& pooled) {
  for (int n = 1; n <= max_n; ++n) {
    const auto cand_counts = ngram_counts(candidate, n);
    std::map<std::string, long long> best_ref_counts;
    for (const auto& ref : references) {
      for (const auto& [key, count] : ngram_counts(ref, n)) {
        auto& best = best_ref_counts[key];
        best = std::max(best, count);
      }
    }
    long long total = 0;
    for (const auto& [key, count] : cand_counts) total += count;
    pooled.matches[static_cast<std::size_t>(n - 1)] += clipped_matches(cand_counts, best_ref_counts);
    pooled.totals[static_cast<std::size_t>(n - 1)] += total;
  }
  pooled.candidate_length += candidate.size();

  // Closest reference length; ties go to the shorter reference.
  std::size_t best_len = references.front().size();
  for (const auto& ref : references) {
    const auto diff = [&](std::size_t len) {
      return len > candidate.size() ? len - candidate.size() : candidate.size() - len;
    };
    if (diff(ref.size()) < diff(best_len) || (diff(ref.size()) == diff(best_len) && ref.size() < best_len)) {
      best_len = ref.size();
    }
  }
  pooled.effective_ref_length += best_len;
}

BleuDetail bleu_from_counts(const PooledBleuCounts& pooled, int max_n, BleuSmoothing smoothing) {
  BleuDetail detail;
  detail.precisions.resize(static_cast<std::size_t>(max_n), 0.0);

  double log_sum = 0.0;
  bool zero_precision = false;
  for (int n = 1; n <= max_n; ++n) {
    const auto i = static_cast<std::size_t>(n - 1);
    double p = 0.0;
    if (pooled.totals[i] > 0) {
      if (pooled.matches[i] > 0) {
        p = static_cast<double>(pooled.matches[i]) / static_cast<double>(pooled.totals[i]);
      } else if (smoothing == BleuSmoothing::AddEpsilon) {
        p = kBleuEpsilon / static_cast<double>(pooled.totals[i]);
      }
    } else if (smoothing == BleuSmoothing::AddEpsilon) {
      p = kBleuEpsilon;
    }
    detail.precisions[i] = p;
    if (p == 0.0) {
      zero_precision = true;
    } else {
      log_sum += std::log(p);
    }
  }

  const double c = static_cast<double>(pooled.candidate_length);
  const double r = static_cast<double>(pooled.effective_ref_length);
  detail.brevity_penalty = std::min(1.0, std::exp(1.0 - r / c));
  detail.score =
      zero_precision ? 0.0
                     : detail.brevity_penalty * std::exp(log_sum / static_cast<double>(max_n));
  return detail;
}

bool is_sentence_terminator(const std::string& token) {
  return token == "." || token == "!" || token == "?";
}

}  // namespace

PRF rouge_n(const Tokens& candidate, const Tokens& reference, int n) {
  if (n < 1) throw ConfigError("rouge_n requires n >= 1");
  const auto cand_counts = ngram_counts(candidate, n);
  const auto ref_counts = ngram_counts(reference, n);
  long long cand_total = 0;
  long long ref_total = 0;
  for (const auto& [key, count] : cand_counts) cand_total += count;
  for (const auto& [key, count] : ref_counts) ref_total += count;
  const long long matches = clipped_matches(cand_counts, ref_counts);

  PRF result;
  result.precision = cand_total > 0 ? static_cast<double>(matches) / static_cast<double>(cand_total) : 0.0;
  result.recall = ref_total > 0 ? static_cast<double>(matches) / static_cast<double>(ref_total) : 0.0;
  result.f1 = harmonic_f1(result.precision, result.recall);
  return result;
}

PRF rouge_l(const Tokens& candidate, const Tokens& reference) {
  const auto lcs = static_cast<double>(lcs_length(candidate, reference));
  PRF result;
  result.precision = candidate.empty() ? 0.0 : lcs / static_cast<double>(candidate.size());
  result.recall = reference.empty() ? 0.0 : lcs / static_cast<double>(reference.size());
  result.f1 = harmonic_f1(result.precision, result.recall);
  return result;
}

BleuDetail bleu_detail(const Tokens& candidate, const std::vector<Tokens>& references, int max_n,
                       BleuSmoothing smoothing) {
  if (max_n < 1) throw ConfigError("bleu requires max_n >= 1");
  if (references.empty()) throw ConfigError("bleu requires at least one reference");
  if (candidate.empty()) {
    BleuDetail detail;
    detail.empty_candidate = true;
    detail.precisions.assign(static_cast<std::size_t>(max_n), 0.0);
    detail.brevity_penalty = 0.0;
    return detail;
  }
  PooledBleuCounts pooled;
  pooled.matches.assign(static_cast<std::size_t>(max_n), 0);
  pooled.totals.assign(static_cast<std::size_t>(max_n), 0);
  accumulate_bleu_counts(candidate, references, max_n, pooled);
  return bleu_from_counts(pooled, max_n, smoothing);
}

double bleu(const Tokens& candidate, const std::vector<Tokens>& references, int max_n,
            BleuSmoothing smoothing) {
  return bleu_detail(candidate, references, max_n, smoothing).score;
}

double corpus_bleu(const std::vector<Tokens>& candidates,
                   const std::vector<std::vector<Tokens>>& references_per_candidate, int max_n,
                   BleuSmoothing smoothing) {
  if (max_n < 1) throw ConfigError("bleu requires max_n >= 1");
  if (candidates.size() != references_per_candidate.size()) {
    throw DataError("corpus_bleu: candidates and references differ in length");
  }
  PooledBleuCounts pooled;
  pooled.matches.assign(static_cast<std::size_t>(max_n), 0);
  pooled.totals.assign(static_cast<std::size_t>(max_n), 0);
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (references_per_candidate[i].empty()) {
      throw ConfigError("bleu requires at least one reference");
    }
    if (candidates[i].empty()) continue;
    accumulate_bleu_counts(candidates[i], references_per_candidate[i], max_n, pooled);
  }
  if (pooled.candidate_length == 0) return 0.0;
  return bleu_from_counts(pooled, max_n, smoothing).score;
}

MeteorDetail meteor_detail(const Tokens& candidate, const Tokens& reference) {
  MeteorDetail detail;
  if (candidate.empty() || reference.empty()) return detail;

  std::vector<std::string> cand_lower(candidate.size());
  std::vector<std::string> ref_lower(reference.size());
  for (std::size_t i = 0; i < candidate.size(); ++i) cand_lower[i] = to_lower_ascii(candidate[i]);
  for (std::size_t j = 0; j < reference.size(); ++j) ref_lower[j] = to_lower_ascii(reference[j]);

  std::vector<bool> cand_matched(candidate.size(), false);
  std::vector<bool> ref_matched(reference.size(), false);
  std::vector<std::pair<std::size_t, std::size_t>> pairs;

  align_stage(cand_lower, ref_lower, cand_matched, ref_matched, pairs);

  std::vector<std::string> cand_stems(candidate.size());
  std::vector<std::string> ref_stems(reference.size());
  for (std::size_t i = 0; i < candidate.size(); ++i) cand_stems[i] = porter_stem(cand_lower[i]);
  for (std::size_t j = 0; j < reference.size(); ++j) ref_stems[j] = porter_stem(ref_lower[j]);
  align_stage(cand_stems, ref_stems, cand_matched, ref_matched, pairs);

  const std::size_t m = pairs.size();
  detail.matches = m;
  if (m == 0) return detail;

  detail.precision = static_cast<double>(m) / static_cast<double>(candidate.size());
  detail.recall = static_cast<double>(m) / static_cast<double>(reference.size());
  detail.f_mean =
      10.0 * detail.precision * detail.recall / (detail.recall + 9.0 * detail.precision);

  std::sort(pairs.begin(), pairs.end());
  std::size_t chunks = 1;
  for (std::size_t t = 1; t < pairs.size(); ++t) {
    const bool contiguous = pairs[t].first == pairs[t - 1].first + 1 &&
                            pairs[t].second == pairs[t - 1].second + 1;
    if (!contiguous) ++chunks;
  }
  detail.chunks = chunks;
  detail.penalty = 0.5 * std::pow(static_cast<double>(chunks) / static_cast<double>(m), 3.0);
  detail.score = detail.f_mean * (1.0 - detail.penalty);
  return detail;
}

double meteor(const Tokens& candidate, const Tokens& reference) {
  return meteor_detail(candidate, reference).score;
}

double chunked_aggregate(const PairScorer& pair_scorer, const Tokens& long_reference,
                         const Tokens& candidate, std::size_t chunk_length, std::size_t overlap,
                         ChunkAggregation mode) {
  if (long_reference.empty()) throw DataError("chunked_aggregate: empty reference");
  const auto chunks = chunk_tokens(long_reference, chunk_length, overlap);

  const auto best_over_chunks = [&](const Tokens& text) {
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& chunk : chunks) best = std::max(best, pair_scorer(chunk.tokens, text));
    return best;
  };

  if (mode == ChunkAggregation::GlobalMax) return best_over_chunks(candidate);

  std::vector<Tokens> sentences;
  Tokens current;
  for (const auto& token : candidate) {
    current.push_back(token);
    if (is_sentence_terminator(token)) {
      sentences.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) sentences.push_back(std::move(current));
  if (sentences.empty()) sentences.push_back(candidate);

  double sum = 0.0;
  for (const auto& sentence : sentences) sum += best_over_chunks(sentence);
  return sum / static_cast<double>(sentences.size());
}

std::vector<ExternalScore> ingest_external_scores(const std::filesystem::path& path) {
  std::vector<ExternalScore> scores;
  for_each_jsonl(path, [&](std::size_t line_number, const nlohmann::json& value) {
    const auto fail = [&](const std::string& what) {
      throw DataError(path.string() + ": line " + std::to_string(line_number) + ": " + what);
    };
    if (!value.is_object()) fail("expected an object");
    for (const char* field : {"article_id", "summary_id", "metric"}) {
      if (!value.contains(field) || !value[field].is_string()) {
        fail(std::string("missing string field '") + field + "'");
      }
    }
    if (!value.contains("value") || !value["value"].is_number()) {
      fail("missing numeric field 'value'");
    }
    ExternalScore score;
    score.article_id = value["article_id"].get<std::string>();
    score.summary_id = value["summary_id"].get<std::string>();
    score.metric_name = value["metric"].get<std::string>();
    score.value = value["value"].get<double>();
    if (!std::isfinite(score.value)) fail("non-finite value");
    scores.push_back(std::move(score));
  });
  return scores;
}

}  // namespace summeval
