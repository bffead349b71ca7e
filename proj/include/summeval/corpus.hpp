#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

namespace summeval {

// A source article. `text` is raw UTF-8 as extracted; OCR noise and all.
struct Document {
  std::string id;
  std::string text;
  std::string source_path;
  std::map<std::string, std::string> metadata;
};

struct CleaningRow {
  std::string id;
  double alnum_fraction = 0.0;
  double dict_fraction = 0.0;
  bool kept = false;
};

struct CleaningReport {
  std::size_t kept_count = 0;
  std::size_t rejected_count = 0;
  std::vector<CleaningRow> per_document;

  // CSV with header id,alnum_fraction,dict_fraction,kept
  std::string to_csv() const;
};

struct Chunk {
  std::string doc_id;
  std::size_t index = 0;
  std::vector<std::string> tokens;
  std::size_t start_offset = 0;
};

enum class CorpusFormat { Jsonl, TextDirectory };

struct LoadOptions {
  bool keep_empty = false;  // empty-text documents are dropped by default
};

using WordSet = std::unordered_set<std::string>;

// JSONL: one {id, text, meta?} object per line. TextDirectory: every *.txt
// file, id = filename stem, ordered by filename. Duplicate ids and malformed
// lines abort with the offending line/file named.
std::vector<Document> load_corpus(const std::filesystem::path& path, CorpusFormat format,
                                  const LoadOptions& options = {});

// One lowercase word per line; '#' comment lines and blank lines ignored.
WordSet load_dictionary(const std::filesystem::path& path);

// Fraction of non-whitespace characters that are alphanumeric. 0 when there
// are no non-whitespace characters.
double alnum_fraction(std::string_view text);

// Fraction of alphabetic tokens (whitespace-split, surrounding punctuation
// stripped, lowercased) present in the dictionary. 0 when there are no
// alphabetic tokens.
double dict_word_fraction(std::string_view text, const WordSet& dictionary);

// Keeps a document iff both fractions are >= their thresholds (inclusive).
std::pair<std::vector<Document>, CleaningReport>
filter_clean(const std::vector<Document>& docs, double alnum_threshold, double dict_threshold,
             const WordSet& dictionary);

// Whitespace-delimited tokens with surrounding punctuation split off as
// separate tokens. "The cat sat." -> {"The","cat","sat","."}.
std::vector<std::string> tokenize(std::string_view text, bool lowercase = false);

// Sliding windows of chunk_length tokens advancing by chunk_length - overlap,
// stopping at the first window that reaches the end of the sequence (the last
// chunk may be shorter). Requires overlap < chunk_length.
std::vector<Chunk> chunk_tokens(const std::vector<std::string>& tokens,
                                std::size_t chunk_length = 512, std::size_t overlap = 64,
                                std::string_view doc_id = {});

struct SplitResult {
  std::vector<Document> train;
  std::vector<Document> test;
};

// Seeded disjoint partition covering the input; |test| = round(fraction * n).
// Input order is preserved within each side.
SplitResult split_train_test(const std::vector<Document>& docs, double test_fraction,
                             std::uint64_t seed);

}  // namespace summeval
