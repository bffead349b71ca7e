#include "summeval/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <random>
#include <set>

#include "summeval/errors.hpp"
#include "summeval/jsonl.hpp"
#include "summeval/rng.hpp"
#include "summeval/text.hpp"

namespace summeval {

namespace {

std::string format_double(double value) {
  char buf[32];
  const auto result = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, result.ptr);
}

std::string metadata_value_to_string(const nlohmann::json& value) {
  if (value.is_string()) return value.get<std::string>();
  return value.dump();
}

std::vector<Document> load_jsonl_corpus(const std::filesystem::path& path,
                                        const LoadOptions& options) {
  std::vector<Document> docs;
  std::set<std::string> seen_ids;
  for_each_jsonl(path, [&](std::size_t line_number, const nlohmann::json& record) {
    const auto fail = [&](const std::string& what) {
      throw DataError(path.string() + ": line " + std::to_string(line_number) + ": " + what);
    };
    if (!record.is_object()) fail("expected an object");
    if (!record.contains("id") || !record["id"].is_string()) fail("missing string field 'id'");
    if (!record.contains("text") || !record["text"].is_string()) fail("missing string field 'text'");

    Document doc;
    doc.id = record["id"].get<std::string>();
    doc.text = record["text"].get<std::string>();
    doc.source_path = path.string() + ":" + std::to_string(line_number);
    if (record.contains("meta")) {
      if (!record["meta"].is_object()) fail("'meta' must be an object");
      for (const auto& [key, value] : record["meta"].items()) {
        doc.metadata[key] = metadata_value_to_string(value);
      }
    }
    if (!seen_ids.insert(doc.id).second) {
      fail("duplicate id '" + doc.id + "'");
    }
    if (doc.text.empty() && !options.keep_empty) return;
    docs.push_back(std::move(doc));
  });
  return docs;
}

std::vector<Document> load_directory_corpus(const std::filesystem::path& path,
                                            const LoadOptions& options) {
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(path)) {
    if (entry.is_regular_file() && entry.path().extension() == ".txt") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());

  std::vector<Document> docs;
  std::set<std::string> seen_ids;
  for (const auto& file : files) {
    Document doc;
    doc.id = file.stem().string();
    doc.text = read_file(file);
    doc.source_path = file.string();
    if (!seen_ids.insert(doc.id).second) {
      throw DataError(path.string() + ": duplicate id '" + doc.id + "'");
    }
    if (doc.text.empty() && !options.keep_empty) continue;
    docs.push_back(std::move(doc));
  }
  return docs;
}

}  // namespace

std::vector<Document> load_corpus(const std::filesystem::path& path, CorpusFormat format,
                                  const LoadOptions& options) {
  std::error_code ec;
  if (!std::filesystem::exists(path, ec) || ec) {
    throw DataError("corpus path does not exist: " + path.string());
  }
  switch (format) {
    case CorpusFormat::Jsonl:
      return load_jsonl_corpus(path, options);
    case CorpusFormat::TextDirectory:
      return load_directory_corpus(path, options);
  }
  throw DataError("unknown corpus format");
}

WordSet load_dictionary(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open dictionary: " + path.string());
  WordSet words;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    words.insert(to_lower_ascii(line));
  }
  return words;
}

double alnum_fraction(std::string_view text) {
  std::size_t non_space = 0;
  std::size_t alnum = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const DecodedChar c = decode_utf8(text, pos);
    pos += c.length;
    if (is_space_cp(c.codepoint)) continue;
    ++non_space;
    if (is_alnum_cp(c.codepoint)) ++alnum;
  }
  if (non_space == 0) return 0.0;
  return static_cast<double>(alnum) / static_cast<double>(non_space);
}

double dict_word_fraction(std::string_view text, const WordSet& dictionary) {
  if (dictionary.empty()) throw ConfigError("dictionary is empty");
  std::size_t alphabetic = 0;
  std::size_t known = 0;
  for (const auto& token : tokenize(text, /*lowercase=*/true)) {
    const bool is_alpha = !token.empty() &&
                          std::all_of(token.begin(), token.end(),
                                      [](char c) { return is_ascii_letter(c); });
    if (!is_alpha) continue;
    ++alphabetic;
    if (dictionary.count(token) > 0) ++known;
  }
  if (alphabetic == 0) return 0.0;
  return static_cast<double>(known) / static_cast<double>(alphabetic);
}

std::pair<std::vector<Document>, CleaningReport>
filter_clean(const std::vector<Document>& docs, double alnum_threshold, double dict_threshold,
             const WordSet& dictionary) {
  if (alnum_threshold < 0.0 || alnum_threshold > 1.0 || dict_threshold < 0.0 ||
      dict_threshold > 1.0) {
    throw ConfigError("cleaning thresholds must lie in [0,1]");
  }
  std::vector<Document> kept;
  CleaningReport report;
  report.per_document.reserve(docs.size());
  for (const auto& doc : docs) {
    CleaningRow row;
    row.id = doc.id;
    row.alnum_fraction = alnum_fraction(doc.text);
    row.dict_fraction = dict_word_fraction(doc.text, dictionary);
    row.kept = row.alnum_fraction >= alnum_threshold && row.dict_fraction >= dict_threshold;
    if (row.kept) {
      kept.push_back(doc);
      ++report.kept_count;
    } else {
      ++report.rejected_count;
    }
    report.per_document.push_back(std::move(row));
  }
  return {std::move(kept), std::move(report)};
}

std::string CleaningReport::to_csv() const {
  std::string out = "id,alnum_fraction,dict_fraction,kept\n";
  for (const auto& row : per_document) {
    out += row.id;
    out += ',';
    out += format_double(row.alnum_fraction);
    out += ',';
    out += format_double(row.dict_fraction);
    out += ',';
    out += row.kept ? "true" : "false";
    out += '\n';
  }
  return out;
}

std::vector<std::string> tokenize(std::string_view text, bool lowercase) {
  std::vector<std::string> tokens;
  const auto push = [&](std::string_view piece) {
    if (piece.empty()) return;
    tokens.emplace_back(lowercase ? to_lower_ascii(piece) : std::string(piece));
  };
  // Punctuation here is ASCII punctuation; bytes >= 0x80 are word content.
  const auto is_punct = [](char c) {
    const unsigned char u = static_cast<unsigned char>(c);
    return u < 0x80 && !is_ascii_alnum(c) && !std::isspace(u) && u != 0;
  };

  std::size_t pos = 0;
  while (pos < text.size()) {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    std::size_t end = pos;
    while (end < text.size() && !std::isspace(static_cast<unsigned char>(text[end]))) ++end;
    if (end == pos) break;
    std::string_view word = text.substr(pos, end - pos);
    pos = end;

    // Leading punctuation, one token per character.
    std::size_t lead = 0;
    while (lead < word.size() && is_punct(word[lead])) ++lead;
    // Trailing punctuation likewise.
    std::size_t trail = word.size();
    while (trail > lead && is_punct(word[trail - 1])) --trail;

    for (std::size_t i = 0; i < lead; ++i) push(word.substr(i, 1));
    push(word.substr(lead, trail - lead));
    for (std::size_t i = trail; i < word.size(); ++i) push(word.substr(i, 1));
  }
  return tokens;
}

std::vector<Chunk> chunk_tokens(const std::vector<std::string>& tokens, std::size_t chunk_length,
                                std::size_t overlap, std::string_view doc_id) {
  if (chunk_length == 0) throw ConfigError("chunk_length must be positive");
  if (overlap >= chunk_length) throw ConfigError("overlap must be smaller than chunk_length");
  const std::size_t stride = chunk_length - overlap;

  std::vector<Chunk> chunks;
  std::size_t start = 0;
  for (;;) {
    const std::size_t end = std::min(start + chunk_length, tokens.size());
    Chunk chunk;
    chunk.doc_id = std::string(doc_id);
    chunk.index = chunks.size();
    chunk.start_offset = start;
    chunk.tokens.assign(tokens.begin() + static_cast<std::ptrdiff_t>(start),
                        tokens.begin() + static_cast<std::ptrdiff_t>(end));
    chunks.push_back(std::move(chunk));
    if (end >= tokens.size()) break;
    start += stride;
  }
  return chunks;
}

SplitResult split_train_test(const std::vector<Document>& docs, double test_fraction,
                             std::uint64_t seed) {
  if (docs.size() < 2) throw DataError("need at least 2 documents to split");
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw ConfigError("test_fraction must lie in (0,1)");
  }
  const auto test_count = static_cast<std::size_t>(
      std::llround(test_fraction * static_cast<double>(docs.size())));

  std::vector<std::size_t> order(docs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::mt19937_64 rng(seed);
  rng_shuffle(order, rng);

  std::vector<bool> in_test(docs.size(), false);
  for (std::size_t i = 0; i < test_count; ++i) in_test[order[i]] = true;

  SplitResult result;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    (in_test[i] ? result.test : result.train).push_back(docs[i]);
  }
  return result;
}

}  // namespace summeval
