#include <filesystem>
#include <fstream>
#include <random>
#include <set>

#include "doctest.h"
#include "summeval/corpus.hpp"
#include "summeval/errors.hpp"
#include "summeval/rng.hpp"

using namespace summeval;

namespace {

std::filesystem::path make_temp_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("summeval_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

// Independent sliding-window enumeration: emit windows stepping by stride
// until one reaches the end of the sequence.
std::vector<std::size_t> chunk_starts_oracle(std::size_t n_tokens, std::size_t chunk_length,
                                             std::size_t overlap) {
  const std::size_t stride = chunk_length - overlap;
  std::vector<std::size_t> starts;
  std::size_t start = 0;
  for (;;) {
    starts.push_back(start);
    if (start + chunk_length >= n_tokens) break;
    start += stride;
  }
  return starts;
}

std::vector<std::string> make_tokens(std::size_t n) {
  std::vector<std::string> tokens;
  for (std::size_t i = 0; i < n; ++i) tokens.push_back("t" + std::to_string(i));
  return tokens;
}

}  // namespace

TEST_CASE("load_corpus reads a directory of text files in filename order") {
  const auto dir = make_temp_dir("load_dir");
  write_text(dir / "b.txt", "world");
  write_text(dir / "a.txt", "hello");
  write_text(dir / "notes.md", "ignored");

  const auto docs = load_corpus(dir, CorpusFormat::TextDirectory);
  REQUIRE(docs.size() == 2);
  CHECK(docs[0].id == "a");
  CHECK(docs[0].text == "hello");
  CHECK(docs[1].id == "b");
  CHECK(docs[1].text == "world");
}

TEST_CASE("load_corpus reads JSONL and preserves order") {
  const auto dir = make_temp_dir("load_jsonl");
  write_text(dir / "corpus.jsonl",
             R"({"id":"x","text":"one"})"
             "\n"
             R"({"id":"y","text":"two","meta":{"year":"1977"}})"
             "\n"
             R"({"id":"z","text":"three"})"
             "\n");
  const auto docs = load_corpus(dir / "corpus.jsonl", CorpusFormat::Jsonl);
  REQUIRE(docs.size() == 3);
  CHECK(docs[0].id == "x");
  CHECK(docs[1].metadata.at("year") == "1977");
  CHECK(docs[2].text == "three");
}

TEST_CASE("load_corpus reports duplicate ids with the line number") {
  const auto dir = make_temp_dir("load_dup");
  write_text(dir / "corpus.jsonl",
             R"({"id":"x","text":"one"})"
             "\n"
             R"({"id":"x","text":"two"})"
             "\n");
  CHECK_THROWS_WITH_AS(load_corpus(dir / "corpus.jsonl", CorpusFormat::Jsonl),
                       doctest::Contains("line 2"), DataError);
}

TEST_CASE("load_corpus reports malformed lines and aborts") {
  const auto dir = make_temp_dir("load_bad");
  write_text(dir / "corpus.jsonl",
             R"({"id":"x","text":"one"})"
             "\n{broken\n");
  CHECK_THROWS_WITH_AS(load_corpus(dir / "corpus.jsonl", CorpusFormat::Jsonl),
                       doctest::Contains("line 2"), DataError);
}

TEST_CASE("load_corpus drops empty documents unless asked to keep them") {
  const auto dir = make_temp_dir("load_empty");
  write_text(dir / "corpus.jsonl",
             R"({"id":"x","text":""})"
             "\n"
             R"({"id":"y","text":"body"})"
             "\n");
  CHECK(load_corpus(dir / "corpus.jsonl", CorpusFormat::Jsonl).size() == 1);
  LoadOptions keep;
  keep.keep_empty = true;
  CHECK(load_corpus(dir / "corpus.jsonl", CorpusFormat::Jsonl, keep).size() == 2);
}

TEST_CASE("load_corpus rejects a missing path") {
  CHECK_THROWS_AS(load_corpus("/nonexistent/nowhere", CorpusFormat::Jsonl), DataError);
}

TEST_CASE("alnum_fraction basics") {
  CHECK(alnum_fraction("abcd") == doctest::Approx(1.0));
  CHECK(alnum_fraction("!!!") == doctest::Approx(0.0));
  CHECK(alnum_fraction("abc!") == doctest::Approx(0.75));
  CHECK(alnum_fraction("") == doctest::Approx(0.0));
  CHECK(alnum_fraction("  \t\n ") == doctest::Approx(0.0));
}

TEST_CASE("alnum_fraction ignores whitespace and counts UTF-8 letters") {
  CHECK(alnum_fraction("  abc!  ") == doctest::Approx(0.75));
  CHECK(alnum_fraction("caf\xC3\xA9") == doctest::Approx(1.0));  // café
  CHECK(alnum_fraction("a b c") == doctest::Approx(1.0));
}

TEST_CASE("dict_word_fraction counts only alphabetic tokens") {
  const WordSet dict = {"the", "cat"};
  CHECK(dict_word_fraction("the cat zzz", dict) == doctest::Approx(2.0 / 3.0));
  CHECK(dict_word_fraction("the the the", {{"the"}}) == doctest::Approx(1.0));
  CHECK(dict_word_fraction("12345", dict) == doctest::Approx(0.0));
  CHECK(dict_word_fraction("The CAT.", dict) == doctest::Approx(1.0));
}

TEST_CASE("dict_word_fraction rejects an empty dictionary") {
  CHECK_THROWS_AS(dict_word_fraction("anything", WordSet{}), ConfigError);
}

TEST_CASE("fractions are invariant under surrounding whitespace") {
  std::mt19937_64 rng(11);
  const WordSet dict = {"alpha", "beta", "gamma"};
  const std::vector<std::string> pieces = {"alpha", "beta!", "123", "??", "gamma"};
  for (int trial = 0; trial < 50; ++trial) {
    std::string text;
    for (int i = 0; i < 5; ++i) {
      text += pieces[rng_below(rng, pieces.size())];
      text += ' ';
    }
    const std::string padded = "  \t" + text + " \n ";
    CHECK(alnum_fraction(text) == doctest::Approx(alnum_fraction(padded)).epsilon(1e-12));
    CHECK(dict_word_fraction(text, dict) ==
          doctest::Approx(dict_word_fraction(padded, dict)).epsilon(1e-12));
  }
}

TEST_CASE("filter_clean applies both thresholds inclusively") {
  const WordSet dict = {"good", "words", "only"};
  // 0.69 alnum: 69 letters + 31 punctuation marks, no whitespace counted.
  std::string noisy;
  for (int i = 0; i < 69; ++i) noisy += 'a';
  for (int i = 0; i < 31; ++i) noisy += '!';
  std::vector<Document> docs = {
      {"noisy", noisy, "", {}},
      {"clean", "good words only", "", {}},
      {"junk", "!!! ???", "", {}},
  };
  const auto [kept, report] = filter_clean(docs, 0.7, 0.7, dict);
  REQUIRE(kept.size() == 1);
  CHECK(kept[0].id == "clean");
  CHECK(report.kept_count == 1);
  CHECK(report.rejected_count == 2);
  REQUIRE(report.per_document.size() == 3);
  CHECK(report.per_document[0].alnum_fraction == doctest::Approx(0.69));
  CHECK_FALSE(report.per_document[0].kept);

  // Comparison is inclusive: a fraction exactly at the threshold passes.
  const auto [kept_eq, report_eq] = filter_clean({docs[0]}, 0.69, 0.0, dict);
  CHECK(report_eq.kept_count == 1);
  const auto [kept_eq2, report_eq2] = filter_clean({{"d", "good good", "", {}}}, 1.0, 1.0, dict);
  CHECK(report_eq2.kept_count == 1);
}

TEST_CASE("filter_clean report counts always add up") {
  const WordSet dict = {"word"};
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Document> docs;
    const std::size_t n = 1 + rng_below(rng, 8);
    for (std::size_t i = 0; i < n; ++i) {
      std::string text = rng_below(rng, 2) ? "word word word" : "!!! ### 123";
      docs.push_back({"d" + std::to_string(i), text, "", {}});
    }
    const auto [kept, report] = filter_clean(docs, 0.7, 0.7, dict);
    CHECK(report.kept_count + report.rejected_count == docs.size());
    CHECK(report.kept_count == kept.size());
  }
}

TEST_CASE("filter_clean is monotone in its thresholds") {
  const WordSet dict = {"alpha", "beta"};
  std::vector<Document> docs;
  std::mt19937_64 rng(17);
  const std::vector<std::string> texts = {
      "alpha beta alpha", "alpha !!!! ????", "123 456 789", "beta beta zzz qqq", "alpha 77 !!",
  };
  for (std::size_t i = 0; i < texts.size(); ++i) {
    docs.push_back({"d" + std::to_string(i), texts[i], "", {}});
  }
  for (int trial = 0; trial < 100; ++trial) {
    const double a_hi = rng_uniform01(rng);
    const double d_hi = rng_uniform01(rng);
    const double a_lo = a_hi * rng_uniform01(rng);
    const double d_lo = d_hi * rng_uniform01(rng);
    const auto hi = filter_clean(docs, a_hi, d_hi, dict);
    const auto lo = filter_clean(docs, a_lo, d_lo, dict);
    // Lowering thresholds never removes a previously kept document.
    for (const auto& doc : hi.first) {
      CHECK(std::any_of(lo.first.begin(), lo.first.end(),
                        [&](const Document& d) { return d.id == doc.id; }));
    }
  }
}

TEST_CASE("cleaning report serializes to the documented CSV") {
  CleaningReport report;
  report.kept_count = 1;
  report.rejected_count = 1;
  report.per_document = {{"a", 0.75, 1.0, true}, {"b", 0.5, 0.25, false}};
  const std::string csv = report.to_csv();
  CHECK(csv == "id,alnum_fraction,dict_fraction,kept\n"
               "a,0.75,1,true\n"
               "b,0.5,0.25,false\n");
}

TEST_CASE("tokenize splits surrounding punctuation") {
  CHECK(tokenize("The cat sat.") == std::vector<std::string>{"The", "cat", "sat", "."});
  CHECK(tokenize("") == std::vector<std::string>{});
  CHECK(tokenize("a  b") == std::vector<std::string>{"a", "b"});
  CHECK(tokenize("(hello)!") == std::vector<std::string>{"(", "hello", ")", "!"});
  CHECK(tokenize("don't stop") == std::vector<std::string>{"don't", "stop"});
  CHECK(tokenize("The Cat", true) == std::vector<std::string>{"the", "cat"});
  CHECK(tokenize("...") == std::vector<std::string>{".", ".", "."});
}

TEST_CASE("chunk_tokens documented cases") {
  SUBCASE("512 tokens fit in one chunk") {
    const auto chunks = chunk_tokens(make_tokens(512), 512, 64);
    REQUIRE(chunks.size() == 1);
    CHECK(chunks[0].tokens.size() == 512);
    CHECK(chunks[0].start_offset == 0);
  }
  SUBCASE("1000 tokens at (512,64) start at 0,448,896") {
    const auto chunks = chunk_tokens(make_tokens(1000), 512, 64);
    REQUIRE(chunks.size() == 3);
    CHECK(chunks[0].start_offset == 0);
    CHECK(chunks[1].start_offset == 448);
    CHECK(chunks[2].start_offset == 896);
    CHECK(chunks[2].tokens.size() == 104);
  }
  SUBCASE("overlap >= chunk_length is rejected") {
    CHECK_THROWS_AS(chunk_tokens(make_tokens(10), 4, 4), ConfigError);
  }
  SUBCASE("empty input still yields a single (empty) chunk") {
    const auto chunks = chunk_tokens({}, 4, 1);
    REQUIRE(chunks.size() == 1);
    CHECK(chunks[0].tokens.empty());
  }
}

TEST_CASE("chunk starts are stride multiples and match the enumeration oracle") {
  for (std::size_t chunk_length = 2; chunk_length <= 20; ++chunk_length) {
    for (std::size_t overlap = 0; overlap < chunk_length; ++overlap) {
      for (std::size_t n = 1; n <= 120; n += 7) {
        const auto tokens = make_tokens(n);
        const auto chunks = chunk_tokens(tokens, chunk_length, overlap);
        const auto expected = chunk_starts_oracle(n, chunk_length, overlap);
        REQUIRE(chunks.size() == expected.size());
        const std::size_t stride = chunk_length - overlap;
        for (std::size_t i = 0; i < chunks.size(); ++i) {
          CHECK(chunks[i].start_offset == expected[i]);
          CHECK(chunks[i].start_offset == i * stride);
          CHECK(chunks[i].index == i);
          CHECK(chunks[i].tokens.size() <= chunk_length);
        }
        // Count formula from the contract.
        const std::size_t formula =
            n <= chunk_length
                ? 1
                : (n - chunk_length + stride - 1) / stride + 1;
        CHECK(chunks.size() == formula);
      }
    }
  }
}

TEST_CASE("chunks reconstruct the original token stream") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 1 + rng_below(rng, 200);
    const std::size_t chunk_length = 2 + rng_below(rng, 19);
    const std::size_t overlap = rng_below(rng, chunk_length);
    const auto tokens = make_tokens(n);
    const auto chunks = chunk_tokens(tokens, chunk_length, overlap);

    std::vector<std::string> rebuilt = chunks[0].tokens;
    for (std::size_t i = 1; i < chunks.size(); ++i) {
      rebuilt.insert(rebuilt.end(), chunks[i].tokens.begin() + static_cast<long>(overlap),
                     chunks[i].tokens.end());
    }
    CHECK(rebuilt == tokens);
  }
}

TEST_CASE("split_train_test partitions deterministically") {
  std::vector<Document> docs;
  for (int i = 0; i < 10; ++i) docs.push_back({"d" + std::to_string(i), "text", "", {}});

  const auto split_a = split_train_test(docs, 0.2, 7);
  CHECK(split_a.train.size() == 8);
  CHECK(split_a.test.size() == 2);

  const auto split_b = split_train_test(docs, 0.2, 7);
  for (std::size_t i = 0; i < split_a.test.size(); ++i) {
    CHECK(split_a.test[i].id == split_b.test[i].id);
  }

  // Disjoint cover.
  std::set<std::string> ids;
  for (const auto& d : split_a.train) ids.insert(d.id);
  for (const auto& d : split_a.test) ids.insert(d.id);
  CHECK(ids.size() == 10);

  // Different seeds still cover the corpus.
  const auto split_c = split_train_test(docs, 0.2, 8);
  CHECK(split_c.train.size() + split_c.test.size() == 10);
}

TEST_CASE("split_train_test matches the published corpus arithmetic") {
  std::vector<Document> docs;
  for (int i = 0; i < 7829; ++i) docs.push_back({"d" + std::to_string(i), "x", "", {}});
  const auto split = split_train_test(docs, 0.2, 1);
  CHECK(split.test.size() == 1566);
  CHECK(split.train.size() == 6263);
}

TEST_CASE("split_train_test rejects degenerate input") {
  CHECK_THROWS_AS(split_train_test({{"only", "x", "", {}}}, 0.5, 1), DataError);
  std::vector<Document> two = {{"a", "x", "", {}}, {"b", "y", "", {}}};
  CHECK_THROWS_AS(split_train_test(two, 0.0, 1), ConfigError);
  CHECK_THROWS_AS(split_train_test(two, 1.0, 1), ConfigError);
}

TEST_CASE("load_dictionary skips comments and lowercases") {
  const auto dir = make_temp_dir("dict");
  write_text(dir / "words.txt", "# comment\nAlpha\nbeta\n\ngamma\n");
  const auto dict = load_dictionary(dir / "words.txt");
  CHECK(dict.size() == 3);
  CHECK(dict.count("alpha") == 1);
  CHECK(dict.count("# comment") == 0);
}
