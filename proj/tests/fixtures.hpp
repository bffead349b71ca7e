#pragma once

// Shared test fixtures: the five canonical invalid-summary texts, a set of
// clean prose summaries, and a two-class synthetic corpus with disjoint
// vocabularies whose topic structure is separable by construction.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "summeval/rng.hpp"

namespace fixtures {

// A code snippet in place of prose.
inline const std::string kInvalidCodeSnippet = R"(def test_line_break(self):
"""
Test line breaks in a document.
"""
document = Document()
document.add_field(name="key", text="..")
)";

// "summary" repeated over and over.
inline const std::string kInvalidSummaryWord =
    "You are going to write a short summary of the information provided\n"
    "in the sample text. The summary can be no longer than 20 words. You must\n"
    "be able to summarize the text. In other words, a short summary of\n"
    "the information presented. In the example, the summary has been\n"
    "The first summary is presented as text that has been highlighted. The\n"
    "in between the summary text and the source text of the sample text.\n"
    "The second summary is presented as a summary table. This table has\n"
    "original sample text. The summary table contains the highlighted\n"
    "summary text.\n";

// PDF-viewer boilerplate unrelated to the article.
inline const std::string kInvalidAdobeReader =
    "The following files are included within this PDF Package.\n"
    "Adobe Acrobat 8.0 or later is required to view these files.\n"
    "If you dont already have Adobe Reader 8.0, please click here to download.\n"
    "This file contains the following.\n";

// No letters at all.
inline const std::string kInvalidNoLetters =
    "--------------------------------------------------------------------------"
    "---------------------------------------------------------------------------";

// Markup full of '=' assignments.
inline const std::string kInvalidEqualsSigns = R"(<Project Language=".." AssemblyName=..>
  <Document>
    <Block xmlns="http://.."
      id="129_22000"
      name="MainDocumentPart_8">
      <!-- Add the code snippet ..-->
    </Block>
  </Document>
</Project>
)";

// Ordered Ex.1..Ex.5 with the rule each one must trigger.
inline const std::vector<std::pair<std::string, std::string>>& invalid_examples() {
  static const std::vector<std::pair<std::string, std::string>> examples = {
      {kInvalidCodeSnippet, "R1"},
      {kInvalidSummaryWord, "R2"},
      {kInvalidAdobeReader, "R3"},
      {kInvalidNoLetters, "R4"},
      {kInvalidEqualsSigns, "R5"},
  };
  return examples;
}

inline const std::vector<std::string>& clean_summaries() {
  static const std::vector<std::string> texts = {
      "The report describes labor safety violations at a regional plant.",
      "A federal agency announced new rules for mine inspections this year.",
      "The committee reviewed agricultural import figures for the quarter.",
      "Investigators documented the history of the claims process.",
      "The letter outlines benefits available to retired workers.",
      "Court records show the appeal was filed in early spring.",
      "Officials released a statement on wage enforcement actions.",
      "The archive holds correspondence between two regional offices.",
      "A new exhibit presents photographs from the agency's first decade.",
      "The board approved funding for a records digitization effort.",
  };
  return texts;
}

struct SyntheticCorpus {
  std::vector<std::vector<std::string>> docs;  // token sequences
  std::vector<int> labels;                     // class per document
};

// `classes` disjoint 5-word vocabularies; every document samples only from
// its own class vocabulary, so topics are separable by construction.
inline SyntheticCorpus make_synthetic_corpus(int classes, int docs_per_class,
                                             int tokens_per_doc, std::uint64_t seed) {
  SyntheticCorpus corpus;
  std::mt19937_64 rng(seed);
  constexpr int kWordsPerClass = 5;
  for (int c = 0; c < classes; ++c) {
    std::vector<std::string> vocab;
    for (int w = 0; w < kWordsPerClass; ++w) {
      vocab.push_back("c" + std::to_string(c) + "w" + std::to_string(w));
    }
    for (int d = 0; d < docs_per_class; ++d) {
      std::vector<std::string> doc;
      for (int t = 0; t < tokens_per_doc; ++t) {
        doc.push_back(vocab[summeval::rng_below(rng, vocab.size())]);
      }
      corpus.docs.push_back(std::move(doc));
      corpus.labels.push_back(c);
    }
  }
  return corpus;
}

}  // namespace fixtures
