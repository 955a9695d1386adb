// Copyright 2026 The asag authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "asag/textproc.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>

#include "asag/error.hpp"

namespace asag {
namespace {

bool is_token_char(unsigned char c) {
  if (c >= 0x80) return true;  // keep multi-byte UTF-8 sequences intact
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
         (c >= '0' && c <= '9');
}

char lower_ascii(unsigned char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a')
                                : static_cast<char>(c);
}

}  // namespace

TokenList tokenize(std::string_view text) {
  TokenList tokens;
  std::string current;
  for (const char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (is_token_char(c)) {
      current.push_back(lower_ascii(c));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

StopwordSet load_stopwords(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open stopword file: " + path);
  }
  StopwordSet words;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::string word;
    while (ls >> word) words.insert(word);
  }
  return words;
}

const StopwordSet& default_stopwords() {
  static const StopwordSet words = {
      "a",      "about",  "above", "after",  "again",   "all",    "am",
      "an",     "and",    "any",   "are",    "as",      "at",     "be",
      "because","been",   "before","being",  "below",   "between","both",
      "but",    "by",     "can",   "could",  "did",     "do",     "does",
      "doing",  "down",   "during","each",   "few",     "for",    "from",
      "further","had",    "has",   "have",   "having",  "he",     "her",
      "here",   "hers",   "him",   "his",    "how",     "i",      "if",
      "in",     "into",   "is",    "it",     "its",     "just",   "me",
      "more",   "most",   "my",    "no",     "nor",     "not",    "now",
      "of",     "off",    "on",    "once",   "only",    "or",     "other",
      "our",    "ours",   "out",   "over",   "own",     "same",   "she",
      "should", "so",     "some",  "such",   "than",    "that",   "the",
      "their",  "theirs", "them",  "then",   "there",   "these",  "they",
      "this",   "those",  "through","to",    "too",     "under",  "until",
      "up",     "very",   "was",   "we",     "were",    "what",   "when",
      "where",  "which",  "while", "who",    "whom",    "why",    "will",
      "with",   "would",  "you",   "your",   "yours",
  };
  return words;
}

TokenList preprocess(const TokenList& tokens, const StopwordSet& stopwords,
                     const TokenList& question_tokens) {
  std::set<std::string> question_stems;
  for (const auto& q : question_tokens) question_stems.insert(porter_stem(q));

  TokenList out;
  out.reserve(tokens.size());
  for (const auto& token : tokens) {
    if (stopwords.count(token)) continue;
    std::string stem = porter_stem(token);
    if (question_stems.count(stem)) continue;
    out.push_back(std::move(stem));
  }
  return out;
}

Vocabulary fit_vocabulary(const std::vector<TokenList>& docs) {
  Vocabulary vocab;
  std::map<std::string, int> df;
  for (const auto& doc : docs) {
    std::set<std::string> seen(doc.begin(), doc.end());
    for (const auto& term : seen) ++df[term];
  }
  vocab.doc_count = static_cast<int>(docs.size());
  vocab.doc_freq.reserve(df.size());
  int next = 0;
  for (const auto& [term, count] : df) {
    vocab.index.emplace(term, next++);
    vocab.doc_freq.push_back(count);
  }
  return vocab;
}

double SparseVector::norm() const {
  double sq = 0;
  for (const auto& [idx, w] : entries) sq += w * w;
  return std::sqrt(sq);
}

SparseVector tfidf(const TokenList& doc, const Vocabulary& vocab) {
  std::unordered_map<int, int> counts;
  for (const auto& term : doc) {
    const int idx = vocab.find(term);
    if (idx >= 0) ++counts[idx];
  }

  SparseVector sv;
  sv.entries.reserve(counts.size());
  std::map<int, int> ordered(counts.begin(), counts.end());
  double sq = 0;
  for (const auto& [idx, tf] : ordered) {
    const double idf =
        std::log((1.0 + vocab.doc_count) / (1.0 + vocab.doc_freq[idx])) + 1.0;
    const double w = tf * idf;
    sq += w * w;
    sv.entries.emplace_back(idx, w);
  }
  if (sq > 0) {
    const double inv = 1.0 / std::sqrt(sq);
    for (auto& [idx, w] : sv.entries) w *= inv;
  }
  return sv;
}

Eigen::VectorXd to_dense(const SparseVector& sv, int dim) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(dim);
  for (const auto& [idx, w] : sv.entries) {
    if (idx < 0 || idx >= dim) {
      throw Error("sparse index out of range for dense conversion");
    }
    v[idx] = w;
  }
  return v;
}

Eigen::MatrixXd tfidf_matrix(const std::vector<TokenList>& docs,
                             const Vocabulary& vocab) {
  Eigen::MatrixXd m(docs.size(), vocab.size());
  for (std::size_t i = 0; i < docs.size(); ++i) {
    m.row(i) = to_dense(tfidf(docs[i], vocab), vocab.size()).transpose();
  }
  return m;
}

}  // namespace asag
