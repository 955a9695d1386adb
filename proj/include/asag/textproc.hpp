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

#ifndef ASAG_TEXTPROC_HPP_
#define ASAG_TEXTPROC_HPP_

#include <Eigen/Core>
#include <map>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

namespace asag {

/// Ordered lowercase tokens; never contains empty strings.
using TokenList = std::vector<std::string>;

/// Splits text into lowercased maximal runs of letters/digits. Punctuation
/// and whitespace separate tokens. Bytes >= 0x80 are kept inside runs so
/// UTF-8 words survive untouched.
TokenList tokenize(std::string_view text);

/// Porter's stemming algorithm (the reference implementation variant that the
/// standard voc/output test vectors correspond to). Expects lowercase input;
/// words of length <= 2 are returned unchanged.
std::string porter_stem(std::string_view word);

using StopwordSet = std::unordered_set<std::string>;

/// One token per line, '#' starts a comment.
StopwordSet load_stopwords(const std::string& path);

/// Small built-in English list used when no file is configured.
const StopwordSet& default_stopwords();

/// Stopword removal, question-word demoting, then Porter stemming.
/// Demotion is stem-level: a token is dropped when its stem equals the stem
/// of any question token, so inflected parroting is dropped too.
TokenList preprocess(const TokenList& tokens, const StopwordSet& stopwords,
                     const TokenList& question_tokens);

struct Vocabulary {
  std::map<std::string, int> index;  // term -> dense index, sorted term order
  std::vector<int> doc_freq;         // by index, presence counts
  int doc_count = 0;

  int size() const { return static_cast<int>(index.size()); }
  int find(const std::string& term) const {
    auto it = index.find(term);
    return it == index.end() ? -1 : it->second;
  }
};

Vocabulary fit_vocabulary(const std::vector<TokenList>& docs);

/// Sparse vector with strictly increasing indices. If nonzero, the weights
/// are L2-normalized.
struct SparseVector {
  std::vector<std::pair<int, double>> entries;

  double norm() const;
  bool empty() const { return entries.empty(); }
};

/// weight(term) = tf * (ln((1+N)/(1+df)) + 1), L2-normalized.
/// Out-of-vocabulary terms are ignored; an all-OOV document yields the zero
/// vector.
SparseVector tfidf(const TokenList& doc, const Vocabulary& vocab);

Eigen::VectorXd to_dense(const SparseVector& sv, int dim);

/// Row i is the dense tfidf vector of docs[i].
Eigen::MatrixXd tfidf_matrix(const std::vector<TokenList>& docs,
                             const Vocabulary& vocab);

}  // namespace asag

#endif  // ASAG_TEXTPROC_HPP_
