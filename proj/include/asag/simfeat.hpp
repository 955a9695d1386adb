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

#ifndef ASAG_SIMFEAT_HPP_
#define ASAG_SIMFEAT_HPP_

#include <Eigen/Core>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "asag/corpus.hpp"
#include "asag/textproc.hpp"

namespace asag {

/// Is-a taxonomy with optional per-concept information content. Loaded from
/// a text file with CONCEPTS / EDGES / WORDS sections.
struct TaxonomyResource {
  std::vector<std::string> concepts;
  std::map<std::string, int> concept_index;
  std::vector<std::vector<int>> parents;   // child -> parents
  std::vector<std::vector<int>> children;  // parent -> children
  std::map<std::string, std::vector<int>> word_concepts;
  std::vector<double> ic;  // empty when the file carries no IC column

  bool has_ic() const { return !ic.empty(); }
  int concept_count() const { return static_cast<int>(concepts.size()); }
  /// Concept ids for a word; tries the raw word, then its stem.
  const std::vector<int>* find_word(const std::string& word) const;
  void validate() const;
};

TaxonomyResource load_taxonomy(const std::string& path);
void write_taxonomy(const TaxonomyResource& tax, const std::string& path);

/// word -> dense vector table, all vectors of one dimension.
struct EmbeddingTable {
  int dim = 0;
  std::map<std::string, Eigen::VectorXd> vectors;

  /// Tries the raw word, then its stem; nullptr when absent.
  const Eigen::VectorXd* find(const std::string& word) const;
};

EmbeddingTable load_embeddings(const std::string& path);
void write_embeddings(const EmbeddingTable& table, const std::string& path);

/// The five similarity features of one student answer against the model
/// answer. After min-max normalization every component lies in [0,1].
struct SimilarityProfile {
  double lo = 0, jc = 0, sp = 0, lsa = 0, w2v = 0;

  Eigen::Matrix<double, 5, 1> vec() const {
    return Eigen::Matrix<double, 5, 1>(lo, jc, sp, lsa, w2v);
  }
  static SimilarityProfile from_vec(const Eigen::Matrix<double, 5, 1>& v) {
    return {v[0], v[1], v[2], v[3], v[4]};
  }
};

inline constexpr int kProfileDims = 5;

/// Dice coefficient over unique tokens; both empty -> 0.
double lex_overlap(const TokenList& student, const TokenList& model);

/// Shortest-path similarity: max over concept pairs of 1/(1+len) where len
/// counts edges of the shortest undirected is-a path. Unmapped word -> 0.
double word_sim_sp(const std::string& w1, const std::string& w2,
                   const TaxonomyResource& tax);

/// Jiang-Conrath similarity: max over concept pairs of
/// 1/(IC(c1)+IC(c2)-2*IC(lcs)+eps), eps=1e-6, clamped to [0,1].
/// Throws when the taxonomy has no IC values.
double word_sim_jc(const std::string& w1, const std::string& w2,
                   const TaxonomyResource& tax);

/// 1/(1 + euclidean distance); either word out of table -> 0.
double word_sim_embed(const std::string& w1, const std::string& w2,
                      const EmbeddingTable& emb);

using WordSim =
    std::function<double(const std::string&, const std::string&)>;

/// Symmetric two-direction aggregation of max word-to-word similarities,
/// each direction normalized by its response length; either side empty -> 0.
double answer_similarity(const TokenList& student, const TokenList& model,
                         const WordSim& omega);

struct ChannelConfig {
  bool lo = true, jc = true, sp = true, lsa = true, w2v = true;
};

/// Everything the similarity layer may consume. Missing resources disable
/// the corresponding channels (constant-0 column plus a warning).
struct Resources {
  StopwordSet stopwords = default_stopwords();
  std::optional<TaxonomyResource> taxonomy;
  std::optional<EmbeddingTable> lsa;
  std::optional<EmbeddingTable> w2v;
  ChannelConfig channels;
};

/// Raw (unnormalized) profiles, one per answer, in input order.
/// `warnings` receives one line per disabled channel (default std::cerr).
std::vector<SimilarityProfile> compute_profiles(
    const Question& q, const std::vector<StudentAnswer>& answers,
    const Resources& res, std::ostream* warnings = nullptr);

/// Per-column (x-min)/(max-min) within this answer set; a constant column
/// maps to all zeros. Requires at least one profile.
std::vector<SimilarityProfile> minmax_normalize(
    const std::vector<SimilarityProfile>& raw);

/// Column j is profiles[j] as a 5-vector.
Eigen::MatrixXd profile_matrix(const std::vector<SimilarityProfile>& profiles);

}  // namespace asag

#endif  // ASAG_SIMFEAT_HPP_
