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

#ifndef ASAG_CCA_HPP_
#define ASAG_CCA_HPP_

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "asag/simfeat.hpp"

namespace asag {

/// Column-paired source/target samples: column i of `source` is matched with
/// column i of `target`.
struct PairedSamples {
  Eigen::MatrixXd source;  // d_s x n
  Eigen::MatrixXd target;  // d_t x n
  std::uint64_t seed = 0;
};

/// Builds paired columns from two (possibly unequal) answer sets: the larger
/// side is subsampled uniformly without replacement (seeded), both sides are
/// sorted descending by total similarity (ties keep input order), and pairing
/// is rank-to-rank. Answers to different questions have no natural pairing;
/// rank pairing is a deterministic proxy for "answers of comparable quality".
PairedSamples pair_instances(const std::vector<SimilarityProfile>& src,
                             const std::vector<SimilarityProfile>& tgt,
                             std::uint64_t seed);

struct CcaModel {
  Eigen::MatrixXd source_proj;   // d_s x k
  Eigen::MatrixXd target_proj;   // d_t x k
  Eigen::VectorXd correlations;  // descending, in [0,1]
  Eigen::VectorXd source_mean;
  Eigen::VectorXd target_mean;
  double ridge = 0.0;

  int components() const { return static_cast<int>(correlations.size()); }
};

/// Canonical correlation analysis via the whitened-SVD route:
///   M = (S_ss + ridge I)^(-1/2) S_st (S_tt + ridge I)^(-1/2),  M = U diag(rho) V'
/// with mean-centered columns and 1/(n-1) covariances. Projection columns are
/// rescaled to unit variance on the training data; components with
/// rho <= 1e-8 are dropped. Requires n >= 2 and finite input.
CcaModel fit_cca(const PairedSamples& ps, double ridge = 1e-3);

Eigen::VectorXd project_source(const CcaModel& m, const Eigen::VectorXd& v);
Eigen::VectorXd project_target(const CcaModel& m, const Eigen::VectorXd& v);

// Versioned model file; save/load round-trips bit-exactly.
std::string render_cca(const CcaModel& m);
CcaModel parse_cca(const std::string& text);
void save_cca(const CcaModel& m, const std::string& path);
CcaModel load_cca(const std::string& path);

}  // namespace asag

#endif  // ASAG_CCA_HPP_
