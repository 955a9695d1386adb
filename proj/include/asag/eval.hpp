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

#ifndef ASAG_EVAL_HPP_
#define ASAG_EVAL_HPP_

#include <Eigen/Core>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "asag/corpus.hpp"
#include "asag/transfer.hpp"

namespace asag {

struct ConfusionMatrix {
  std::vector<std::string> labels;  // scheme order
  Eigen::MatrixXi counts;           // rows = gold, columns = predicted

  static ConfusionMatrix from_pairs(const std::vector<int>& gold,
                                    const std::vector<int>& pred,
                                    const GradeScheme& scheme);
  int total() const { return counts.sum(); }
};

/// Mean absolute difference of numeric label values; ordinal schemes only.
double mae(const std::vector<int>& gold, const std::vector<int>& pred,
           const GradeScheme& scheme);

struct F1Result {
  double macro = 0;
  double weighted = 0;
  Eigen::VectorXd per_class;  // every class, ignored ones included
};

/// Per-class F1 with 0/0 -> 0. Ignored classes keep their per-class value but
/// are excluded from the macro class set and from the weighted sum's gold
/// counts. Throws when every class is ignored.
F1Result f1_scores(const ConfusionMatrix& cm,
                   const std::set<std::string>& ignore = {});

enum class Protocol { Proposed, SupBl, SupSl };
enum class SupSlMode { Resubstitution, LeaveOneOut };

struct QuestionMetrics {
  std::string question_id;
  double mae_value = -1;  // negative when not applicable (nominal scheme)
  double macro_f1 = 0;
  double weighted_f1 = 0;
  int scored = 0;
};

struct MetricReport {
  Protocol protocol = Protocol::Proposed;
  std::string protocol_name;
  SupSlMode supsl_mode = SupSlMode::Resubstitution;
  std::vector<QuestionMetrics> per_question;
  // Unweighted means of the per-question values.
  double aggregate_mae = -1;
  double aggregate_macro_f1 = 0;
  double aggregate_weighted_f1 = 0;
  std::vector<std::string> ignored_labels;
};

MetricReport make_report(Protocol protocol,
                         std::vector<QuestionMetrics> per_question,
                         const std::set<std::string>& ignore);

/// Baseline: the fixed 0.5/0.5 ensemble (text classifier on source TFIDF,
/// profile classifier on raw normalized source profiles, no CCA) applied
/// unchanged to the target question, scored against target gold grades.
MetricReport run_sup_bl(const SourceQuestion& source,
                        const SourceQuestion& target,
                        const TransferConfig& cfg, const Resources& res,
                        const std::set<std::string>& ignore = {});

/// Skyline: the same ensemble trained and scored on one fully graded
/// question, by resubstitution (default) or leave-one-out.
MetricReport run_sup_sl(const SourceQuestion& question,
                        const TransferConfig& cfg, const Resources& res,
                        SupSlMode mode = SupSlMode::Resubstitution,
                        const std::set<std::string>& ignore = {});

struct SweepCell {
  std::string source_id;
  std::string target_id;
  double mae_value = -1;       // final transfer labels vs gold
  double phase1_mae = -1;      // projected-classifier-only labels vs gold
  double macro_f1 = 0;
  double weighted_f1 = 0;
  int iterations = 0;
  double final_w1 = 0, final_w2 = 0;
};

struct BestRow {
  std::string target_id;
  std::string best_source_id;
  double mae_value = -1;
  double phase1_mae = -1;
  double macro_f1 = 0;
  double weighted_f1 = 0;
};

struct SweepResult {
  std::vector<SweepCell> cells;  // every ordered (source, target) pair
  std::vector<BestRow> best;     // per target, the best source
};

/// Runs a transfer for every ordered question pair, scored against target
/// gold. Pairs run concurrently when jobs > 1; assembly is deterministic.
SweepResult sweep(const Dataset& ds, const TransferConfig& cfg,
                  const Resources& res,
                  const std::set<std::string>& ignore = {}, int jobs = 1);

// Report exports.
std::string render_report_csv(const MetricReport& report,
                              const std::map<std::string, std::string>& header = {});
std::string render_summary_json(const std::vector<MetricReport>& rows,
                                const std::map<std::string, std::string>& header = {});

}  // namespace asag

#endif  // ASAG_EVAL_HPP_
