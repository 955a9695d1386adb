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

#ifndef ASAG_TRANSFER_HPP_
#define ASAG_TRANSFER_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "asag/cca.hpp"
#include "asag/classify.hpp"
#include "asag/corpus.hpp"
#include "asag/simfeat.hpp"

namespace asag {

struct TransferConfig {
  // Confidence thresholds for pool admission; <= 0 means "derive from the
  // scheme via default_thresholds".
  double theta1 = 0.0;
  double theta2 = 0.0;
  int iter_max = 10;
  double w1_init = 0.5;
  double w2_init = 0.5;
  double cca_ridge = 1e-3;
  std::uint64_t pairing_seed = 0;
  TrainOptions classifier;

  void validate() const;  // thresholds in (0,1), iter_max >= 1, weights convex
};

/// 2/L for schemes with more than two labels; 0.75 for binary schemes, where
/// 2/2 = 1 would admit nothing.
std::pair<double, double> default_thresholds(const GradeScheme& scheme);

/// Human-readable name of the rule default_thresholds applied; recorded in
/// output headers.
std::string threshold_rule_name(const GradeScheme& scheme);

/// Weighted posterior average. Requires matching label sets and w1 + w2 = 1.
Prediction combine(const Prediction& p1, const Prediction& p2, double w1,
                   double w2);

/// Weight reallocation toward the classifier with lower error:
///   w1' = 1 - w1*I1 / (w1*I1 + w2*I2),  w2' = 1 - w1'.
/// Unchanged when the denominator is zero.
std::pair<double, double> update_weights(double w1, double w2, double err1,
                                         double err2);

/// Mean per-instance error of predictions against pseudo labels: absolute
/// numeric difference for ordinal schemes, 0/1 disagreement for nominal.
double classifier_error(const std::vector<int>& pred_labels,
                        const std::vector<int>& pseudo_labels,
                        const GradeScheme& scheme);
double classifier_error(const std::vector<Prediction>& preds,
                        const std::vector<int>& pseudo_labels,
                        const GradeScheme& scheme);

struct SourceQuestion {
  Question question;
  std::vector<StudentAnswer> answers;  // all graded
};

struct UngradedAnswer {
  std::string id;
  std::string text;
};

/// Target-side view. Grades never enter this struct, so a transfer run
/// cannot read them even by accident.
struct TargetQuestion {
  Question question;
  std::vector<UngradedAnswer> answers;
};

TargetQuestion strip_grades(const Question& q,
                            const std::vector<StudentAnswer>& answers);

enum class LabelSource { Pool, FinalSweep };

struct IterationTrace {
  int iteration = 0;     // 0 = initialization by the projected classifier
  int pool_size = 0;
  int newly_added = 0;
  double w1 = 0, w2 = 0;  // weights after this iteration's update
  // Mean errors of the individual classifiers on this iteration's
  // admissions; negative when no update happened.
  double err1 = -1, err2 = -1;
};

struct TargetLabel {
  std::string answer_id;
  int label = 0;
  double confidence = 0;
  LabelSource source = LabelSource::Pool;
  int iteration_admitted = -1;  // -1 for final-sweep labels
};

struct TransferResult {
  std::vector<TargetLabel> labels;      // input answer order
  std::vector<Prediction> initial_c2;   // projected-classifier prediction per answer
  std::vector<IterationTrace> trace;
  double final_w1 = 0, final_w2 = 0;
  double theta1 = 0, theta2 = 0;
  std::string theta_rule;
  CcaModel cca;
  ProbModel c2;
  std::optional<ProbModel> c1;  // absent when the pool stayed empty
};

/// The full source-to-target procedure: similarity profiles with per-question
/// min-max, rank-paired CCA, projected classifier trained on the source,
/// confidence-gated pseudo-label pool, iterative text-classifier bootstrap
/// with ensemble weight updates, final sweep over unadmitted answers.
TransferResult run_transfer(const SourceQuestion& source,
                            const TargetQuestion& target,
                            const TransferConfig& cfg, const Resources& res);

// File exports. `header` lines are emitted to CSV as leading '#' comments and
// embedded under "run" in JSON; keys are written in sorted order.
std::string render_predictions_csv(
    const TransferResult& result, const GradeScheme& scheme,
    const std::map<std::string, std::string>& header = {});
std::string render_trace_json(
    const TransferResult& result,
    const std::map<std::string, std::string>& header = {});

}  // namespace asag

#endif  // ASAG_TRANSFER_HPP_
