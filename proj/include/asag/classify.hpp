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

#ifndef ASAG_CLASSIFY_HPP_
#define ASAG_CLASSIFY_HPP_

#include <Eigen/Core>
#include <string>
#include <vector>

namespace asag {

struct TrainOptions {
  double l2 = 1e-2;        // penalty strength; the bias column is unpenalized
  int max_epochs = 500;
  double grad_tol = 1e-6;  // stop when the gradient infinity norm drops below

  bool operator==(const TrainOptions&) const = default;
};

/// Multinomial logistic regression model. Weight row per label, bias in the
/// last column.
struct ProbModel {
  std::vector<std::string> labels;
  Eigen::MatrixXd weights;  // L x (d+1)
  TrainOptions options;

  int label_count() const { return static_cast<int>(labels.size()); }
  int feature_dim() const { return static_cast<int>(weights.cols()) - 1; }
};

struct Prediction {
  int label = 0;             // argmax posterior, ties to the lower index
  Eigen::VectorXd posterior; // sums to 1, entries >= 0
  double confidence = 0.0;   // max posterior
};

struct TrainDiag {
  int epochs = 0;
  double final_loss = 0.0;
  double final_grad_inf = 0.0;
  std::vector<double> loss_trace;  // one entry per accepted step
};

/// Softmax cross-entropy (mean over examples) plus L2 penalty, minimized by
/// full-batch gradient descent with Armijo backtracking from zero weights.
/// Deterministic: identical inputs give identical models.
ProbModel train(const Eigen::MatrixXd& X, const std::vector<int>& y,
                std::vector<std::string> labels,
                const TrainOptions& opts = {}, TrainDiag* diag = nullptr);

Prediction predict(const ProbModel& m, const Eigen::VectorXd& x);

/// Applies the Prediction invariants (argmax label, tie to the lower index,
/// confidence = max) to an arbitrary posterior.
Prediction make_prediction(Eigen::VectorXd posterior);

// Objective internals, exposed for gradient checking and tests.
// X is n x d (bias not included), W is L x (d+1).
double lr_loss(const Eigen::MatrixXd& W, const Eigen::MatrixXd& X,
               const std::vector<int>& y, double l2);
Eigen::MatrixXd lr_gradient(const Eigen::MatrixXd& W, const Eigen::MatrixXd& X,
                            const std::vector<int>& y, double l2);

// Versioned model file; save/load round-trips bit-exactly.
std::string render_model(const ProbModel& m);
ProbModel parse_model(const std::string& text);
void save_model(const ProbModel& m, const std::string& path);
ProbModel load_model(const std::string& path);

}  // namespace asag

#endif  // ASAG_CLASSIFY_HPP_
