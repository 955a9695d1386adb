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

#include "asag/classify.hpp"

#include <cmath>
#include <limits>

#include <json.hpp>

#include "asag/error.hpp"
#include "asag/serial.hpp"

namespace asag {
namespace {

// Row-wise softmax of logits (n x L), numerically stabilized.
Eigen::MatrixXd softmax_rows(const Eigen::MatrixXd& logits) {
  Eigen::MatrixXd p = logits;
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    p.row(i).array() -= p.row(i).maxCoeff();
  }
  p = p.array().exp();
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    p.row(i) /= p.row(i).sum();
  }
  return p;
}

Eigen::MatrixXd with_bias(const Eigen::MatrixXd& x) {
  Eigen::MatrixXd xa(x.rows(), x.cols() + 1);
  xa.leftCols(x.cols()) = x;
  xa.col(x.cols()).setOnes();
  return xa;
}

void check_training_input(const Eigen::MatrixXd& x, const std::vector<int>& y,
                          int label_count) {
  if (x.rows() == 0) throw Error("empty training set");
  if (static_cast<Eigen::Index>(y.size()) != x.rows()) {
    throw Error("feature/label count mismatch: " + std::to_string(x.rows()) +
                " rows vs " + std::to_string(y.size()) + " labels");
  }
  if (!x.allFinite()) throw Error("training features contain non-finite values");
  for (const int label : y) {
    if (label < 0 || label >= label_count) {
      throw Error("label index " + std::to_string(label) +
                  " outside the label set");
    }
  }
}

}  // namespace

double lr_loss(const Eigen::MatrixXd& w, const Eigen::MatrixXd& x,
               const std::vector<int>& y, double l2) {
  const Eigen::MatrixXd xa = with_bias(x);
  const Eigen::MatrixXd logits = xa * w.transpose();  // n x L
  double ce = 0;
  for (Eigen::Index i = 0; i < logits.rows(); ++i) {
    const double mx = logits.row(i).maxCoeff();
    const double lse =
        mx + std::log((logits.row(i).array() - mx).exp().sum());
    ce += lse - logits(i, y[static_cast<std::size_t>(i)]);
  }
  ce /= static_cast<double>(logits.rows());
  const double penalty =
      0.5 * l2 * w.leftCols(w.cols() - 1).squaredNorm();
  return ce + penalty;
}

Eigen::MatrixXd lr_gradient(const Eigen::MatrixXd& w, const Eigen::MatrixXd& x,
                            const std::vector<int>& y, double l2) {
  const Eigen::MatrixXd xa = with_bias(x);
  Eigen::MatrixXd p = softmax_rows(xa * w.transpose());  // n x L
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    p(i, y[static_cast<std::size_t>(i)]) -= 1.0;
  }
  Eigen::MatrixXd grad =
      (p.transpose() * xa) / static_cast<double>(x.rows());  // L x (d+1)
  grad.leftCols(grad.cols() - 1) += l2 * w.leftCols(w.cols() - 1);
  return grad;
}

ProbModel train(const Eigen::MatrixXd& x, const std::vector<int>& y,
                std::vector<std::string> labels, const TrainOptions& opts,
                TrainDiag* diag) {
  if (labels.empty()) throw Error("empty label set");
  check_training_input(x, y, static_cast<int>(labels.size()));

  const Eigen::Index label_count = static_cast<Eigen::Index>(labels.size());
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(label_count, x.cols() + 1);

  double loss = lr_loss(w, x, y, opts.l2);
  double step = 1.0;
  constexpr double kArmijo = 1e-4;
  int epoch = 0;
  double grad_inf = 0;
  if (diag) diag->loss_trace.clear();

  for (; epoch < opts.max_epochs; ++epoch) {
    const Eigen::MatrixXd grad = lr_gradient(w, x, y, opts.l2);
    grad_inf = grad.cwiseAbs().maxCoeff();
    if (grad_inf < opts.grad_tol) break;

    const double gnorm2 = grad.squaredNorm();
    double t = step;
    bool accepted = false;
    while (t > 1e-18) {
      const Eigen::MatrixXd cand = w - t * grad;
      const double cand_loss = lr_loss(cand, x, y, opts.l2);
      if (cand_loss <= loss - kArmijo * t * gnorm2) {
        w = cand;
        loss = cand_loss;
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) break;  // no productive step length left
    step = std::min(t * 2.0, 1e6);
    if (diag) diag->loss_trace.push_back(loss);
  }

  if (diag) {
    diag->epochs = epoch;
    diag->final_loss = loss;
    diag->final_grad_inf = grad_inf;
  }

  ProbModel model;
  model.labels = std::move(labels);
  model.weights = std::move(w);
  model.options = opts;
  return model;
}

Prediction make_prediction(Eigen::VectorXd posterior) {
  Prediction pred;
  pred.posterior = std::move(posterior);
  pred.label = 0;
  for (Eigen::Index i = 1; i < pred.posterior.size(); ++i) {
    if (pred.posterior[i] > pred.posterior[pred.label]) {
      pred.label = static_cast<int>(i);
    }
  }
  pred.confidence = pred.posterior[pred.label];
  return pred;
}

Prediction predict(const ProbModel& m, const Eigen::VectorXd& x) {
  if (x.size() != m.feature_dim()) {
    throw Error("prediction input has dimension " + std::to_string(x.size()) +
                ", model expects " + std::to_string(m.feature_dim()));
  }
  if (!x.allFinite()) throw Error("prediction input is not finite");
  Eigen::VectorXd logits =
      m.weights.leftCols(m.feature_dim()) * x + m.weights.col(m.feature_dim());
  const double mx = logits.maxCoeff();
  Eigen::VectorXd p = (logits.array() - mx).exp();
  p /= p.sum();
  return make_prediction(std::move(p));
}

std::string render_model(const ProbModel& m) {
  nlohmann::json j;
  j["format"] = "asag-prob";
  j["version"] = 1;
  j["labels"] = m.labels;
  j["weights"] = matrix_to_json(m.weights);
  j["options"]["l2"] = double_to_hex(m.options.l2);
  j["options"]["max_epochs"] = m.options.max_epochs;
  j["options"]["grad_tol"] = double_to_hex(m.options.grad_tol);
  return j.dump(2) + "\n";
}

ProbModel parse_model(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(std::string("bad classifier model file: ") + e.what());
  }
  if (j.value("format", "") != "asag-prob" || j.value("version", 0) != 1) {
    throw Error("not an asag-prob v1 model file");
  }
  ProbModel m;
  m.labels = j.at("labels").get<std::vector<std::string>>();
  m.weights = matrix_from_json(j.at("weights"));
  m.options.l2 = double_from_hex(j.at("options").at("l2").get<std::string>());
  m.options.max_epochs = j.at("options").at("max_epochs").get<int>();
  m.options.grad_tol =
      double_from_hex(j.at("options").at("grad_tol").get<std::string>());
  if (static_cast<Eigen::Index>(m.labels.size()) != m.weights.rows()) {
    throw Error("model label count does not match weight rows");
  }
  return m;
}

void save_model(const ProbModel& m, const std::string& path) {
  write_text_file(path, render_model(m));
}

ProbModel load_model(const std::string& path) {
  return parse_model(read_text_file(path));
}

}  // namespace asag
