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

#include "asag/transfer.hpp"

#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include <json.hpp>

#include "asag/error.hpp"
#include "asag/serial.hpp"
#include "asag/textproc.hpp"

namespace asag {

void TransferConfig::validate() const {
  if (!(theta1 > 0.0 && theta1 < 1.0) || !(theta2 > 0.0 && theta2 < 1.0)) {
    throw Error("confidence thresholds must lie in (0,1)");
  }
  if (iter_max < 1) throw Error("iter_max must be at least 1");
  if (w1_init < 0 || w2_init < 0 ||
      std::abs(w1_init + w2_init - 1.0) > 1e-12) {
    throw Error("initial ensemble weights must be non-negative and sum to 1");
  }
  if (cca_ridge < 0) throw Error("cca ridge must be non-negative");
}

std::pair<double, double> default_thresholds(const GradeScheme& scheme) {
  scheme.validate();
  const int label_count = scheme.size();
  if (label_count > 2) {
    const double theta = 2.0 / label_count;
    return {theta, theta};
  }
  // 2/2 = 1 would forbid every admission.
  return {0.75, 0.75};
}

std::string threshold_rule_name(const GradeScheme& scheme) {
  return scheme.size() > 2 ? "2/label-count" : "binary-fallback(0.75)";
}

Prediction combine(const Prediction& p1, const Prediction& p2, double w1,
                   double w2) {
  if (p1.posterior.size() != p2.posterior.size()) {
    throw Error("ensemble inputs have different label sets");
  }
  if (std::abs(w1 + w2 - 1.0) > 1e-9 || w1 < 0 || w2 < 0) {
    throw Error("ensemble weights must be convex");
  }
  return make_prediction(w1 * p1.posterior + w2 * p2.posterior);
}

std::pair<double, double> update_weights(double w1, double w2, double err1,
                                         double err2) {
  if (err1 < 0 || err2 < 0) {
    throw Error("classifier errors must be non-negative");
  }
  const double denom = w1 * err1 + w2 * err2;
  if (denom == 0.0) return {w1, w2};
  const double next_w1 = 1.0 - (w1 * err1) / denom;
  return {next_w1, 1.0 - next_w1};
}

double classifier_error(const std::vector<int>& pred_labels,
                        const std::vector<int>& pseudo_labels,
                        const GradeScheme& scheme) {
  if (pred_labels.empty() || pred_labels.size() != pseudo_labels.size()) {
    throw Error("classifier_error needs equal, non-empty label lists");
  }
  double total = 0;
  for (std::size_t i = 0; i < pred_labels.size(); ++i) {
    if (scheme.kind == SchemeKind::Ordinal) {
      total += std::abs(scheme.value_of(pred_labels[i]) -
                        scheme.value_of(pseudo_labels[i]));
    } else {
      total += pred_labels[i] == pseudo_labels[i] ? 0.0 : 1.0;
    }
  }
  return total / static_cast<double>(pred_labels.size());
}

double classifier_error(const std::vector<Prediction>& preds,
                        const std::vector<int>& pseudo_labels,
                        const GradeScheme& scheme) {
  std::vector<int> labels;
  labels.reserve(preds.size());
  for (const auto& p : preds) labels.push_back(p.label);
  return classifier_error(labels, pseudo_labels, scheme);
}

TargetQuestion strip_grades(const Question& q,
                            const std::vector<StudentAnswer>& answers) {
  TargetQuestion t;
  t.question = q;
  t.answers.reserve(answers.size());
  for (const auto& a : answers) t.answers.push_back({a.id, a.text});
  return t;
}

namespace {

std::vector<int> grade_indices(const SourceQuestion& source) {
  std::vector<int> y;
  y.reserve(source.answers.size());
  for (const auto& a : source.answers) {
    if (!a.grade) {
      throw Error("source answer '" + a.id + "' has no grade");
    }
    const int idx = source.question.scheme.index_of(*a.grade);
    if (idx < 0) {
      throw Error("source answer '" + a.id + "' carries unknown grade '" +
                  *a.grade + "'");
    }
    y.push_back(idx);
  }
  return y;
}

std::vector<StudentAnswer> as_student_answers(const TargetQuestion& target) {
  std::vector<StudentAnswer> out;
  out.reserve(target.answers.size());
  for (const auto& a : target.answers) {
    out.push_back({a.id, target.question.id, a.text, std::nullopt});
  }
  return out;
}

}  // namespace

TransferResult run_transfer(const SourceQuestion& source,
                            const TargetQuestion& target,
                            const TransferConfig& cfg_in,
                            const Resources& res) {
  if (target.answers.empty()) throw Error("target question has no answers");
  if (source.answers.empty()) throw Error("source question has no answers");
  if (!(source.question.scheme == target.question.scheme)) {
    throw Error("source and target questions use different grade schemes");
  }
  const GradeScheme& scheme = source.question.scheme;
  const std::vector<int> source_y = grade_indices(source);
  if (std::set<int>(source_y.begin(), source_y.end()).size() < 2) {
    throw Error("source question needs at least two distinct grades");
  }

  TransferConfig cfg = cfg_in;
  std::string theta_rule = "explicit";
  if (cfg.theta1 <= 0.0 || cfg.theta2 <= 0.0) {
    const auto [t1, t2] = default_thresholds(scheme);
    if (cfg.theta1 <= 0.0) cfg.theta1 = t1;
    if (cfg.theta2 <= 0.0) cfg.theta2 = t2;
    theta_rule = threshold_rule_name(scheme);
  }
  cfg.validate();

  // Similarity profiles, min-max normalized per question.
  const auto src_norm = minmax_normalize(
      compute_profiles(source.question, source.answers, res));
  const auto tgt_norm = minmax_normalize(
      compute_profiles(target.question, as_student_answers(target), res));

  // Shared subspace and the projected classifier trained on the source.
  const PairedSamples paired =
      pair_instances(src_norm, tgt_norm, cfg.pairing_seed);
  TransferResult result;
  result.cca = fit_cca(paired, cfg.cca_ridge);
  result.theta1 = cfg.theta1;
  result.theta2 = cfg.theta2;
  result.theta_rule = theta_rule;

  const int k = result.cca.components();
  Eigen::MatrixXd source_features(source.answers.size(), k);
  for (std::size_t i = 0; i < src_norm.size(); ++i) {
    source_features.row(static_cast<Eigen::Index>(i)) =
        project_source(result.cca, src_norm[i].vec()).transpose();
  }
  result.c2 =
      train(source_features, source_y, scheme.label_names(), cfg.classifier);

  const int n = static_cast<int>(target.answers.size());
  std::vector<Eigen::VectorXd> projected(n);
  result.initial_c2.reserve(n);
  for (int i = 0; i < n; ++i) {
    projected[i] = project_target(result.cca, tgt_norm[i].vec());
    result.initial_c2.push_back(predict(result.c2, projected[i]));
  }

  // Phase 1: admissions by the projected classifier alone.
  std::vector<bool> in_pool(n, false);
  std::vector<int> pseudo(n, -1);
  std::vector<double> admit_confidence(n, 0.0);
  std::vector<int> admit_iteration(n, -1);
  int pool_size = 0;
  for (int i = 0; i < n; ++i) {
    const Prediction& p = result.initial_c2[i];
    if (p.confidence > cfg.theta1) {
      in_pool[i] = true;
      pseudo[i] = p.label;
      admit_confidence[i] = p.confidence;
      admit_iteration[i] = 0;
      ++pool_size;
    }
  }

  double w1 = cfg.w1_init;
  double w2 = cfg.w2_init;
  result.trace.push_back({0, pool_size, pool_size, w1, w2, -1, -1});

  // Text-classifier features: vocabulary over every target answer (text
  // only); training always uses the current pool.
  const TokenList question_tokens = tokenize(target.question.text);
  std::vector<TokenList> docs;
  docs.reserve(n);
  for (const auto& a : target.answers) {
    docs.push_back(preprocess(tokenize(a.text), res.stopwords, question_tokens));
  }
  const Vocabulary vocab = fit_vocabulary(docs);
  std::vector<Eigen::VectorXd> text_features(n);
  for (int i = 0; i < n; ++i) {
    text_features[i] = to_dense(tfidf(docs[i], vocab), vocab.size());
  }

  auto train_c1 = [&]() {
    Eigen::MatrixXd x(pool_size, vocab.size());
    std::vector<int> y;
    y.reserve(pool_size);
    Eigen::Index row = 0;
    for (int i = 0; i < n; ++i) {
      if (!in_pool[i]) continue;
      x.row(row++) = text_features[i].transpose();
      y.push_back(pseudo[i]);
    }
    return train(x, y, scheme.label_names(), cfg.classifier);
  };
  if (pool_size > 0) result.c1 = train_c1();

  // Phase 2: iterative ensemble admissions. While the pool is empty the
  // ensemble degenerates to the projected classifier alone.
  for (int iteration = 1; iteration <= cfg.iter_max && pool_size < n;
       ++iteration) {
    std::vector<int> admitted;
    std::vector<int> c1_labels, c2_labels, ensemble_labels;
    const bool have_c1 = result.c1.has_value();

    for (int i = 0; i < n; ++i) {
      if (in_pool[i]) continue;
      const Prediction p2 = predict(result.c2, projected[i]);
      Prediction ensemble;
      Prediction p1;
      if (have_c1) {
        p1 = predict(*result.c1, text_features[i]);
        ensemble = combine(p1, p2, w1, w2);
      } else {
        ensemble = p2;
      }
      if (ensemble.confidence > cfg.theta2) {
        admitted.push_back(i);
        if (have_c1) c1_labels.push_back(p1.label);
        c2_labels.push_back(p2.label);
        ensemble_labels.push_back(ensemble.label);
        in_pool[i] = true;
        pseudo[i] = ensemble.label;
        admit_confidence[i] = ensemble.confidence;
        admit_iteration[i] = iteration;
      }
    }

    if (admitted.empty()) {
      result.trace.push_back(
          {iteration, pool_size, 0, w1, w2, -1, -1});
      break;  // stall: nothing left that clears the threshold
    }
    pool_size += static_cast<int>(admitted.size());
    result.c1 = train_c1();

    double err1 = -1, err2 = -1;
    if (have_c1) {
      err1 = classifier_error(c1_labels, ensemble_labels, scheme);
      err2 = classifier_error(c2_labels, ensemble_labels, scheme);
      std::tie(w1, w2) = update_weights(w1, w2, err1, err2);
    }
    result.trace.push_back({iteration, pool_size,
                            static_cast<int>(admitted.size()), w1, w2, err1,
                            err2});
  }

  result.final_w1 = w1;
  result.final_w2 = w2;

  // Final sweep: answers never admitted take the final ensemble's label.
  result.labels.reserve(n);
  for (int i = 0; i < n; ++i) {
    TargetLabel out;
    out.answer_id = target.answers[i].id;
    if (in_pool[i]) {
      out.label = pseudo[i];
      out.confidence = admit_confidence[i];
      out.source = LabelSource::Pool;
      out.iteration_admitted = admit_iteration[i];
    } else {
      const Prediction p2 = predict(result.c2, projected[i]);
      const Prediction final_pred =
          result.c1 ? combine(predict(*result.c1, text_features[i]), p2, w1, w2)
                    : p2;
      out.label = final_pred.label;
      out.confidence = final_pred.confidence;
      out.source = LabelSource::FinalSweep;
      out.iteration_admitted = -1;
    }
    result.labels.push_back(std::move(out));
  }
  return result;
}

namespace {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

}  // namespace

std::string render_predictions_csv(
    const TransferResult& result, const GradeScheme& scheme,
    const std::map<std::string, std::string>& header) {
  std::ostringstream out;
  for (const auto& [key, value] : header) {
    out << "# " << key << "=" << value << "\n";
  }
  out << "answer_id,label,confidence,source,iteration_admitted\n";
  for (const auto& l : result.labels) {
    out << l.answer_id << ',' << scheme.labels[l.label].name << ','
        << format_double(l.confidence) << ','
        << (l.source == LabelSource::Pool ? "pool" : "final-sweep") << ','
        << l.iteration_admitted << '\n';
  }
  return out.str();
}

std::string render_trace_json(
    const TransferResult& result,
    const std::map<std::string, std::string>& header) {
  nlohmann::json j;
  if (!header.empty()) {
    nlohmann::json run;
    for (const auto& [key, value] : header) run[key] = value;
    j["run"] = std::move(run);
  }
  j["theta1"] = result.theta1;
  j["theta2"] = result.theta2;
  j["theta_rule"] = result.theta_rule;
  j["final_w1"] = result.final_w1;
  j["final_w2"] = result.final_w2;
  j["components"] = result.cca.components();
  nlohmann::json iters = nlohmann::json::array();
  for (const auto& t : result.trace) {
    nlohmann::json it;
    it["iteration"] = t.iteration;
    it["pool_size"] = t.pool_size;
    it["newly_added"] = t.newly_added;
    it["w1"] = t.w1;
    it["w2"] = t.w2;
    if (t.err1 >= 0) {
      it["err1"] = t.err1;
      it["err2"] = t.err2;
    } else {
      it["err1"] = nullptr;
      it["err2"] = nullptr;
    }
    iters.push_back(std::move(it));
  }
  j["iterations"] = std::move(iters);
  return j.dump(2) + "\n";
}

}  // namespace asag
