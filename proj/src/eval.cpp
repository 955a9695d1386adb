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

#include "asag/eval.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "asag/error.hpp"
#include "asag/rng.hpp"
#include "asag/textproc.hpp"

namespace asag {

ConfusionMatrix ConfusionMatrix::from_pairs(const std::vector<int>& gold,
                                            const std::vector<int>& pred,
                                            const GradeScheme& scheme) {
  if (gold.size() != pred.size()) {
    throw Error("gold/prediction length mismatch");
  }
  ConfusionMatrix cm;
  cm.labels = scheme.label_names();
  const int label_count = scheme.size();
  cm.counts = Eigen::MatrixXi::Zero(label_count, label_count);
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (gold[i] < 0 || gold[i] >= label_count || pred[i] < 0 ||
        pred[i] >= label_count) {
      throw Error("label index outside the scheme");
    }
    ++cm.counts(gold[i], pred[i]);
  }
  return cm;
}

double mae(const std::vector<int>& gold, const std::vector<int>& pred,
           const GradeScheme& scheme) {
  if (scheme.kind != SchemeKind::Ordinal) {
    throw Error("MAE requires an ordinal scheme");
  }
  if (gold.empty() || gold.size() != pred.size()) {
    throw Error("MAE needs equal, non-empty label lists");
  }
  double total = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    total += std::abs(scheme.value_of(gold[i]) - scheme.value_of(pred[i]));
  }
  return total / static_cast<double>(gold.size());
}

F1Result f1_scores(const ConfusionMatrix& cm,
                   const std::set<std::string>& ignore) {
  const int label_count = static_cast<int>(cm.labels.size());
  if (cm.counts.rows() != label_count || cm.counts.cols() != label_count) {
    throw Error("confusion matrix shape does not match its label list");
  }

  F1Result result;
  result.per_class = Eigen::VectorXd::Zero(label_count);
  double weighted_sum = 0;
  long long retained_gold = 0;
  int retained_classes = 0;
  double macro_sum = 0;

  for (int c = 0; c < label_count; ++c) {
    const double tp = cm.counts(c, c);
    const double gold_c = cm.counts.row(c).sum();
    const double pred_c = cm.counts.col(c).sum();
    const double precision = pred_c > 0 ? tp / pred_c : 0.0;
    const double recall = gold_c > 0 ? tp / gold_c : 0.0;
    const double f1 = (precision + recall) > 0
                          ? 2.0 * precision * recall / (precision + recall)
                          : 0.0;
    result.per_class[c] = f1;
    if (ignore.count(cm.labels[c])) continue;
    ++retained_classes;
    macro_sum += f1;
    weighted_sum += gold_c * f1;
    retained_gold += static_cast<long long>(gold_c);
  }
  if (retained_classes == 0) {
    throw Error("every class is ignored; nothing to aggregate");
  }
  result.macro = macro_sum / retained_classes;
  result.weighted =
      retained_gold > 0 ? weighted_sum / static_cast<double>(retained_gold)
                        : 0.0;
  return result;
}

namespace {

std::vector<int> gold_indices(const SourceQuestion& q) {
  std::vector<int> y;
  y.reserve(q.answers.size());
  for (const auto& a : q.answers) {
    if (!a.grade) {
      throw Error("answer '" + a.id + "' has no grade; scoring needs gold");
    }
    const int idx = q.question.scheme.index_of(*a.grade);
    if (idx < 0) {
      throw Error("answer '" + a.id + "' carries unknown grade '" + *a.grade +
                  "'");
    }
    y.push_back(idx);
  }
  return y;
}

void require_two_labels(const std::vector<int>& y, const std::string& id) {
  if (std::set<int>(y.begin(), y.end()).size() < 2) {
    throw Error("question '" + id + "' needs at least two distinct grades");
  }
}

QuestionMetrics score_question(const std::string& question_id,
                               const std::vector<int>& gold,
                               const std::vector<int>& pred,
                               const GradeScheme& scheme,
                               const std::set<std::string>& ignore) {
  QuestionMetrics qm;
  qm.question_id = question_id;
  qm.scored = static_cast<int>(gold.size());
  if (scheme.kind == SchemeKind::Ordinal) {
    qm.mae_value = mae(gold, pred, scheme);
  }
  const F1Result f1 = f1_scores(ConfusionMatrix::from_pairs(gold, pred, scheme),
                                ignore);
  qm.macro_f1 = f1.macro;
  qm.weighted_f1 = f1.weighted;
  return qm;
}

// Dense tfidf rows of every answer of q, preprocessed with q's own question
// words, under the given vocabulary.
std::vector<Eigen::VectorXd> text_rows(const SourceQuestion& q,
                                       const Vocabulary& vocab,
                                       const Resources& res) {
  const TokenList question_tokens = tokenize(q.question.text);
  std::vector<Eigen::VectorXd> rows;
  rows.reserve(q.answers.size());
  for (const auto& a : q.answers) {
    const TokenList doc =
        preprocess(tokenize(a.text), res.stopwords, question_tokens);
    rows.push_back(to_dense(tfidf(doc, vocab), vocab.size()));
  }
  return rows;
}

Vocabulary question_vocabulary(const SourceQuestion& q, const Resources& res) {
  const TokenList question_tokens = tokenize(q.question.text);
  std::vector<TokenList> docs;
  docs.reserve(q.answers.size());
  for (const auto& a : q.answers) {
    docs.push_back(preprocess(tokenize(a.text), res.stopwords, question_tokens));
  }
  return fit_vocabulary(docs);
}

std::vector<Eigen::VectorXd> profile_rows(const SourceQuestion& q,
                                          const Resources& res) {
  const auto norm =
      minmax_normalize(compute_profiles(q.question, q.answers, res));
  std::vector<Eigen::VectorXd> rows;
  rows.reserve(norm.size());
  for (const auto& p : norm) rows.push_back(p.vec());
  return rows;
}

Eigen::MatrixXd stack_rows(const std::vector<Eigen::VectorXd>& rows,
                           const std::vector<int>& keep) {
  Eigen::MatrixXd m(keep.size(), rows.empty() ? 0 : rows.front().size());
  for (std::size_t i = 0; i < keep.size(); ++i) {
    m.row(static_cast<Eigen::Index>(i)) = rows[keep[i]].transpose();
  }
  return m;
}

}  // namespace

MetricReport make_report(Protocol protocol,
                         std::vector<QuestionMetrics> per_question,
                         const std::set<std::string>& ignore) {
  MetricReport report;
  report.protocol = protocol;
  report.protocol_name = protocol == Protocol::Proposed ? "proposed"
                         : protocol == Protocol::SupBl  ? "sup-bl"
                                                        : "sup-sl";
  report.per_question = std::move(per_question);
  report.ignored_labels.assign(ignore.begin(), ignore.end());
  if (report.per_question.empty()) return report;

  double mae_sum = 0, macro_sum = 0, weighted_sum = 0;
  bool has_mae = true;
  for (const auto& qm : report.per_question) {
    if (qm.mae_value < 0) has_mae = false;
    mae_sum += qm.mae_value;
    macro_sum += qm.macro_f1;
    weighted_sum += qm.weighted_f1;
  }
  const double count = static_cast<double>(report.per_question.size());
  report.aggregate_mae = has_mae ? mae_sum / count : -1;
  report.aggregate_macro_f1 = macro_sum / count;
  report.aggregate_weighted_f1 = weighted_sum / count;
  return report;
}

MetricReport run_sup_bl(const SourceQuestion& source,
                        const SourceQuestion& target,
                        const TransferConfig& cfg, const Resources& res,
                        const std::set<std::string>& ignore) {
  if (!(source.question.scheme == target.question.scheme)) {
    throw Error("source and target questions use different grade schemes");
  }
  const GradeScheme& scheme = source.question.scheme;
  const std::vector<int> source_y = gold_indices(source);
  require_two_labels(source_y, source.question.id);
  const std::vector<int> target_y = gold_indices(target);

  // Text classifier on the source vocabulary, applied unchanged.
  const Vocabulary vocab = question_vocabulary(source, res);
  std::vector<int> all(source.answers.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
  const ProbModel c1 = train(stack_rows(text_rows(source, vocab, res), all),
                             source_y, scheme.label_names(), cfg.classifier);
  // Profile classifier on raw normalized profiles, no shared subspace.
  const ProbModel c2 = train(stack_rows(profile_rows(source, res), all),
                             source_y, scheme.label_names(), cfg.classifier);

  const auto target_text = text_rows(target, vocab, res);
  const auto target_profiles = profile_rows(target, res);
  std::vector<int> pred;
  pred.reserve(target.answers.size());
  for (std::size_t i = 0; i < target.answers.size(); ++i) {
    const Prediction p = combine(predict(c1, target_text[i]),
                                 predict(c2, target_profiles[i]), 0.5, 0.5);
    pred.push_back(p.label);
  }
  return make_report(
      Protocol::SupBl,
      {score_question(target.question.id, target_y, pred, scheme, ignore)},
      ignore);
}

MetricReport run_sup_sl(const SourceQuestion& question,
                        const TransferConfig& cfg, const Resources& res,
                        SupSlMode mode, const std::set<std::string>& ignore) {
  const GradeScheme& scheme = question.question.scheme;
  const std::vector<int> y = gold_indices(question);
  require_two_labels(y, question.question.id);

  // Features are computed once; the protocol only changes the split.
  const Vocabulary vocab = question_vocabulary(question, res);
  const auto text = text_rows(question, vocab, res);
  const auto profiles = profile_rows(question, res);
  const int n = static_cast<int>(question.answers.size());

  std::vector<int> pred(n, -1);
  if (mode == SupSlMode::Resubstitution) {
    std::vector<int> all(n);
    for (int i = 0; i < n; ++i) all[i] = i;
    const ProbModel c1 = train(stack_rows(text, all), y, scheme.label_names(),
                               cfg.classifier);
    const ProbModel c2 = train(stack_rows(profiles, all), y,
                               scheme.label_names(), cfg.classifier);
    for (int i = 0; i < n; ++i) {
      pred[i] = combine(predict(c1, text[i]), predict(c2, profiles[i]), 0.5,
                        0.5)
                    .label;
    }
  } else {
    for (int held_out = 0; held_out < n; ++held_out) {
      std::vector<int> keep;
      std::vector<int> fold_y;
      for (int i = 0; i < n; ++i) {
        if (i == held_out) continue;
        keep.push_back(i);
        fold_y.push_back(y[i]);
      }
      const ProbModel c1 = train(stack_rows(text, keep), fold_y,
                                 scheme.label_names(), cfg.classifier);
      const ProbModel c2 = train(stack_rows(profiles, keep), fold_y,
                                 scheme.label_names(), cfg.classifier);
      pred[held_out] = combine(predict(c1, text[held_out]),
                               predict(c2, profiles[held_out]), 0.5, 0.5)
                           .label;
    }
  }

  MetricReport report = make_report(
      Protocol::SupSl,
      {score_question(question.question.id, y, pred, scheme, ignore)}, ignore);
  report.supsl_mode = mode;
  return report;
}

SweepResult sweep(const Dataset& ds, const TransferConfig& cfg,
                  const Resources& res, const std::set<std::string>& ignore,
                  int jobs) {
  if (ds.questions.size() < 2) {
    throw Error("sweep needs at least two questions");
  }
  const GradeScheme& scheme = ds.questions.front().scheme;
  for (const auto& q : ds.questions) {
    if (!(q.scheme == scheme)) {
      throw Error("sweep needs a single shared scheme; question '" + q.id +
                  "' differs");
    }
  }

  std::vector<SourceQuestion> qs;
  qs.reserve(ds.questions.size());
  for (const auto& q : ds.questions) {
    qs.push_back({q, ds.answers_for(q.id)});
  }

  struct Pair {
    int source, target;
  };
  std::vector<Pair> pairs;
  for (std::size_t s = 0; s < qs.size(); ++s) {
    for (std::size_t t = 0; t < qs.size(); ++t) {
      if (s != t) pairs.push_back({static_cast<int>(s), static_cast<int>(t)});
    }
  }

  std::vector<SweepCell> cells(pairs.size());
  const int worker_count =
      std::max(1, std::min<int>(jobs, static_cast<int>(pairs.size())));

  auto run_one = [&](std::size_t p) {
    const SourceQuestion& src = qs[pairs[p].source];
    const SourceQuestion& tgt = qs[pairs[p].target];
    TransferConfig pair_cfg = cfg;
    pair_cfg.pairing_seed = mix_seed(
        cfg.pairing_seed, "pair:" + src.question.id + "->" + tgt.question.id);
    const TransferResult result =
        run_transfer(src, strip_grades(tgt.question, tgt.answers), pair_cfg,
                     res);
    const std::vector<int> gold = gold_indices(tgt);

    std::vector<int> pred;
    std::vector<int> phase1;
    pred.reserve(gold.size());
    phase1.reserve(gold.size());
    for (std::size_t i = 0; i < result.labels.size(); ++i) {
      pred.push_back(result.labels[i].label);
      phase1.push_back(result.initial_c2[i].label);
    }

    SweepCell cell;
    cell.source_id = src.question.id;
    cell.target_id = tgt.question.id;
    if (scheme.kind == SchemeKind::Ordinal) {
      cell.mae_value = mae(gold, pred, scheme);
      cell.phase1_mae = mae(gold, phase1, scheme);
    }
    const F1Result f1 =
        f1_scores(ConfusionMatrix::from_pairs(gold, pred, scheme), ignore);
    cell.macro_f1 = f1.macro;
    cell.weighted_f1 = f1.weighted;
    cell.iterations = result.trace.back().iteration;
    cell.final_w1 = result.final_w1;
    cell.final_w2 = result.final_w2;
    cells[p] = std::move(cell);
  };

  if (worker_count == 1) {
    for (std::size_t p = 0; p < pairs.size(); ++p) run_one(p);
  } else {
    std::vector<std::thread> workers;
    std::vector<std::exception_ptr> failures(worker_count);
    for (int w = 0; w < worker_count; ++w) {
      workers.emplace_back([&, w]() {
        try {
          for (std::size_t p = w; p < pairs.size(); p += worker_count) {
            run_one(p);
          }
        } catch (...) {
          failures[w] = std::current_exception();
        }
      });
    }
    for (auto& t : workers) t.join();
    for (const auto& failure : failures) {
      if (failure) std::rethrow_exception(failure);
    }
  }

  SweepResult result;
  result.cells = std::move(cells);
  for (const auto& q : qs) {
    const SweepCell* best = nullptr;
    for (const auto& cell : result.cells) {
      if (cell.target_id != q.question.id) continue;
      if (best == nullptr) {
        best = &cell;
        continue;
      }
      const bool better = scheme.kind == SchemeKind::Ordinal
                              ? cell.mae_value < best->mae_value
                              : cell.weighted_f1 > best->weighted_f1;
      if (better) best = &cell;
    }
    if (best != nullptr) {
      result.best.push_back({best->target_id, best->source_id,
                             best->mae_value, best->phase1_mae, best->macro_f1,
                             best->weighted_f1});
    }
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

std::string render_report_csv(
    const MetricReport& report,
    const std::map<std::string, std::string>& header) {
  std::ostringstream out;
  for (const auto& [key, value] : header) {
    out << "# " << key << "=" << value << "\n";
  }
  out << "protocol,question_id,scored,mae,macro_f1,weighted_f1\n";
  for (const auto& qm : report.per_question) {
    out << report.protocol_name << ',' << qm.question_id << ',' << qm.scored
        << ',' << (qm.mae_value >= 0 ? format_double(qm.mae_value) : "") << ','
        << format_double(qm.macro_f1) << ',' << format_double(qm.weighted_f1)
        << '\n';
  }
  return out.str();
}

std::string render_summary_json(
    const std::vector<MetricReport>& rows,
    const std::map<std::string, std::string>& header) {
  nlohmann::json j;
  if (!header.empty()) {
    nlohmann::json run;
    for (const auto& [key, value] : header) run[key] = value;
    j["run"] = std::move(run);
  }
  nlohmann::json jrows = nlohmann::json::object();
  for (const auto& report : rows) {
    nlohmann::json row;
    if (report.aggregate_mae >= 0) row["mae"] = report.aggregate_mae;
    row["macro_f1"] = report.aggregate_macro_f1;
    row["weighted_f1"] = report.aggregate_weighted_f1;
    row["questions"] = report.per_question.size();
    if (report.protocol == Protocol::SupSl) {
      row["mode"] = report.supsl_mode == SupSlMode::Resubstitution
                        ? "resubstitution"
                        : "leave-one-out";
    }
    if (!report.ignored_labels.empty()) {
      row["ignored_labels"] = report.ignored_labels;
    }
    jrows[report.protocol_name] = std::move(row);
  }
  j["rows"] = std::move(jrows);
  return j.dump(2) + "\n";
}

}  // namespace asag
