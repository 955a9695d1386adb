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

#include "asag/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "asag/error.hpp"
#include "asag/serial.hpp"

namespace asag {

using nlohmann::json;

int GradeScheme::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i].name == name) return static_cast<int>(i);
  }
  return -1;
}

double GradeScheme::value_of(int index) const {
  if (index < 0 || index >= size()) {
    throw Error("label index out of range: " + std::to_string(index));
  }
  if (!labels[index].value) {
    throw Error("label '" + labels[index].name + "' has no numeric value");
  }
  return *labels[index].value;
}

std::vector<std::string> GradeScheme::label_names() const {
  std::vector<std::string> names;
  names.reserve(labels.size());
  for (const auto& l : labels) names.push_back(l.name);
  return names;
}

void GradeScheme::validate() const {
  if (labels.empty()) {
    throw Error("grade scheme has no labels");
  }
  std::set<std::string> seen;
  for (const auto& l : labels) {
    if (l.name.empty()) throw Error("grade scheme has an empty label name");
    if (!seen.insert(l.name).second) {
      throw Error("duplicate label name '" + l.name + "'");
    }
  }
  if (kind == SchemeKind::Ordinal) {
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (!labels[i].value) {
        throw Error("ordinal scheme label '" + labels[i].name +
                    "' lacks a numeric value");
      }
      if (i > 0 && !(*labels[i].value > *labels[i - 1].value)) {
        throw Error("ordinal label values must strictly increase (at '" +
                    labels[i].name + "')");
      }
    }
  }
}

const Question* Dataset::find_question(const std::string& id) const {
  for (const auto& q : questions) {
    if (q.id == id) return &q;
  }
  return nullptr;
}

std::vector<StudentAnswer> Dataset::answers_for(
    const std::string& question_id) const {
  std::vector<StudentAnswer> out;
  for (const auto& a : answers) {
    if (a.question_id == question_id) out.push_back(a);
  }
  return out;
}

void Dataset::validate() const {
  std::set<std::string> question_ids;
  for (const auto& q : questions) {
    if (q.id.empty()) throw Error("question with empty id");
    if (!question_ids.insert(q.id).second) {
      throw Error("duplicate question id '" + q.id + "'");
    }
    if (q.text.empty()) throw Error("question '" + q.id + "' has empty text");
    if (q.model_answer.empty()) {
      throw Error("question '" + q.id + "' has an empty model answer");
    }
    q.scheme.validate();
  }
  std::set<std::string> answer_ids;
  for (std::size_t i = 0; i < answers.size(); ++i) {
    const auto& a = answers[i];
    const std::string where = "answers[" + std::to_string(i) + "]";
    if (a.id.empty()) throw Error(where + ": empty answer id");
    if (!answer_ids.insert(a.id).second) {
      throw Error(where + ": duplicate answer id '" + a.id + "'");
    }
    const Question* q = find_question(a.question_id);
    if (q == nullptr) {
      throw Error(where + ": unknown question_id \"" + a.question_id + "\"");
    }
    if (a.grade && q->scheme.index_of(*a.grade) < 0) {
      throw Error(where + ": unknown grade label '" + *a.grade +
                  "' for question '" + a.question_id + "'");
    }
  }
}

namespace {

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                         const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (!allowed.count(key)) {
      throw Error(where + ": unknown key '" + key + "'");
    }
  }
}

const json& require(const json& obj, const char* key,
                    const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw Error(where + ": missing key '" + std::string(key) + "'");
  }
  return *it;
}

std::string require_string(const json& obj, const char* key,
                           const std::string& where) {
  const json& v = require(obj, key, where);
  if (!v.is_string()) {
    throw Error(where + ": key '" + std::string(key) + "' must be a string");
  }
  return v.get<std::string>();
}

}  // namespace

Dataset parse_canonical(const std::string& json_text,
                        const std::string& origin) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(origin + ": JSON parse failure: " + e.what());
  }
  if (!root.is_object()) throw Error(origin + ": top level must be an object");
  reject_unknown_keys(root, {"scheme", "questions", "answers"}, origin);

  const json& jscheme = require(root, "scheme", origin);
  reject_unknown_keys(jscheme, {"kind", "labels"}, origin + ".scheme");
  GradeScheme scheme;
  const std::string kind = require_string(jscheme, "kind", origin + ".scheme");
  if (kind == "ordinal") {
    scheme.kind = SchemeKind::Ordinal;
  } else if (kind == "nominal") {
    scheme.kind = SchemeKind::Nominal;
  } else {
    throw Error(origin + ".scheme: kind must be 'ordinal' or 'nominal'");
  }
  const json& jlabels = require(jscheme, "labels", origin + ".scheme");
  if (!jlabels.is_array()) {
    throw Error(origin + ".scheme.labels must be an array");
  }
  for (std::size_t i = 0; i < jlabels.size(); ++i) {
    const std::string where = origin + ".scheme.labels[" + std::to_string(i) + "]";
    const json& jl = jlabels[i];
    if (!jl.is_object()) throw Error(where + " must be an object");
    reject_unknown_keys(jl, {"name", "value"}, where);
    GradeLabel label;
    label.name = require_string(jl, "name", where);
    if (jl.contains("value")) {
      if (!jl["value"].is_number()) {
        throw Error(where + ": value must be a number");
      }
      label.value = jl["value"].get<double>();
    }
    scheme.labels.push_back(std::move(label));
  }

  Dataset ds;
  const json& jquestions = require(root, "questions", origin);
  if (!jquestions.is_array()) throw Error(origin + ".questions must be an array");
  for (std::size_t i = 0; i < jquestions.size(); ++i) {
    const std::string where = origin + ".questions[" + std::to_string(i) + "]";
    const json& jq = jquestions[i];
    if (!jq.is_object()) throw Error(where + " must be an object");
    reject_unknown_keys(jq, {"id", "text", "model_answer"}, where);
    Question q;
    q.id = require_string(jq, "id", where);
    q.text = require_string(jq, "text", where);
    q.model_answer = require_string(jq, "model_answer", where);
    q.scheme = scheme;
    ds.questions.push_back(std::move(q));
  }

  const json& janswers = require(root, "answers", origin);
  if (!janswers.is_array()) throw Error(origin + ".answers must be an array");
  for (std::size_t i = 0; i < janswers.size(); ++i) {
    const std::string where = origin + ".answers[" + std::to_string(i) + "]";
    const json& ja = janswers[i];
    if (!ja.is_object()) throw Error(where + " must be an object");
    reject_unknown_keys(ja, {"id", "question_id", "text", "grade"}, where);
    StudentAnswer a;
    a.id = require_string(ja, "id", where);
    a.question_id = require_string(ja, "question_id", where);
    a.text = require_string(ja, "text", where);
    if (ja.contains("grade")) {
      if (!ja["grade"].is_string()) {
        throw Error(where + ": grade must be a string label name");
      }
      a.grade = ja["grade"].get<std::string>();
    }
    ds.answers.push_back(std::move(a));
  }

  ds.validate();
  return ds;
}

Dataset load_canonical(const std::string& path) {
  return parse_canonical(read_text_file(path), path);
}

std::string render_canonical(const Dataset& ds) {
  if (ds.questions.empty()) {
    throw Error("cannot render a dataset without questions");
  }
  const GradeScheme& scheme = ds.questions.front().scheme;
  for (const auto& q : ds.questions) {
    if (!(q.scheme == scheme)) {
      throw Error("canonical files hold one scheme; question '" + q.id +
                  "' differs");
    }
  }

  json root;
  json jscheme;
  jscheme["kind"] = scheme.kind == SchemeKind::Ordinal ? "ordinal" : "nominal";
  json jlabels = json::array();
  for (const auto& l : scheme.labels) {
    json jl;
    jl["name"] = l.name;
    if (l.value) jl["value"] = *l.value;
    jlabels.push_back(std::move(jl));
  }
  jscheme["labels"] = std::move(jlabels);
  root["scheme"] = std::move(jscheme);

  json jquestions = json::array();
  for (const auto& q : ds.questions) {
    json jq;
    jq["id"] = q.id;
    jq["text"] = q.text;
    jq["model_answer"] = q.model_answer;
    jquestions.push_back(std::move(jq));
  }
  root["questions"] = std::move(jquestions);

  json janswers = json::array();
  for (const auto& a : ds.answers) {
    json ja;
    ja["id"] = a.id;
    ja["question_id"] = a.question_id;
    ja["text"] = a.text;
    if (a.grade) ja["grade"] = *a.grade;
    janswers.push_back(std::move(ja));
  }
  root["answers"] = std::move(janswers);

  return root.dump(2) + "\n";
}

void write_canonical(const Dataset& ds, const std::string& path) {
  write_text_file(path, render_canonical(ds));
}

double snap_grade(double raw) {
  // Nearest half point, ties rounding up.
  return std::floor(raw * 2.0 + 0.5) / 2.0;
}

namespace {

std::string half_label(double value) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%.1f", value);
  return buf;
}

std::vector<std::pair<std::string, std::string>> read_id_text_file(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("missing file: " + path);
  std::vector<std::pair<std::string, std::string>> rows;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw Error(path + ":" + std::to_string(line_no) +
                  ": expected '<id> TAB <text>'");
    }
    rows.emplace_back(line.substr(0, tab), line.substr(tab + 1));
  }
  return rows;
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("missing file: " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

}  // namespace

GradeScheme mohler_scheme() {
  GradeScheme scheme;
  scheme.kind = SchemeKind::Ordinal;
  for (int i = 0; i <= 10; ++i) {
    const double v = i * 0.5;
    scheme.labels.push_back({half_label(v), v});
  }
  return scheme;
}

Dataset load_mohler(const std::string& dir, const MohlerOptions& opts) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) {
    throw IoError("not a directory: " + dir);
  }
  const auto questions = read_id_text_file(dir + "/questions");
  const auto model_answers = read_id_text_file(dir + "/model_answers");
  std::map<std::string, std::string> model_by_id(model_answers.begin(),
                                                 model_answers.end());

  const std::set<std::string> excluded(opts.exclude_questions.begin(),
                                       opts.exclude_questions.end());
  const GradeScheme scheme = mohler_scheme();

  Dataset ds;
  for (const auto& [qid, text] : questions) {
    if (excluded.count(qid)) continue;
    auto model = model_by_id.find(qid);
    if (model == model_by_id.end()) {
      throw Error("question '" + qid + "' has no model answer");
    }
    Question q{qid, text, model->second, scheme};

    const auto texts = read_lines(dir + "/answers/" + qid);
    const auto scores = read_lines(dir + "/scores/" + qid);
    if (texts.size() != scores.size()) {
      throw Error("question '" + qid + "': " + std::to_string(texts.size()) +
                  " answers but " + std::to_string(scores.size()) + " scores");
    }
    for (std::size_t i = 0; i < texts.size(); ++i) {
      std::istringstream ss(scores[i]);
      double s1 = 0, s2 = 0;
      if (!(ss >> s1 >> s2)) {
        throw Error("question '" + qid + "', scores line " +
                    std::to_string(i + 1) + ": expected two scores");
      }
      for (const double s : {s1, s2}) {
        if (!(s >= 0.0 && s <= 5.0)) {
          throw Error("question '" + qid + "', scores line " +
                      std::to_string(i + 1) + ": score outside [0,5]");
        }
      }
      StudentAnswer a;
      a.id = qid + "." + std::to_string(i + 1);
      a.question_id = qid;
      a.text = texts[i];
      a.grade = half_label(snap_grade((s1 + s2) / 2.0));
      ds.answers.push_back(std::move(a));
    }
    ds.questions.push_back(std::move(q));
  }
  ds.validate();
  return ds;
}

Dataset collapse_scheme(const Dataset& ds, CollapseMode mode) {
  const GradeScheme expected = mohler_scheme();
  for (const auto& q : ds.questions) {
    if (q.scheme.kind != SchemeKind::Ordinal) {
      throw Error("collapse requires an ordinal scheme (question '" + q.id +
                  "')");
    }
    if (!(q.scheme == expected)) {
      throw Error("collapse requires the 11-label 0-5 scheme (question '" +
                  q.id + "')");
    }
  }
  if (mode == CollapseMode::Eleven) return ds;

  GradeScheme target;
  target.kind = SchemeKind::Ordinal;
  if (mode == CollapseMode::Six) {
    for (int i = 0; i <= 5; ++i) {
      target.labels.push_back({std::to_string(i), static_cast<double>(i)});
    }
  } else {
    target.labels.push_back({"incorrect", 0.0});
    target.labels.push_back({"correct", 1.0});
  }

  Dataset out = ds;
  for (auto& q : out.questions) q.scheme = target;
  for (auto& a : out.answers) {
    if (!a.grade) continue;
    const double v = expected.value_of(expected.index_of(*a.grade));
    if (mode == CollapseMode::Six) {
      const int bucket = static_cast<int>(std::floor(v + 0.5));
      a.grade = std::to_string(bucket);
    } else {
      a.grade = v > 3.0 ? "correct" : "incorrect";
    }
  }
  out.validate();
  return out;
}

}  // namespace asag
