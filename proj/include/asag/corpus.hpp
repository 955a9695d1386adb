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

#ifndef ASAG_CORPUS_HPP_
#define ASAG_CORPUS_HPP_

#include <optional>
#include <string>
#include <vector>

namespace asag {

enum class SchemeKind { Ordinal, Nominal };

struct GradeLabel {
  std::string name;
  std::optional<double> value;

  bool operator==(const GradeLabel&) const = default;
};

/// Ordered label set of a question. Ordinal schemes carry strictly
/// increasing numeric values, one per label.
struct GradeScheme {
  SchemeKind kind = SchemeKind::Ordinal;
  std::vector<GradeLabel> labels;

  int size() const { return static_cast<int>(labels.size()); }
  int index_of(const std::string& name) const;  // -1 when absent
  double value_of(int index) const;             // ordinal numeric value
  std::vector<std::string> label_names() const;
  void validate() const;

  bool operator==(const GradeScheme&) const = default;
};

struct Question {
  std::string id;
  std::string text;
  std::string model_answer;
  GradeScheme scheme;

  bool operator==(const Question&) const = default;
};

struct StudentAnswer {
  std::string id;
  std::string question_id;
  std::string text;
  std::optional<std::string> grade;  // label name, member of the scheme

  bool operator==(const StudentAnswer&) const = default;
};

struct Dataset {
  std::vector<Question> questions;
  std::vector<StudentAnswer> answers;

  const Question* find_question(const std::string& id) const;
  std::vector<StudentAnswer> answers_for(const std::string& question_id) const;
  void validate() const;

  bool operator==(const Dataset&) const = default;
};

// Canonical UTF-8 JSON dataset file. Unknown keys are rejected.
Dataset load_canonical(const std::string& path);
Dataset parse_canonical(const std::string& json_text, const std::string& origin);
std::string render_canonical(const Dataset& ds);
void write_canonical(const Dataset& ds, const std::string& path);

// Adapter for the published computer-science short-answer directory layout:
//   questions       one line per question:  <id> TAB <question text>
//   model_answers   one line per question:  <id> TAB <model answer>
//   answers/<id>    one student answer per line
//   scores/<id>     matching line count:    <score1> TAB <score2>
// Each grade is the two-annotator average snapped to the nearest half point,
// ties rounding up, on the 11-label 0-5 ordinal scheme.
struct MohlerOptions {
  std::vector<std::string> exclude_questions;
};
Dataset load_mohler(const std::string& dir, const MohlerOptions& opts = {});

/// Nearest multiple of 0.5 in [0,5], ties rounding up.
double snap_grade(double raw);

/// The 11-label ordinal scheme "0.0", "0.5", ..., "5.0".
GradeScheme mohler_scheme();

enum class CollapseMode { Eleven, Six, Two };

/// Grading-scheme collapse for the 11-label 0-5 scheme: identity, round-half-
/// up integers 0..5, or {incorrect, correct} split strictly above 3.
Dataset collapse_scheme(const Dataset& ds, CollapseMode mode);

}  // namespace asag

#endif  // ASAG_CORPUS_HPP_
