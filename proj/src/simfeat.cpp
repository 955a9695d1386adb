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

#include "asag/simfeat.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <iostream>
#include <limits>
#include <set>
#include <sstream>

#include "asag/error.hpp"

namespace asag {

const std::vector<int>* TaxonomyResource::find_word(
    const std::string& word) const {
  auto it = word_concepts.find(word);
  if (it != word_concepts.end()) return &it->second;
  it = word_concepts.find(porter_stem(word));
  if (it != word_concepts.end()) return &it->second;
  return nullptr;
}

void TaxonomyResource::validate() const {
  const int n = concept_count();
  if (static_cast<int>(parents.size()) != n ||
      static_cast<int>(children.size()) != n) {
    throw Error("taxonomy adjacency size mismatch");
  }
  if (!ic.empty() && static_cast<int>(ic.size()) != n) {
    throw Error("taxonomy IC vector size mismatch");
  }
  // Cycle check over child -> parent edges (colors: 0 new, 1 open, 2 done).
  std::vector<int> color(n, 0);
  std::vector<int> stack;
  for (int start = 0; start < n; ++start) {
    if (color[start] != 0) continue;
    stack.push_back(start);
    while (!stack.empty()) {
      const int c = stack.back();
      if (color[c] == 0) {
        color[c] = 1;
        for (const int p : parents[c]) {
          if (color[p] == 1) {
            throw Error("taxonomy is-a edges contain a cycle at concept '" +
                        concepts[p] + "'");
          }
          if (color[p] == 0) stack.push_back(p);
        }
      } else {
        color[c] = 2;
        stack.pop_back();
      }
    }
  }
  if (has_ic()) {
    for (int c = 0; c < n; ++c) {
      if (!(ic[c] >= 0.0)) {
        throw Error("negative IC at concept '" + concepts[c] + "'");
      }
      for (const int p : parents[c]) {
        if (ic[c] < ic[p]) {
          throw Error("IC must be non-increasing toward ancestors (edge '" +
                      concepts[c] + "' -> '" + concepts[p] + "')");
        }
      }
    }
  }
  for (const auto& [word, cs] : word_concepts) {
    if (cs.empty()) {
      throw Error("word '" + word + "' maps to no concepts");
    }
  }
}

TaxonomyResource load_taxonomy(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open taxonomy file: " + path);

  TaxonomyResource tax;
  std::vector<std::pair<double, bool>> raw_ic;  // value, present
  enum Section { None, Concepts, Edges, Words } section = None;
  std::string line;
  int line_no = 0;
  std::vector<std::pair<std::string, std::string>> edge_names;

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line == "CONCEPTS") { section = Concepts; continue; }
    if (line == "EDGES") { section = Edges; continue; }
    if (line == "WORDS") { section = Words; continue; }
    const std::string where = path + ":" + std::to_string(line_no);
    const auto tab = line.find('\t');
    switch (section) {
      case None:
        throw Error(where + ": content before a section header");
      case Concepts: {
        std::string id = tab == std::string::npos ? line : line.substr(0, tab);
        if (tax.concept_index.count(id)) {
          throw Error(where + ": duplicate concept '" + id + "'");
        }
        tax.concept_index.emplace(id, tax.concepts.size());
        tax.concepts.push_back(id);
        if (tab != std::string::npos) {
          raw_ic.emplace_back(std::stod(line.substr(tab + 1)), true);
        } else {
          raw_ic.emplace_back(0.0, false);
        }
        break;
      }
      case Edges: {
        if (tab == std::string::npos) {
          throw Error(where + ": expected '<child> TAB <parent>'");
        }
        edge_names.emplace_back(line.substr(0, tab), line.substr(tab + 1));
        break;
      }
      case Words: {
        if (tab == std::string::npos) {
          throw Error(where + ": expected '<word> TAB <concept,...>'");
        }
        const std::string word = line.substr(0, tab);
        std::vector<int> ids;
        std::istringstream rest(line.substr(tab + 1));
        std::string item;
        while (std::getline(rest, item, ',')) {
          auto it = tax.concept_index.find(item);
          if (it == tax.concept_index.end()) {
            throw Error(where + ": unknown concept '" + item + "'");
          }
          ids.push_back(it->second);
        }
        tax.word_concepts[word] = std::move(ids);
        break;
      }
    }
  }

  const int n = tax.concept_count();
  tax.parents.assign(n, {});
  tax.children.assign(n, {});
  for (const auto& [child, parent] : edge_names) {
    auto ci = tax.concept_index.find(child);
    auto pi = tax.concept_index.find(parent);
    if (ci == tax.concept_index.end() || pi == tax.concept_index.end()) {
      throw Error(path + ": edge references unknown concept '" +
                  (ci == tax.concept_index.end() ? child : parent) + "'");
    }
    tax.parents[ci->second].push_back(pi->second);
    tax.children[pi->second].push_back(ci->second);
  }

  const bool any_ic =
      std::any_of(raw_ic.begin(), raw_ic.end(), [](auto p) { return p.second; });
  if (any_ic) {
    const bool all_ic = std::all_of(raw_ic.begin(), raw_ic.end(),
                                    [](auto p) { return p.second; });
    if (!all_ic) {
      throw Error(path + ": some concepts carry IC and some do not");
    }
    tax.ic.reserve(n);
    for (const auto& [v, present] : raw_ic) tax.ic.push_back(v);
  }

  tax.validate();
  return tax;
}

void write_taxonomy(const TaxonomyResource& tax, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write taxonomy file: " + path);
  out << "CONCEPTS\n";
  for (int c = 0; c < tax.concept_count(); ++c) {
    out << tax.concepts[c];
    if (tax.has_ic()) out << '\t' << tax.ic[c];
    out << '\n';
  }
  out << "EDGES\n";
  for (int c = 0; c < tax.concept_count(); ++c) {
    for (const int p : tax.parents[c]) {
      out << tax.concepts[c] << '\t' << tax.concepts[p] << '\n';
    }
  }
  out << "WORDS\n";
  for (const auto& [word, cs] : tax.word_concepts) {
    out << word << '\t';
    for (std::size_t i = 0; i < cs.size(); ++i) {
      if (i) out << ',';
      out << tax.concepts[cs[i]];
    }
    out << '\n';
  }
}

const Eigen::VectorXd* EmbeddingTable::find(const std::string& word) const {
  auto it = vectors.find(word);
  if (it != vectors.end()) return &it->second;
  it = vectors.find(porter_stem(word));
  if (it != vectors.end()) return &it->second;
  return nullptr;
}

EmbeddingTable load_embeddings(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open embedding file: " + path);
  EmbeddingTable table;
  std::string line;
  int line_no = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::vector<std::string> fields;
    std::string f;
    while (ss >> f) fields.push_back(f);
    if (first) {
      first = false;
      // "count dim" header: exactly two integer fields.
      if (fields.size() == 2 &&
          fields[0].find_first_not_of("0123456789") == std::string::npos &&
          fields[1].find_first_not_of("0123456789") == std::string::npos) {
        continue;
      }
    }
    const std::string where = path + ":" + std::to_string(line_no);
    if (fields.size() < 2) {
      throw Error(where + ": expected '<word> <v1> ... <vd>'");
    }
    Eigen::VectorXd v(fields.size() - 1);
    for (std::size_t i = 1; i < fields.size(); ++i) {
      try {
        v[static_cast<Eigen::Index>(i - 1)] = std::stod(fields[i]);
      } catch (const std::exception&) {
        throw Error(where + ": bad float '" + fields[i] + "'");
      }
      if (!std::isfinite(v[static_cast<Eigen::Index>(i - 1)])) {
        throw Error(where + ": non-finite component");
      }
    }
    if (table.dim == 0) {
      table.dim = static_cast<int>(v.size());
    } else if (table.dim != static_cast<int>(v.size())) {
      throw Error(where + ": dimension " + std::to_string(v.size()) +
                  " differs from " + std::to_string(table.dim));
    }
    table.vectors[fields[0]] = std::move(v);
  }
  return table;
}

void write_embeddings(const EmbeddingTable& table, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write embedding file: " + path);
  out << table.vectors.size() << ' ' << table.dim << '\n';
  out.precision(9);
  for (const auto& [word, v] : table.vectors) {
    out << word;
    for (Eigen::Index i = 0; i < v.size(); ++i) out << ' ' << v[i];
    out << '\n';
  }
}

double lex_overlap(const TokenList& student, const TokenList& model) {
  const std::set<std::string> s(student.begin(), student.end());
  const std::set<std::string> m(model.begin(), model.end());
  if (s.empty() && m.empty()) return 0.0;
  std::size_t common = 0;
  for (const auto& t : s) common += m.count(t);
  return 2.0 * static_cast<double>(common) /
         static_cast<double>(s.size() + m.size());
}

namespace {

// Shortest undirected is-a distance from any concept in `from` to any in
// `to`; -1 when disconnected.
int shortest_path(const TaxonomyResource& tax, const std::vector<int>& from,
                  const std::vector<int>& to) {
  const std::set<int> goals(to.begin(), to.end());
  std::vector<int> dist(tax.concept_count(), -1);
  std::deque<int> queue;
  for (const int c : from) {
    if (dist[c] == 0) continue;
    dist[c] = 0;
    queue.push_back(c);
  }
  while (!queue.empty()) {
    const int c = queue.front();
    queue.pop_front();
    if (goals.count(c)) return dist[c];
    for (const auto& adjacency : {tax.parents[c], tax.children[c]}) {
      for (const int next : adjacency) {
        if (dist[next] < 0) {
          dist[next] = dist[c] + 1;
          queue.push_back(next);
        }
      }
    }
  }
  return -1;
}

// All ancestors of c, including c itself.
std::vector<int> ancestors_of(const TaxonomyResource& tax, int c) {
  std::vector<bool> seen(tax.concept_count(), false);
  std::vector<int> stack{c};
  std::vector<int> out;
  seen[c] = true;
  while (!stack.empty()) {
    const int cur = stack.back();
    stack.pop_back();
    out.push_back(cur);
    for (const int p : tax.parents[cur]) {
      if (!seen[p]) {
        seen[p] = true;
        stack.push_back(p);
      }
    }
  }
  return out;
}

}  // namespace

double word_sim_sp(const std::string& w1, const std::string& w2,
                   const TaxonomyResource& tax) {
  const auto* c1 = tax.find_word(w1);
  const auto* c2 = tax.find_word(w2);
  if (c1 == nullptr || c2 == nullptr) return 0.0;
  const int len = shortest_path(tax, *c1, *c2);
  if (len < 0) return 0.0;
  return 1.0 / (1.0 + len);
}

double word_sim_jc(const std::string& w1, const std::string& w2,
                   const TaxonomyResource& tax) {
  if (!tax.has_ic()) {
    throw Error(
        "taxonomy has no information content values; supply IC in the "
        "CONCEPTS section or disable the jc channel");
  }
  const auto* c1s = tax.find_word(w1);
  const auto* c2s = tax.find_word(w2);
  if (c1s == nullptr || c2s == nullptr) return 0.0;

  constexpr double kEps = 1e-6;
  double best = 0.0;
  for (const int c1 : *c1s) {
    const auto anc1 = ancestors_of(tax, c1);
    const std::set<int> set1(anc1.begin(), anc1.end());
    for (const int c2 : *c2s) {
      double lcs_ic = 0.0;  // no common subsumer contributes nothing
      for (const int a : ancestors_of(tax, c2)) {
        if (set1.count(a)) lcs_ic = std::max(lcs_ic, tax.ic[a]);
      }
      const double dist = tax.ic[c1] + tax.ic[c2] - 2.0 * lcs_ic;
      best = std::max(best, 1.0 / (dist + kEps));
    }
  }
  return std::clamp(best, 0.0, 1.0);
}

double word_sim_embed(const std::string& w1, const std::string& w2,
                      const EmbeddingTable& emb) {
  const auto* e1 = emb.find(w1);
  const auto* e2 = emb.find(w2);
  if (e1 == nullptr || e2 == nullptr) return 0.0;
  return 1.0 / (1.0 + (*e1 - *e2).norm());
}

double answer_similarity(const TokenList& student, const TokenList& model,
                         const WordSim& omega) {
  if (student.empty() || model.empty()) return 0.0;
  const std::size_t ns = student.size();
  const std::size_t nm = model.size();
  Eigen::MatrixXd sim(ns, nm);
  for (std::size_t i = 0; i < ns; ++i) {
    for (std::size_t j = 0; j < nm; ++j) {
      sim(i, j) = omega(student[i], model[j]);
    }
  }
  const double forward = sim.rowwise().maxCoeff().mean();
  const double backward = sim.colwise().maxCoeff().mean();
  return 0.5 * (forward + backward);
}

std::vector<SimilarityProfile> compute_profiles(
    const Question& q, const std::vector<StudentAnswer>& answers,
    const Resources& res, std::ostream* warnings) {
  std::ostream& warn = warnings ? *warnings : std::cerr;

  const bool lo_on = res.channels.lo;
  const bool sp_on = res.channels.sp && res.taxonomy.has_value();
  const bool jc_on =
      res.channels.jc && res.taxonomy.has_value() && res.taxonomy->has_ic();
  const bool lsa_on = res.channels.lsa && res.lsa.has_value();
  const bool w2v_on = res.channels.w2v && res.w2v.has_value();

  auto report = [&](const char* channel, const char* why) {
    warn << "warning: similarity channel " << channel << " disabled (" << why
         << "); emitting a constant-0 column\n";
  };
  if (!lo_on) report("lo", "disabled by configuration");
  if (!sp_on) {
    report("sp", res.channels.sp ? "no taxonomy resource"
                                 : "disabled by configuration");
  }
  if (!jc_on) {
    if (!res.channels.jc) {
      report("jc", "disabled by configuration");
    } else if (!res.taxonomy.has_value()) {
      report("jc", "no taxonomy resource");
    } else {
      report("jc", "taxonomy has no IC values; supply IC or disable jc");
    }
  }
  if (!lsa_on) {
    report("lsa", res.channels.lsa ? "no embedding resource"
                                   : "disabled by configuration");
  }
  if (!w2v_on) {
    report("w2v", res.channels.w2v ? "no embedding resource"
                                   : "disabled by configuration");
  }

  const TokenList question_tokens = tokenize(q.text);
  const TokenList model =
      preprocess(tokenize(q.model_answer), res.stopwords, question_tokens);

  WordSim sp_sim, jc_sim, lsa_sim, w2v_sim;
  if (sp_on) {
    sp_sim = [&tax = *res.taxonomy](const std::string& a,
                                    const std::string& b) {
      return word_sim_sp(a, b, tax);
    };
  }
  if (jc_on) {
    jc_sim = [&tax = *res.taxonomy](const std::string& a,
                                    const std::string& b) {
      return word_sim_jc(a, b, tax);
    };
  }
  if (lsa_on) {
    lsa_sim = [&emb = *res.lsa](const std::string& a, const std::string& b) {
      return word_sim_embed(a, b, emb);
    };
  }
  if (w2v_on) {
    w2v_sim = [&emb = *res.w2v](const std::string& a, const std::string& b) {
      return word_sim_embed(a, b, emb);
    };
  }

  std::vector<SimilarityProfile> profiles;
  profiles.reserve(answers.size());
  for (const auto& answer : answers) {
    const TokenList student =
        preprocess(tokenize(answer.text), res.stopwords, question_tokens);
    SimilarityProfile p;
    if (lo_on) p.lo = lex_overlap(student, model);
    if (jc_on) p.jc = answer_similarity(student, model, jc_sim);
    if (sp_on) p.sp = answer_similarity(student, model, sp_sim);
    if (lsa_on) p.lsa = answer_similarity(student, model, lsa_sim);
    if (w2v_on) p.w2v = answer_similarity(student, model, w2v_sim);
    profiles.push_back(p);
  }
  return profiles;
}

std::vector<SimilarityProfile> minmax_normalize(
    const std::vector<SimilarityProfile>& raw) {
  if (raw.empty()) {
    throw Error("min-max normalization needs at least one profile");
  }
  Eigen::MatrixXd m = profile_matrix(raw);
  const Eigen::VectorXd lo = m.rowwise().minCoeff();
  const Eigen::VectorXd hi = m.rowwise().maxCoeff();
  std::vector<SimilarityProfile> out;
  out.reserve(raw.size());
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    Eigen::Matrix<double, 5, 1> v;
    for (int r = 0; r < kProfileDims; ++r) {
      const double range = hi[r] - lo[r];
      v[r] = range > 0 ? (m(r, c) - lo[r]) / range : 0.0;
    }
    out.push_back(SimilarityProfile::from_vec(v));
  }
  return out;
}

Eigen::MatrixXd profile_matrix(
    const std::vector<SimilarityProfile>& profiles) {
  Eigen::MatrixXd m(kProfileDims, profiles.size());
  for (std::size_t i = 0; i < profiles.size(); ++i) {
    m.col(static_cast<Eigen::Index>(i)) = profiles[i].vec();
  }
  return m;
}

}  // namespace asag
