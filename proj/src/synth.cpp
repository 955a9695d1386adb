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

#include "asag/synth.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "asag/error.hpp"
#include "asag/rng.hpp"

namespace asag {

void SynthSpec::validate() const {
  if (questions < 1 || answers_per_question < 1 || topic_vocab < 1) {
    throw Error("synthetic spec counts must be at least 1");
  }
  if (label_count < 2) throw Error("synthetic spec needs at least 2 labels");
  if (noise_rate < 0 || noise_rate > 1) {
    throw Error("noise rate must lie in [0,1]");
  }
  if (signal < 0 || signal > 1) throw Error("signal must lie in [0,1]");
}

namespace {

constexpr int kJunkVocab = 40;
constexpr int kAnswerLengthSpread = 8;
// The model answer mixes two word groups. Concept words ("a...") share the
// top label's taxonomy/embedding cluster but are never produced by students,
// so semantic channels see graded cluster distances without exact-match
// saturation. Phrase words ("b...") exist nowhere in the resources and carry
// the lexical-overlap gradient alone: students borrow them with probability
// rising in the label, scaled by the signal.
constexpr int kModelConceptWords = 6;
constexpr int kModelPhraseWords = 4;
constexpr double kPhraseMix = 0.15;

// Full-signal similarity targets per channel as a function of x = label/top.
// Equal spacing keeps every adjacent class pair equally separable.
double lsa_target(double x) { return 0.15 + 0.65 * x; }
double w2v_target(double x) { return 0.25 + 0.50 * x; }
double jc_target(double x) { return 0.10 + 0.60 * x; }

// Per-question idiosyncrasies. Questions share the generative law and its
// curve shapes but not the noise scales, so a model moved between questions
// unadjusted meets differently dispersed feature columns; the shared-subspace
// route can absorb that through per-side standardization, a raw transfer
// cannot.
struct QuestionGeometry {
  double lsa_jitter;      // per-word spread of the embedding target, sim units
  double w2v_jitter;
  double jc_leaf_jitter;  // per-word IC spread of taxonomy leaves
  int base_length;

  static QuestionGeometry draw(Rng& rng) {
    // One noise-scale multiplier drives every channel of a question, so
    // questions differ mainly in how dispersed their features are.
    const double scale = 0.35 + 1.45 * rng.uniform();
    QuestionGeometry g;
    g.lsa_jitter = 0.04 * scale;
    g.w2v_jitter = 0.055 * scale;
    g.jc_leaf_jitter = 0.4 * scale;
    g.base_length = 24 + rng.uniform_int(29);
    return g;
  }
};

std::string topic_word(int q, int label, int j) {
  return "t" + std::to_string(q) + "c" + std::to_string(label) + "n" +
         std::to_string(j);
}

std::string concept_word(int q, int j) {
  return "a" + std::to_string(q) + "n" + std::to_string(j);
}

std::string phrase_word(int q, int j) {
  return "b" + std::to_string(q) + "n" + std::to_string(j);
}

std::string join(const std::vector<std::string>& words) {
  std::string text;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (i) text += ' ';
    text += words[i];
  }
  return text;
}

}  // namespace

double uniform_predictor_mae(int label_count) {
  const double l = label_count;
  return (l * l - 1.0) / (3.0 * l);
}

double majority_predictor_mae(int label_count) {
  const double l = label_count;
  if (label_count % 2 == 0) return l / 4.0;
  return (l * l - 1.0) / (4.0 * l);
}

SynthCorpus generate(const SynthSpec& spec) {
  spec.validate();
  const int label_count = spec.label_count;
  const int top = label_count - 1;

  SynthCorpus corpus;
  GradeScheme scheme;
  scheme.kind = SchemeKind::Ordinal;
  for (int l = 0; l < label_count; ++l) {
    scheme.labels.push_back({std::to_string(l), static_cast<double>(l)});
  }

  Rng rng(mix_seed(spec.seed, "corpus"));

  std::vector<QuestionGeometry> geometry;
  geometry.reserve(spec.questions);
  for (int q = 0; q < spec.questions; ++q) {
    geometry.push_back(QuestionGeometry::draw(rng));
  }

  for (int q = 0; q < spec.questions; ++q) {
    const std::string qid = "q" + std::to_string(q + 1);
    Question question;
    question.id = qid;
    question.text = "question prompt number " + std::to_string(q + 1);
    question.scheme = scheme;

    // Model answer: concept words plus key phrases, shuffled.
    std::vector<std::string> model_words;
    for (int j = 0; j < kModelConceptWords; ++j) {
      model_words.push_back(concept_word(q, j));
    }
    for (int j = 0; j < kModelPhraseWords; ++j) {
      model_words.push_back(phrase_word(q, j));
    }
    for (int j = static_cast<int>(model_words.size()) - 1; j > 0; --j) {
      std::swap(model_words[j], model_words[rng.uniform_int(j + 1)]);
    }
    question.model_answer = join(model_words);
    corpus.dataset.questions.push_back(std::move(question));

    // Uniform labels via a shuffled balanced multiset: every label is
    // equally likely for every answer and the class proportions are exact,
    // which keeps the analytic baseline error values sharp.
    std::vector<int> labels(spec.answers_per_question);
    for (int i = 0; i < spec.answers_per_question; ++i) {
      labels[i] = i % label_count;
    }
    for (int i = spec.answers_per_question - 1; i > 0; --i) {
      std::swap(labels[i], labels[rng.uniform_int(i + 1)]);
    }

    for (int i = 0; i < spec.answers_per_question; ++i) {
      const int label = labels[i];
      // Probability that a content token parrots one of the model answer's
      // key phrases; zero slope at zero signal, so lexical overlap carries
      // no label information in that limit.
      const double phrase_rate =
          spec.signal * kPhraseMix * static_cast<double>(label) / top;
      const int length =
          geometry[q].base_length + rng.uniform_int(kAnswerLengthSpread);

      std::vector<std::string> words;
      words.reserve(length);
      for (int t = 0; t < length; ++t) {
        if (rng.uniform() < spec.noise_rate) {
          words.push_back("junk" + std::to_string(rng.uniform_int(kJunkVocab)));
        } else if (rng.uniform() < phrase_rate) {
          words.push_back(phrase_word(q, rng.uniform_int(kModelPhraseWords)));
        } else {
          words.push_back(topic_word(q, label, rng.uniform_int(spec.topic_vocab)));
        }
      }

      StudentAnswer answer;
      answer.id = qid + "a" + std::to_string(i + 1);
      answer.question_id = qid;
      answer.text = join(words);
      answer.grade = std::to_string(label);
      corpus.dataset.answers.push_back(std::move(answer));
    }
  }
  corpus.dataset.validate();

  // Taxonomy: per question one is-a chain ordered by label. IC values sit so
  // the Jiang-Conrath similarity between adjacent-chain concepts steps
  // linearly with the label. Every mapped word hangs off its label's chain
  // node as a leaf of random depth (1 or 2) with jittered IC, which gives the
  // two taxonomy channels word-level noise of their own instead of noise
  // perfectly shared with the embedding channels. The signal knob gates how
  // many words of each topic are mapped at all; unmapped words contribute a
  // flat zero.
  {
    TaxonomyResource& tax = corpus.taxonomy;
    Rng tax_rng(mix_seed(spec.seed, "taxonomy"));
    std::vector<std::pair<int, int>> edges;  // child, parent
    auto add_concept = [&](const std::string& id, double ic) {
      const int idx = static_cast<int>(tax.concepts.size());
      tax.concept_index.emplace(id, idx);
      tax.concepts.push_back(id);
      tax.ic.push_back(ic);
      return idx;
    };
    const int mapped_words = static_cast<int>(
        std::lround(spec.signal * static_cast<double>(spec.topic_vocab)));
    const int mapped_concept_words = static_cast<int>(
        std::lround(spec.signal * static_cast<double>(kModelConceptWords)));
    const double ic_top = 1.0 + 1.0 / jc_target(0.0);

    for (int q = 0; q < spec.questions; ++q) {
      std::vector<int> chain(label_count);
      for (int l = 0; l < label_count; ++l) {
        const double ic =
            l == top ? ic_top
                     : ic_top - 1.0 / jc_target(static_cast<double>(l) / top);
        chain[l] = add_concept("c" + std::to_string(q) + "x" + std::to_string(l),
                               ic);
        if (l > 0) edges.emplace_back(chain[l], chain[l - 1]);
      }
      // Leaf (and possibly an intermediate) per mapped word.
      auto attach_word = [&](const std::string& word, int label,
                             const std::string& leaf_id) {
        const double eta = geometry[q].jc_leaf_jitter * tax_rng.uniform();
        const int depth = 1 + tax_rng.uniform_int(2);
        int parent = chain[label];
        if (depth == 2) {
          const int mid =
              add_concept(leaf_id + "m", tax.ic[chain[label]] + 0.5 * eta);
          edges.emplace_back(mid, parent);
          parent = mid;
        }
        const int leaf = add_concept(leaf_id, tax.ic[chain[label]] + eta);
        edges.emplace_back(leaf, parent);
        tax.word_concepts[word] = {leaf};
      };
      for (int l = 0; l < label_count; ++l) {
        for (int j = 0; j < mapped_words; ++j) {
          attach_word(topic_word(q, l, j), l,
                      "w" + std::to_string(q) + "x" + std::to_string(l) + "x" +
                          std::to_string(j));
        }
      }
      for (int j = 0; j < mapped_concept_words; ++j) {
        attach_word(concept_word(q, j), top,
                    "wa" + std::to_string(q) + "x" + std::to_string(j));
      }
    }
    const int concept_count = tax.concept_count();
    tax.parents.assign(concept_count, {});
    tax.children.assign(concept_count, {});
    for (const auto& [child, parent] : edges) {
      tax.parents[child].push_back(parent);
      tax.children[parent].push_back(child);
    }
    tax.validate();
  }

  // Embedding tables: per question, words sit on a ray anchored by the model
  // answer's concept words. Each word's distance is drawn so that its
  // similarity to the anchor is the channel target for its label plus
  // word-level jitter; every offset scales with the signal, so all words
  // coincide when it is zero.
  auto build_table = [&](const char* tag, bool lsa_side, int extra_dims) {
    EmbeddingTable table;
    table.dim = spec.questions + extra_dims;
    Rng emb_rng(mix_seed(spec.seed, tag));
    for (int q = 0; q < spec.questions; ++q) {
      const double jitter =
          lsa_side ? geometry[q].lsa_jitter : geometry[q].w2v_jitter;
      auto place = [&](const std::string& word, double sim_target,
                       double jitter_scale = 1.0) {
        // Heavy-tailed word scatter: occasional far-out words stretch the
        // per-question feature range much more than its variance.
        const double tail = emb_rng.uniform() < 0.15 ? 3.0 : 1.0;
        const double sim = std::clamp(
            sim_target + jitter_scale * tail * jitter * emb_rng.normal(), 0.05,
            0.98);
        const double offset = spec.signal * (1.0 / sim - 1.0);
        Eigen::VectorXd v = Eigen::VectorXd::Zero(table.dim);
        v[q] = offset;
        // Tiny off-axis component keeps words distinct without moving them
        // meaningfully off the ray.
        v[(q + 1) % table.dim] += 0.01 * emb_rng.normal();
        table.vectors.emplace(word, std::move(v));
      };
      for (int l = 0; l < label_count; ++l) {
        const double x = static_cast<double>(l) / top;
        for (int j = 0; j < spec.topic_vocab; ++j) {
          place(topic_word(q, l, j),
                lsa_side ? lsa_target(x) : w2v_target(x));
        }
      }
      for (int j = 0; j < kModelConceptWords; ++j) {
        place(concept_word(q, j), 0.98, 0.2);  // anchors at the high end
      }
    }
    return table;
  };
  corpus.lsa = build_table("lsa", true, 1);
  corpus.w2v = build_table("w2v", false, 3);

  return corpus;
}

}  // namespace asag
