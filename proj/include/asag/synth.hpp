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

#ifndef ASAG_SYNTH_HPP_
#define ASAG_SYNTH_HPP_

#include <cstdint>

#include "asag/corpus.hpp"
#include "asag/simfeat.hpp"

namespace asag {

/// Parameters of the synthetic grading corpus generator. The defaults are
/// the desk-scale benchmark configuration.
struct SynthSpec {
  int questions = 5;
  int answers_per_question = 40;
  int label_count = 6;
  int topic_vocab = 12;     // words per (question, label) topic
  double noise_rate = 0.2;  // fraction of off-topic junk tokens per answer
  double signal = 0.8;      // strength of the similarity-to-model gradient
  std::uint64_t seed = 1;

  void validate() const;
};

struct SynthCorpus {
  Dataset dataset;
  EmbeddingTable lsa;
  EmbeddingTable w2v;
  TaxonomyResource taxonomy;
};

/// Seeded generator. Per question, each label owns a distinct topic
/// vocabulary so bag-of-words separates labels; answers blend model-topic
/// tokens with probability rising in the numeric label (slope = signal), so
/// raw similarity to the model answer grows with the grade in expectation.
/// The emitted embedding tables and taxonomy cluster words by topic. Fully
/// determined by the seed.
SynthCorpus generate(const SynthSpec& spec);

/// Expected MAE of a uniform random predictor over L equally likely ordinal
/// labels with unit spacing: (L^2 - 1) / (3L).
double uniform_predictor_mae(int label_count);

/// Expected MAE of the best constant predictor under the same law.
double majority_predictor_mae(int label_count);

}  // namespace asag

#endif  // ASAG_SYNTH_HPP_
