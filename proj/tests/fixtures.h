// Copyright 2026 The kgsyn Authors.
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

// Small graphs and models shared by unit and acceptance tests.

#ifndef KGSYN_TESTS_FIXTURES_H_
#define KGSYN_TESTS_FIXTURES_H_

#include <functional>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "kgsyn/error.h"
#include "kgsyn/kg.h"
#include "kgsyn/kge.h"
#include "kgsyn/matcher.h"
#include "kgsyn/semantic.h"
#include "kgsyn/tokenizer.h"
#include "oracles.h"

namespace kgsyn::fixture {

inline std::optional<ErrorCode> thrown(const std::function<void()> &fn) {
  try {
    fn();
  } catch (const Error &e) {
    return e.code();
  }
  return std::nullopt;
}

// Three concepts, five instances, every subset non-empty.
inline KnowledgeGraph tiny_graph() {
  KindRegistry kinds = {{"disease", EntityKind::kConcept},
                        {"skin disease", EntityKind::kConcept},
                        {"medicine", EntityKind::kConcept},
                        {"burn", EntityKind::kInstance},
                        {"eczema", EntityKind::kInstance},
                        {"rash", EntityKind::kInstance},
                        {"ointment", EntityKind::kInstance},
                        {"cream", EntityKind::kInstance}};
  std::vector<RawTriple> raw = {
      {"skin disease", "subClassOf", "disease"},
      {"burn", "instanceOf", "skin disease"},
      {"eczema", "instanceOf", "skin disease"},
      {"rash", "instanceOf", "skin disease"},
      {"ointment", "instanceOf", "medicine"},
      {"cream", "instanceOf", "medicine"},
      {"burn", "treated_by", "ointment"},
      {"eczema", "treated_by", "cream"},
      {"rash", "similar_to", "eczema"},
      {"burn", "related_to", "medicine"},
      {"skin disease", "treated_by", "medicine"},
  };
  return build_graph(raw, kinds);
}

inline std::vector<std::string> surfaces_of(const KnowledgeGraph &kg) {
  std::vector<std::string> out;
  for (const auto &e : kg.entities()) out.push_back(e.surface);
  return out;
}

inline std::vector<std::pair<std::string, std::span<double>>> tensors(MatcherParams &p) {
  return {{"table", p.table.rows.values()},
          {"W1", p.shared.w1.values()},
          {"b1", p.shared.b1},
          {"W2", p.shared.w2.values()},
          {"b2", p.shared.b2},
          {"W3", p.knowledge.w1.values()},
          {"b3", p.knowledge.b1},
          {"W4", p.knowledge.w2.values()},
          {"b4", p.knowledge.b2},
          {"Wg", p.fusion.gate.wg.values()},
          {"Wf", p.fusion.wf.values()}};
}

// Matcher over tiny_graph with every parameter (biases and knowledge rows
// included) drawn at random so no gradient is trivially zero.
inline MatcherModel random_model(std::mt19937_64 &gen, FusionMode mode, std::size_t k,
                                 std::size_t n, std::size_t d,
                                 GateActivation act = GateActivation::kSoftmax) {
  const KnowledgeGraph kg = tiny_graph();
  const auto surfaces = surfaces_of(kg);
  SubwordVocab vocab = build_vocab(surfaces, TokenizerMode::kLetterTrigram);
  const EmbeddingStore store = init_store(kg, n, gen());
  MatcherConfig cfg;
  cfg.dim = k;
  cfg.mode = mode;
  cfg.gate_activation = act;
  cfg.seed = gen();
  SemanticTable table = init_semantic_table(vocab.size(), d, gen());
  MatcherModel model = init_matcher(kg, &store, std::move(vocab), std::move(table), cfg);
  for (auto &[name, t] : tensors(model.params)) oracle::randomize(gen, t, -0.6, 0.6);
  oracle::randomize(gen, model.knowledge_vecs.values());
  return model;
}

}  // namespace kgsyn::fixture

#endif  // KGSYN_TESTS_FIXTURES_H_
