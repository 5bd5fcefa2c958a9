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

#ifndef KGSYN_MATCHER_H_
#define KGSYN_MATCHER_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kgsyn/dataset.h"
#include "kgsyn/eval.h"
#include "kgsyn/kg.h"
#include "kgsyn/kge.h"
#include "kgsyn/random.h"
#include "kgsyn/semantic.h"
#include "kgsyn/tensor.h"
#include "kgsyn/tokenizer.h"

namespace kgsyn {

enum class FusionMode : std::uint8_t {
  kGate,            // e_s + e_l * g(e_s, e_l)
  kDirectAddition,  // e_s + e_l
  kFcFusion,        // tanh(Wf [e_s; e_l])
  kNoKnowledge,     // e_s
};

enum class GateActivation : std::uint8_t { kSoftmax, kSigmoid };

std::string_view fusion_mode_name(FusionMode mode);
std::optional<FusionMode> parse_fusion_mode(std::string_view name);
std::string_view gate_activation_name(GateActivation act);
std::optional<GateActivation> parse_gate_activation(std::string_view name);

struct GateParams {
  Matrix wg;  // k x 4k
  GateActivation activation = GateActivation::kSoftmax;

  bool operator==(const GateParams &) const = default;
};

struct FusionParams {
  GateParams gate;
  Matrix wf;  // k x 2k, only read in kFcFusion mode

  bool operator==(const FusionParams &) const = default;
};

// Knowledge vector mapped into the semantic space.
Vector knowledge_transform(std::span<const double> e_t, const KnowledgeFc &fc);

struct GateCache {
  Vector features;  // [a; b; a - b; a * b]
  Vector gate;
};

// Activation(Wg [a; b; a - b; a * b]).
Vector transform_gate(std::span<const double> a, std::span<const double> b,
                      const GateParams &gp, GateCache *cache = nullptr);

// Given d/d(gate), accumulates d/dWg and adds d/da, d/db into grad_a, grad_b.
void transform_gate_backward(const GateParams &gp, const GateCache &cache,
                             std::span<const double> a, std::span<const double> b,
                             std::span<const double> grad_gate, Matrix &grad_wg,
                             std::span<double> grad_a, std::span<double> grad_b);

struct FuseCache {
  GateCache gate;
  Vector output;
};

Vector fuse(std::span<const double> e_s_t, std::span<const double> e_t_l,
            const FusionParams &params, FusionMode mode, FuseCache *cache = nullptr);

// Accumulates parameter gradients into `grads` and writes d/de_s_t, d/de_t_l.
void fuse_backward(std::span<const double> e_s_t, std::span<const double> e_t_l,
                   const FusionParams &params, FusionMode mode, const FuseCache &cache,
                   std::span<const double> grad_out, FusionParams &grads,
                   std::span<double> grad_s, std::span<double> grad_l);

double score(std::span<const double> q_vec, std::span<const double> t_fused);

// -log(exp(pos) / (exp(pos) + sum_j exp(neg_j))), max-shifted.
double nce_loss(double pos, std::span<const double> negs);

struct NegativeDraw {
  std::vector<EntityId> ids;
  bool degenerate = false;  // fewer eligible entities than requested
};

// Draws `count` entities uniformly from `universe` excluding `gold`; distinct
// when enough eligible entities exist, otherwise with replacement.
NegativeDraw sample_negative_entities(std::span<const EntityId> universe,
                                      std::span<const EntityId> gold, std::size_t count,
                                      Rng &rng);

// Trainable matcher tensors.
struct MatcherParams {
  SemanticTable table;
  SharedFc shared;
  KnowledgeFc knowledge;
  FusionParams fusion;

  MatcherParams zeros_like() const;
  void set_zero();
  bool operator==(const MatcherParams &) const = default;
};

struct MatcherConfig {
  std::size_t dim = 300;  // k
  std::size_t negatives = 200;
  std::size_t batch_size = 32;
  double learning_rate = 0.001;
  double dropout = 0.5;
  std::size_t patience = 10;
  std::size_t max_epochs = 100;
  std::uint64_t seed = 0;
  FusionMode mode = FusionMode::kGate;
  GateActivation gate_activation = GateActivation::kSoftmax;
  bool freeze_table = false;

  void validate() const;
};

// A matcher with everything needed to score mentions against the entity
// universe: vocabulary, parameters, frozen knowledge vectors and surfaces.
struct MatcherModel {
  SubwordVocab vocab;
  MatcherParams params;
  FusionMode mode = FusionMode::kGate;
  Matrix knowledge_vecs;  // |E| x n, rows are entity_knowledge_embedding
  std::vector<std::string> entity_surfaces;
  // vocab.encode of each surface; rebuilt by refresh_entity_subwords.
  std::vector<std::vector<std::uint32_t>> entity_subwords;

  std::size_t entity_count() const { return entity_surfaces.size(); }

  bool operator==(const MatcherModel &) const = default;
};

void refresh_entity_subwords(MatcherModel &model);

// Builds an untrained model. `store` may be null only in kNoKnowledge mode.
MatcherModel init_matcher(const KnowledgeGraph &kg, const EmbeddingStore *store,
                          SubwordVocab vocab, SemanticTable table, const MatcherConfig &cfg);

// Evaluation-mode encodings.
Vector encode_mention(std::string_view mention, const MatcherModel &model);
Vector encode_entity(EntityId t, const MatcherModel &model);

// Entity encodings for the whole universe, one row per entity.
Matrix encode_all_entities(const MatcherModel &model);

// Scores all entities for a mention using precomputed encodings.
Scorer make_matcher_scorer(const MatcherModel &model);

// One NCE term: a mention, its gold entity and sampled negatives.
struct Example {
  std::vector<std::uint32_t> mention_ids;
  EntityId positive;
  std::vector<EntityId> negatives;
};

// Inverted-dropout masks; empty vectors disable dropout.
struct DropoutMasks {
  Vector mention;
  Vector entity_shared;
  Vector entity_knowledge;
};

// Loss of one example; accumulates parameter gradients when grads != nullptr.
double example_loss(const MatcherModel &model, const Example &ex, const DropoutMasks &masks,
                    MatcherParams *grads);

// Adam with bias correction over every tensor of MatcherParams.
class AdamOptimizer {
 public:
  AdamOptimizer(const MatcherParams &shape, double learning_rate, double beta1 = 0.9,
                double beta2 = 0.999, double epsilon = 1e-8);

  void step(MatcherParams &params, const MatcherParams &grads, bool freeze_table);

 private:
  double lr_, beta1_, beta2_, eps_;
  std::uint64_t t_ = 0;
  std::vector<Vector> m_, v_;
};

struct EpochRecord {
  std::size_t epoch = 0;
  double train_loss = 0.0;
  double dev_hits3 = 0.0;

  bool operator==(const EpochRecord &) const = default;
};

struct MatcherTrace {
  std::vector<EpochRecord> epochs;  // epoch 0 is the untrained model
  std::size_t best_epoch = 0;
  bool degenerate_negatives = false;

  bool operator==(const MatcherTrace &) const = default;
};

// Mini-batch Adam on the summed NCE loss with early stopping on dev hits@3.
// Returns the best-dev parameters.
MatcherModel train_matcher(MatcherModel model, const PairDataset &data,
                           const MatcherConfig &cfg, MatcherTrace *trace = nullptr);

// Top-k candidates by descending score, ties by ascending id.
std::vector<std::pair<EntityId, double>> query_top_k(std::string_view mention, std::size_t k,
                                                     const MatcherModel &model,
                                                     std::span<const EntityId> candidates);

}  // namespace kgsyn

#endif  // KGSYN_MATCHER_H_
