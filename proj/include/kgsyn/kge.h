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

#ifndef KGSYN_KGE_H_
#define KGSYN_KGE_H_

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "kgsyn/kg.h"
#include "kgsyn/random.h"
#include "kgsyn/tensor.h"

namespace kgsyn {

// Knowledge embeddings: instance vectors, concept spheres (center, radius),
// concept node vectors and relation vectors, all of dimension `dim`.
struct EmbeddingStore {
  std::size_t dim = 0;
  Matrix instance_vecs;      // |I| x n
  Matrix concept_centers;    // |C| x n
  Vector concept_radii;      // |C|
  Matrix concept_node_vecs;  // |C| x n
  Matrix relation_vecs;      // |R| x n

  bool operator==(const EmbeddingStore &) const = default;
};

inline constexpr double kMinRadius = 1e-3;
inline constexpr double kInitRadius = 0.5;

struct KgeConfig {
  std::size_t dim = 200;
  // Hinge margins indexed by TripleSubset.
  std::array<double, kNumSubsets> margins = {1.0, 1.0, 1.0, 1.0, 1.0};
  double learning_rate = 0.01;
  std::size_t epochs = 100;
  std::size_t negatives_per_triple = 1;
  std::uint64_t seed = 0;
  // Subsets whose loss terms take part in training. Dropping instanceOf and
  // subClassOf leaves the translation-only model.
  std::array<bool, kNumSubsets> active = {true, true, true, true, true};

  // Throws kConfigError on negative margins, zero dimension or a
  // non-positive learning rate.
  void validate() const;
};

// Per-triple losses.
double loss_instance_instance(std::span<const double> v_i, std::span<const double> v_r,
                              std::span<const double> v_j);
double loss_instance_of(std::span<const double> v_i, std::span<const double> p_c, double m_c);
double loss_subclass_of(std::span<const double> p_i, double m_i,
                        std::span<const double> p_j, double m_j);
double loss_nhh_instance_concept(std::span<const double> v_i, std::span<const double> v_r,
                                 std::span<const double> v_c);
double loss_nhh_concept_concept(std::span<const double> v_ci, std::span<const double> v_r,
                                std::span<const double> v_cj);

// True when sphere j lies inside sphere i, the branch condition of
// loss_subclass_of.
bool sphere_contains(std::span<const double> p_i, double m_i, std::span<const double> p_j,
                     double m_j);

// Gradient of ||h + r - t||^2.
struct TranslationGrad {
  Vector head, relation, tail;
};
TranslationGrad translation_loss_grad(std::span<const double> h, std::span<const double> r,
                                      std::span<const double> t);

// Gradient of ||v - p|| - m. The distance term has no gradient at v == p.
struct InstanceOfGrad {
  Vector instance, center;
  double radius = 0.0;
};
InstanceOfGrad instance_of_grad(std::span<const double> v_i, std::span<const double> p_c,
                                double m_c);

struct SubclassOfGrad {
  Vector center_i;
  double radius_i = 0.0;
  Vector center_j;
  double radius_j = 0.0;
};
SubclassOfGrad subclass_of_grad(std::span<const double> p_i, double m_i,
                                std::span<const double> p_j, double m_j);

enum class ParamBlock : std::uint8_t { kInstance, kCenter, kRadius, kNode, kRelation };

// Gradient contribution to one row of one parameter block. Radius rows have
// length one.
struct GradEntry {
  ParamBlock block;
  std::uint32_t row;
  Vector grad;
};
using SparseGrad = std::vector<GradEntry>;

std::span<double> param_row(EmbeddingStore &store, ParamBlock block, std::uint32_t row);
std::span<const double> param_row(const EmbeddingStore &store, ParamBlock block,
                                  std::uint32_t row);

// Throws kMissingEmbedding unless the store has rows for every graph id.
void check_store_covers(const KnowledgeGraph &kg, const EmbeddingStore &store);

// Loss of one triple under the function of its subset.
double triple_loss(const KnowledgeGraph &kg, const EmbeddingStore &store, const Triple &t);

// Appends scale * d(triple_loss)/d(params) to `grad`.
void accumulate_triple_grad(const KnowledgeGraph &kg, const EmbeddingStore &store,
                            const Triple &t, double scale, SparseGrad &grad);

// Sum of the five per-subset loss sums.
double joint_objective(const KnowledgeGraph &kg, const EmbeddingStore &store);

// [margin + f(pos) - f(neg)]_+; gradient appended when active and grad != nullptr.
double hinge_loss(const KnowledgeGraph &kg, const EmbeddingStore &store, const Triple &pos,
                  const Triple &neg, double margin, SparseGrad *grad);

inline constexpr int kMaxCorruptionTries = 100;

// Replaces head or tail (chosen uniformly) by a uniformly drawn entity of the
// same kind, rejecting the original entity and true triples of the subset.
Triple sample_negative_triple(const Triple &t, const KnowledgeGraph &kg, Rng &rng);

EmbeddingStore init_store(const KnowledgeGraph &kg, std::size_t dim, std::uint64_t seed);

// Clamps radii to kMinRadius and projects instance and node vectors onto
// the unit ball.
void constrain_row(EmbeddingStore &store, ParamBlock block, std::uint32_t row);

struct KgeTrace {
  std::vector<double> epoch_hinge;  // summed hinge loss per epoch
};

EmbeddingStore train_kge(const KnowledgeGraph &kg, const KgeConfig &cfg,
                         KgeTrace *trace = nullptr);

// v_t for instances, (p_t + v_t) / 2 for concepts.
Vector entity_knowledge_embedding(const KnowledgeGraph &kg, const EmbeddingStore &store,
                                  EntityId t);

}  // namespace kgsyn

#endif  // KGSYN_KGE_H_
