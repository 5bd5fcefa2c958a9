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

#include "kgsyn/kge.h"

#include <cmath>
#include <string>

#include "kgsyn/error.h"

namespace kgsyn {

void KgeConfig::validate() const {
  if (dim == 0) throw Error(ErrorCode::kConfigError, "kge dimension must be >= 1");
  for (double m : margins) {
    if (!(m >= 0.0)) throw Error(ErrorCode::kConfigError, "kge margins must be >= 0");
  }
  if (!(learning_rate > 0.0)) {
    throw Error(ErrorCode::kConfigError, "kge learning rate must be positive");
  }
}

namespace {

double translation_residual_sq(std::span<const double> h, std::span<const double> r,
                               std::span<const double> t) {
  check_dims(h.size(), r.size(), "translation relation");
  check_dims(h.size(), t.size(), "translation tail");
  double s = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    double d = h[i] + r[i] - t[i];
    s += d * d;
  }
  return s;
}

double distance(std::span<const double> a, std::span<const double> b) {
  check_dims(a.size(), b.size(), "distance");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

}  // namespace

double loss_instance_instance(std::span<const double> v_i, std::span<const double> v_r,
                              std::span<const double> v_j) {
  return translation_residual_sq(v_i, v_r, v_j);
}

double loss_instance_of(std::span<const double> v_i, std::span<const double> p_c,
                        double m_c) {
  return distance(v_i, p_c) - m_c;
}

bool sphere_contains(std::span<const double> p_i, double m_i, std::span<const double> p_j,
                     double m_j) {
  return distance(p_i, p_j) + m_j <= m_i;
}

double loss_subclass_of(std::span<const double> p_i, double m_i,
                        std::span<const double> p_j, double m_j) {
  double d = distance(p_i, p_j);
  if (d + m_j <= m_i) return m_i - m_j;
  return d + m_i - m_j;
}

double loss_nhh_instance_concept(std::span<const double> v_i, std::span<const double> v_r,
                                 std::span<const double> v_c) {
  return translation_residual_sq(v_i, v_r, v_c);
}

double loss_nhh_concept_concept(std::span<const double> v_ci, std::span<const double> v_r,
                                std::span<const double> v_cj) {
  return translation_residual_sq(v_ci, v_r, v_cj);
}

TranslationGrad translation_loss_grad(std::span<const double> h, std::span<const double> r,
                                      std::span<const double> t) {
  check_dims(h.size(), r.size(), "translation relation");
  check_dims(h.size(), t.size(), "translation tail");
  TranslationGrad g{Vector(h.size()), Vector(h.size()), Vector(h.size())};
  for (std::size_t i = 0; i < h.size(); ++i) {
    double d = 2.0 * (h[i] + r[i] - t[i]);
    g.head[i] = d;
    g.relation[i] = d;
    g.tail[i] = -d;
  }
  return g;
}

InstanceOfGrad instance_of_grad(std::span<const double> v_i, std::span<const double> p_c,
                                double /*m_c*/) {
  double d = distance(v_i, p_c);
  InstanceOfGrad g{Vector(v_i.size(), 0.0), Vector(v_i.size(), 0.0), -1.0};
  if (d > 0.0) {
    for (std::size_t k = 0; k < v_i.size(); ++k) {
      double u = (v_i[k] - p_c[k]) / d;
      g.instance[k] = u;
      g.center[k] = -u;
    }
  }
  return g;
}

SubclassOfGrad subclass_of_grad(std::span<const double> p_i, double m_i,
                                std::span<const double> p_j, double m_j) {
  double d = distance(p_i, p_j);
  SubclassOfGrad g{Vector(p_i.size(), 0.0), 1.0, Vector(p_i.size(), 0.0), -1.0};
  if (d + m_j <= m_i || d == 0.0) return g;
  for (std::size_t k = 0; k < p_i.size(); ++k) {
    double u = (p_i[k] - p_j[k]) / d;
    g.center_i[k] = u;
    g.center_j[k] = -u;
  }
  return g;
}

std::span<double> param_row(EmbeddingStore &store, ParamBlock block, std::uint32_t row) {
  switch (block) {
    case ParamBlock::kInstance: return store.instance_vecs.row(row);
    case ParamBlock::kCenter: return store.concept_centers.row(row);
    case ParamBlock::kRadius: return {store.concept_radii.data() + row, 1};
    case ParamBlock::kNode: return store.concept_node_vecs.row(row);
    case ParamBlock::kRelation: return store.relation_vecs.row(row);
  }
  return {};
}

std::span<const double> param_row(const EmbeddingStore &store, ParamBlock block,
                                  std::uint32_t row) {
  return param_row(const_cast<EmbeddingStore &>(store), block, row);
}

void check_store_covers(const KnowledgeGraph &kg, const EmbeddingStore &store) {
  auto check = [](std::size_t have, std::size_t need, std::size_t cols, std::size_t dim,
                  const char *what) {
    if (have != need || (need > 0 && cols != dim)) {
      throw Error(ErrorCode::kMissingEmbedding,
                  std::string(what) + ": store has " + std::to_string(have) + " rows of " +
                      std::to_string(cols) + ", graph needs " + std::to_string(need) +
                      " of " + std::to_string(dim));
    }
  };
  check(store.instance_vecs.rows(), kg.instance_count(), store.instance_vecs.cols(),
        store.dim, "instances");
  check(store.concept_centers.rows(), kg.concept_count(), store.concept_centers.cols(),
        store.dim, "concept centers");
  check(store.concept_radii.size(), kg.concept_count(), store.dim, store.dim,
        "concept radii");
  check(store.concept_node_vecs.rows(), kg.concept_count(), store.concept_node_vecs.cols(),
        store.dim, "concept nodes");
  check(store.relation_vecs.rows(), kg.relation_count(), store.relation_vecs.cols(),
        store.dim, "relations");
}

double triple_loss(const KnowledgeGraph &kg, const EmbeddingStore &store, const Triple &t) {
  const std::uint32_t h = kg.local_index(t.head);
  const std::uint32_t tl = kg.local_index(t.tail);
  const auto rel = store.relation_vecs.row(t.relation.value);
  switch (t.subset) {
    case TripleSubset::kInstanceOf:
      return loss_instance_of(store.instance_vecs.row(h), store.concept_centers.row(tl),
                              store.concept_radii[tl]);
    case TripleSubset::kSubClassOf:
      return loss_subclass_of(store.concept_centers.row(h), store.concept_radii[h],
                              store.concept_centers.row(tl), store.concept_radii[tl]);
    case TripleSubset::kInstanceInstance:
      return loss_instance_instance(store.instance_vecs.row(h), rel,
                                    store.instance_vecs.row(tl));
    case TripleSubset::kNhhInstanceConcept:
      return loss_nhh_instance_concept(store.instance_vecs.row(h), rel,
                                       store.concept_node_vecs.row(tl));
    case TripleSubset::kNhhConceptConcept:
      return loss_nhh_concept_concept(store.concept_node_vecs.row(h), rel,
                                      store.concept_node_vecs.row(tl));
  }
  return 0.0;
}

namespace {

Vector scaled(const Vector &v, double s) {
  Vector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = s * v[i];
  return out;
}

void push_translation(SparseGrad &grad, double scale, ParamBlock head_block, std::uint32_t h,
                      std::uint32_t r, ParamBlock tail_block, std::uint32_t t,
                      const TranslationGrad &g) {
  grad.push_back({head_block, h, scaled(g.head, scale)});
  grad.push_back({ParamBlock::kRelation, r, scaled(g.relation, scale)});
  grad.push_back({tail_block, t, scaled(g.tail, scale)});
}

}  // namespace

void accumulate_triple_grad(const KnowledgeGraph &kg, const EmbeddingStore &store,
                            const Triple &t, double scale, SparseGrad &grad) {
  const std::uint32_t h = kg.local_index(t.head);
  const std::uint32_t tl = kg.local_index(t.tail);
  const std::uint32_t r = t.relation.value;
  const auto rel = store.relation_vecs.row(r);
  switch (t.subset) {
    case TripleSubset::kInstanceOf: {
      auto g = instance_of_grad(store.instance_vecs.row(h), store.concept_centers.row(tl),
                                store.concept_radii[tl]);
      grad.push_back({ParamBlock::kInstance, h, scaled(g.instance, scale)});
      grad.push_back({ParamBlock::kCenter, tl, scaled(g.center, scale)});
      grad.push_back({ParamBlock::kRadius, tl, {scale * g.radius}});
      break;
    }
    case TripleSubset::kSubClassOf: {
      auto g = subclass_of_grad(store.concept_centers.row(h), store.concept_radii[h],
                                store.concept_centers.row(tl), store.concept_radii[tl]);
      grad.push_back({ParamBlock::kCenter, h, scaled(g.center_i, scale)});
      grad.push_back({ParamBlock::kRadius, h, {scale * g.radius_i}});
      grad.push_back({ParamBlock::kCenter, tl, scaled(g.center_j, scale)});
      grad.push_back({ParamBlock::kRadius, tl, {scale * g.radius_j}});
      break;
    }
    case TripleSubset::kInstanceInstance:
      push_translation(grad, scale, ParamBlock::kInstance, h, r, ParamBlock::kInstance, tl,
                       translation_loss_grad(store.instance_vecs.row(h), rel,
                                             store.instance_vecs.row(tl)));
      break;
    case TripleSubset::kNhhInstanceConcept:
      push_translation(grad, scale, ParamBlock::kInstance, h, r, ParamBlock::kNode, tl,
                       translation_loss_grad(store.instance_vecs.row(h), rel,
                                             store.concept_node_vecs.row(tl)));
      break;
    case TripleSubset::kNhhConceptConcept:
      push_translation(grad, scale, ParamBlock::kNode, h, r, ParamBlock::kNode, tl,
                       translation_loss_grad(store.concept_node_vecs.row(h), rel,
                                             store.concept_node_vecs.row(tl)));
      break;
  }
}

double joint_objective(const KnowledgeGraph &kg, const EmbeddingStore &store) {
  check_store_covers(kg, store);
  double total = 0.0;
  for (TripleSubset s : kAllSubsets) {
    double subtotal = 0.0;
    for (const Triple &t : kg.triples(s)) subtotal += triple_loss(kg, store, t);
    total += subtotal;
  }
  return total;
}

double hinge_loss(const KnowledgeGraph &kg, const EmbeddingStore &store, const Triple &pos,
                  const Triple &neg, double margin, SparseGrad *grad) {
  double value = margin + triple_loss(kg, store, pos) - triple_loss(kg, store, neg);
  if (value <= 0.0) return 0.0;
  if (grad) {
    accumulate_triple_grad(kg, store, pos, 1.0, *grad);
    accumulate_triple_grad(kg, store, neg, -1.0, *grad);
  }
  return value;
}

Triple sample_negative_triple(const Triple &t, const KnowledgeGraph &kg, Rng &rng) {
  const bool corrupt_head = rng.coin();
  const EntityId original = corrupt_head ? t.head : t.tail;
  auto pool = kg.entities_of_kind(kg.entity(original).kind);
  if (!pool.empty()) {
    for (int attempt = 0; attempt < kMaxCorruptionTries; ++attempt) {
      EntityId candidate = pool[rng.index(pool.size())];
      if (candidate == original) continue;
      Triple neg = t;
      (corrupt_head ? neg.head : neg.tail) = candidate;
      if (kg.contains(t.subset, neg.head, neg.relation, neg.tail)) continue;
      return neg;
    }
  }
  throw Error(ErrorCode::kExhaustedCandidates,
              "no corruption found for (" + kg.entity(t.head).surface + ", " +
                  kg.relation_name(t.relation) + ", " + kg.entity(t.tail).surface + ") after " +
                  std::to_string(kMaxCorruptionTries) + " draws");
}

void constrain_row(EmbeddingStore &store, ParamBlock block, std::uint32_t row) {
  switch (block) {
    case ParamBlock::kRadius:
      if (!(store.concept_radii[row] >= kMinRadius)) store.concept_radii[row] = kMinRadius;
      break;
    case ParamBlock::kInstance:
    case ParamBlock::kNode:
      project_unit_ball(param_row(store, block, row));
      break;
    default:
      break;
  }
}

EmbeddingStore init_store(const KnowledgeGraph &kg, std::size_t dim, std::uint64_t seed) {
  if (dim == 0) throw Error(ErrorCode::kConfigError, "kge dimension must be >= 1");
  Rng rng(derive_seed(seed, "kge-init"));
  const double bound = 6.0 / std::sqrt(static_cast<double>(dim));
  auto fill = [&](Matrix &m) {
    for (double &x : m.values()) x = rng.uniform(-bound, bound);
  };
  EmbeddingStore store;
  store.dim = dim;
  store.instance_vecs = Matrix(kg.instance_count(), dim);
  store.concept_centers = Matrix(kg.concept_count(), dim);
  store.concept_radii = Vector(kg.concept_count(), kInitRadius);
  store.concept_node_vecs = Matrix(kg.concept_count(), dim);
  store.relation_vecs = Matrix(kg.relation_count(), dim);
  fill(store.instance_vecs);
  fill(store.concept_centers);
  fill(store.concept_node_vecs);
  fill(store.relation_vecs);
  for (std::uint32_t i = 0; i < kg.instance_count(); ++i) {
    constrain_row(store, ParamBlock::kInstance, i);
  }
  for (std::uint32_t c = 0; c < kg.concept_count(); ++c) {
    constrain_row(store, ParamBlock::kNode, c);
  }
  return store;
}

EmbeddingStore train_kge(const KnowledgeGraph &kg, const KgeConfig &cfg, KgeTrace *trace) {
  cfg.validate();
  EmbeddingStore store = init_store(kg, cfg.dim, cfg.seed);
  Rng rng(derive_seed(cfg.seed, "kge-train"));

  std::vector<TripleRef> order;
  for (TripleSubset s : kAllSubsets) {
    if (!cfg.active[static_cast<std::size_t>(s)]) continue;
    for (std::uint32_t i = 0; i < kg.triples(s).size(); ++i) order.push_back({s, i});
  }

  SparseGrad grad;
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    for (std::size_t i = order.size(); i > 1; --i) {
      std::swap(order[i - 1], order[rng.index(i)]);
    }
    double epoch_loss = 0.0;
    for (const TripleRef &ref : order) {
      const Triple &pos = kg.triple(ref);
      const double margin = cfg.margins[static_cast<std::size_t>(ref.subset)];
      for (std::size_t n = 0; n < cfg.negatives_per_triple; ++n) {
        Triple neg = sample_negative_triple(pos, kg, rng);
        grad.clear();
        double h = hinge_loss(kg, store, pos, neg, margin, &grad);
        if (!std::isfinite(h)) {
          throw Error(ErrorCode::kNonFiniteLoss,
                      "kge epoch " + std::to_string(epoch) + " subset " +
                          std::string(subset_name(ref.subset)) + " triple " +
                          std::to_string(ref.index));
        }
        if (h <= 0.0) continue;
        epoch_loss += h;
        for (const GradEntry &g : grad) {
          axpy(-cfg.learning_rate, g.grad, param_row(store, g.block, g.row));
        }
        for (const GradEntry &g : grad) constrain_row(store, g.block, g.row);
      }
    }
    if (trace) trace->epoch_hinge.push_back(epoch_loss);
  }
  return store;
}

Vector entity_knowledge_embedding(const KnowledgeGraph &kg, const EmbeddingStore &store,
                                  EntityId t) {
  const Entity &e = kg.entity(t);
  const std::uint32_t idx = kg.local_index(t);
  if (e.kind == EntityKind::kInstance) {
    if (idx >= store.instance_vecs.rows()) {
      throw Error(ErrorCode::kMissingEmbedding, "instance '" + e.surface + "'");
    }
    auto v = store.instance_vecs.row(idx);
    return Vector(v.begin(), v.end());
  }
  if (idx >= store.concept_centers.rows() || idx >= store.concept_node_vecs.rows()) {
    throw Error(ErrorCode::kMissingEmbedding, "concept '" + e.surface + "'");
  }
  auto p = store.concept_centers.row(idx);
  auto v = store.concept_node_vecs.row(idx);
  Vector out(p.size());
  for (std::size_t k = 0; k < p.size(); ++k) out[k] = (p[k] + v[k]) / 2.0;
  return out;
}

}  // namespace kgsyn
