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

#include "kgsyn/matcher.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include "kgsyn/error.h"

namespace kgsyn {

std::string_view fusion_mode_name(FusionMode mode) {
  switch (mode) {
    case FusionMode::kGate: return "gate";
    case FusionMode::kDirectAddition: return "direct_addition";
    case FusionMode::kFcFusion: return "fc_fusion";
    case FusionMode::kNoKnowledge: return "no_knowledge";
  }
  return "gate";
}

std::optional<FusionMode> parse_fusion_mode(std::string_view name) {
  for (auto m : {FusionMode::kGate, FusionMode::kDirectAddition, FusionMode::kFcFusion,
                 FusionMode::kNoKnowledge}) {
    if (fusion_mode_name(m) == name) return m;
  }
  return std::nullopt;
}

std::string_view gate_activation_name(GateActivation act) {
  return act == GateActivation::kSoftmax ? "softmax" : "sigmoid";
}

std::optional<GateActivation> parse_gate_activation(std::string_view name) {
  if (name == "softmax") return GateActivation::kSoftmax;
  if (name == "sigmoid") return GateActivation::kSigmoid;
  return std::nullopt;
}

Vector knowledge_transform(std::span<const double> e_t, const KnowledgeFc &fc) {
  return fc_forward(fc, e_t);
}

Vector transform_gate(std::span<const double> a, std::span<const double> b,
                      const GateParams &gp, GateCache *cache) {
  const std::size_t k = a.size();
  check_dims(b.size(), k, "gate inputs");
  check_dims(gp.wg.rows(), k, "gate rows");
  check_dims(gp.wg.cols(), 4 * k, "gate cols");
  Vector x(4 * k);
  for (std::size_t i = 0; i < k; ++i) {
    x[i] = a[i];
    x[k + i] = b[i];
    x[2 * k + i] = a[i] - b[i];
    x[3 * k + i] = a[i] * b[i];
  }
  Vector g = affine(gp.wg, x, {});
  if (gp.activation == GateActivation::kSoftmax) {
    const double mx = *std::max_element(g.begin(), g.end());
    double sum = 0.0;
    for (double &z : g) {
      z = std::exp(z - mx);
      sum += z;
    }
    for (double &z : g) z /= sum;
  } else {
    for (double &z : g) z = 1.0 / (1.0 + std::exp(-z));
  }
  if (cache) {
    cache->features = std::move(x);
    cache->gate = g;
  }
  return g;
}

void transform_gate_backward(const GateParams &gp, const GateCache &cache,
                             std::span<const double> a, std::span<const double> b,
                             std::span<const double> grad_gate, Matrix &grad_wg,
                             std::span<double> grad_a, std::span<double> grad_b) {
  const std::size_t k = a.size();
  const Vector &g = cache.gate;
  Vector grad_z(k);
  if (gp.activation == GateActivation::kSoftmax) {
    const double inner = dot(grad_gate, g);
    for (std::size_t i = 0; i < k; ++i) grad_z[i] = g[i] * (grad_gate[i] - inner);
  } else {
    for (std::size_t i = 0; i < k; ++i) grad_z[i] = grad_gate[i] * g[i] * (1.0 - g[i]);
  }
  add_outer(grad_wg, grad_z, cache.features);
  const Vector gx = transpose_times(gp.wg, grad_z);
  for (std::size_t i = 0; i < k; ++i) {
    grad_a[i] += gx[i] + gx[2 * k + i] + gx[3 * k + i] * b[i];
    grad_b[i] += gx[k + i] - gx[2 * k + i] + gx[3 * k + i] * a[i];
  }
}

Vector fuse(std::span<const double> e_s_t, std::span<const double> e_t_l,
            const FusionParams &params, FusionMode mode, FuseCache *cache) {
  const std::size_t k = e_s_t.size();
  Vector out;
  switch (mode) {
    case FusionMode::kNoKnowledge:
      out.assign(e_s_t.begin(), e_s_t.end());
      break;
    case FusionMode::kDirectAddition:
      check_dims(e_t_l.size(), k, "fuse inputs");
      out.resize(k);
      for (std::size_t i = 0; i < k; ++i) out[i] = e_s_t[i] + e_t_l[i];
      break;
    case FusionMode::kGate: {
      check_dims(e_t_l.size(), k, "fuse inputs");
      GateCache local;
      Vector g = transform_gate(e_s_t, e_t_l, params.gate, cache ? &cache->gate : &local);
      out.resize(k);
      for (std::size_t i = 0; i < k; ++i) out[i] = e_s_t[i] + e_t_l[i] * g[i];
      break;
    }
    case FusionMode::kFcFusion: {
      check_dims(e_t_l.size(), k, "fuse inputs");
      check_dims(params.wf.cols(), 2 * k, "fusion fc cols");
      Vector x(2 * k);
      std::copy(e_s_t.begin(), e_s_t.end(), x.begin());
      std::copy(e_t_l.begin(), e_t_l.end(), x.begin() + static_cast<std::ptrdiff_t>(k));
      out = affine(params.wf, x, {});
      for (double &v : out) v = std::tanh(v);
      break;
    }
  }
  if (cache) cache->output = out;
  return out;
}

void fuse_backward(std::span<const double> e_s_t, std::span<const double> e_t_l,
                   const FusionParams &params, FusionMode mode, const FuseCache &cache,
                   std::span<const double> grad_out, FusionParams &grads,
                   std::span<double> grad_s, std::span<double> grad_l) {
  const std::size_t k = e_s_t.size();
  switch (mode) {
    case FusionMode::kNoKnowledge:
      axpy(1.0, grad_out, grad_s);
      break;
    case FusionMode::kDirectAddition:
      axpy(1.0, grad_out, grad_s);
      axpy(1.0, grad_out, grad_l);
      break;
    case FusionMode::kGate: {
      const Vector &g = cache.gate.gate;
      Vector grad_gate(k);
      for (std::size_t i = 0; i < k; ++i) {
        grad_s[i] += grad_out[i];
        grad_l[i] += grad_out[i] * g[i];
        grad_gate[i] = grad_out[i] * e_t_l[i];
      }
      transform_gate_backward(params.gate, cache.gate, e_s_t, e_t_l, grad_gate,
                              grads.gate.wg, grad_s, grad_l);
      break;
    }
    case FusionMode::kFcFusion: {
      Vector u(k);
      for (std::size_t i = 0; i < k; ++i) {
        u[i] = grad_out[i] * (1.0 - cache.output[i] * cache.output[i]);
      }
      Vector x(2 * k);
      std::copy(e_s_t.begin(), e_s_t.end(), x.begin());
      std::copy(e_t_l.begin(), e_t_l.end(), x.begin() + static_cast<std::ptrdiff_t>(k));
      add_outer(grads.wf, u, x);
      const Vector gx = transpose_times(params.wf, u);
      for (std::size_t i = 0; i < k; ++i) {
        grad_s[i] += gx[i];
        grad_l[i] += gx[k + i];
      }
      break;
    }
  }
}

double score(std::span<const double> q_vec, std::span<const double> t_fused) {
  return dot(q_vec, t_fused);
}

double nce_loss(double pos, std::span<const double> negs) {
  if (negs.empty()) return 0.0;
  double mx = pos;
  for (double s : negs) mx = std::max(mx, s);
  double sum = std::exp(pos - mx);
  for (double s : negs) sum += std::exp(s - mx);
  return mx + std::log(sum) - pos;
}

NegativeDraw sample_negative_entities(std::span<const EntityId> universe,
                                      std::span<const EntityId> gold, std::size_t count,
                                      Rng &rng) {
  NegativeDraw draw;
  if (count == 0) return draw;
  std::unordered_set<EntityId> excluded(gold.begin(), gold.end());
  std::size_t eligible_count = 0;
  for (EntityId e : universe) eligible_count += excluded.count(e) ? 0 : 1;

  if (eligible_count < count || eligible_count < 2 * count) {
    std::vector<EntityId> eligible;
    eligible.reserve(eligible_count);
    for (EntityId e : universe) {
      if (!excluded.count(e)) eligible.push_back(e);
    }
    if (eligible.empty()) {
      draw.degenerate = true;
      return draw;
    }
    if (eligible.size() < count) {
      draw.degenerate = true;
      for (std::size_t i = 0; i < count; ++i) {
        draw.ids.push_back(eligible[rng.index(eligible.size())]);
      }
      return draw;
    }
    // Partial Fisher-Yates.
    for (std::size_t i = 0; i < count; ++i) {
      std::swap(eligible[i], eligible[i + rng.index(eligible.size() - i)]);
      draw.ids.push_back(eligible[i]);
    }
    return draw;
  }

  std::unordered_set<EntityId> taken;
  while (draw.ids.size() < count) {
    EntityId e = universe[rng.index(universe.size())];
    if (excluded.count(e) || !taken.insert(e).second) continue;
    draw.ids.push_back(e);
  }
  return draw;
}

namespace {

template <class Params, class Fn>
void for_each_tensor(Params &p, Fn &&fn) {
  fn(p.table.rows.values());
  fn(p.shared.w1.values());
  fn(std::span(p.shared.b1));
  fn(p.shared.w2.values());
  fn(std::span(p.shared.b2));
  fn(p.knowledge.w1.values());
  fn(std::span(p.knowledge.b1));
  fn(p.knowledge.w2.values());
  fn(std::span(p.knowledge.b2));
  fn(p.fusion.gate.wg.values());
  fn(p.fusion.wf.values());
}

}  // namespace

MatcherParams MatcherParams::zeros_like() const {
  MatcherParams z{SemanticTable{Matrix(table.rows.rows(), table.rows.cols())},
                  shared.zeros_like(), knowledge.zeros_like(),
                  FusionParams{GateParams{Matrix(fusion.gate.wg.rows(), fusion.gate.wg.cols()),
                                          fusion.gate.activation},
                               Matrix(fusion.wf.rows(), fusion.wf.cols())}};
  return z;
}

void MatcherParams::set_zero() {
  for_each_tensor(*this, [](std::span<double> t) { std::fill(t.begin(), t.end(), 0.0); });
}

void MatcherConfig::validate() const {
  if (dim == 0) throw Error(ErrorCode::kConfigError, "matcher dimension must be >= 1");
  if (batch_size == 0) throw Error(ErrorCode::kConfigError, "batch size must be >= 1");
  if (!(learning_rate > 0.0)) {
    throw Error(ErrorCode::kConfigError, "matcher learning rate must be positive");
  }
  if (!(dropout >= 0.0 && dropout < 1.0)) {
    throw Error(ErrorCode::kConfigError, "dropout must lie in [0, 1)");
  }
}

void refresh_entity_subwords(MatcherModel &model) {
  model.entity_subwords.clear();
  model.entity_subwords.reserve(model.entity_surfaces.size());
  for (const auto &s : model.entity_surfaces) {
    model.entity_subwords.push_back(model.vocab.encode(s));
  }
}

MatcherModel init_matcher(const KnowledgeGraph &kg, const EmbeddingStore *store,
                          SubwordVocab vocab, SemanticTable table, const MatcherConfig &cfg) {
  cfg.validate();
  if (!store && cfg.mode != FusionMode::kNoKnowledge) {
    throw Error(ErrorCode::kMissingEmbedding,
                "fusion mode " + std::string(fusion_mode_name(cfg.mode)) +
                    " needs knowledge embeddings");
  }
  check_dims(table.rows.rows(), vocab.size(), "semantic table rows vs vocabulary");
  const std::size_t k = cfg.dim;
  const std::size_t d = table.dim();
  const std::size_t n = store ? store->dim : 0;

  MatcherModel model;
  model.vocab = std::move(vocab);
  model.mode = cfg.mode;
  model.params.table = std::move(table);

  Rng shared_rng(derive_seed(cfg.seed, "shared-fc"));
  model.params.shared = init_fc(d, k, k, shared_rng);
  Rng knowledge_rng(derive_seed(cfg.seed, "knowledge-fc"));
  model.params.knowledge = init_fc(n, k, k, knowledge_rng);

  Rng fusion_rng(derive_seed(cfg.seed, "fusion"));
  auto xavier = [&fusion_rng](Matrix &m) {
    const double a = std::sqrt(6.0 / static_cast<double>(m.rows() + m.cols()));
    for (double &x : m.values()) x = fusion_rng.uniform(-a, a);
  };
  model.params.fusion.gate.wg = Matrix(k, 4 * k);
  model.params.fusion.gate.activation = cfg.gate_activation;
  model.params.fusion.wf = Matrix(k, 2 * k);
  xavier(model.params.fusion.gate.wg);
  xavier(model.params.fusion.wf);

  model.knowledge_vecs = Matrix(kg.entity_count(), n);
  model.entity_surfaces.reserve(kg.entity_count());
  for (std::uint32_t i = 0; i < kg.entity_count(); ++i) {
    model.entity_surfaces.push_back(kg.entities()[i].surface);
    if (store) {
      const Vector e = entity_knowledge_embedding(kg, *store, EntityId{i});
      std::copy(e.begin(), e.end(), model.knowledge_vecs.row(i).begin());
    }
  }
  refresh_entity_subwords(model);
  return model;
}

namespace {

void check_entity(const MatcherModel &model, EntityId t) {
  if (t.value >= model.entity_count()) {
    throw Error(ErrorCode::kUnknownEntity, "entity id " + std::to_string(t.value));
  }
}

}  // namespace

Vector encode_mention(std::string_view mention, const MatcherModel &model) {
  const auto ids = model.vocab.encode(mention);
  return semantic_encode(mean_rows(model.params.table, ids), model.params.shared);
}

Vector encode_entity(EntityId t, const MatcherModel &model) {
  check_entity(model, t);
  const auto &p = model.params;
  Vector e_s = semantic_encode(mean_rows(p.table, model.entity_subwords[t.value]), p.shared);
  if (model.mode == FusionMode::kNoKnowledge) return e_s;
  Vector e_l = knowledge_transform(model.knowledge_vecs.row(t.value), p.knowledge);
  return fuse(e_s, e_l, p.fusion, model.mode);
}

Matrix encode_all_entities(const MatcherModel &model) {
  const std::size_t k = model.params.shared.output_dim();
  Matrix out(model.entity_count(), k);
  for (std::uint32_t i = 0; i < model.entity_count(); ++i) {
    const Vector v = encode_entity(EntityId{i}, model);
    std::copy(v.begin(), v.end(), out.row(i).begin());
  }
  return out;
}

Scorer make_matcher_scorer(const MatcherModel &model) {
  Matrix entities = encode_all_entities(model);
  // The scorer reads `model`; it must outlive the returned function.
  return [&model, entities = std::move(entities)](std::string_view mention) {
    const Vector q = encode_mention(mention, model);
    std::vector<double> scores(entities.rows());
    for (std::size_t i = 0; i < entities.rows(); ++i) scores[i] = score(q, entities.row(i));
    return scores;
  };
}

namespace {

struct CandidateCache {
  EntityId id;
  FcCache semantic;
  FcCache knowledge;
  FuseCache fused;
  Vector e_s;
  Vector e_l;
  Vector f;
};

void scatter_mean_grad(std::span<const double> grad, std::span<const std::uint32_t> ids,
                       Matrix &table_grad) {
  const double inv = 1.0 / static_cast<double>(ids.size());
  for (std::uint32_t id : ids) axpy(inv, grad, table_grad.row(id));
}

}  // namespace

double example_loss(const MatcherModel &model, const Example &ex, const DropoutMasks &masks,
                    MatcherParams *grads) {
  const auto &p = model.params;
  const bool use_knowledge = model.mode != FusionMode::kNoKnowledge;
  const std::size_t k = p.shared.output_dim();

  FcCache q_cache;
  const Vector q = fc_forward(p.shared, mean_rows(p.table, ex.mention_ids), &q_cache,
                              masks.mention);

  std::vector<CandidateCache> cands(1 + ex.negatives.size());
  std::vector<double> scores(cands.size());
  for (std::size_t j = 0; j < cands.size(); ++j) {
    CandidateCache &c = cands[j];
    c.id = j == 0 ? ex.positive : ex.negatives[j - 1];
    check_entity(model, c.id);
    c.e_s = fc_forward(p.shared, mean_rows(p.table, model.entity_subwords[c.id.value]),
                       &c.semantic, masks.entity_shared);
    if (use_knowledge) {
      c.e_l = fc_forward(p.knowledge, model.knowledge_vecs.row(c.id.value), &c.knowledge,
                         masks.entity_knowledge);
    }
    c.f = fuse(c.e_s, c.e_l, p.fusion, model.mode, &c.fused);
    scores[j] = score(q, c.f);
  }
  const double loss = nce_loss(scores[0], std::span(scores).subspan(1));
  if (!grads || ex.negatives.empty()) return loss;

  // d loss / d score_j = softmax_j - [j == 0]
  const double mx = *std::max_element(scores.begin(), scores.end());
  double z = 0.0;
  std::vector<double> prob(scores.size());
  for (std::size_t j = 0; j < scores.size(); ++j) {
    prob[j] = std::exp(scores[j] - mx);
    z += prob[j];
  }
  Vector grad_q(k, 0.0);
  for (std::size_t j = 0; j < cands.size(); ++j) {
    const double ds = prob[j] / z - (j == 0 ? 1.0 : 0.0);
    if (ds == 0.0) continue;
    CandidateCache &c = cands[j];
    axpy(ds, c.f, grad_q);
    Vector grad_f(k);
    for (std::size_t i = 0; i < k; ++i) grad_f[i] = ds * q[i];
    Vector grad_s(k, 0.0);
    Vector grad_l(c.e_l.size(), 0.0);
    fuse_backward(c.e_s, c.e_l, p.fusion, model.mode, c.fused, grad_f, grads->fusion, grad_s,
                  grad_l);
    const Vector grad_e = fc_backward(p.shared, c.semantic, grad_s, grads->shared);
    scatter_mean_grad(grad_e, model.entity_subwords[c.id.value], grads->table.rows);
    if (use_knowledge) fc_backward(p.knowledge, c.knowledge, grad_l, grads->knowledge);
  }
  const Vector grad_eq = fc_backward(p.shared, q_cache, grad_q, grads->shared);
  scatter_mean_grad(grad_eq, ex.mention_ids, grads->table.rows);
  return loss;
}

AdamOptimizer::AdamOptimizer(const MatcherParams &shape, double learning_rate, double beta1,
                             double beta2, double epsilon)
    : lr_(learning_rate), beta1_(beta1), beta2_(beta2), eps_(epsilon) {
  for_each_tensor(shape, [this](std::span<const double> t) {
    m_.emplace_back(t.size(), 0.0);
    v_.emplace_back(t.size(), 0.0);
  });
}

void AdamOptimizer::step(MatcherParams &params, const MatcherParams &grads,
                         bool freeze_table) {
  ++t_;
  const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  std::vector<std::span<const double>> g;
  for_each_tensor(grads, [&g](std::span<const double> t) { g.push_back(t); });
  std::size_t slot = 0;
  for_each_tensor(params, [&](std::span<double> w) {
    const std::size_t s = slot++;
    if (s == 0 && freeze_table) return;
    Vector &m = m_[s];
    Vector &v = v_[s];
    const auto &gs = g[s];
    for (std::size_t i = 0; i < w.size(); ++i) {
      m[i] = beta1_ * m[i] + (1.0 - beta1_) * gs[i];
      v[i] = beta2_ * v[i] + (1.0 - beta2_) * gs[i] * gs[i];
      w[i] -= lr_ * (m[i] / c1) / (std::sqrt(v[i] / c2) + eps_);
    }
  });
}

namespace {

Vector draw_mask(std::size_t size, double rate, Rng &rng) {
  if (rate <= 0.0) return {};
  Vector mask(size);
  const double keep = 1.0 / (1.0 - rate);
  for (double &m : mask) m = rng.unit() < rate ? 0.0 : keep;
  return mask;
}

double dev_hits3(const MatcherModel &model, std::span<const Pair> dev,
                 const SynonymIndex &syn) {
  EvalOptions options;
  options.ks = {3};
  options.mode = model.vocab.mode();
  const auto report =
      evaluate(make_matcher_scorer(model), dev, syn, model.entity_surfaces, options);
  return report.ratio(CaseGroup::kAll, 0);
}

}  // namespace

MatcherModel train_matcher(MatcherModel model, const PairDataset &data,
                           const MatcherConfig &cfg, MatcherTrace *trace) {
  cfg.validate();
  const auto train = data.select(Split::kTrain);
  const auto dev = data.select(Split::kDev);
  if (train.empty()) throw Error(ErrorCode::kEmptySplit, "no training pairs");
  if (dev.empty()) throw Error(ErrorCode::kEmptySplit, "no dev pairs");
  const SynonymIndex syn = build_synonym_index(data, model.entity_count());

  std::vector<EntityId> universe(model.entity_count());
  for (std::uint32_t i = 0; i < universe.size(); ++i) universe[i] = EntityId{i};

  std::vector<std::vector<std::uint32_t>> mention_ids;
  mention_ids.reserve(train.size());
  for (const Pair &p : train) mention_ids.push_back(model.vocab.encode(p.mention));

  Rng shuffle_rng(derive_seed(cfg.seed, "shuffle"));
  Rng negative_rng(derive_seed(cfg.seed, "negatives"));
  Rng shared_drop_rng(derive_seed(cfg.seed, "dropout-shared"));
  Rng knowledge_drop_rng(derive_seed(cfg.seed, "dropout-knowledge"));
  const std::size_t k = model.params.shared.output_dim();
  const bool use_knowledge = model.mode != FusionMode::kNoKnowledge;

  MatcherTrace local;
  MatcherTrace &tr = trace ? *trace : local;
  tr = MatcherTrace{};

  double best = dev_hits3(model, dev, syn);
  tr.epochs.push_back({0, 0.0, best});
  MatcherParams best_params = model.params;

  AdamOptimizer adam(model.params, cfg.learning_rate);
  MatcherParams grads = model.params.zeros_like();
  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), 0);
  std::size_t since_best = 0;

  for (std::size_t epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    for (std::size_t i = order.size(); i > 1; --i) {
      std::swap(order[i - 1], order[shuffle_rng.index(i)]);
    }
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      const std::size_t end = std::min(order.size(), start + cfg.batch_size);
      grads.set_zero();
      double batch_loss = 0.0;
      for (std::size_t b = start; b < end; ++b) {
        const Pair &pair = train[order[b]];
        Example ex{mention_ids[order[b]], pair.entity, {}};
        NegativeDraw draw =
            sample_negative_entities(universe, syn.golds(pair.mention), cfg.negatives,
                                     negative_rng);
        tr.degenerate_negatives = tr.degenerate_negatives || draw.degenerate;
        ex.negatives = std::move(draw.ids);
        DropoutMasks masks{draw_mask(k, cfg.dropout, shared_drop_rng),
                           draw_mask(k, cfg.dropout, shared_drop_rng),
                           use_knowledge ? draw_mask(k, cfg.dropout, knowledge_drop_rng)
                                         : Vector{}};
        batch_loss += example_loss(model, ex, masks, &grads);
      }
      if (!std::isfinite(batch_loss)) {
        throw Error(ErrorCode::kNonFiniteLoss,
                    "matcher epoch " + std::to_string(epoch) + " batch at " +
                        std::to_string(start));
      }
      const double scale = 1.0 / static_cast<double>(end - start);
      for_each_tensor(grads, [scale](std::span<double> t) {
        for (double &x : t) x *= scale;
      });
      adam.step(model.params, grads, cfg.freeze_table);
      epoch_loss += batch_loss;
    }
    const double dev_score = dev_hits3(model, dev, syn);
    tr.epochs.push_back({epoch, epoch_loss, dev_score});
    if (dev_score > best) {
      best = dev_score;
      best_params = model.params;
      tr.best_epoch = epoch;
      since_best = 0;
    } else if (++since_best >= cfg.patience) {
      break;
    }
  }
  model.params = std::move(best_params);
  return model;
}

std::vector<std::pair<EntityId, double>> query_top_k(std::string_view mention, std::size_t k,
                                                     const MatcherModel &model,
                                                     std::span<const EntityId> candidates) {
  if (candidates.empty()) throw Error(ErrorCode::kEmptyCandidates, "no candidates to rank");
  if (k == 0) throw Error(ErrorCode::kConfigError, "k must be >= 1");
  const Vector q = encode_mention(mention, model);
  std::vector<std::pair<EntityId, double>> scored;
  scored.reserve(candidates.size());
  for (EntityId c : candidates) scored.emplace_back(c, score(q, encode_entity(c, model)));
  std::sort(scored.begin(), scored.end(), [](const auto &a, const auto &b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  if (scored.size() > k) scored.resize(k);
  return scored;
}

}  // namespace kgsyn
