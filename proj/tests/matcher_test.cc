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

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <vector>

#include "doctest.h"
#include "fixtures.h"
#include "kgsyn/matcher.h"
#include "kgsyn/pipeline.h"
#include "kgsyn/random.h"
#include "kgsyn/synthetic.h"
#include "oracles.h"

using namespace kgsyn;
using V = std::vector<double>;

namespace {

GateParams zero_gate(std::size_t k) { return {Matrix(k, 4 * k), GateActivation::kSoftmax}; }

std::vector<EntityId> all_ids(std::size_t n) {
  std::vector<EntityId> out(n);
  for (std::uint32_t i = 0; i < n; ++i) out[i] = EntityId{i};
  return out;
}

}  // namespace

TEST_CASE("knowledge transform closed forms") {
  TwoLayerFc zero{Matrix(2, 3), V(2, 0.0), Matrix(2, 2), V(2, 0.0)};
  CHECK(knowledge_transform(V{1, 2, 3}, zero) == V{0, 0});
  TwoLayerFc one{Matrix(1, 1, 1.0), V{0.0}, Matrix(1, 1, 1.0), V{0.0}};
  CHECK(knowledge_transform(V{0.0}, one) == V{0.0});
  CHECK(knowledge_transform(V{1.0}, one)[0] == doctest::Approx(std::tanh(std::tanh(1.0))).epsilon(1e-15));
}

TEST_CASE("transform gate examples") {
  const V g0 = transform_gate(V{0.3, -1, 2}, V{1, 1, 1}, zero_gate(3));
  for (double x : g0) CHECK(x == doctest::Approx(1.0 / 3.0).epsilon(1e-15));

  // Row 0 reads a[0] with weight ln 3, row 1 reads nothing: logits (ln 3, 0).
  GateParams gp = zero_gate(2);
  gp.wg(0, 0) = std::log(3.0);
  const V g = transform_gate(V{1, 0}, V{0, 0}, gp);
  CHECK(g[0] == doctest::Approx(0.75).epsilon(1e-14));
  CHECK(g[1] == doctest::Approx(0.25).epsilon(1e-14));

  CHECK(fixture::thrown([&] { transform_gate(V{1}, V{1, 2}, gp); }) == ErrorCode::kDimensionMismatch);
}

TEST_CASE("softmax gate lies in the simplex, sigmoid gate in (0, 1)") {
  std::mt19937_64 gen(2);
  for (int i = 0; i < 1000; ++i) {
    GateParams gp{Matrix(5, 20), GateActivation::kSoftmax};
    oracle::randomize(gen, gp.wg.values(), -3, 3);
    const V a = oracle::random_vec(gen, 5, -2, 2), b = oracle::random_vec(gen, 5, -2, 2);
    const V g = transform_gate(a, b, gp);
    double sum = 0.0;
    for (double x : g) {
      CHECK(x > 0.0);
      sum += x;
    }
    CHECK(std::abs(sum - 1.0) <= 1e-12);
    // Small weights keep the logits where a double sigmoid has not rounded to 1.
    gp.activation = GateActivation::kSigmoid;
    oracle::randomize(gen, gp.wg.values(), -0.5, 0.5);
    for (double x : transform_gate(a, b, gp)) {
      CHECK(x > 0.0);
      CHECK(x < 1.0);
    }
  }
}

TEST_CASE("fuse examples") {
  FusionParams fp{zero_gate(2), Matrix(2, 4)};
  CHECK(fuse(V{1, 1}, V{2, 4}, fp, FusionMode::kGate) == V{2, 3});
  CHECK(fuse(V{1, 1}, V{2, 4}, fp, FusionMode::kNoKnowledge) == V{1, 1});
  CHECK(fuse(V{1, 1}, V{2, 4}, fp, FusionMode::kDirectAddition) == V{3, 5});
  CHECK(fuse(V{1, 1}, V{2, 4}, fp, FusionMode::kFcFusion) == V{0, 0});

  std::mt19937_64 gen(4);
  for (int i = 0; i < 100; ++i) {
    FusionParams r{{Matrix(3, 12), GateActivation::kSoftmax}, Matrix(3, 6)};
    oracle::randomize(gen, r.gate.wg.values());
    const V es = oracle::random_vec(gen, 3);
    CHECK(fuse(es, V(3, 0.0), r, FusionMode::kGate) == es);
  }
}

TEST_CASE("score and NCE closed forms") {
  CHECK(score(V{1, 0}, V{0, 1}) == 0.0);
  CHECK(score(V{1, 2}, V{3, 4}) == 11.0);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      V a(3, 0.0), b(3, 0.0);
      a[i] = b[j] = 1.0;
      CHECK(score(a, b) == (i == j ? 1.0 : 0.0));
    }
  }
  CHECK(nce_loss(3.0, {}) == 0.0);
  CHECK(std::abs(nce_loss(0.7, V{0.7}) - std::log(2.0)) <= 1e-12);
  CHECK(nce_loss(1.0, V{0.0}) == doctest::Approx(0.313262).epsilon(1e-6));
  CHECK(std::isfinite(nce_loss(1000.0, V{-1000.0, 999.0})));

  std::mt19937_64 gen(6);
  for (int i = 0; i < 200; ++i) {
    const V negs = oracle::random_vec(gen, 4, -3, 3);
    const double pos = oracle::random_vec(gen, 1, -3, 3)[0];
    CHECK(nce_loss(pos, negs) > 0.0);
    CHECK(nce_loss(pos + 0.5, negs) < nce_loss(pos, negs));
  }
}

TEST_CASE("gate and fuse gradients match central differences") {
  std::mt19937_64 gen(31);
  oracle::GradStats stats;
  for (int probe = 0; probe < 100; ++probe) {
    const std::size_t k = 3;
    for (auto act : {GateActivation::kSoftmax, GateActivation::kSigmoid}) {
      GateParams gp{Matrix(k, 4 * k), act};
      oracle::randomize(gen, gp.wg.values());
      V a = oracle::random_vec(gen, k), b = oracle::random_vec(gen, k);
      const V c = oracle::random_vec(gen, k);
      GateCache cache;
      transform_gate(a, b, gp, &cache);
      Matrix gw(k, 4 * k);
      V ga(k, 0.0), gb(k, 0.0);
      transform_gate_backward(gp, cache, a, b, c, gw, ga, gb);
      auto f = [&] { return dot(c, transform_gate(a, b, gp)); };
      stats.merge(oracle::check_coords(f, gp.wg.values(), gw.values()));
      stats.merge(oracle::check_coords(f, a, ga));
      stats.merge(oracle::check_coords(f, b, gb));
    }
    for (auto mode : {FusionMode::kGate, FusionMode::kDirectAddition, FusionMode::kFcFusion,
                      FusionMode::kNoKnowledge}) {
      FusionParams fp{{Matrix(k, 4 * k), GateActivation::kSoftmax}, Matrix(k, 2 * k)};
      oracle::randomize(gen, fp.gate.wg.values());
      oracle::randomize(gen, fp.wf.values());
      V es = oracle::random_vec(gen, k), el = oracle::random_vec(gen, k);
      const V c = oracle::random_vec(gen, k);
      FuseCache cache;
      fuse(es, el, fp, mode, &cache);
      FusionParams grads{{Matrix(k, 4 * k), fp.gate.activation}, Matrix(k, 2 * k)};
      V gs(k, 0.0), gl(k, 0.0);
      fuse_backward(es, el, fp, mode, cache, c, grads, gs, gl);
      auto f = [&] { return dot(c, fuse(es, el, fp, mode)); };
      stats.merge(oracle::check_coords(f, es, gs));
      stats.merge(oracle::check_coords(f, el, gl));
      stats.merge(oracle::check_coords(f, fp.gate.wg.values(), grads.gate.wg.values()));
      stats.merge(oracle::check_coords(f, fp.wf.values(), grads.wf.values()));
    }
  }
  INFO("worst relative error " << stats.worst);
  CHECK(stats.failed == 0);
}

TEST_CASE("full NCE gradient matches central differences for every tensor") {
  std::mt19937_64 gen(47);
  for (auto mode : {FusionMode::kGate, FusionMode::kDirectAddition, FusionMode::kFcFusion,
                    FusionMode::kNoKnowledge}) {
    for (auto act : {GateActivation::kSoftmax, GateActivation::kSigmoid}) {
      MatcherModel model = fixture::random_model(gen, mode, 4, 6, 5, act);
      const Example ex{model.vocab.encode("burns"), EntityId{3}, {EntityId{0}, EntityId{5}, EntityId{7}}};
      MatcherParams grads = model.params.zeros_like();
      example_loss(model, ex, {}, &grads);
      auto f = [&] { return example_loss(model, ex, {}, nullptr); };
      auto params = fixture::tensors(model.params);
      auto analytic = fixture::tensors(grads);
      for (std::size_t t = 0; t < params.size(); ++t) {
        const auto stats = oracle::check_coords(f, params[t].second, analytic[t].second);
        INFO(fusion_mode_name(mode) << " " << params[t].first << " worst " << stats.worst);
        CHECK(stats.failed == 0);
      }
    }
  }
}

TEST_CASE("dropout masks enter the gradient consistently") {
  std::mt19937_64 gen(48);
  MatcherModel model = fixture::random_model(gen, FusionMode::kGate, 4, 6, 5);
  const Example ex{model.vocab.encode("rash"), EntityId{5}, {EntityId{1}, EntityId{4}}};
  const DropoutMasks masks{V{2, 0, 2, 2}, V{0, 2, 2, 0}, V{2, 2, 0, 2}};
  MatcherParams grads = model.params.zeros_like();
  example_loss(model, ex, masks, &grads);
  auto f = [&] { return example_loss(model, ex, masks, nullptr); };
  auto params = fixture::tensors(model.params);
  auto analytic = fixture::tensors(grads);
  for (std::size_t t = 0; t < params.size(); ++t) {
    CHECK(oracle::check_coords(f, params[t].second, analytic[t].second).failed == 0);
  }
}

TEST_CASE("negative entity sampling") {
  const auto universe = all_ids(3);
  Rng rng(1);
  for (int i = 0; i < 100; ++i) {
    const auto d = sample_negative_entities(universe, std::vector<EntityId>{EntityId{0}}, 2, rng);
    CHECK(!d.degenerate);
    CHECK(std::set<EntityId>(d.ids.begin(), d.ids.end()) ==
          std::set<EntityId>{EntityId{1}, EntityId{2}});
  }
  CHECK(sample_negative_entities(universe, {}, 0, rng).ids.empty());

  const auto big = all_ids(100);
  const std::vector<EntityId> gold = {EntityId{4}, EntityId{9}};
  Rng r1(5), r2(5);
  for (int i = 0; i < 50; ++i) {
    const auto a = sample_negative_entities(big, gold, 10, r1);
    CHECK(a.ids == sample_negative_entities(big, gold, 10, r2).ids);
    CHECK(std::set<EntityId>(a.ids.begin(), a.ids.end()).size() == 10);
    for (EntityId e : a.ids) CHECK((e != gold[0] && e != gold[1]));
  }

  const auto tight = sample_negative_entities(universe, std::vector<EntityId>{EntityId{0}}, 5, rng);
  CHECK(tight.degenerate);
  CHECK(tight.ids.size() == 5);
}

TEST_CASE("entity encoding follows the fusion mode") {
  std::mt19937_64 gen(9);
  MatcherModel model = fixture::random_model(gen, FusionMode::kNoKnowledge, 4, 6, 5);
  const auto &p = model.params;
  for (std::uint32_t e = 0; e < model.entity_count(); ++e) {
    const V expect = semantic_encode(
        semantic_embedding(model.entity_surfaces[e], p.table, model.vocab), p.shared);
    CHECK(encode_entity(EntityId{e}, model) == expect);
    // Shared weights: the same text encodes identically on both sides.
    CHECK(encode_mention(model.entity_surfaces[e], model) == expect);
  }

  model.mode = FusionMode::kGate;
  model.params.knowledge.w2.fill(0.0);
  model.params.knowledge.b2.assign(4, 0.0);
  for (std::uint32_t e = 0; e < model.entity_count(); ++e) {
    const V e_s = semantic_encode(
        semantic_embedding(model.entity_surfaces[e], p.table, model.vocab), p.shared);
    CHECK(encode_entity(EntityId{e}, model) == e_s);
    CHECK(encode_entity(EntityId{e}, model) == encode_entity(EntityId{e}, model));
  }
  CHECK(fixture::thrown([&] { encode_entity(EntityId{99}, model); }) == ErrorCode::kUnknownEntity);
}

TEST_CASE("init_matcher needs knowledge unless the mode ignores it") {
  const auto kg = fixture::tiny_graph();
  const auto surfaces = fixture::surfaces_of(kg);
  auto vocab = build_vocab(surfaces, TokenizerMode::kUnicodeChar);
  auto table = init_semantic_table(vocab.size(), 4, 0);
  MatcherConfig cfg;
  cfg.dim = 3;
  CHECK(fixture::thrown([&] { init_matcher(kg, nullptr, vocab, table, cfg); }) ==
        ErrorCode::kMissingEmbedding);
  cfg.mode = FusionMode::kNoKnowledge;
  const auto m = init_matcher(kg, nullptr, vocab, table, cfg);
  CHECK(m.entity_count() == kg.entity_count());
}

TEST_CASE("query_top_k: full ranking, ties by id, permutation invariance") {
  std::mt19937_64 gen(12);
  MatcherModel model = fixture::random_model(gen, FusionMode::kGate, 4, 6, 5);
  // Entities 2 and 6 become indistinguishable.
  model.entity_surfaces[6] = model.entity_surfaces[2];
  refresh_entity_subwords(model);
  std::copy(model.knowledge_vecs.row(2).begin(), model.knowledge_vecs.row(2).end(),
            model.knowledge_vecs.row(6).begin());

  auto cands = all_ids(model.entity_count());
  const auto full = query_top_k("eczema", 100, model, cands);
  CHECK(full.size() == cands.size());
  for (std::size_t i = 0; i + 1 < full.size(); ++i) CHECK(full[i].second >= full[i + 1].second);
  for (std::size_t i = 0; i + 1 < full.size(); ++i) {
    if (full[i].first == EntityId{2}) CHECK(full[i + 1].first == EntityId{6});
  }
  for (int trial = 0; trial < 20; ++trial) {
    std::shuffle(cands.begin(), cands.end(), gen);
    CHECK(query_top_k("eczema", 4, model, cands) ==
          std::vector<std::pair<EntityId, double>>(full.begin(), full.begin() + 4));
  }
  CHECK(fixture::thrown([&] { query_top_k("x", 3, model, {}); }) == ErrorCode::kEmptyCandidates);
}

TEST_CASE("Adam first step moves each weight by about lr against its gradient") {
  std::mt19937_64 gen(3);
  MatcherModel model = fixture::random_model(gen, FusionMode::kGate, 2, 3, 2);
  MatcherParams before = model.params;
  MatcherParams grads = model.params.zeros_like();
  auto gt = fixture::tensors(grads);
  for (auto &[name, t] : gt) oracle::randomize(gen, t, -2, 2);
  AdamOptimizer adam(model.params, 0.01);
  adam.step(model.params, grads, false);
  auto after = fixture::tensors(model.params);
  auto prev = fixture::tensors(before);
  for (std::size_t t = 0; t < after.size(); ++t) {
    for (std::size_t i = 0; i < after[t].second.size(); ++i) {
      const double g = gt[t].second[i];
      const double expect = prev[t].second[i] - 0.01 * g / (std::abs(g) + 1e-8);
      CHECK(after[t].second[i] == doctest::Approx(expect).epsilon(1e-12));
    }
  }
  MatcherModel frozen = fixture::random_model(gen, FusionMode::kGate, 2, 3, 2);
  const auto table = frozen.params.table;
  AdamOptimizer adam2(frozen.params, 0.01);
  adam2.step(frozen.params, grads, true);
  CHECK(frozen.params.table == table);
}

TEST_CASE("train_matcher with no negatives has zero loss and stays finite") {
  const auto kg = fixture::tiny_graph();
  const auto surfaces = fixture::surfaces_of(kg);
  PairDataset data{{{"burnt", *kg.find_entity("burn"), Split::kTrain},
                    {"creme", *kg.find_entity("cream"), Split::kDev}}};
  auto vocab = build_vocab(surfaces, TokenizerMode::kLetterTrigram);
  const EmbeddingStore store = init_store(kg, 4, 0);
  MatcherConfig cfg;
  cfg.dim = 4;
  cfg.negatives = 0;
  cfg.max_epochs = 3;
  cfg.patience = 5;
  MatcherTrace trace;
  const auto model = train_matcher(
      init_matcher(kg, &store, vocab, init_semantic_table(vocab.size(), 4, 0), cfg), data, cfg,
      &trace);
  REQUIRE(trace.epochs.size() == 4);
  for (const auto &e : trace.epochs) CHECK(e.train_loss == 0.0);
  MatcherModel copy = model;
  for (auto &[name, t] : fixture::tensors(copy.params)) CHECK(all_finite(t));
}

TEST_CASE("train_matcher needs train and dev pairs") {
  const auto kg = fixture::tiny_graph();
  const auto surfaces = fixture::surfaces_of(kg);
  auto vocab = build_vocab(surfaces, TokenizerMode::kUnicodeChar);
  MatcherConfig cfg;
  cfg.dim = 3;
  cfg.mode = FusionMode::kNoKnowledge;
  auto model = init_matcher(kg, nullptr, vocab, init_semantic_table(vocab.size(), 3, 0), cfg);
  PairDataset only_train{{{"burn", EntityId{3}, Split::kTrain}}};
  CHECK(fixture::thrown([&] { train_matcher(model, only_train, cfg); }) == ErrorCode::kEmptySplit);
  PairDataset only_dev{{{"burn", EntityId{3}, Split::kDev}}};
  CHECK(fixture::thrown([&] { train_matcher(model, only_dev, cfg); }) == ErrorCode::kEmptySplit);
}

TEST_CASE("training on synthetic data improves dev hits@3 and is repeatable") {
  SyntheticSpec spec;
  spec.depth = 2;
  spec.branching = 3;
  spec.instances_per_leaf = 4;
  spec.seed = 42;
  const DataBundle bundle = bundle_from_synthetic(generate_synthetic(spec));
  KgeConfig kc;
  kc.dim = 8;
  kc.epochs = 30;
  kc.seed = 42;
  const EmbeddingStore store = train_kge(bundle.kg, kc);
  const auto vocab = build_bundle_vocab(bundle, TokenizerMode::kUnicodeChar);
  const auto table = init_semantic_table(vocab.size(), 16, 42);
  MatcherConfig cfg;
  cfg.dim = 16;
  cfg.negatives = 10;
  cfg.max_epochs = 30;
  cfg.seed = 42;
  cfg.learning_rate = 0.01;
  MatcherTrace t1, t2;
  const auto m1 = train_model(bundle, &store, vocab, table, cfg, &t1);
  const auto m2 = train_model(bundle, &store, vocab, table, cfg, &t2);
  CHECK(t1.epochs[t1.best_epoch].dev_hits3 >= t1.epochs[0].dev_hits3);
  CHECK(t1 == t2);
  CHECK(m1 == m2);
}
