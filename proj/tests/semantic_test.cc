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

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "fixtures.h"
#include "kgsyn/random.h"
#include "kgsyn/semantic.h"
#include "oracles.h"

using namespace kgsyn;
using V = std::vector<double>;

namespace {

SemanticTable table_of(std::initializer_list<V> rows) {
  SemanticTable t{Matrix(rows.size(), rows.begin()->size())};
  std::size_t r = 0;
  for (const V &row : rows) {
    std::copy(row.begin(), row.end(), t.rows.row(r++).begin());
  }
  return t;
}

TwoLayerFc scalar_fc() { return {Matrix(1, 1, 1.0), V{0.0}, Matrix(1, 1, 1.0), V{0.0}}; }

double cosine(std::span<const double> a, std::span<const double> b) {
  return dot(a, b) / (l2_norm(a) * l2_norm(b));
}

}  // namespace

TEST_CASE("semantic embedding averages subword rows") {
  std::vector<std::string> surfaces = {"xy"};
  const auto vocab = build_vocab(surfaces, TokenizerMode::kUnicodeChar);  // <oov>, x, y
  const auto table = table_of({V{9, 9}, V{1, 0}, V{0, 1}});
  CHECK(semantic_embedding("x", table, vocab) == V{1, 0});
  CHECK(semantic_embedding("xy", table, vocab) == V{0.5, 0.5});
  CHECK(semantic_embedding("yx", table, vocab) == semantic_embedding("xy", table, vocab));
  CHECK(semantic_embedding("qrs", table, vocab) == V{9, 9});
  CHECK(fixture::thrown([&] { semantic_embedding(" ", table, vocab); }) == ErrorCode::kEmptySurface);
}

TEST_CASE("semantic_encode closed forms") {
  TwoLayerFc zero{Matrix(3, 2), V(3, 0.0), Matrix(3, 3), V(3, 0.0)};
  CHECK(semantic_encode(V{0.3, -2.0}, zero) == V{0, 0, 0});

  TwoLayerFc id{Matrix(2, 2), V(2, 0.0), Matrix(2, 2), V(2, 0.0)};
  id.w1(0, 0) = id.w1(1, 1) = id.w2(0, 0) = id.w2(1, 1) = 1.0;
  CHECK(semantic_encode(V{0, 0}, id) == V{0, 0});

  CHECK(semantic_encode(V{1.0}, scalar_fc())[0] == std::tanh(std::tanh(1.0)));
  CHECK(fixture::thrown([&] { semantic_encode(V{1, 2}, scalar_fc()); }) ==
        ErrorCode::kDimensionMismatch);
}

TEST_CASE("semantic_encode stays strictly inside (-1, 1)") {
  std::mt19937_64 gen(8);
  Rng rng(1);
  const auto fc = init_fc(6, 5, 4, rng);
  for (int i = 0; i < 500; ++i) {
    for (double x : semantic_encode(oracle::random_vec(gen, 6, -5, 5), fc)) {
      CHECK(x > -1.0);
      CHECK(x < 1.0);
    }
  }
}

TEST_CASE("two-layer FC gradients match central differences") {
  std::mt19937_64 gen(21);
  oracle::GradStats stats;
  for (int probe = 0; probe < 100; ++probe) {
    Rng rng(gen());
    TwoLayerFc fc = init_fc(5, 4, 3, rng);
    oracle::randomize(gen, fc.b1);
    oracle::randomize(gen, fc.b2);
    V x = oracle::random_vec(gen, 5);
    const V c = oracle::random_vec(gen, 3);
    V mask;
    if (probe % 2) {
      mask.assign(4, 0.0);
      for (double &m : mask) m = (gen() & 1) ? 2.0 : 0.0;
    }
    auto f = [&] { return dot(c, fc_forward(fc, x, nullptr, mask)); };
    FcCache cache;
    fc_forward(fc, x, &cache, mask);
    TwoLayerFc grads = fc.zeros_like();
    const V dx = fc_backward(fc, cache, c, grads);
    stats.merge(oracle::check_coords(f, x, dx));
    stats.merge(oracle::check_coords(f, fc.w1.values(), grads.w1.values()));
    stats.merge(oracle::check_coords(f, fc.b1, grads.b1));
    stats.merge(oracle::check_coords(f, fc.w2.values(), grads.w2.values()));
    stats.merge(oracle::check_coords(f, fc.b2, grads.b2));
  }
  INFO("worst relative error " << stats.worst);
  CHECK(stats.failed == 0);
}

TEST_CASE("skip-gram: zero epochs is the seeded init") {
  std::vector<std::vector<std::uint32_t>> corpus = {{1, 2, 1}};
  SkipGramConfig cfg;
  cfg.dim = 4;
  cfg.epochs = 0;
  cfg.seed = 5;
  CHECK(pretrain_subword_embeddings(corpus, 3, cfg) == init_semantic_table(3, 4, 5));
}

TEST_CASE("skip-gram pulls co-occurring subwords together") {
  std::vector<std::string> lines;
  for (int i = 0; i < 50; ++i) {
    lines.push_back("ab");
    lines.push_back("cc");
  }
  const auto vocab = build_vocab(lines, TokenizerMode::kUnicodeChar);
  const auto corpus = encode_corpus(lines, vocab);
  SkipGramConfig cfg;
  cfg.dim = 16;
  cfg.window = 2;
  cfg.epochs = 100;
  cfg.seed = 3;
  const auto t = pretrain_subword_embeddings(corpus, vocab.size(), cfg);
  const auto a = t.rows.row(vocab.lookup("a"));
  const auto b = t.rows.row(vocab.lookup("b"));
  const auto c = t.rows.row(vocab.lookup("c"));
  CHECK(cosine(a, b) > cosine(a, c));
  CHECK(pretrain_subword_embeddings(corpus, vocab.size(), cfg) == t);
}

TEST_CASE("skip-gram rejects an empty corpus") {
  std::vector<std::vector<std::uint32_t>> none;
  CHECK(fixture::thrown([&] { pretrain_subword_embeddings(none, 3, SkipGramConfig{}); }) ==
        ErrorCode::kEmptyCorpus);
}

TEST_CASE("table init is bounded and seeded") {
  const auto t = init_semantic_table(10, 25, 2);
  for (double x : t.rows.values()) CHECK(std::abs(x) <= 1.0 / 5.0);
  CHECK(init_semantic_table(10, 25, 2) == t);
  CHECK(init_semantic_table(10, 25, 3) != t);
}
