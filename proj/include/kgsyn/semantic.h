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

#ifndef KGSYN_SEMANTIC_H_
#define KGSYN_SEMANTIC_H_

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "kgsyn/random.h"
#include "kgsyn/tensor.h"
#include "kgsyn/tokenizer.h"

namespace kgsyn {

// Learnable subword embeddings, one row per vocabulary index.
struct SemanticTable {
  Matrix rows;  // |V| x d

  std::size_t dim() const { return rows.cols(); }
  bool operator==(const SemanticTable &) const = default;
};

// tanh(W2 tanh(W1 x + b1) + b2). Used for both the shared semantic FC and the
// knowledge FC.
struct TwoLayerFc {
  Matrix w1;
  Vector b1;
  Matrix w2;
  Vector b2;

  std::size_t input_dim() const { return w1.cols(); }
  std::size_t output_dim() const { return w2.rows(); }

  // Zero-valued parameters of the same shapes.
  TwoLayerFc zeros_like() const;

  bool operator==(const TwoLayerFc &) const = default;
};

using SharedFc = TwoLayerFc;
using KnowledgeFc = TwoLayerFc;

// Xavier-uniform weights, zero biases.
TwoLayerFc init_fc(std::size_t input_dim, std::size_t hidden_dim, std::size_t output_dim,
                   Rng &rng);

struct FcCache {
  Vector input;
  Vector hidden;  // after tanh and dropout mask
  Vector mask;    // empty when no dropout applied
  Vector hidden_raw;
  Vector output;
};

// Forward pass. `mask` scales hidden units elementwise (inverted dropout);
// pass an empty span for evaluation.
Vector fc_forward(const TwoLayerFc &fc, std::span<const double> x, FcCache *cache = nullptr,
                  std::span<const double> mask = {});

// Accumulates parameter gradients into `grads` and returns d/dx.
Vector fc_backward(const TwoLayerFc &fc, const FcCache &cache,
                   std::span<const double> grad_out, TwoLayerFc &grads);

// Random table, rows uniform in [-1/sqrt(d), 1/sqrt(d)].
SemanticTable init_semantic_table(std::size_t vocab_size, std::size_t dim,
                                  std::uint64_t seed);

// Mean of the rows indexed by `ids`; throws kEmptySurface for no ids.
Vector mean_rows(const SemanticTable &table, std::span<const std::uint32_t> ids);

// Average of the subword rows of a surface; unseen subwords use the OOV row.
Vector semantic_embedding(std::string_view surface, const SemanticTable &table,
                          const SubwordVocab &vocab);

Vector semantic_encode(std::span<const double> e_v, const SharedFc &fc);

struct SkipGramConfig {
  std::size_t dim = 500;
  std::size_t window = 5;
  std::size_t negatives = 5;
  double learning_rate = 0.025;
  std::size_t epochs = 5;
  std::uint64_t seed = 0;
};

// Skip-gram with negative sampling over subword sequences. Starts from
// init_semantic_table(vocab_size, cfg.dim, cfg.seed). OOV ids are skipped.
SemanticTable pretrain_subword_embeddings(std::span<const std::vector<std::uint32_t>> corpus,
                                          std::size_t vocab_size, const SkipGramConfig &cfg);

// Encodes corpus lines into subword id sequences.
std::vector<std::vector<std::uint32_t>> encode_corpus(std::span<const std::string> lines,
                                                      const SubwordVocab &vocab);

}  // namespace kgsyn

#endif  // KGSYN_SEMANTIC_H_
