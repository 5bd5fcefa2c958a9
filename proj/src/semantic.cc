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

#include "kgsyn/semantic.h"

#include <algorithm>
#include <cmath>

#include "kgsyn/error.h"

namespace kgsyn {

TwoLayerFc TwoLayerFc::zeros_like() const {
  return {Matrix(w1.rows(), w1.cols()), Vector(b1.size(), 0.0), Matrix(w2.rows(), w2.cols()),
          Vector(b2.size(), 0.0)};
}

TwoLayerFc init_fc(std::size_t input_dim, std::size_t hidden_dim, std::size_t output_dim,
                   Rng &rng) {
  TwoLayerFc fc{Matrix(hidden_dim, input_dim), Vector(hidden_dim, 0.0),
                Matrix(output_dim, hidden_dim), Vector(output_dim, 0.0)};
  auto xavier = [&rng](Matrix &m) {
    const double a = std::sqrt(6.0 / static_cast<double>(m.rows() + m.cols()));
    for (double &x : m.values()) x = rng.uniform(-a, a);
  };
  xavier(fc.w1);
  xavier(fc.w2);
  return fc;
}

Vector fc_forward(const TwoLayerFc &fc, std::span<const double> x, FcCache *cache,
                  std::span<const double> mask) {
  check_dims(x.size(), fc.input_dim(), "fc input");
  Vector hidden = affine(fc.w1, x, fc.b1);
  for (double &h : hidden) h = std::tanh(h);
  Vector hidden_raw;
  if (!mask.empty()) {
    check_dims(mask.size(), hidden.size(), "dropout mask");
    if (cache) hidden_raw = hidden;
    for (std::size_t i = 0; i < hidden.size(); ++i) hidden[i] *= mask[i];
  }
  Vector out = affine(fc.w2, hidden, fc.b2);
  for (double &o : out) o = std::tanh(o);
  if (cache) {
    cache->input.assign(x.begin(), x.end());
    cache->mask.assign(mask.begin(), mask.end());
    cache->hidden_raw = mask.empty() ? hidden : std::move(hidden_raw);
    cache->hidden = std::move(hidden);
    cache->output = out;
  }
  return out;
}

Vector fc_backward(const TwoLayerFc &fc, const FcCache &cache,
                   std::span<const double> grad_out, TwoLayerFc &grads) {
  check_dims(grad_out.size(), fc.output_dim(), "fc grad");
  Vector g_out(grad_out.size());
  for (std::size_t i = 0; i < g_out.size(); ++i) {
    g_out[i] = grad_out[i] * (1.0 - cache.output[i] * cache.output[i]);
  }
  add_outer(grads.w2, g_out, cache.hidden);
  axpy(1.0, g_out, grads.b2);
  Vector g_hidden = transpose_times(fc.w2, g_out);
  for (std::size_t i = 0; i < g_hidden.size(); ++i) {
    if (!cache.mask.empty()) g_hidden[i] *= cache.mask[i];
    const double h = cache.hidden_raw[i];
    g_hidden[i] *= 1.0 - h * h;
  }
  add_outer(grads.w1, g_hidden, cache.input);
  axpy(1.0, g_hidden, grads.b1);
  return transpose_times(fc.w1, g_hidden);
}

SemanticTable init_semantic_table(std::size_t vocab_size, std::size_t dim,
                                  std::uint64_t seed) {
  if (dim == 0) throw Error(ErrorCode::kConfigError, "semantic dimension must be >= 1");
  Rng rng(derive_seed(seed, "semantic-table"));
  SemanticTable table{Matrix(vocab_size, dim)};
  const double a = 1.0 / std::sqrt(static_cast<double>(dim));
  for (double &x : table.rows.values()) x = rng.uniform(-a, a);
  return table;
}

Vector mean_rows(const SemanticTable &table, std::span<const std::uint32_t> ids) {
  if (ids.empty()) throw Error(ErrorCode::kEmptySurface, "no subwords to average");
  Vector out(table.dim(), 0.0);
  for (std::uint32_t id : ids) {
    if (id >= table.rows.rows()) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "subword " + std::to_string(id) + " outside table");
    }
    axpy(1.0, table.rows.row(id), out);
  }
  const double inv = 1.0 / static_cast<double>(ids.size());
  for (double &x : out) x *= inv;
  return out;
}

Vector semantic_embedding(std::string_view surface, const SemanticTable &table,
                          const SubwordVocab &vocab) {
  const auto ids = vocab.encode(surface);
  return mean_rows(table, ids);
}

Vector semantic_encode(std::span<const double> e_v, const SharedFc &fc) {
  return fc_forward(fc, e_v);
}

std::vector<std::vector<std::uint32_t>> encode_corpus(std::span<const std::string> lines,
                                                      const SubwordVocab &vocab) {
  std::vector<std::vector<std::uint32_t>> out;
  for (const auto &line : lines) {
    try {
      out.push_back(vocab.encode(line));
    } catch (const Error &) {
      // blank line
    }
  }
  return out;
}

namespace {

double sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace

SemanticTable pretrain_subword_embeddings(std::span<const std::vector<std::uint32_t>> corpus,
                                          std::size_t vocab_size, const SkipGramConfig &cfg) {
  std::vector<double> counts(vocab_size, 0.0);
  std::size_t tokens = 0;
  for (const auto &doc : corpus) {
    for (std::uint32_t id : doc) {
      if (id >= vocab_size) {
        throw Error(ErrorCode::kDimensionMismatch, "corpus id outside vocabulary");
      }
      if (id == SubwordVocab::kOov) continue;
      counts[id] += 1.0;
      ++tokens;
    }
  }
  if (tokens == 0) throw Error(ErrorCode::kEmptyCorpus, "corpus has no in-vocabulary subwords");

  SemanticTable table = init_semantic_table(vocab_size, cfg.dim, cfg.seed);
  if (cfg.epochs == 0) return table;

  // Unigram^0.75 noise distribution as a cumulative table.
  std::vector<double> cumulative(vocab_size, 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < vocab_size; ++i) {
    total += std::pow(counts[i], 0.75);
    cumulative[i] = total;
  }

  Rng rng(derive_seed(cfg.seed, "skipgram"));
  auto draw_noise = [&]() -> std::uint32_t {
    const double u = rng.unit() * total;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    return static_cast<std::uint32_t>(
        std::min<std::size_t>(it - cumulative.begin(), vocab_size - 1));
  };

  Matrix context(vocab_size, cfg.dim, 0.0);
  Vector grad_in(cfg.dim);
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    for (const auto &doc : corpus) {
      for (std::size_t i = 0; i < doc.size(); ++i) {
        const std::uint32_t center = doc[i];
        if (center == SubwordVocab::kOov) continue;
        const std::size_t lo = i >= cfg.window ? i - cfg.window : 0;
        const std::size_t hi = std::min(doc.size(), i + cfg.window + 1);
        for (std::size_t j = lo; j < hi; ++j) {
          const std::uint32_t target = doc[j];
          if (j == i || target == SubwordVocab::kOov) continue;
          auto in = table.rows.row(center);
          std::fill(grad_in.begin(), grad_in.end(), 0.0);
          for (std::size_t n = 0; n <= cfg.negatives; ++n) {
            std::uint32_t out_id = target;
            double label = 1.0;
            if (n > 0) {
              out_id = draw_noise();
              if (out_id == target) continue;
              label = 0.0;
            }
            auto out = context.row(out_id);
            const double g = cfg.learning_rate * (label - sigmoid(dot(in, out)));
            axpy(g, out, grad_in);
            axpy(g, in, out);
          }
          axpy(1.0, grad_in, in);
        }
      }
    }
  }
  return table;
}

}  // namespace kgsyn
