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

#include "kgsyn/pipeline.h"

#include <optional>

#include "kgsyn/error.h"
#include "kgsyn/semantic.h"
#include "kgsyn/tsv.h"

namespace kgsyn {

std::vector<std::string> DataBundle::entity_surfaces() const {
  std::vector<std::string> out;
  out.reserve(kg.entity_count());
  for (const auto &e : kg.entities()) out.push_back(e.surface);
  return out;
}

DataBundle load_bundle(const PathSettings &paths, DuplicatePolicy policy,
                       std::vector<std::string> *warnings) {
  PathSettings p = paths;
  p.resolve();
  if (p.triples.empty() || p.kinds.empty() || p.pairs.empty()) {
    throw Error(ErrorCode::kConfigError, "triples, kinds and pairs paths are required");
  }
  DataBundle b;
  b.triples = load_triples(p.triples);
  b.kinds = load_kinds(p.kinds);
  b.kg = build_graph(b.triples, b.kinds, policy, warnings);
  b.pairs = load_pairs(p.pairs, resolver_for(b.kg));
  if (!p.corpus.empty()) b.corpus = load_corpus(p.corpus);
  return b;
}

DataBundle bundle_from_synthetic(SyntheticData data) {
  return {std::move(data.triples), std::move(data.kinds), std::move(data.kg),
          std::move(data.pairs), std::move(data.corpus)};
}

SubwordVocab build_bundle_vocab(const DataBundle &bundle, TokenizerMode mode) {
  std::vector<std::string> surfaces = bundle.entity_surfaces();
  for (const Pair &p : bundle.pairs.pairs) {
    if (p.split != Split::kTest) surfaces.push_back(p.mention);
  }
  surfaces.insert(surfaces.end(), bundle.corpus.begin(), bundle.corpus.end());
  return build_vocab(surfaces, mode);
}

SemanticTable initial_table(const DataBundle &bundle, const SubwordVocab &vocab,
                            const SemanticSettings &settings) {
  if (settings.pretrain && !bundle.corpus.empty()) {
    return pretrain_subword_embeddings(encode_corpus(bundle.corpus, vocab), vocab.size(),
                                       settings.skipgram);
  }
  return init_semantic_table(vocab.size(), settings.skipgram.dim, settings.skipgram.seed);
}

MatcherModel train_model(const DataBundle &bundle, const EmbeddingStore *store,
                         const SubwordVocab &vocab, const SemanticTable &table,
                         const MatcherConfig &cfg, MatcherTrace *trace) {
  MatcherModel model = init_matcher(bundle.kg, store, vocab, table, cfg);
  return train_matcher(std::move(model), bundle.pairs, cfg, trace);
}

EvalReport evaluate_test(const Scorer &scorer, const DataBundle &bundle, TokenizerMode mode,
                         const std::vector<std::size_t> &ks, const std::string &fingerprint) {
  const auto test = bundle.pairs.select(Split::kTest);
  if (test.empty()) throw Error(ErrorCode::kEmptySplit, "no test pairs");
  const SynonymIndex syn = build_synonym_index(bundle.pairs, bundle.kg.entity_count());
  const auto surfaces = bundle.entity_surfaces();
  return evaluate(scorer, test, syn, surfaces, {ks, mode, fingerprint});
}

AblationRun run_ablation(const DataBundle &bundle, const RunConfig &cfg) {
  cfg.validate();
  const SubwordVocab vocab = build_bundle_vocab(bundle, cfg.tokenizer);
  const SemanticTable table = initial_table(bundle, vocab, cfg.semantic);
  const std::string fp = cfg.fingerprint();

  std::optional<EmbeddingStore> full_store;
  std::optional<EmbeddingStore> transe_store;
  auto store_for = [&](AblationVariant v) -> const EmbeddingStore * {
    if (v == AblationVariant::kNoKnowledge) return nullptr;
    if (v == AblationVariant::kNoTransC) {
      if (!transe_store) {
        KgeConfig kc = cfg.kge;
        kc.active[static_cast<std::size_t>(TripleSubset::kInstanceOf)] = false;
        kc.active[static_cast<std::size_t>(TripleSubset::kSubClassOf)] = false;
        transe_store = train_kge(bundle.kg, kc);
      }
      return &*transe_store;
    }
    if (!full_store) full_store = train_kge(bundle.kg, cfg.kge);
    return &*full_store;
  };

  AblationRun run;
  for (AblationVariant v : cfg.variants) {
    MatcherConfig mc = cfg.matcher;
    switch (v) {
      case AblationVariant::kFull:
      case AblationVariant::kNoTransC: break;
      case AblationVariant::kNoKnowledge: mc.mode = FusionMode::kNoKnowledge; break;
      case AblationVariant::kDirectAddition: mc.mode = FusionMode::kDirectAddition; break;
      case AblationVariant::kFcFusion: mc.mode = FusionMode::kFcFusion; break;
    }
    MatcherTrace trace;
    const MatcherModel model = train_model(bundle, store_for(v), vocab, table, mc, &trace);
    run.rows.push_back({std::string(variant_name(v)),
                        evaluate_test(make_matcher_scorer(model), bundle, cfg.tokenizer, cfg.ks,
                                      fp)});
    run.traces.push_back(std::move(trace));
  }
  if (cfg.jaccard_baseline) {
    const auto surfaces = bundle.entity_surfaces();
    run.rows.push_back({"jaccard", evaluate_test(make_jaccard_scorer(surfaces, cfg.tokenizer),
                                                 bundle, cfg.tokenizer, cfg.ks, fp)});
  }
  return run;
}

}  // namespace kgsyn
