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

#ifndef KGSYN_PIPELINE_H_
#define KGSYN_PIPELINE_H_

#include <string>
#include <vector>

#include "kgsyn/config.h"
#include "kgsyn/dataset.h"
#include "kgsyn/eval.h"
#include "kgsyn/kg.h"
#include "kgsyn/kge.h"
#include "kgsyn/matcher.h"
#include "kgsyn/synthetic.h"

namespace kgsyn {

struct DataBundle {
  std::vector<RawTriple> triples;
  KindRegistry kinds;
  KnowledgeGraph kg;
  PairDataset pairs;
  std::vector<std::string> corpus;

  std::vector<std::string> entity_surfaces() const;
};

// Corpus is optional; the other three paths must be set.
DataBundle load_bundle(const PathSettings &paths, DuplicatePolicy policy,
                       std::vector<std::string> *warnings = nullptr);
DataBundle bundle_from_synthetic(SyntheticData data);

// Subwords of entity surfaces, train and dev mentions, and the corpus. Test
// mentions stay out so their unseen subwords fall into the OOV bucket.
SubwordVocab build_bundle_vocab(const DataBundle &bundle, TokenizerMode mode);

// Skip-gram over the corpus when enabled and non-empty, random rows otherwise.
SemanticTable initial_table(const DataBundle &bundle, const SubwordVocab &vocab,
                            const SemanticSettings &settings);

MatcherModel train_model(const DataBundle &bundle, const EmbeddingStore *store,
                         const SubwordVocab &vocab, const SemanticTable &table,
                         const MatcherConfig &cfg, MatcherTrace *trace = nullptr);

// Ranks the full entity universe for every test pair.
EvalReport evaluate_test(const Scorer &scorer, const DataBundle &bundle, TokenizerMode mode,
                         const std::vector<std::size_t> &ks, const std::string &fingerprint);

struct AblationRun {
  std::vector<ReportRow> rows;
  std::vector<MatcherTrace> traces;  // one per matcher variant, in row order
};

// Variants share the seed, data, vocabulary and initial semantic table. Full,
// ->DA and ->EF share one knowledge embedding; -TransC trains its own with
// only the translation subsets active.
AblationRun run_ablation(const DataBundle &bundle, const RunConfig &cfg);

}  // namespace kgsyn

#endif  // KGSYN_PIPELINE_H_
