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

#include <fstream>
#include <string>

#include "doctest.h"
#include "fixtures.h"
#include "kgsyn/config.h"
#include "oracles.h"

using namespace kgsyn;
using nlohmann::json;

TEST_CASE("defaults follow the published setup") {
  const RunConfig cfg;
  CHECK(cfg.kge.dim == 200);
  CHECK(cfg.semantic.skipgram.dim == 500);
  CHECK(cfg.matcher.dim == 300);
  CHECK(cfg.matcher.negatives == 200);
  CHECK(cfg.matcher.batch_size == 32);
  CHECK(cfg.matcher.learning_rate == 0.001);
  CHECK(cfg.matcher.dropout == 0.5);
  CHECK(cfg.matcher.patience == 10);
  CHECK(cfg.ks == std::vector<std::size_t>{3, 5, 10});
  CHECK(cfg.synthetic.split == std::array<double, 3>{0.8, 0.1, 0.1});
  CHECK(cfg.matcher.mode == FusionMode::kGate);
  CHECK(cfg.matcher.gate_activation == GateActivation::kSoftmax);
}

TEST_CASE("missing keys keep defaults and present keys override") {
  const RunConfig cfg = parse_run_config(json::parse(R"({
    "seed": 42, "tokenizer": "trigram", "fusion_mode": "direct_addition",
    "kge": {"dim": 16, "margins": {"instanceOf": 0.5}},
    "matcher": {"dim": 32, "negatives": 20},
    "ablation": {"variants": ["full", "no_ke"], "jaccard": false}
  })"));
  CHECK(cfg.seed == 42);
  CHECK(cfg.kge.seed == 42);
  CHECK(cfg.matcher.seed == 42);
  CHECK(cfg.synthetic.seed == 42);
  CHECK(cfg.tokenizer == TokenizerMode::kLetterTrigram);
  CHECK(cfg.matcher.mode == FusionMode::kDirectAddition);
  CHECK(cfg.kge.dim == 16);
  CHECK(cfg.kge.margins[static_cast<std::size_t>(TripleSubset::kInstanceOf)] == 0.5);
  CHECK(cfg.kge.margins[static_cast<std::size_t>(TripleSubset::kSubClassOf)] == 1.0);
  CHECK(cfg.matcher.dim == 32);
  CHECK(cfg.matcher.batch_size == 32);
  CHECK(cfg.variants == std::vector<AblationVariant>{AblationVariant::kFull, AblationVariant::kNoKnowledge});
  CHECK(!cfg.jaccard_baseline);
}

TEST_CASE("an explicit synthetic seed is kept") {
  const RunConfig cfg = parse_run_config(json::parse(R"({"seed": 1, "synthetic": {"seed": 7}})"));
  CHECK(cfg.synthetic.seed == 7);
  CHECK(cfg.kge.seed == 1);
}

TEST_CASE("unknown keys and bad values are rejected") {
  for (const char *doc : {R"({"sed": 1})", R"({"kge": {"dimension": 3}})", R"({"matcher": {"dim": 0}})",
                          R"({"matcher": {"dropout": 1.0}})", R"({"tokenizer": "words"})",
                          R"({"fusion_mode": "concat"})", R"({"kge": {"dim": "16"}})",
                          R"({"ablation": {"variants": ["full", "nope"]}})", R"({"eval": {"ks": []}})",
                          R"({"synthetic": {"depth": 0}})", R"([1, 2])"}) {
    INFO(std::string(doc));
    CHECK(fixture::thrown([&] { parse_run_config(json::parse(doc)); }) == ErrorCode::kConfigError);
  }
}

TEST_CASE("serialized configs parse back to the same fingerprint") {
  RunConfig cfg = parse_run_config(json::parse(R"({"seed": 9, "matcher": {"dim": 8}})"));
  const RunConfig back = parse_run_config(cfg.to_json());
  CHECK(back.to_json() == cfg.to_json());
  CHECK(back.fingerprint() == cfg.fingerprint());
  CHECK(cfg.fingerprint().size() == 16);
  RunConfig other = cfg;
  other.matcher.dim = 9;
  CHECK(other.fingerprint() != cfg.fingerprint());
  RunConfig moved = cfg;
  moved.paths.data_dir = "/elsewhere";
  CHECK(moved.fingerprint() == cfg.fingerprint());
}

TEST_CASE("config files resolve data paths against their own directory") {
  const auto dir = oracle::scratch_dir("config");
  {
    std::ofstream out(dir + "/run.json");
    out << R"({"paths": {"data_dir": "bundle"}})";
  }
  RunConfig cfg = load_run_config(dir + "/run.json");
  CHECK(cfg.paths.data_dir == dir + "/bundle");
  cfg.paths.resolve();
  CHECK(cfg.paths.triples == dir + "/bundle/triples.tsv");
  CHECK(cfg.paths.pairs == dir + "/bundle/pairs.tsv");
  CHECK(fixture::thrown([&] { load_run_config(dir + "/absent.json"); }).has_value());
  {
    std::ofstream out(dir + "/broken.json");
    out << "{not json";
  }
  CHECK(fixture::thrown([&] { load_run_config(dir + "/broken.json"); }) == ErrorCode::kConfigError);
}

TEST_CASE("synthetic specs round-trip through JSON") {
  SyntheticSpec spec;
  spec.depth = 2;
  spec.variants = 9;
  spec.perturbations = {Perturbation::kParaphrase, Perturbation::kIdentity};
  spec.seed = 5;
  const SyntheticSpec back = parse_synthetic_spec(synthetic_spec_to_json(spec));
  CHECK(synthetic_spec_to_json(back) == synthetic_spec_to_json(spec));
  CHECK(back.perturbations == spec.perturbations);
}
