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

#include <bit>
#include <cstring>
#include <limits>
#include <random>
#include <string>

#include "doctest.h"
#include "fixtures.h"
#include "kgsyn/checkpoint.h"
#include "oracles.h"

using namespace kgsyn;

namespace {

// Arbitrary bit patterns, including negative zero, subnormals, infinities and NaN.
void random_bits(std::mt19937_64 &gen, std::span<double> v) {
  for (double &x : v) x = std::bit_cast<double>(gen());
}

Checkpoint random_checkpoint(std::mt19937_64 &gen) {
  Checkpoint c;
  c.kind = "test" + std::to_string(gen() % 100);
  c.seed = gen();
  c.config_hash = gen();
  for (std::size_t i = 0; i < gen() % 5; ++i) c.counters.emplace_back("c" + std::to_string(i), gen());
  for (std::size_t i = 0; i < 1 + gen() % 6; ++i) {
    const std::string name = "s" + std::to_string(i);
    switch (gen() % 3) {
      case 0: {
        Matrix m(gen() % 5, gen() % 5);
        random_bits(gen, m.values());
        c.put_matrix(name, m);
        break;
      }
      case 1: {
        Vector v(gen() % 7);
        random_bits(gen, v);
        c.put_vector(name, v);
        break;
      }
      default: {
        std::vector<std::string> s(gen() % 4);
        for (auto &x : s) x = std::string(gen() % 6, static_cast<char>(gen() % 256));
        c.put_strings(name, s);
      }
    }
  }
  return c;
}

}  // namespace

TEST_CASE("containers round-trip bitwise") {
  std::mt19937_64 gen(77);
  const auto dir = oracle::scratch_dir("ckpt");
  for (int trial = 0; trial < 200; ++trial) {
    const Checkpoint c = random_checkpoint(gen);
    const std::string bytes = c.serialize();
    CHECK(Checkpoint::parse(bytes).serialize() == bytes);
    c.save(dir + "/c.bin");
    CHECK(oracle::slurp(dir + "/c.bin") == bytes);
    CHECK(Checkpoint::load(dir + "/c.bin").serialize() == bytes);
  }
}

TEST_CASE("layout is little-endian with a leading magic and version") {
  Checkpoint c;
  c.kind = "kge";
  c.put_vector("x", Vector{1.0});
  const std::string b = c.serialize();
  CHECK(b.substr(0, 8) == "KGSYNCKP");
  CHECK(static_cast<unsigned char>(b[8]) == 1);
  CHECK(b[9] == 0);
  double one = 1.0;
  std::string le(8, '\0');
  std::memcpy(le.data(), &one, 8);
  if constexpr (std::endian::native == std::endian::big) std::reverse(le.begin(), le.end());
  CHECK(b.find(le) != std::string::npos);
}

TEST_CASE("corruption is detected") {
  std::mt19937_64 gen(78);
  Checkpoint c = random_checkpoint(gen);
  const std::string bytes = c.serialize();

  std::string version = bytes;
  version[8] = 2;
  CHECK(fixture::thrown([&] { Checkpoint::parse(version); }) == ErrorCode::kVersionMismatch);

  std::string magic = bytes;
  magic[0] = 'X';
  CHECK(fixture::thrown([&] { Checkpoint::parse(magic); }) == ErrorCode::kCorruptChecksum);

  for (std::size_t pos = 12; pos < bytes.size(); pos += 7) {
    std::string flipped = bytes;
    flipped[pos] ^= 0x10;
    CHECK(fixture::thrown([&] { Checkpoint::parse(flipped); }) == ErrorCode::kCorruptChecksum);
  }
  for (std::size_t len : {std::size_t{0}, std::size_t{5}, std::size_t{11}, bytes.size() - 1}) {
    CHECK(fixture::thrown([&] { Checkpoint::parse(bytes.substr(0, len)); }).has_value());
  }
  CHECK(fixture::thrown([&] { Checkpoint::parse(bytes + "x"); }) == ErrorCode::kCorruptChecksum);
  CHECK(fixture::thrown([] { Checkpoint::load("/nonexistent/ckpt.bin"); }) == ErrorCode::kIoError);
  CHECK(fixture::thrown([&] { c.matrix("absent"); }) == ErrorCode::kParseError);
}

TEST_CASE("embedding stores round-trip and are tied to their graph") {
  const auto kg = fixture::tiny_graph();
  std::mt19937_64 gen(79);
  EmbeddingStore store = init_store(kg, 6, 3);
  for (auto *m : {&store.instance_vecs, &store.concept_centers, &store.concept_node_vecs,
                  &store.relation_vecs}) {
    random_bits(gen, m->values());
  }
  random_bits(gen, store.concept_radii);
  const Checkpoint c = store_to_checkpoint(kg, store, 5, 9);
  const Checkpoint back = Checkpoint::parse(c.serialize());
  CHECK(back.seed == 5);
  CHECK(back.config_hash == 9);
  CHECK(back.counter("n") == 6);
  CHECK(store_from_checkpoint(back, kg).instance_vecs.values().size() == store.instance_vecs.size());
  CHECK(store_to_checkpoint(kg, store_from_checkpoint(back, kg), 5, 9).serialize() == c.serialize());

  KindRegistry kinds = {{"a", EntityKind::kInstance}, {"b", EntityKind::kConcept}};
  const auto other = build_graph(std::vector<RawTriple>{{"a", "instanceOf", "b"}}, kinds);
  CHECK(fixture::thrown([&] { store_from_checkpoint(back, other); }) == ErrorCode::kMissingEmbedding);
}

TEST_CASE("matcher models round-trip in every mode") {
  std::mt19937_64 gen(80);
  const auto dir = oracle::scratch_dir("ckpt_model");
  for (auto mode : {FusionMode::kGate, FusionMode::kDirectAddition, FusionMode::kFcFusion,
                    FusionMode::kNoKnowledge}) {
    for (auto act : {GateActivation::kSoftmax, GateActivation::kSigmoid}) {
      const MatcherModel model = fixture::random_model(gen, mode, 3, 4, 5, act);
      model_to_checkpoint(model, 1, 2).save(dir + "/m.bin");
      const MatcherModel back = model_from_checkpoint(Checkpoint::load(dir + "/m.bin"));
      CHECK(back == model);
      CHECK(model_to_checkpoint(back, 1, 2).serialize() == oracle::slurp(dir + "/m.bin"));
    }
  }
  Checkpoint kge = store_to_checkpoint(fixture::tiny_graph(), init_store(fixture::tiny_graph(), 2, 0), 0, 0);
  CHECK(fixture::thrown([&] { model_from_checkpoint(kge); }) == ErrorCode::kParseError);
}
