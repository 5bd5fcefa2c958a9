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

#include "kgsyn/checkpoint.h"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include "kgsyn/error.h"
#include "kgsyn/random.h"

namespace kgsyn {

namespace {

class Writer {
 public:
  void u8(std::uint8_t v) { out_.push_back(static_cast<char>(v)); }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) u8(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) u8(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void str(std::string_view s) {
    u32(static_cast<std::uint32_t>(s.size()));
    out_.append(s);
  }
  void raw(std::string_view s) { out_.append(s); }
  std::string &bytes() { return out_; }

 private:
  std::string out_;
};

class Reader {
 public:
  explicit Reader(std::string_view in) : in_(in) {}

  std::uint8_t u8() {
    need(1);
    return static_cast<std::uint8_t>(in_[pos_++]);
  }
  std::uint32_t u32() {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(u8()) << (8 * i);
    return v;
  }
  std::uint64_t u64() {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(u8()) << (8 * i);
    return v;
  }
  double f64() { return std::bit_cast<double>(u64()); }
  std::string str() {
    const std::uint32_t n = u32();
    need(n);
    std::string s(in_.substr(pos_, n));
    pos_ += n;
    return s;
  }
  std::string_view raw(std::size_t n) {
    need(n);
    auto s = in_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  std::size_t remaining() const { return in_.size() - pos_; }

 private:
  void need(std::size_t n) const {
    if (in_.size() - pos_ < n) throw Error(ErrorCode::kCorruptChecksum, "checkpoint truncated");
  }

  std::string_view in_;
  std::size_t pos_ = 0;
};

}  // namespace

void Checkpoint::put(Section s) {
  for (auto &existing : sections_) {
    if (existing.name == s.name) {
      existing = std::move(s);
      return;
    }
  }
  sections_.push_back(std::move(s));
}

void Checkpoint::put_matrix(const std::string &name, const Matrix &m) {
  auto v = m.values();
  put({name, Type::kTensor, {{m.rows(), m.cols()}, {v.begin(), v.end()}}, {}});
}

void Checkpoint::put_vector(const std::string &name, std::span<const double> v) {
  put({name, Type::kTensor, {{v.size()}, {v.begin(), v.end()}}, {}});
}

void Checkpoint::put_strings(const std::string &name, std::vector<std::string> values) {
  put({name, Type::kStrings, {}, std::move(values)});
}

bool Checkpoint::has(const std::string &name) const {
  for (const auto &s : sections_) {
    if (s.name == name) return true;
  }
  return false;
}

const Checkpoint::Section &Checkpoint::section(const std::string &name, Type type) const {
  for (const auto &s : sections_) {
    if (s.name == name) {
      if (s.type != type) {
        throw Error(ErrorCode::kParseError, "checkpoint section '" + name + "' has wrong type");
      }
      return s;
    }
  }
  throw Error(ErrorCode::kParseError, "checkpoint lacks section '" + name + "'");
}

Matrix Checkpoint::matrix(const std::string &name) const {
  const auto &t = section(name, Type::kTensor).tensor;
  if (t.dims.size() != 2) {
    throw Error(ErrorCode::kParseError, "section '" + name + "' is not a matrix");
  }
  Matrix m(t.dims[0], t.dims[1]);
  std::copy(t.values.begin(), t.values.end(), m.values().begin());
  return m;
}

Vector Checkpoint::vector(const std::string &name) const {
  const auto &t = section(name, Type::kTensor).tensor;
  if (t.dims.size() != 1) {
    throw Error(ErrorCode::kParseError, "section '" + name + "' is not a vector");
  }
  return t.values;
}

const std::vector<std::string> &Checkpoint::strings(const std::string &name) const {
  return section(name, Type::kStrings).strings;
}

std::uint64_t Checkpoint::counter(const std::string &name) const {
  for (const auto &[k, v] : counters) {
    if (k == name) return v;
  }
  throw Error(ErrorCode::kParseError, "checkpoint lacks counter '" + name + "'");
}

std::string Checkpoint::serialize() const {
  Writer w;
  w.raw(kMagic);
  w.u32(kVersion);
  w.str(kind);
  w.u64(seed);
  w.u64(config_hash);
  w.u32(static_cast<std::uint32_t>(counters.size()));
  for (const auto &[name, value] : counters) {
    w.str(name);
    w.u64(value);
  }
  w.u32(static_cast<std::uint32_t>(sections_.size()));
  for (const auto &s : sections_) {
    w.u8(static_cast<std::uint8_t>(s.type));
    w.str(s.name);
    if (s.type == Type::kTensor) {
      w.u32(static_cast<std::uint32_t>(s.tensor.dims.size()));
      for (auto d : s.tensor.dims) w.u64(d);
      for (double v : s.tensor.values) w.f64(v);
    } else {
      w.u64(s.strings.size());
      for (const auto &x : s.strings) w.str(x);
    }
  }
  w.u64(fnv1a(w.bytes()));
  return std::move(w.bytes());
}

Checkpoint Checkpoint::parse(std::string_view bytes) {
  Reader r(bytes);
  if (r.raw(kMagic.size()) != kMagic) {
    throw Error(ErrorCode::kCorruptChecksum, "not a checkpoint (bad magic)");
  }
  const std::uint32_t version = r.u32();
  if (version != kVersion) {
    throw Error(ErrorCode::kVersionMismatch, "checkpoint version " + std::to_string(version) +
                                                 ", expected " + std::to_string(kVersion));
  }
  if (bytes.size() < kMagic.size() + 4 + 8) {
    throw Error(ErrorCode::kCorruptChecksum, "checkpoint truncated");
  }
  const auto body = bytes.substr(0, bytes.size() - 8);
  Reader tail(bytes.substr(bytes.size() - 8));
  if (fnv1a(body) != tail.u64()) {
    throw Error(ErrorCode::kCorruptChecksum, "checksum mismatch");
  }

  Reader b(body);
  b.raw(kMagic.size());
  b.u32();
  Checkpoint ckpt;
  ckpt.kind = b.str();
  ckpt.seed = b.u64();
  ckpt.config_hash = b.u64();
  const std::uint32_t ncounters = b.u32();
  for (std::uint32_t i = 0; i < ncounters; ++i) {
    std::string name = b.str();
    ckpt.counters.emplace_back(std::move(name), b.u64());
  }
  const std::uint32_t nsections = b.u32();
  for (std::uint32_t i = 0; i < nsections; ++i) {
    Section s;
    s.type = static_cast<Type>(b.u8());
    s.name = b.str();
    if (s.type == Type::kTensor) {
      const std::uint32_t rank = b.u32();
      std::uint64_t total = 1;
      for (std::uint32_t d = 0; d < rank; ++d) {
        s.tensor.dims.push_back(b.u64());
        total *= s.tensor.dims.back();
      }
      if (total > b.remaining() / 8) {
        throw Error(ErrorCode::kCorruptChecksum, "tensor '" + s.name + "' overruns file");
      }
      s.tensor.values.resize(total);
      for (auto &v : s.tensor.values) v = b.f64();
    } else if (s.type == Type::kStrings) {
      const std::uint64_t count = b.u64();
      if (count > b.remaining() / 4) {
        throw Error(ErrorCode::kCorruptChecksum, "string list '" + s.name + "' overruns file");
      }
      for (std::uint64_t k = 0; k < count; ++k) s.strings.push_back(b.str());
    } else {
      throw Error(ErrorCode::kCorruptChecksum, "unknown section type");
    }
    ckpt.sections_.push_back(std::move(s));
  }
  if (b.remaining() != 0) throw Error(ErrorCode::kCorruptChecksum, "trailing bytes");
  return ckpt;
}

void Checkpoint::save(const std::string &path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write '" + path + "'");
  const std::string bytes = serialize();
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::kIoError, "write failed for '" + path + "'");
}

Checkpoint Checkpoint::load(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open checkpoint '" + path + "'");
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse(bytes);
}

Checkpoint store_to_checkpoint(const KnowledgeGraph &kg, const EmbeddingStore &store,
                               std::uint64_t seed, std::uint64_t config_hash) {
  check_store_covers(kg, store);
  Checkpoint ckpt;
  ckpt.kind = "kge";
  ckpt.seed = seed;
  ckpt.config_hash = config_hash;
  ckpt.counters = {{"n", store.dim},
                   {"instances", kg.instance_count()},
                   {"concepts", kg.concept_count()},
                   {"relations", kg.relation_count()}};
  ckpt.put_matrix("instance_vecs", store.instance_vecs);
  ckpt.put_matrix("concept_centers", store.concept_centers);
  ckpt.put_vector("concept_radii", store.concept_radii);
  ckpt.put_matrix("concept_node_vecs", store.concept_node_vecs);
  ckpt.put_matrix("relation_vecs", store.relation_vecs);
  std::vector<std::string> surfaces;
  for (const auto &e : kg.entities()) surfaces.push_back(e.surface);
  ckpt.put_strings("entity_surfaces", std::move(surfaces));
  ckpt.put_strings("relations", kg.relations());
  return ckpt;
}

EmbeddingStore store_from_checkpoint(const Checkpoint &ckpt, const KnowledgeGraph &kg) {
  if (ckpt.kind != "kge") {
    throw Error(ErrorCode::kParseError, "expected a kge checkpoint, got '" + ckpt.kind + "'");
  }
  const auto &surfaces = ckpt.strings("entity_surfaces");
  bool same = surfaces.size() == kg.entity_count() && ckpt.strings("relations") == kg.relations();
  for (std::size_t i = 0; same && i < surfaces.size(); ++i) {
    same = surfaces[i] == kg.entities()[i].surface;
  }
  if (!same) {
    throw Error(ErrorCode::kMissingEmbedding, "checkpoint was trained on a different graph");
  }
  EmbeddingStore store;
  store.dim = ckpt.counter("n");
  store.instance_vecs = ckpt.matrix("instance_vecs");
  store.concept_centers = ckpt.matrix("concept_centers");
  store.concept_radii = ckpt.vector("concept_radii");
  store.concept_node_vecs = ckpt.matrix("concept_node_vecs");
  store.relation_vecs = ckpt.matrix("relation_vecs");
  check_store_covers(kg, store);
  return store;
}

namespace {

void put_fc(Checkpoint &ckpt, const std::string &prefix, const TwoLayerFc &fc) {
  ckpt.put_matrix(prefix + ".w1", fc.w1);
  ckpt.put_vector(prefix + ".b1", fc.b1);
  ckpt.put_matrix(prefix + ".w2", fc.w2);
  ckpt.put_vector(prefix + ".b2", fc.b2);
}

TwoLayerFc get_fc(const Checkpoint &ckpt, const std::string &prefix) {
  return {ckpt.matrix(prefix + ".w1"), ckpt.vector(prefix + ".b1"),
          ckpt.matrix(prefix + ".w2"), ckpt.vector(prefix + ".b2")};
}

}  // namespace

Checkpoint model_to_checkpoint(const MatcherModel &model, std::uint64_t seed,
                               std::uint64_t config_hash) {
  Checkpoint ckpt;
  ckpt.kind = "matcher";
  ckpt.seed = seed;
  ckpt.config_hash = config_hash;
  ckpt.counters = {{"n", model.knowledge_vecs.cols()},
                   {"d", model.params.table.dim()},
                   {"k", model.params.shared.output_dim()},
                   {"entities", model.entity_count()},
                   {"vocab", model.vocab.size()}};
  ckpt.put_strings("fusion_mode", {std::string(fusion_mode_name(model.mode))});
  ckpt.put_strings("gate_activation",
                   {std::string(gate_activation_name(model.params.fusion.gate.activation))});
  ckpt.put_strings("tokenizer", {std::string(mode_name(model.vocab.mode()))});
  ckpt.put_strings("vocab", model.vocab.tokens());
  ckpt.put_strings("entity_surfaces", model.entity_surfaces);
  ckpt.put_matrix("table", model.params.table.rows);
  put_fc(ckpt, "shared", model.params.shared);
  put_fc(ckpt, "knowledge", model.params.knowledge);
  ckpt.put_matrix("gate.wg", model.params.fusion.gate.wg);
  ckpt.put_matrix("fusion.wf", model.params.fusion.wf);
  ckpt.put_matrix("knowledge_vecs", model.knowledge_vecs);
  return ckpt;
}

MatcherModel model_from_checkpoint(const Checkpoint &ckpt) {
  if (ckpt.kind != "matcher") {
    throw Error(ErrorCode::kParseError,
                "expected a matcher checkpoint, got '" + ckpt.kind + "'");
  }
  auto single = [&](const std::string &name) -> const std::string & {
    const auto &v = ckpt.strings(name);
    if (v.size() != 1) throw Error(ErrorCode::kParseError, "bad '" + name + "' tag");
    return v[0];
  };
  const auto mode = parse_fusion_mode(single("fusion_mode"));
  const auto act = parse_gate_activation(single("gate_activation"));
  const auto tok = parse_mode(single("tokenizer"));
  if (!mode || !act || !tok) throw Error(ErrorCode::kParseError, "unknown model tag");

  MatcherModel model;
  model.mode = *mode;
  model.vocab = SubwordVocab::from_tokens(*tok, ckpt.strings("vocab"));
  model.entity_surfaces = ckpt.strings("entity_surfaces");
  model.params.table.rows = ckpt.matrix("table");
  model.params.shared = get_fc(ckpt, "shared");
  model.params.knowledge = get_fc(ckpt, "knowledge");
  model.params.fusion.gate.wg = ckpt.matrix("gate.wg");
  model.params.fusion.gate.activation = *act;
  model.params.fusion.wf = ckpt.matrix("fusion.wf");
  model.knowledge_vecs = ckpt.matrix("knowledge_vecs");
  check_dims(model.params.table.rows.rows(), model.vocab.size(), "table rows vs vocabulary");
  check_dims(model.knowledge_vecs.rows(), model.entity_count(), "knowledge rows vs entities");
  refresh_entity_subwords(model);
  return model;
}

}  // namespace kgsyn
