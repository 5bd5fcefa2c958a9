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

#include "kgsyn/config.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>

#include "kgsyn/error.h"
#include "kgsyn/random.h"

namespace kgsyn {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

[[noreturn]] void fail(const std::string &msg) { throw Error(ErrorCode::kConfigError, msg); }

// Reads known keys from one JSON object and rejects whatever is left over.
class Fields {
 public:
  Fields(const json &obj, std::string where) : obj_(obj), where_(std::move(where)) {
    if (!obj_.is_object()) fail(where_ + " must be a JSON object");
  }

  template <typename T>
  void get(const char *key, T &out) {
    seen_.insert(key);
    auto it = obj_.find(key);
    if (it == obj_.end()) return;
    try {
      out = it->get<T>();
    } catch (const json::exception &) {
      fail(where_ + "." + key + " has the wrong type");
    }
  }

  const json *sub(const char *key) {
    seen_.insert(key);
    auto it = obj_.find(key);
    return it == obj_.end() ? nullptr : &*it;
  }

  void finish() const {
    for (auto it = obj_.begin(); it != obj_.end(); ++it) {
      if (!seen_.count(it.key())) fail("unknown key " + where_ + "." + it.key());
    }
  }

 private:
  const json &obj_;
  std::string where_;
  std::set<std::string> seen_;
};

template <typename E, typename Parse>
void get_enum(Fields &f, const char *key, E &out, Parse parse) {
  if (const json *j = f.sub(key)) {
    if (!j->is_string()) fail(std::string(key) + " must be a string");
    auto parsed = parse(j->get<std::string>());
    if (!parsed) fail("bad value '" + j->get<std::string>() + "' for " + key);
    out = *parsed;
  }
}

std::optional<DuplicatePolicy> parse_duplicates(std::string_view s) {
  if (s == "strict") return DuplicatePolicy::kStrict;
  if (s == "lenient") return DuplicatePolicy::kLenient;
  return std::nullopt;
}

std::string_view duplicates_name(DuplicatePolicy p) {
  return p == DuplicatePolicy::kStrict ? "strict" : "lenient";
}

std::optional<TripleSubset> parse_subset(std::string_view s) {
  for (TripleSubset t : kAllSubsets) {
    if (subset_name(t) == s) return t;
  }
  return std::nullopt;
}

void parse_kge(const json &doc, KgeConfig &cfg) {
  Fields f(doc, "kge");
  f.get("dim", cfg.dim);
  f.get("learning_rate", cfg.learning_rate);
  f.get("epochs", cfg.epochs);
  f.get("negatives_per_triple", cfg.negatives_per_triple);
  if (const json *m = f.sub("margins")) {
    if (m->is_number()) {
      cfg.margins.fill(m->get<double>());
    } else {
      Fields mf(*m, "kge.margins");
      for (TripleSubset s : kAllSubsets) {
        mf.get(std::string(subset_name(s)).c_str(), cfg.margins[static_cast<std::size_t>(s)]);
      }
      mf.finish();
    }
  }
  if (const json *a = f.sub("subsets")) {
    if (!a->is_array()) fail("kge.subsets must be an array");
    cfg.active.fill(false);
    for (const auto &name : *a) {
      auto s = name.is_string() ? parse_subset(name.get<std::string>()) : std::nullopt;
      if (!s) fail("unknown subset in kge.subsets: " + name.dump());
      cfg.active[static_cast<std::size_t>(*s)] = true;
    }
  }
  f.finish();
}

void parse_semantic(const json &doc, SemanticSettings &cfg) {
  Fields f(doc, "semantic");
  f.get("dim", cfg.skipgram.dim);
  f.get("pretrain", cfg.pretrain);
  f.get("window", cfg.skipgram.window);
  f.get("negatives", cfg.skipgram.negatives);
  f.get("learning_rate", cfg.skipgram.learning_rate);
  f.get("epochs", cfg.skipgram.epochs);
  f.finish();
}

void parse_matcher(const json &doc, MatcherConfig &cfg) {
  Fields f(doc, "matcher");
  f.get("dim", cfg.dim);
  f.get("negatives", cfg.negatives);
  f.get("batch_size", cfg.batch_size);
  f.get("learning_rate", cfg.learning_rate);
  f.get("dropout", cfg.dropout);
  f.get("patience", cfg.patience);
  f.get("max_epochs", cfg.max_epochs);
  f.get("freeze_table", cfg.freeze_table);
  f.finish();
}

void parse_paths(const json &doc, PathSettings &p) {
  Fields f(doc, "paths");
  f.get("data_dir", p.data_dir);
  f.get("triples", p.triples);
  f.get("kinds", p.kinds);
  f.get("pairs", p.pairs);
  f.get("corpus", p.corpus);
  f.finish();
}

void parse_ablation(const json &doc, RunConfig &cfg) {
  Fields f(doc, "ablation");
  if (const json *v = f.sub("variants")) {
    if (!v->is_array()) fail("ablation.variants must be an array");
    cfg.variants.clear();
    for (const auto &name : *v) {
      auto parsed = name.is_string() ? parse_variant(name.get<std::string>()) : std::nullopt;
      if (!parsed) fail("unknown ablation variant " + name.dump());
      cfg.variants.push_back(*parsed);
    }
  }
  f.get("jaccard", cfg.jaccard_baseline);
  f.finish();
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

json read_json_file(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception &e) {
    fail(path + ": " + e.what());
  }
}

}  // namespace

std::string_view variant_name(AblationVariant v) {
  switch (v) {
    case AblationVariant::kFull: return "full";
    case AblationVariant::kNoKnowledge: return "no_ke";
    case AblationVariant::kNoTransC: return "no_transc";
    case AblationVariant::kDirectAddition: return "direct_addition";
    case AblationVariant::kFcFusion: return "fc_fusion";
  }
  return "?";
}

std::optional<AblationVariant> parse_variant(std::string_view name) {
  for (std::size_t i = 0; i < kNumVariants; ++i) {
    const auto v = static_cast<AblationVariant>(i);
    if (variant_name(v) == name) return v;
  }
  return std::nullopt;
}

void PathSettings::resolve() {
  if (data_dir.empty()) return;
  const std::filesystem::path root(data_dir);
  if (triples.empty()) triples = (root / "triples.tsv").string();
  if (kinds.empty()) kinds = (root / "kinds.tsv").string();
  if (pairs.empty()) pairs = (root / "pairs.tsv").string();
  if (corpus.empty()) corpus = (root / "corpus.txt").string();
}

void RunConfig::propagate_seed() {
  kge.seed = seed;
  matcher.seed = seed;
  semantic.skipgram.seed = seed;
  if (!synthetic_seed_set) synthetic.seed = seed;
}

void RunConfig::validate() const {
  try {
    kge.validate();
    matcher.validate();
    synthetic.validate();
  } catch (const Error &e) {
    fail(e.what());
  }
  if (semantic.skipgram.dim == 0) fail("semantic.dim must be >= 1");
  if (semantic.skipgram.window == 0) fail("semantic.window must be >= 1");
  if (ks.empty()) fail("eval.ks must not be empty");
  for (std::size_t k : ks) {
    if (k == 0) fail("eval.ks entries must be >= 1");
  }
}

ordered_json RunConfig::to_json() const {
  ordered_json j;
  j["seed"] = seed;
  j["tokenizer"] = std::string(mode_name(tokenizer));
  j["duplicates"] = std::string(duplicates_name(duplicates));
  j["fusion_mode"] = std::string(fusion_mode_name(matcher.mode));
  j["gate_activation"] = std::string(gate_activation_name(matcher.gate_activation));

  ordered_json k;
  k["dim"] = kge.dim;
  k["learning_rate"] = kge.learning_rate;
  k["epochs"] = kge.epochs;
  k["negatives_per_triple"] = kge.negatives_per_triple;
  ordered_json margins;
  ordered_json subsets = ordered_json::array();
  for (TripleSubset s : kAllSubsets) {
    margins[std::string(subset_name(s))] = kge.margins[static_cast<std::size_t>(s)];
    if (kge.active[static_cast<std::size_t>(s)]) subsets.push_back(std::string(subset_name(s)));
  }
  k["margins"] = margins;
  k["subsets"] = subsets;
  j["kge"] = k;

  ordered_json s;
  s["dim"] = semantic.skipgram.dim;
  s["pretrain"] = semantic.pretrain;
  s["window"] = semantic.skipgram.window;
  s["negatives"] = semantic.skipgram.negatives;
  s["learning_rate"] = semantic.skipgram.learning_rate;
  s["epochs"] = semantic.skipgram.epochs;
  j["semantic"] = s;

  ordered_json m;
  m["dim"] = matcher.dim;
  m["negatives"] = matcher.negatives;
  m["batch_size"] = matcher.batch_size;
  m["learning_rate"] = matcher.learning_rate;
  m["dropout"] = matcher.dropout;
  m["patience"] = matcher.patience;
  m["max_epochs"] = matcher.max_epochs;
  m["freeze_table"] = matcher.freeze_table;
  j["matcher"] = m;

  j["synthetic"] = synthetic_spec_to_json(synthetic);

  ordered_json p;
  p["data_dir"] = paths.data_dir;
  p["triples"] = paths.triples;
  p["kinds"] = paths.kinds;
  p["pairs"] = paths.pairs;
  p["corpus"] = paths.corpus;
  j["paths"] = p;

  ordered_json a;
  ordered_json vs = ordered_json::array();
  for (auto v : variants) vs.push_back(std::string(variant_name(v)));
  a["variants"] = vs;
  a["jaccard"] = jaccard_baseline;
  j["ablation"] = a;

  j["eval"] = {{"ks", ks}};
  return j;
}

// Where the data lives is not part of a run's identity.
std::uint64_t RunConfig::hash() const {
  auto j = to_json();
  j.erase("paths");
  return fnv1a(j.dump());
}

std::string RunConfig::fingerprint() const { return hex64(hash()); }

RunConfig parse_run_config(const json &doc, RunConfig cfg) {
  Fields f(doc, "config");
  f.get("seed", cfg.seed);
  get_enum(f, "tokenizer", cfg.tokenizer, parse_mode);
  get_enum(f, "duplicates", cfg.duplicates, parse_duplicates);
  get_enum(f, "fusion_mode", cfg.matcher.mode, parse_fusion_mode);
  get_enum(f, "gate_activation", cfg.matcher.gate_activation, parse_gate_activation);
  if (const json *j = f.sub("kge")) parse_kge(*j, cfg.kge);
  if (const json *j = f.sub("semantic")) parse_semantic(*j, cfg.semantic);
  if (const json *j = f.sub("matcher")) parse_matcher(*j, cfg.matcher);
  if (const json *j = f.sub("synthetic")) {
    cfg.synthetic = parse_synthetic_spec(*j, cfg.synthetic);
    if (j->contains("seed")) cfg.synthetic_seed_set = true;
  }
  if (const json *j = f.sub("paths")) parse_paths(*j, cfg.paths);
  if (const json *j = f.sub("ablation")) parse_ablation(*j, cfg);
  if (const json *j = f.sub("eval")) {
    Fields e(*j, "eval");
    e.get("ks", cfg.ks);
    e.finish();
  }
  f.finish();
  cfg.propagate_seed();
  cfg.validate();
  return cfg;
}

RunConfig load_run_config(const std::string &path) {
  RunConfig cfg = parse_run_config(read_json_file(path));
  // Relative data paths are taken from the config file's directory.
  const auto base = std::filesystem::path(path).parent_path();
  for (std::string *p : {&cfg.paths.data_dir, &cfg.paths.triples, &cfg.paths.kinds,
                         &cfg.paths.pairs, &cfg.paths.corpus}) {
    if (!p->empty() && std::filesystem::path(*p).is_relative()) *p = (base / *p).string();
  }
  return cfg;
}

SyntheticSpec parse_synthetic_spec(const json &doc, SyntheticSpec spec) {
  Fields f(doc, "synthetic");
  f.get("depth", spec.depth);
  f.get("branching", spec.branching);
  f.get("instances_per_leaf", spec.instances_per_leaf);
  f.get("relation_types", spec.relation_types);
  f.get("instance_links", spec.instance_links);
  f.get("instance_concept_links", spec.instance_concept_links);
  f.get("concept_links", spec.concept_links);
  f.get("variants", spec.variants);
  f.get("colloquial_per_concept", spec.colloquial_per_concept);
  f.get("corpus_lines_per_entity", spec.corpus_lines_per_entity);
  f.get("seed", spec.seed);
  f.get("split", spec.split);
  if (const json *p = f.sub("perturbations")) {
    if (!p->is_array()) fail("synthetic.perturbations must be an array");
    spec.perturbations.clear();
    for (const auto &name : *p) {
      auto parsed = name.is_string() ? parse_perturbation(name.get<std::string>()) : std::nullopt;
      if (!parsed) fail("unknown perturbation " + name.dump());
      spec.perturbations.push_back(*parsed);
    }
  }
  f.finish();
  return spec;
}

SyntheticSpec load_synthetic_spec(const std::string &path) {
  return parse_synthetic_spec(read_json_file(path));
}

ordered_json synthetic_spec_to_json(const SyntheticSpec &spec) {
  ordered_json j;
  j["depth"] = spec.depth;
  j["branching"] = spec.branching;
  j["instances_per_leaf"] = spec.instances_per_leaf;
  j["relation_types"] = spec.relation_types;
  j["instance_links"] = spec.instance_links;
  j["instance_concept_links"] = spec.instance_concept_links;
  j["concept_links"] = spec.concept_links;
  j["variants"] = spec.variants;
  ordered_json ps = ordered_json::array();
  for (auto p : spec.perturbations) ps.push_back(std::string(perturbation_name(p)));
  j["perturbations"] = ps;
  j["split"] = spec.split;
  j["colloquial_per_concept"] = spec.colloquial_per_concept;
  j["corpus_lines_per_entity"] = spec.corpus_lines_per_entity;
  j["seed"] = spec.seed;
  return j;
}

}  // namespace kgsyn
