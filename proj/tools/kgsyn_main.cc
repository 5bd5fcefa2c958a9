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

// Command-line driver: gen, train-kge, train-matcher, eval, ablate, query.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "kgsyn/checkpoint.h"
#include "kgsyn/config.h"
#include "kgsyn/error.h"
#include "kgsyn/pipeline.h"
#include "kgsyn/synthetic.h"
#include "kgsyn/tsv.h"

namespace {

using namespace kgsyn;

// Flags shared by every subcommand. Empty/unset values leave the config alone.
struct Common {
  std::optional<std::uint64_t> seed;
  std::string config;
  std::string out;
};

void add_common(CLI::App *cmd, Common &c) {
  cmd->add_option("--seed", c.seed, "Random seed (overrides the config file)");
  cmd->add_option("--config", c.config, "JSON run configuration");
  cmd->add_option("--out", c.out, "Output path");
}

RunConfig resolve_config(const Common &c) {
  RunConfig cfg = c.config.empty() ? RunConfig{} : load_run_config(c.config);
  if (c.seed) cfg.seed = *c.seed;
  cfg.propagate_seed();
  cfg.validate();
  return cfg;
}

void log_run(const std::string &what, const std::string &fingerprint, std::uint64_t seed) {
  std::cerr << "kgsyn " << what << ": config " << fingerprint << " seed " << seed << "\n";
}

void require_out(const Common &c) {
  if (c.out.empty()) throw Error(ErrorCode::kConfigError, "--out is required");
}

void write_text(const std::string &path, const std::string &text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write '" + path + "'");
  out << text;
}

std::string render(const std::vector<ReportRow> &rows, const std::string &format) {
  if (format == "json") return report_table_json(rows) + "\n";
  return report_table_tsv(rows);
}

std::string hex(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

struct PathFlags {
  std::string data, triples, kinds, pairs, corpus;

  void add(CLI::App *cmd, bool with_pairs) {
    cmd->add_option("--data", data, "Directory holding triples.tsv, kinds.tsv, pairs.tsv, corpus.txt");
    cmd->add_option("--triples", triples, "Triples TSV");
    cmd->add_option("--kinds", kinds, "Entity kinds TSV");
    if (with_pairs) {
      cmd->add_option("--pairs", pairs, "Mention-entity pairs TSV");
      cmd->add_option("--corpus", corpus, "Pretraining corpus, one line per document");
    }
  }

  void apply(PathSettings &p) const {
    if (!data.empty()) p.data_dir = data;
    if (!triples.empty()) p.triples = triples;
    if (!kinds.empty()) p.kinds = kinds;
    if (!pairs.empty()) p.pairs = pairs;
    if (!corpus.empty()) p.corpus = corpus;
    p.resolve();
  }
};

KnowledgeGraph load_graph(const PathSettings &p, DuplicatePolicy policy) {
  if (p.triples.empty() || p.kinds.empty()) {
    throw Error(ErrorCode::kConfigError, "--triples and --kinds are required");
  }
  std::vector<std::string> warnings;
  KnowledgeGraph kg = build_graph(load_triples(p.triples), load_kinds(p.kinds), policy, &warnings);
  for (const auto &w : warnings) std::cerr << "warning: " << w << "\n";
  return kg;
}

int run(int argc, char **argv) {
  CLI::App app{"Entity synonym discovery with knowledge-graph fusion"};
  app.require_subcommand(1);

  // gen
  Common gen_c;
  std::string gen_spec;
  auto *gen = app.add_subcommand("gen", "Generate a synthetic data bundle");
  add_common(gen, gen_c);
  gen->add_option("--spec", gen_spec, "Synthetic spec JSON");

  // train-kge
  Common kge_c;
  PathFlags kge_p;
  bool kge_lenient = false;
  auto *tkge = app.add_subcommand("train-kge", "Train the knowledge graph embedding");
  add_common(tkge, kge_c);
  kge_p.add(tkge, false);
  tkge->add_flag("--lenient", kge_lenient, "Drop duplicate triples with a warning");

  // train-matcher
  Common tm_c;
  PathFlags tm_p;
  std::string tm_kge, tm_fusion, tm_gate, tm_trace;
  std::optional<std::size_t> tm_epochs;
  bool tm_lenient = false;
  auto *tm = app.add_subcommand("train-matcher", "Train the mention-entity matcher");
  add_common(tm, tm_c);
  tm_p.add(tm, true);
  tm->add_option("--kge", tm_kge, "Knowledge embedding checkpoint from train-kge");
  tm->add_option("--fusion-mode", tm_fusion, "gate, direct_addition, fc_fusion or no_knowledge");
  tm->add_option("--gate-activation", tm_gate, "softmax or sigmoid");
  tm->add_option("--epochs", tm_epochs, "Maximum epochs (0 keeps the initial model)");
  tm->add_option("--trace", tm_trace, "Write the per-epoch trace as JSON");
  tm->add_flag("--lenient", tm_lenient, "Drop duplicate triples with a warning");

  // eval
  Common ev_c;
  std::string ev_model, ev_pairs, ev_baseline, ev_kinds, ev_format = "tsv";
  auto *ev = app.add_subcommand("eval", "Evaluate a model or baseline on test pairs");
  add_common(ev, ev_c);
  ev->add_option("--model", ev_model, "Matcher checkpoint");
  ev->add_option("--pairs", ev_pairs, "Pairs TSV; test rows are scored")->required();
  ev->add_option("--baseline", ev_baseline, "Score with a baseline instead (jaccard)");
  ev->add_option("--kinds", ev_kinds, "Entity kinds TSV (baseline without --model)");
  ev->add_option("--format", ev_format, "tsv or json")->check(CLI::IsMember({"tsv", "json"}));

  // ablate
  Common ab_c;
  PathFlags ab_p;
  std::string ab_format = "tsv";
  auto *ab = app.add_subcommand("ablate", "Train and evaluate every ablation variant");
  add_common(ab, ab_c);
  ab_p.add(ab, true);
  ab->add_option("--format", ab_format, "tsv or json")->check(CLI::IsMember({"tsv", "json"}));

  // query
  Common q_c;
  std::string q_model, q_mention;
  std::size_t q_k = 5;
  auto *q = app.add_subcommand("query", "Rank entities for one mention");
  add_common(q, q_c);
  q->add_option("--model", q_model, "Matcher checkpoint")->required();
  q->add_option("--mention", q_mention, "Mention text")->required();
  q->add_option("--k", q_k, "Number of results");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    if (app.get_subcommands().empty()) std::cerr << app.help();
    return 1;
  }

  if (gen->parsed()) {
    require_out(gen_c);
    RunConfig cfg = resolve_config(gen_c);
    SyntheticSpec spec = gen_spec.empty() ? cfg.synthetic : load_synthetic_spec(gen_spec);
    if (gen_c.seed) spec.seed = *gen_c.seed;
    log_run("gen", hex(fnv1a(synthetic_spec_to_json(spec).dump())), spec.seed);
    const SyntheticData data = generate_synthetic(spec);
    write_bundle(gen_c.out, data);
    std::cerr << "wrote " << data.kg.entity_count() << " entities, " << data.kg.triple_count()
              << " triples, " << data.pairs.pairs.size() << " pairs to " << gen_c.out << "\n";
    return 0;
  }

  if (tkge->parsed()) {
    require_out(kge_c);
    RunConfig cfg = resolve_config(kge_c);
    if (kge_lenient) cfg.duplicates = DuplicatePolicy::kLenient;
    kge_p.apply(cfg.paths);
    log_run("train-kge", cfg.fingerprint(), cfg.seed);
    const KnowledgeGraph kg = load_graph(cfg.paths, cfg.duplicates);
    KgeTrace trace;
    const EmbeddingStore store = train_kge(kg, cfg.kge, &trace);
    if (!trace.epoch_hinge.empty()) {
      std::cerr << "final epoch hinge " << trace.epoch_hinge.back() << "\n";
    }
    store_to_checkpoint(kg, store, cfg.seed, cfg.hash()).save(kge_c.out);
    return 0;
  }

  if (tm->parsed()) {
    require_out(tm_c);
    RunConfig cfg = resolve_config(tm_c);
    if (tm_lenient) cfg.duplicates = DuplicatePolicy::kLenient;
    if (!tm_fusion.empty()) {
      auto m = parse_fusion_mode(tm_fusion);
      if (!m) throw Error(ErrorCode::kConfigError, "unknown fusion mode '" + tm_fusion + "'");
      cfg.matcher.mode = *m;
    }
    if (!tm_gate.empty()) {
      auto g = parse_gate_activation(tm_gate);
      if (!g) throw Error(ErrorCode::kConfigError, "unknown gate activation '" + tm_gate + "'");
      cfg.matcher.gate_activation = *g;
    }
    if (tm_epochs) cfg.matcher.max_epochs = *tm_epochs;
    tm_p.apply(cfg.paths);
    log_run("train-matcher", cfg.fingerprint(), cfg.seed);

    std::optional<EmbeddingStore> store;
    std::optional<Checkpoint> kge_ckpt;
    if (cfg.matcher.mode != FusionMode::kNoKnowledge) {
      if (tm_kge.empty()) throw Error(ErrorCode::kConfigError, "--kge is required for this fusion mode");
      kge_ckpt = Checkpoint::load(tm_kge);
    }
    std::vector<std::string> warnings;
    const DataBundle bundle = load_bundle(cfg.paths, cfg.duplicates, &warnings);
    for (const auto &w : warnings) std::cerr << "warning: " << w << "\n";
    if (kge_ckpt) store = store_from_checkpoint(*kge_ckpt, bundle.kg);

    const SubwordVocab vocab = build_bundle_vocab(bundle, cfg.tokenizer);
    const SemanticTable table = initial_table(bundle, vocab, cfg.semantic);
    MatcherTrace trace;
    const MatcherModel model =
        train_model(bundle, store ? &*store : nullptr, vocab, table, cfg.matcher, &trace);
    std::cerr << "best epoch " << trace.best_epoch << " dev hits@3 "
              << trace.epochs[trace.best_epoch].dev_hits3 << "\n";
    if (trace.degenerate_negatives) {
      std::cerr << "warning: fewer eligible negatives than requested\n";
    }
    if (!tm_trace.empty()) {
      nlohmann::ordered_json j;
      j["best_epoch"] = trace.best_epoch;
      j["degenerate_negatives"] = trace.degenerate_negatives;
      for (const auto &e : trace.epochs) {
        j["epochs"].push_back({{"epoch", e.epoch}, {"train_loss", e.train_loss},
                               {"dev_hits3", e.dev_hits3}});
      }
      write_text(tm_trace, j.dump(2) + "\n");
    }
    model_to_checkpoint(model, cfg.seed, cfg.hash()).save(tm_c.out);
    return 0;
  }

  if (ev->parsed()) {
    RunConfig cfg = resolve_config(ev_c);
    std::vector<std::string> surfaces;
    std::optional<MatcherModel> model;
    std::string fingerprint = cfg.fingerprint();
    std::uint64_t seed = cfg.seed;
    TokenizerMode mode = cfg.tokenizer;
    if (!ev_model.empty()) {
      const Checkpoint ckpt = Checkpoint::load(ev_model);
      model = model_from_checkpoint(ckpt);
      surfaces = model->entity_surfaces;
      fingerprint = hex(ckpt.config_hash);
      seed = ckpt.seed;
      mode = model->vocab.mode();
    } else if (!ev_kinds.empty()) {
      for (const auto &[surface, kind] : load_kinds(ev_kinds)) surfaces.push_back(surface);
    } else {
      throw Error(ErrorCode::kConfigError, "eval needs --model or --kinds");
    }
    if (!ev_baseline.empty() && ev_baseline != "jaccard") {
      throw Error(ErrorCode::kConfigError, "unknown baseline '" + ev_baseline + "'");
    }
    if (ev_baseline.empty() && !model) {
      throw Error(ErrorCode::kConfigError, "--model is required unless --baseline is given");
    }
    log_run("eval", fingerprint, seed);
    const PairDataset pairs = load_pairs(ev_pairs, resolver_for(surfaces));
    const auto test = pairs.select(Split::kTest);
    if (test.empty()) throw Error(ErrorCode::kEmptySplit, "no test pairs in '" + ev_pairs + "'");
    const SynonymIndex syn = build_synonym_index(pairs, surfaces.size());
    const Scorer scorer =
        ev_baseline.empty() ? make_matcher_scorer(*model) : make_jaccard_scorer(surfaces, mode);
    const EvalOptions options{cfg.ks, mode, fingerprint};
    const std::vector<ReportRow> rows = {
        {ev_baseline.empty() ? std::string(fusion_mode_name(model->mode)) : ev_baseline,
         evaluate(scorer, test, syn, surfaces, options)}};
    write_text(ev_c.out, render(rows, ev_format));
    return 0;
  }

  if (ab->parsed()) {
    RunConfig cfg = resolve_config(ab_c);
    ab_p.apply(cfg.paths);
    log_run("ablate", cfg.fingerprint(), cfg.seed);
    std::vector<std::string> warnings;
    const DataBundle bundle = load_bundle(cfg.paths, cfg.duplicates, &warnings);
    for (const auto &w : warnings) std::cerr << "warning: " << w << "\n";
    const AblationRun result = run_ablation(bundle, cfg);
    write_text(ab_c.out, render(result.rows, ab_format));
    return 0;
  }

  if (q->parsed()) {
    const Checkpoint ckpt = Checkpoint::load(q_model);
    log_run("query", hex(ckpt.config_hash), ckpt.seed);
    const MatcherModel model = model_from_checkpoint(ckpt);
    std::vector<EntityId> all(model.entity_count());
    for (std::uint32_t i = 0; i < all.size(); ++i) all[i] = EntityId{i};
    std::string text;
    std::size_t rank = 1;
    for (const auto &[id, s] : query_top_k(q_mention, q_k, model, all)) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.6f", s);
      text += std::to_string(rank++) + "\t" + model.entity_surfaces[id.value] + "\t" + buf + "\n";
    }
    write_text(q_c.out, text);
    return 0;
  }
  return 1;
}

}  // namespace

int main(int argc, char **argv) {
  try {
    return run(argc, argv);
  } catch (const kgsyn::Error &e) {
    std::cerr << "error: " << e.what() << "\n";
    switch (kgsyn::error_class(e.code())) {
      case kgsyn::ErrorClass::kUsage: return 1;
      case kgsyn::ErrorClass::kData: return 2;
      case kgsyn::ErrorClass::kNumeric: return 3;
    }
    return 2;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
