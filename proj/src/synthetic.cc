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

#include "kgsyn/synthetic.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <set>
#include <unordered_set>
#include <utility>

#include "kgsyn/error.h"
#include "kgsyn/random.h"
#include "kgsyn/tokenizer.h"
#include "kgsyn/tsv.h"

namespace kgsyn {

namespace {

// Formal surfaces and colloquial paraphrases come from disjoint CJK ranges.
constexpr char32_t kFormalBase = 0x4E00;
constexpr char32_t kFormalSize = 0x1800;
constexpr char32_t kColloquialBase = 0x6C00;
constexpr char32_t kColloquialSize = 0x2000;

template <typename T>
const T &pick(const std::vector<T> &v, Rng &rng) {
  return v[rng.index(v.size())];
}

std::string join(const std::vector<char32_t> &cps) {
  std::string s;
  for (char32_t cp : cps) s += utf8_encode(cp);
  return s;
}

class Generator {
 public:
  explicit Generator(const SyntheticSpec &spec)
      : spec_(spec),
        tree_rng_(derive_seed(spec.seed, "synthetic-tree")),
        link_rng_(derive_seed(spec.seed, "synthetic-links")),
        mention_rng_(derive_seed(spec.seed, "synthetic-mentions")),
        corpus_rng_(derive_seed(spec.seed, "synthetic-corpus")),
        split_rng_(derive_seed(spec.seed, "synthetic-split")) {}

  SyntheticData run() {
    build_tree();
    build_links();
    SyntheticData out;
    for (std::size_t c = 0; c < concepts_.size(); ++c) {
      out.kinds.emplace_back(concepts_[c].surface, EntityKind::kConcept);
    }
    for (const auto &inst : instances_) {
      out.kinds.emplace_back(inst.surface, EntityKind::kInstance);
    }
    out.triples = triples_;
    out.kg = build_graph(out.triples, out.kinds);
    build_pairs(out);
    build_corpus(out);
    return out;
  }

 private:
  struct ConceptNode {
    std::string surface;
    std::size_t parent = 0;
    bool has_parent = false;
    std::vector<char32_t> colloquial;
  };
  struct InstanceNode {
    std::string surface;
    std::size_t leaf = 0;
    std::size_t hint = 0;  // concept named by the first S_IC link
  };

  std::string fresh_surface() {
    for (;;) {
      const std::size_t len = 2 + tree_rng_.index(3);
      std::vector<char32_t> cps;
      for (std::size_t i = 0; i < len; ++i) {
        cps.push_back(kFormalBase + static_cast<char32_t>(tree_rng_.index(kFormalSize)));
      }
      std::string s = join(cps);
      if (surfaces_.insert(s).second) return s;
    }
  }

  void build_tree() {
    std::vector<std::size_t> level = {0};
    concepts_.push_back({fresh_surface(), 0, false, {}});
    for (std::size_t d = 0; d < spec_.depth; ++d) {
      std::vector<std::size_t> next;
      for (std::size_t parent : level) {
        for (std::size_t b = 0; b < spec_.branching; ++b) {
          next.push_back(concepts_.size());
          concepts_.push_back({fresh_surface(), parent, true, {}});
        }
      }
      level = std::move(next);
    }
    leaves_ = level;
    char32_t next_cp = kColloquialBase;
    for (auto &c : concepts_) {
      for (std::size_t i = 0; i < spec_.colloquial_per_concept; ++i) c.colloquial.push_back(next_cp++);
    }
    for (std::size_t leaf : leaves_) {
      for (std::size_t i = 0; i < spec_.instances_per_leaf; ++i) {
        instances_.push_back({fresh_surface(), leaf, 0});
      }
    }
    for (std::size_t c = 0; c < concepts_.size(); ++c) {
      if (concepts_[c].has_parent) {
        add(concepts_[c].surface, std::string(kSubClassOfName),
            concepts_[concepts_[c].parent].surface);
      }
    }
    for (const auto &inst : instances_) {
      add(inst.surface, std::string(kInstanceOfName), concepts_[inst.leaf].surface);
    }
  }

  void build_links() {
    for (std::size_t r = 0; r < spec_.relation_types; ++r) {
      relations_.push_back("rel" + std::to_string(r));
    }
    // Each relation maps every leaf to a target leaf, so S_l has structure to learn.
    std::vector<std::vector<std::size_t>> leaf_map(spec_.relation_types);
    for (auto &m : leaf_map) {
      for (std::size_t i = 0; i < leaves_.size(); ++i) m.push_back(pick(leaves_, link_rng_));
    }
    std::vector<std::vector<std::size_t>> by_leaf(concepts_.size());
    for (std::size_t i = 0; i < instances_.size(); ++i) by_leaf[instances_[i].leaf].push_back(i);
    std::vector<std::size_t> leaf_pos(concepts_.size());
    for (std::size_t i = 0; i < leaves_.size(); ++i) leaf_pos[leaves_[i]] = i;

    for (std::size_t i = 0; i < instances_.size(); ++i) {
      auto &inst = instances_[i];
      for (std::size_t l = 0; l < spec_.instance_links; ++l) {
        for (int attempt = 0; attempt < 32; ++attempt) {
          const std::size_t r = link_rng_.index(relations_.size());
          const auto &pool = by_leaf[leaf_map[r][leaf_pos[inst.leaf]]];
          const std::size_t j = pick(pool, link_rng_);
          if (j != i && add(inst.surface, relations_[r], instances_[j].surface)) break;
        }
      }
      for (std::size_t l = 0; l < spec_.instance_concept_links; ++l) {
        for (int attempt = 0; attempt < 32; ++attempt) {
          const std::size_t r = link_rng_.index(relations_.size());
          const std::size_t c = link_rng_.index(concepts_.size());
          if (add(inst.surface, relations_[r], concepts_[c].surface)) {
            if (l == 0) inst.hint = c;
            break;
          }
        }
      }
      if (spec_.instance_concept_links == 0) inst.hint = inst.leaf;
    }
    for (std::size_t c = 0; c < concepts_.size(); ++c) {
      for (std::size_t l = 0; l < spec_.concept_links; ++l) {
        for (int attempt = 0; attempt < 32; ++attempt) {
          const std::size_t r = link_rng_.index(relations_.size());
          const std::size_t t = link_rng_.index(concepts_.size());
          if (t != c && add(concepts_[c].surface, relations_[r], concepts_[t].surface)) break;
        }
      }
    }
  }

  bool add(const std::string &h, const std::string &r, const std::string &t) {
    if (!triple_keys_.emplace(h, r, t).second) return false;
    triples_.push_back({h, r, t});
    return true;
  }

  std::string perturb(const std::string &surface, Perturbation p,
                      const std::vector<char32_t> &primary,
                      const std::vector<char32_t> &secondary) {
    auto cps = utf8_decode(surface);
    Rng &rng = mention_rng_;
    switch (p) {
      case Perturbation::kIdentity:
        break;
      case Perturbation::kCharDrop:
        if (cps.size() > 1) cps.erase(cps.begin() + static_cast<std::ptrdiff_t>(rng.index(cps.size())));
        break;
      case Perturbation::kCharSwap:
        if (cps.size() > 1) {
          const std::size_t i = rng.index(cps.size() - 1);
          std::swap(cps[i], cps[i + 1]);
        }
        break;
      case Perturbation::kSubwordSubstitution:
        if (cps.size() > 1) {
          cps[rng.index(cps.size())] =
              kFormalBase + static_cast<char32_t>(rng.index(kFormalSize));
        }
        break;
      case Perturbation::kParaphrase: {
        cps.clear();
        cps.push_back(pick(primary, rng));
        cps.push_back(pick(primary, rng));
        cps.push_back(pick(secondary, rng));
        break;
      }
    }
    return join(cps);
  }

  void build_pairs(SyntheticData &out) {
    struct Draft {
      std::string mention;
      EntityId entity;
      bool paraphrase;
    };
    std::vector<Draft> drafts;
    std::set<std::pair<std::string, std::uint32_t>> seen;
    auto emit = [&](const std::string &surface, const std::vector<char32_t> &primary,
                    const std::vector<char32_t> &secondary) {
      const EntityId id = *out.kg.find_entity(surface);
      for (std::size_t v = 0; v < spec_.variants; ++v) {
        const Perturbation p = pick(spec_.perturbations, mention_rng_);
        std::string m = perturb(surface, p, primary, secondary);
        if (seen.emplace(m, id.value).second) {
          drafts.push_back({std::move(m), id, p == Perturbation::kParaphrase});
        }
      }
    };
    for (const auto &c : concepts_) emit(c.surface, c.colloquial, c.colloquial);
    for (const auto &inst : instances_) {
      emit(inst.surface, concepts_[inst.leaf].colloquial, concepts_[inst.hint].colloquial);
    }

    for (std::size_t i = drafts.size(); i > 1; --i) {
      std::swap(drafts[i - 1], drafts[split_rng_.index(i)]);
    }
    const std::size_t n = drafts.size();
    const auto n_train = static_cast<std::size_t>(std::floor(n * spec_.split[0]));
    const auto n_dev = static_cast<std::size_t>(std::floor(n * spec_.split[1]));
    for (std::size_t i = 0; i < n; ++i) {
      const Split s = i < n_train ? Split::kTrain : i < n_train + n_dev ? Split::kDev : Split::kTest;
      if (drafts[i].paraphrase) out.paraphrase_pairs.push_back(out.pairs.pairs.size());
      out.pairs.pairs.push_back({std::move(drafts[i].mention), drafts[i].entity, s});
    }
  }

  // Lines tie each entity surface to its concept and to that concept's
  // colloquial characters, which is what skip-gram pretraining can pick up.
  void build_corpus(SyntheticData &out) {
    Rng &rng = corpus_rng_;
    auto colloquial = [&](const std::vector<char32_t> &set) {
      std::vector<char32_t> cps = {pick(set, rng), pick(set, rng)};
      return join(cps);
    };
    for (std::size_t k = 0; k < spec_.corpus_lines_per_entity; ++k) {
      for (const auto &c : concepts_) {
        std::string line = c.surface + " " + colloquial(c.colloquial);
        if (c.has_parent) line += " " + concepts_[c.parent].surface;
        out.corpus.push_back(std::move(line));
      }
      for (const auto &inst : instances_) {
        out.corpus.push_back(inst.surface + " " + concepts_[inst.leaf].surface + " " +
                             colloquial(concepts_[inst.leaf].colloquial) + " " +
                             colloquial(concepts_[inst.hint].colloquial));
      }
    }
    for (const auto &t : triples_) out.corpus.push_back(t.head + " " + t.tail);
  }

  const SyntheticSpec &spec_;
  Rng tree_rng_, link_rng_, mention_rng_, corpus_rng_, split_rng_;
  std::unordered_set<std::string> surfaces_;
  std::vector<ConceptNode> concepts_;
  std::vector<std::size_t> leaves_;
  std::vector<InstanceNode> instances_;
  std::vector<std::string> relations_;
  std::vector<RawTriple> triples_;
  std::set<std::tuple<std::string, std::string, std::string>> triple_keys_;
};

}  // namespace

std::string_view perturbation_name(Perturbation p) {
  switch (p) {
    case Perturbation::kIdentity: return "identity";
    case Perturbation::kCharDrop: return "char_drop";
    case Perturbation::kCharSwap: return "char_swap";
    case Perturbation::kSubwordSubstitution: return "subword_substitution";
    case Perturbation::kParaphrase: return "paraphrase";
  }
  return "?";
}

std::optional<Perturbation> parse_perturbation(std::string_view name) {
  for (std::size_t i = 0; i < kNumPerturbations; ++i) {
    const auto p = static_cast<Perturbation>(i);
    if (perturbation_name(p) == name) return p;
  }
  return std::nullopt;
}

void SyntheticSpec::validate() const {
  auto fail = [](const std::string &msg) { throw Error(ErrorCode::kSpecInvalid, msg); };
  if (depth < 1) fail("depth must be >= 1");
  if (branching < 1) fail("branching must be >= 1");
  if (instances_per_leaf < 1) fail("instances_per_leaf must be >= 1");
  if (relation_types < 1) fail("relation_types must be >= 1");
  if (variants < 1) fail("variants must be >= 1");
  if (colloquial_per_concept < 1) fail("colloquial_per_concept must be >= 1");
  if (perturbations.empty()) fail("perturbations must not be empty");
  for (double r : split) {
    if (!(r >= 0.0 && r <= 1.0)) fail("split ratios must lie in [0, 1]");
  }
  if (std::abs(split[0] + split[1] + split[2] - 1.0) > 1e-9) fail("split ratios must sum to 1");

  // Tree sizes grow geometrically; keep the surface and colloquial ranges from running dry.
  double concepts = 0.0, level = 1.0;
  for (std::size_t d = 0; d <= depth; ++d) {
    concepts += level;
    level *= static_cast<double>(branching);
  }
  const double instances = level / static_cast<double>(branching) * static_cast<double>(instances_per_leaf);
  if (concepts + instances > 1e6) fail("tree too large");
  if (concepts * static_cast<double>(colloquial_per_concept) > kColloquialSize) {
    fail("colloquial alphabet exhausted");
  }
}

SyntheticData generate_synthetic(const SyntheticSpec &spec) {
  spec.validate();
  return Generator(spec).run();
}

void write_bundle(const std::string &dir, const SyntheticData &data) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kIoError, "cannot create '" + dir + "': " + ec.message());
  const std::filesystem::path root(dir);
  save_triples((root / "triples.tsv").string(), data.triples);
  save_kinds((root / "kinds.tsv").string(), data.kinds);
  std::vector<std::string> surfaces;
  for (const auto &e : data.kg.entities()) surfaces.push_back(e.surface);
  save_pairs((root / "pairs.tsv").string(), data.pairs, surfaces);
  save_corpus((root / "corpus.txt").string(), data.corpus);
}

}  // namespace kgsyn
