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

#include "kgsyn/kg.h"

#include <algorithm>
#include <set>

#include "kgsyn/error.h"

namespace kgsyn {

std::string_view kind_name(EntityKind kind) {
  return kind == EntityKind::kInstance ? "instance" : "concept";
}

std::optional<EntityKind> parse_kind(std::string_view name) {
  if (name == "instance") return EntityKind::kInstance;
  if (name == "concept") return EntityKind::kConcept;
  return std::nullopt;
}

std::string_view subset_name(TripleSubset subset) {
  switch (subset) {
    case TripleSubset::kInstanceOf: return "instanceOf";
    case TripleSubset::kSubClassOf: return "subClassOf";
    case TripleSubset::kInstanceInstance: return "instance-instance";
    case TripleSubset::kNhhInstanceConcept: return "nhh-instance-concept";
    case TripleSubset::kNhhConceptConcept: return "nhh-concept-concept";
  }
  return "?";
}

std::string_view issue_kind_name(IssueKind kind) {
  switch (kind) {
    case IssueKind::kDanglingId: return "DanglingId";
    case IssueKind::kDuplicate: return "Duplicate";
    case IssueKind::kKindMismatch: return "KindMismatch";
    case IssueKind::kOverlap: return "Overlap";
    case IssueKind::kEmptySurface: return "EmptySurface";
  }
  return "?";
}

std::size_t KnowledgeGraph::KeyHash::operator()(const Key &k) const noexcept {
  std::uint64_t h = (static_cast<std::uint64_t>(k.head) << 32) ^ k.tail;
  h ^= static_cast<std::uint64_t>(k.relation) * 0x9e3779b97f4a7c15ULL;
  h ^= h >> 29;
  return static_cast<std::size_t>(h * 0xbf58476d1ce4e5b9ULL);
}

KnowledgeGraph::KnowledgeGraph() {
  relations_ = {std::string(kInstanceOfName), std::string(kSubClassOfName)};
  relation_by_name_[relations_[0]] = RelationId{0};
  relation_by_name_[relations_[1]] = RelationId{1};
  by_relation_.resize(2);
}

KnowledgeGraph KnowledgeGraph::assemble(
    std::vector<Entity> entities, std::vector<std::string> relations,
    std::array<std::vector<Triple>, kNumSubsets> subsets) {
  KnowledgeGraph kg;
  kg.entities_ = std::move(entities);
  kg.relations_ = std::move(relations);
  kg.subsets_ = std::move(subsets);

  kg.relation_by_name_.clear();
  for (std::uint32_t i = 0; i < kg.relations_.size(); ++i) {
    kg.relation_by_name_.emplace(kg.relations_[i], RelationId{i});
  }
  kg.local_index_.resize(kg.entities_.size());
  for (std::uint32_t i = 0; i < kg.entities_.size(); ++i) {
    const Entity &e = kg.entities_[i];
    kg.entity_by_surface_.emplace(e.surface, EntityId{i});
    auto &list = e.kind == EntityKind::kInstance ? kg.instances_ : kg.concepts_;
    kg.local_index_[i] = static_cast<std::uint32_t>(list.size());
    list.push_back(EntityId{i});
  }

  kg.by_head_.assign(kg.entities_.size(), {});
  kg.by_tail_.assign(kg.entities_.size(), {});
  kg.by_relation_.assign(kg.relations_.size(), {});
  for (TripleSubset s : kAllSubsets) {
    const auto si = static_cast<std::size_t>(s);
    const auto &list = kg.subsets_[si];
    for (std::uint32_t i = 0; i < list.size(); ++i) {
      const Triple &t = list[i];
      TripleRef ref{s, i};
      kg.keys_[si].insert(Key{t.head.value, t.relation.value, t.tail.value});
      if (t.head.value < kg.by_head_.size()) kg.by_head_[t.head.value].push_back(ref);
      if (t.tail.value < kg.by_tail_.size()) kg.by_tail_[t.tail.value].push_back(ref);
      if (t.relation.value < kg.by_relation_.size()) {
        kg.by_relation_[t.relation.value].push_back(ref);
      }
    }
  }
  return kg;
}

std::size_t KnowledgeGraph::triple_count() const {
  std::size_t n = 0;
  for (const auto &s : subsets_) n += s.size();
  return n;
}

const Entity &KnowledgeGraph::entity(EntityId id) const {
  if (!has_entity(id)) {
    throw Error(ErrorCode::kUnknownEntity, "entity id " + std::to_string(id.value));
  }
  return entities_[id.value];
}

std::optional<EntityId> KnowledgeGraph::find_entity(std::string_view surface) const {
  auto it = entity_by_surface_.find(std::string(surface));
  if (it == entity_by_surface_.end()) return std::nullopt;
  return it->second;
}

const std::string &KnowledgeGraph::relation_name(RelationId id) const {
  if (id.value >= relations_.size()) {
    throw Error(ErrorCode::kUnknownEntity, "relation id " + std::to_string(id.value));
  }
  return relations_[id.value];
}

std::optional<RelationId> KnowledgeGraph::find_relation(std::string_view name) const {
  auto it = relation_by_name_.find(std::string(name));
  if (it == relation_by_name_.end()) return std::nullopt;
  return it->second;
}

std::uint32_t KnowledgeGraph::local_index(EntityId id) const {
  if (!has_entity(id)) {
    throw Error(ErrorCode::kUnknownEntity, "entity id " + std::to_string(id.value));
  }
  return local_index_[id.value];
}

bool KnowledgeGraph::contains(TripleSubset subset, EntityId head, RelationId relation,
                              EntityId tail) const {
  return keys_[static_cast<std::size_t>(subset)].count(
             Key{head.value, relation.value, tail.value}) > 0;
}

std::span<const TripleRef> KnowledgeGraph::by_head(EntityId id) const {
  entity(id);
  return by_head_[id.value];
}

std::span<const TripleRef> KnowledgeGraph::by_tail(EntityId id) const {
  entity(id);
  return by_tail_[id.value];
}

std::span<const TripleRef> KnowledgeGraph::by_relation(RelationId id) const {
  relation_name(id);
  return by_relation_[id.value];
}

namespace {

std::string describe(const RawTriple &t) {
  return "(" + t.head + ", " + t.relation + ", " + t.tail + ")";
}

std::optional<TripleSubset> classify(RelationId relation, EntityKind head,
                                     EntityKind tail) {
  using K = EntityKind;
  if (relation == KnowledgeGraph::instance_of_relation()) {
    if (head == K::kInstance && tail == K::kConcept) return TripleSubset::kInstanceOf;
    return std::nullopt;
  }
  if (relation == KnowledgeGraph::subclass_of_relation()) {
    if (head == K::kConcept && tail == K::kConcept) return TripleSubset::kSubClassOf;
    return std::nullopt;
  }
  if (head == K::kInstance && tail == K::kInstance) return TripleSubset::kInstanceInstance;
  if (head == K::kInstance && tail == K::kConcept) return TripleSubset::kNhhInstanceConcept;
  if (head == K::kConcept && tail == K::kConcept) return TripleSubset::kNhhConceptConcept;
  // Concept -> instance has no subset.
  return std::nullopt;
}

}  // namespace

KnowledgeGraph build_graph(std::span<const RawTriple> raw, const KindRegistry &kinds,
                           DuplicatePolicy policy, std::vector<std::string> *warnings) {
  std::vector<Entity> entities;
  std::unordered_map<std::string, EntityId> ids;
  for (const auto &[surface, kind] : kinds) {
    if (surface.empty()) throw Error(ErrorCode::kEmptySurface, "kind registry entry");
    auto [it, inserted] = ids.emplace(surface, EntityId{static_cast<std::uint32_t>(entities.size())});
    if (inserted) {
      entities.push_back({surface, kind});
    } else if (entities[it->second.value].kind != kind) {
      throw Error(ErrorCode::kKindMismatch,
                  "entity '" + surface + "' declared both instance and concept");
    }
  }

  std::vector<std::string> relations = {std::string(kInstanceOfName),
                                        std::string(kSubClassOfName)};
  std::unordered_map<std::string, RelationId> relation_ids = {
      {relations[0], RelationId{0}}, {relations[1], RelationId{1}}};

  auto lookup = [&](const std::string &surface, const RawTriple &t) {
    auto it = ids.find(surface);
    if (it == ids.end()) {
      throw Error(ErrorCode::kUnknownEntity, "'" + surface + "' in " + describe(t));
    }
    return it->second;
  };

  std::array<std::vector<Triple>, kNumSubsets> subsets;
  std::set<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>> seen;
  for (const RawTriple &t : raw) {
    EntityId head = lookup(t.head, t);
    EntityId tail = lookup(t.tail, t);
    auto [rit, fresh] = relation_ids.emplace(
        t.relation, RelationId{static_cast<std::uint32_t>(relations.size())});
    if (fresh) relations.push_back(t.relation);
    RelationId relation = rit->second;

    auto subset = classify(relation, entities[head.value].kind, entities[tail.value].kind);
    if (!subset) {
      throw Error(ErrorCode::kKindMismatch,
                  describe(t) + " has " + std::string(kind_name(entities[head.value].kind)) +
                      " head and " + std::string(kind_name(entities[tail.value].kind)) +
                      " tail");
    }
    if (!seen.emplace(head.value, relation.value, tail.value).second) {
      if (policy == DuplicatePolicy::kStrict) {
        throw Error(ErrorCode::kDuplicateTriple, describe(t));
      }
      if (warnings) warnings->push_back("duplicate triple dropped: " + describe(t));
      continue;
    }
    subsets[static_cast<std::size_t>(*subset)].push_back({head, relation, tail, *subset});
  }
  return KnowledgeGraph::assemble(std::move(entities), std::move(relations),
                                  std::move(subsets));
}

bool ValidationReport::mentions(IssueKind kind) const {
  return std::any_of(issues.begin(), issues.end(),
                     [kind](const ValidationIssue &i) { return i.kind == kind; });
}

ValidationReport validate_graph(const KnowledgeGraph &kg) {
  ValidationReport report;
  auto add = [&](IssueKind kind, std::string detail) {
    report.issues.push_back({kind, std::move(detail)});
  };

  std::unordered_map<std::string, std::uint32_t> surfaces;
  for (std::uint32_t i = 0; i < kg.entity_count(); ++i) {
    const Entity &e = kg.entities()[i];
    if (e.surface.empty()) add(IssueKind::kEmptySurface, "entity " + std::to_string(i));
    auto [it, fresh] = surfaces.emplace(e.surface, i);
    if (!fresh && !e.surface.empty()) {
      add(IssueKind::kDuplicate, "surface '" + e.surface + "' on entities " +
                                     std::to_string(it->second) + " and " + std::to_string(i));
    }
  }
  if (kg.relation_count() < 2 || kg.relations()[0] != kInstanceOfName ||
      kg.relations()[1] != kSubClassOfName) {
    add(IssueKind::kKindMismatch, "reserved relations missing from ids 0 and 1");
  }

  std::map<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>, TripleSubset> owner;
  for (TripleSubset s : kAllSubsets) {
    auto list = kg.triples(s);
    for (std::size_t i = 0; i < list.size(); ++i) {
      const Triple &t = list[i];
      const std::string where = std::string(subset_name(s)) + "[" + std::to_string(i) + "]";
      if (t.subset != s) {
        add(IssueKind::kKindMismatch, where + " carries label " +
                                          std::string(subset_name(t.subset)));
      }
      bool dangling = false;
      if (!kg.has_entity(t.head)) {
        add(IssueKind::kDanglingId, where + " head " + std::to_string(t.head.value));
        dangling = true;
      }
      if (!kg.has_entity(t.tail)) {
        add(IssueKind::kDanglingId, where + " tail " + std::to_string(t.tail.value));
        dangling = true;
      }
      if (t.relation.value >= kg.relation_count()) {
        add(IssueKind::kDanglingId, where + " relation " + std::to_string(t.relation.value));
        dangling = true;
      }
      if (dangling) continue;

      auto subset = classify(t.relation, kg.entity(t.head).kind, kg.entity(t.tail).kind);
      if (!subset || *subset != s) {
        add(IssueKind::kKindMismatch,
            where + " (" + kg.entity(t.head).surface + ", " + kg.relation_name(t.relation) +
                ", " + kg.entity(t.tail).surface + ") violates subset kinds");
      }
      auto key = std::make_tuple(t.head.value, t.relation.value, t.tail.value);
      auto [it, fresh] = owner.emplace(key, s);
      if (!fresh) {
        if (it->second == s) {
          add(IssueKind::kDuplicate, where + " repeats an earlier triple");
        } else {
          add(IssueKind::kOverlap, where + " also in " + std::string(subset_name(it->second)));
        }
      }
    }
  }
  return report;
}

std::span<const EntityId> SynonymIndex::golds(std::string_view mention) const {
  auto it = by_mention_.find(mention);
  if (it == by_mention_.end()) return {};
  return it->second;
}

std::span<const EntityId> SynonymIndex::co_synonyms(EntityId id) const {
  if (id.value >= co_synonyms_.size()) return {};
  return co_synonyms_[id.value];
}

SynonymIndex build_synonym_index(const PairDataset &pairs, std::size_t entity_count) {
  SynonymIndex index;
  for (const Pair &p : pairs.pairs) {
    if (p.entity.value >= entity_count) {
      throw Error(ErrorCode::kUnknownEntity, "pair '" + p.mention + "' -> entity " +
                                                 std::to_string(p.entity.value));
    }
    index.by_mention_[p.mention].push_back(p.entity);
  }
  std::vector<std::set<EntityId>> co(entity_count);
  for (auto &[mention, golds] : index.by_mention_) {
    std::sort(golds.begin(), golds.end());
    golds.erase(std::unique(golds.begin(), golds.end()), golds.end());
    for (EntityId a : golds) {
      for (EntityId b : golds) {
        if (a != b) co[a.value].insert(b);
      }
    }
  }
  index.co_synonyms_.resize(entity_count);
  for (std::size_t i = 0; i < entity_count; ++i) {
    index.co_synonyms_[i].assign(co[i].begin(), co[i].end());
  }
  return index;
}

}  // namespace kgsyn
