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

#ifndef KGSYN_KG_H_
#define KGSYN_KG_H_

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "kgsyn/dataset.h"
#include "kgsyn/ids.h"

namespace kgsyn {

enum class EntityKind : std::uint8_t { kInstance, kConcept };

std::string_view kind_name(EntityKind kind);
std::optional<EntityKind> parse_kind(std::string_view name);

// The five disjoint triple subsets of a knowledge graph.
enum class TripleSubset : std::uint8_t {
  kInstanceOf,          // instance -instanceOf-> concept
  kSubClassOf,          // concept -subClassOf-> concept
  kInstanceInstance,    // instance -r-> instance
  kNhhInstanceConcept,  // instance -r-> concept, r not hierarchical
  kNhhConceptConcept,   // concept -r-> concept, r not hierarchical
};

inline constexpr std::size_t kNumSubsets = 5;
inline constexpr std::array<TripleSubset, kNumSubsets> kAllSubsets = {
    TripleSubset::kInstanceOf, TripleSubset::kSubClassOf,
    TripleSubset::kInstanceInstance, TripleSubset::kNhhInstanceConcept,
    TripleSubset::kNhhConceptConcept};

std::string_view subset_name(TripleSubset subset);

// Reserved relation names; matched case-sensitively.
inline constexpr std::string_view kInstanceOfName = "instanceOf";
inline constexpr std::string_view kSubClassOfName = "subClassOf";

struct Entity {
  std::string surface;
  EntityKind kind = EntityKind::kInstance;

  bool operator==(const Entity &) const = default;
};

struct Triple {
  EntityId head;
  RelationId relation;
  EntityId tail;
  TripleSubset subset = TripleSubset::kInstanceInstance;

  bool operator==(const Triple &) const = default;
};

struct RawTriple {
  std::string head;
  std::string relation;
  std::string tail;

  bool operator==(const RawTriple &) const = default;
};

// Entity kinds in declaration order; the order fixes entity ids.
using KindRegistry = std::vector<std::pair<std::string, EntityKind>>;

enum class DuplicatePolicy { kStrict, kLenient };

struct TripleRef {
  TripleSubset subset;
  std::uint32_t index;

  bool operator==(const TripleRef &) const = default;
};

// Immutable knowledge graph: entities, relations and the five triple subsets.
class KnowledgeGraph {
 public:
  KnowledgeGraph();

  // Builds indices over already-classified parts without checking any
  // invariant. validate_graph reports what is wrong with the result.
  static KnowledgeGraph assemble(std::vector<Entity> entities,
                                 std::vector<std::string> relations,
                                 std::array<std::vector<Triple>, kNumSubsets> subsets);

  std::size_t entity_count() const { return entities_.size(); }
  std::size_t relation_count() const { return relations_.size(); }
  std::size_t instance_count() const { return instances_.size(); }
  std::size_t concept_count() const { return concepts_.size(); }
  std::size_t triple_count() const;

  const Entity &entity(EntityId id) const;
  const std::vector<Entity> &entities() const { return entities_; }
  bool has_entity(EntityId id) const { return id.value < entities_.size(); }
  std::optional<EntityId> find_entity(std::string_view surface) const;

  const std::string &relation_name(RelationId id) const;
  const std::vector<std::string> &relations() const { return relations_; }
  std::optional<RelationId> find_relation(std::string_view name) const;

  static constexpr RelationId instance_of_relation() { return RelationId{0}; }
  static constexpr RelationId subclass_of_relation() { return RelationId{1}; }

  std::span<const Triple> triples(TripleSubset subset) const {
    return subsets_[static_cast<std::size_t>(subset)];
  }

  // Entity ids of each kind, ascending.
  std::span<const EntityId> instances() const { return instances_; }
  std::span<const EntityId> concepts() const { return concepts_; }
  std::span<const EntityId> entities_of_kind(EntityKind kind) const {
    return kind == EntityKind::kInstance ? instances() : concepts();
  }

  // Position of an entity within its kind's list; indexes embedding tables.
  std::uint32_t local_index(EntityId id) const;

  // True if (head, relation, tail) is a stored triple of `subset`.
  bool contains(TripleSubset subset, EntityId head, RelationId relation,
                EntityId tail) const;

  std::span<const TripleRef> by_head(EntityId id) const;
  std::span<const TripleRef> by_tail(EntityId id) const;
  std::span<const TripleRef> by_relation(RelationId id) const;

  const Triple &triple(TripleRef ref) const {
    return subsets_[static_cast<std::size_t>(ref.subset)][ref.index];
  }

 private:
  struct Key {
    std::uint32_t head, relation, tail;
    bool operator==(const Key &) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key &k) const noexcept;
  };

  std::vector<Entity> entities_;
  std::vector<std::string> relations_;
  std::array<std::vector<Triple>, kNumSubsets> subsets_;

  std::unordered_map<std::string, EntityId> entity_by_surface_;
  std::unordered_map<std::string, RelationId> relation_by_name_;
  std::vector<EntityId> instances_;
  std::vector<EntityId> concepts_;
  std::vector<std::uint32_t> local_index_;
  std::array<std::unordered_set<Key, KeyHash>, kNumSubsets> keys_;
  std::vector<std::vector<TripleRef>> by_head_;
  std::vector<std::vector<TripleRef>> by_tail_;
  std::vector<std::vector<TripleRef>> by_relation_;
};

// Classifies raw triples into the five subsets using the declared kinds.
// Entity ids follow registry order; relation ids reserve 0 for instanceOf and
// 1 for subClassOf, then follow first use. In lenient mode duplicates are
// dropped and reported through `warnings`.
KnowledgeGraph build_graph(std::span<const RawTriple> raw, const KindRegistry &kinds,
                           DuplicatePolicy policy = DuplicatePolicy::kStrict,
                           std::vector<std::string> *warnings = nullptr);

enum class IssueKind { kDanglingId, kDuplicate, kKindMismatch, kOverlap, kEmptySurface };

std::string_view issue_kind_name(IssueKind kind);

struct ValidationIssue {
  IssueKind kind;
  std::string detail;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;

  bool empty() const { return issues.empty(); }
  bool mentions(IssueKind kind) const;
};

ValidationReport validate_graph(const KnowledgeGraph &kg);

// Gold synonyms per mention and co-synonymous entities per entity.
class SynonymIndex {
 public:
  // Sorted gold entities of a mention; empty for unseen mentions.
  std::span<const EntityId> golds(std::string_view mention) const;

  // Sorted entities sharing at least one mention with `id`, excluding `id`.
  std::span<const EntityId> co_synonyms(EntityId id) const;

  std::size_t mention_count() const { return by_mention_.size(); }

 private:
  friend SynonymIndex build_synonym_index(const PairDataset &, std::size_t);

  std::map<std::string, std::vector<EntityId>, std::less<>> by_mention_;
  std::vector<std::vector<EntityId>> co_synonyms_;
};

// Indexes pairs from every split. Throws kUnknownEntity for ids outside
// [0, entity_count).
SynonymIndex build_synonym_index(const PairDataset &pairs, std::size_t entity_count);

}  // namespace kgsyn

#endif  // KGSYN_KG_H_
