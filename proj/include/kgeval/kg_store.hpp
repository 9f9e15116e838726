#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace kgeval {

using EntityId = std::uint32_t;
using RelationId = std::uint32_t;
using TypeId = std::uint32_t;

enum class Split { kTrain, kValid, kTest };

/// kTail completes (h, r, ?); kHead completes (?, r, t).
enum class Direction { kHead, kTail };

std::string_view to_string(Split split);
std::string_view to_string(Direction direction);

struct Triple {
  EntityId head = 0;
  RelationId relation = 0;
  EntityId tail = 0;

  friend auto operator<=>(const Triple&, const Triple&) = default;
};

/// Label <-> dense id bimap; ids are assigned in insertion order.
class Vocabulary {
 public:
  std::uint32_t intern(std::string_view label);
  std::optional<std::uint32_t> find(std::string_view label) const;
  const std::string& label(std::uint32_t id) const { return labels_.at(id); }
  std::size_t size() const noexcept { return labels_.size(); }
  std::span<const std::string> labels() const noexcept { return labels_; }

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, std::uint32_t> ids_;
};

/// Which splits contribute known positives to the filtered ranking setting.
enum class FilterScope { kAllSplits, kTrainValid };

struct StoreOptions {
  FilterScope filter_scope = FilterScope::kAllSplits;
};

/// Indexed train/valid/test triples. Immutable once built.
class TripleStore {
 public:
  std::size_t num_entities() const noexcept { return entities_.size(); }
  std::size_t num_relations() const noexcept { return relations_.size(); }
  const Vocabulary& entities() const noexcept { return entities_; }
  const Vocabulary& relations() const noexcept { return relations_; }

  std::span<const Triple> split(Split which) const;
  std::span<const Triple> train() const noexcept { return train_; }
  std::span<const Triple> valid() const noexcept { return valid_; }
  std::span<const Triple> test() const noexcept { return test_; }

  /// Sorted entities known to complete the query (anchor, relation, direction).
  /// For kTail the anchor is the head; for kHead it is the tail.
  std::span<const EntityId> filtered_candidates(EntityId anchor, RelationId relation,
                                                Direction direction) const;

  /// Heads of `relation` seen in train, sorted.
  std::span<const EntityId> seen_domain(RelationId relation) const {
    return seen_domains_.at(relation);
  }
  /// Tails of `relation` seen in train, sorted.
  std::span<const EntityId> seen_range(RelationId relation) const {
    return seen_ranges_.at(relation);
  }
  /// seen_domain for kHead, seen_range for kTail.
  std::span<const EntityId> seen(RelationId relation, Direction direction) const {
    return direction == Direction::kHead ? seen_domain(relation) : seen_range(relation);
  }

  FilterScope filter_scope() const noexcept { return filter_scope_; }

  /// Serializes one split back to `head<TAB>relation<TAB>tail` lines.
  std::string to_tsv(Split which) const;

 private:
  friend class TripleStoreBuilder;

  Vocabulary entities_;
  Vocabulary relations_;
  std::vector<Triple> train_, valid_, test_;
  std::unordered_map<std::uint64_t, std::vector<EntityId>> tails_of_;  // (h, r)
  std::unordered_map<std::uint64_t, std::vector<EntityId>> heads_of_;  // (t, r)
  std::vector<std::vector<EntityId>> seen_domains_;
  std::vector<std::vector<EntityId>> seen_ranges_;
  FilterScope filter_scope_ = FilterScope::kAllSplits;
};

/// Accumulates labelled triples and freezes them into a TripleStore.
class TripleStoreBuilder {
 public:
  void add(Split split, std::string_view head, std::string_view relation,
           std::string_view tail);

  /// Throws ParseError when the train split is empty.
  TripleStore build(const StoreOptions& options = {}) &&;

 private:
  TripleStore store_;
};

/// Parses three TSV splits; ids follow first appearance across train, valid, test.
TripleStore parse_triples(std::string_view train_text, std::string_view valid_text,
                          std::string_view test_text, const StoreOptions& options = {});

/// Per-entity type memberships. An entity may carry any number of types.
struct TypeAssignment {
  Vocabulary types;
  std::vector<std::vector<TypeId>> memberships;

  std::size_t num_types() const noexcept { return types.size(); }
  bool empty() const noexcept { return types.size() == 0; }
  /// Entities carrying each type, sorted; index by TypeId.
  std::vector<std::vector<EntityId>> members_by_type() const;
};

/// Parses `entity<TAB>type` lines against the store's entity vocabulary.
TypeAssignment load_types(std::string_view text, const TripleStore& store);

std::string to_tsv(const TypeAssignment& types, const TripleStore& store);

}  // namespace kgeval
