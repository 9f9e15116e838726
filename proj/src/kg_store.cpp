#include "kgeval/kg_store.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <set>

#include "kgeval/error.hpp"
#include "kgeval/io.hpp"

namespace kgeval {

namespace {

std::uint64_t pair_key(EntityId entity, RelationId relation) {
  return (static_cast<std::uint64_t>(entity) << 32) | relation;
}

void sort_unique(std::vector<EntityId>& ids) {
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
}

void dedupe_split(std::vector<Triple>& triples, Split split) {
  std::set<Triple> seen;
  std::vector<Triple> kept;
  kept.reserve(triples.size());
  for (const Triple& t : triples) {
    if (seen.insert(t).second) kept.push_back(t);
  }
  if (kept.size() != triples.size()) {
    spdlog::warn("{} split: dropped {} duplicate triple(s)", to_string(split),
                 triples.size() - kept.size());
  }
  triples = std::move(kept);
}

}  // namespace

std::string_view to_string(Split split) {
  switch (split) {
    case Split::kTrain: return "train";
    case Split::kValid: return "valid";
    case Split::kTest: return "test";
  }
  return "?";
}

std::string_view to_string(Direction direction) {
  return direction == Direction::kHead ? "head" : "tail";
}

std::uint32_t Vocabulary::intern(std::string_view label) {
  auto [it, inserted] =
      ids_.try_emplace(std::string(label), static_cast<std::uint32_t>(labels_.size()));
  if (inserted) labels_.emplace_back(label);
  return it->second;
}

std::optional<std::uint32_t> Vocabulary::find(std::string_view label) const {
  auto it = ids_.find(std::string(label));
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

std::span<const Triple> TripleStore::split(Split which) const {
  switch (which) {
    case Split::kTrain: return train_;
    case Split::kValid: return valid_;
    case Split::kTest: return test_;
  }
  return {};
}

std::span<const EntityId> TripleStore::filtered_candidates(EntityId anchor,
                                                           RelationId relation,
                                                           Direction direction) const {
  const auto& index = direction == Direction::kTail ? tails_of_ : heads_of_;
  auto it = index.find(pair_key(anchor, relation));
  if (it == index.end()) return {};
  return it->second;
}

std::string TripleStore::to_tsv(Split which) const {
  std::string out;
  for (const Triple& t : split(which)) {
    out += entities_.label(t.head);
    out += '\t';
    out += relations_.label(t.relation);
    out += '\t';
    out += entities_.label(t.tail);
    out += '\n';
  }
  return out;
}

void TripleStoreBuilder::add(Split split, std::string_view head, std::string_view relation,
                             std::string_view tail) {
  Triple t;
  t.head = store_.entities_.intern(head);
  t.relation = store_.relations_.intern(relation);
  t.tail = store_.entities_.intern(tail);
  switch (split) {
    case Split::kTrain: store_.train_.push_back(t); break;
    case Split::kValid: store_.valid_.push_back(t); break;
    case Split::kTest: store_.test_.push_back(t); break;
  }
}

TripleStore TripleStoreBuilder::build(const StoreOptions& options) && {
  TripleStore store = std::move(store_);
  if (store.train_.empty()) throw ParseError("train split is empty");
  dedupe_split(store.train_, Split::kTrain);
  dedupe_split(store.valid_, Split::kValid);
  dedupe_split(store.test_, Split::kTest);

  store.filter_scope_ = options.filter_scope;
  auto index = [&store](std::span<const Triple> triples) {
    for (const Triple& t : triples) {
      store.tails_of_[pair_key(t.head, t.relation)].push_back(t.tail);
      store.heads_of_[pair_key(t.tail, t.relation)].push_back(t.head);
    }
  };
  index(store.train_);
  index(store.valid_);
  if (options.filter_scope == FilterScope::kAllSplits) index(store.test_);
  for (auto& [key, ids] : store.tails_of_) sort_unique(ids);
  for (auto& [key, ids] : store.heads_of_) sort_unique(ids);

  store.seen_domains_.assign(store.relations_.size(), {});
  store.seen_ranges_.assign(store.relations_.size(), {});
  for (const Triple& t : store.train_) {
    store.seen_domains_[t.relation].push_back(t.head);
    store.seen_ranges_[t.relation].push_back(t.tail);
  }
  for (auto& ids : store.seen_domains_) sort_unique(ids);
  for (auto& ids : store.seen_ranges_) sort_unique(ids);
  return store;
}

TripleStore parse_triples(std::string_view train_text, std::string_view valid_text,
                          std::string_view test_text, const StoreOptions& options) {
  TripleStoreBuilder builder;
  auto ingest = [&builder](Split split, std::string_view text) {
    const auto lines = io::split_lines(text);
    for (std::size_t i = 0; i < lines.size(); ++i) {
      if (lines[i].empty()) continue;
      const auto fields = io::split(lines[i], '\t');
      if (fields.size() != 3) {
        throw ParseError(std::string(to_string(split)) + " line " + std::to_string(i + 1) +
                         ": expected 3 tab-separated fields, got " +
                         std::to_string(fields.size()));
      }
      if (fields[0].empty() || fields[1].empty() || fields[2].empty()) {
        throw ParseError(std::string(to_string(split)) + " line " + std::to_string(i + 1) +
                         ": empty label");
      }
      builder.add(split, fields[0], fields[1], fields[2]);
    }
  };
  ingest(Split::kTrain, train_text);
  ingest(Split::kValid, valid_text);
  ingest(Split::kTest, test_text);
  return std::move(builder).build(options);
}

std::vector<std::vector<EntityId>> TypeAssignment::members_by_type() const {
  std::vector<std::vector<EntityId>> members(types.size());
  for (EntityId e = 0; e < memberships.size(); ++e) {
    for (TypeId t : memberships[e]) members[t].push_back(e);
  }
  return members;
}

TypeAssignment load_types(std::string_view text, const TripleStore& store) {
  TypeAssignment out;
  out.memberships.assign(store.num_entities(), {});
  const auto lines = io::split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const auto fields = io::split(lines[i], '\t');
    if (fields.size() != 2 || fields[0].empty() || fields[1].empty()) {
      throw ParseError("types line " + std::to_string(i + 1) +
                       ": expected entity<TAB>type, got '" + std::string(lines[i]) + "'");
    }
    const auto entity = store.entities().find(fields[0]);
    if (!entity) {
      throw ParseError("types line " + std::to_string(i + 1) + ": unknown entity '" +
                       std::string(fields[0]) + "' in '" + std::string(lines[i]) + "'");
    }
    out.memberships[*entity].push_back(out.types.intern(fields[1]));
  }
  for (auto& m : out.memberships) {
    std::sort(m.begin(), m.end());
    m.erase(std::unique(m.begin(), m.end()), m.end());
  }
  return out;
}

std::string to_tsv(const TypeAssignment& types, const TripleStore& store) {
  std::string out;
  for (EntityId e = 0; e < types.memberships.size(); ++e) {
    for (TypeId t : types.memberships[e]) {
      out += store.entities().label(e);
      out += '\t';
      out += types.types.label(t);
      out += '\n';
    }
  }
  return out;
}

}  // namespace kgeval
