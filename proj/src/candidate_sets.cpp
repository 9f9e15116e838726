#include "kgeval/candidate_sets.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_set>

#include "kgeval/error.hpp"

namespace kgeval {

namespace {

constexpr double kTieTolerance = 1e-12;

std::uint64_t pair_key(EntityId entity, RelationId relation) {
  return (static_cast<std::uint64_t>(entity) << 32) | relation;
}

double distance_to_ideal(double cr, double rr) {
  return std::hypot(1.0 - cr, 1.0 - rr);
}

}  // namespace

ColumnPositives column_positives(const TripleStore& store, Split split) {
  const std::size_t n_rel = store.num_relations();
  ColumnPositives positives(2 * n_rel);
  for (const Triple& t : store.split(split)) {
    positives[score_column(t.relation, Direction::kHead, n_rel)].push_back(t.head);
    positives[score_column(t.relation, Direction::kTail, n_rel)].push_back(t.tail);
  }
  for (auto& ids : positives) {
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  }
  return positives;
}

ColumnPositives default_threshold_positives(const TripleStore& store) {
  return column_positives(store, store.valid().empty() ? Split::kTrain : Split::kValid);
}

std::vector<std::vector<std::pair<EntityId, double>>> normalized_columns(const ScoreMatrix& x) {
  std::vector<std::vector<std::pair<EntityId, double>>> cols(x.n_columns());
  for (std::size_t j = 0; j < x.n_columns(); ++j) {
    auto column = x.scores.column(j);
    double max = 0.0;
    for (const auto& [row, value] : column) max = std::max(max, value);
    cols[j].reserve(column.size());
    for (const auto& [row, value] : column) {
      cols[j].emplace_back(static_cast<EntityId>(row), value / max);
    }
  }
  return cols;
}

std::vector<double> optimize_thresholds(const ScoreMatrix& x, const ColumnPositives& positives) {
  if (positives.size() != x.n_columns()) {
    throw ConsistencyError("positives cover " + std::to_string(positives.size()) +
                           " columns, score matrix has " + std::to_string(x.n_columns()));
  }
  const double n_entities = static_cast<double>(x.n_entities());
  auto cols = normalized_columns(x);
  std::vector<double> thresholds(x.n_columns(), kEmptySetThreshold);
  std::vector<char> is_positive(x.n_entities(), 0);

  for (std::size_t j = 0; j < cols.size(); ++j) {
    const auto& pos = positives[j];
    if (pos.empty()) continue;
    for (EntityId e : pos) is_positive[e] = 1;

    auto& col = cols[j];
    std::sort(col.begin(), col.end(),
              [](const auto& a, const auto& b) { return a.second > b.second; });

    double best = distance_to_ideal(0.0, 1.0);
    std::size_t hits = 0;
    for (std::size_t k = 0; k < col.size();) {
      const double cut = col[k].second;
      while (k < col.size() && col[k].second == cut) {
        hits += is_positive[col[k].first];
        ++k;
      }
      const double cr = static_cast<double>(hits) / static_cast<double>(pos.size());
      const double rr = 1.0 - static_cast<double>(k) / n_entities;
      const double d = distance_to_ideal(cr, rr);
      if (d < best - kTieTolerance) {
        best = d;
        thresholds[j] = cut;
      }
    }
    for (EntityId e : pos) is_positive[e] = 0;
  }
  return thresholds;
}

CandidateSets materialize(const ScoreMatrix& x, std::span<const double> thresholds,
                          const TripleStore& store, bool include_seen) {
  if (thresholds.size() != x.n_columns()) {
    throw ConsistencyError("expected " + std::to_string(x.n_columns()) + " thresholds, got " +
                           std::to_string(thresholds.size()));
  }
  if (x.n_entities() != store.num_entities() || x.n_relations != store.num_relations()) {
    throw ConsistencyError("score matrix does not match the store dimensions");
  }
  CandidateSets out;
  out.thresholds.assign(thresholds.begin(), thresholds.end());
  out.origin = x.method;
  out.includes_seen = include_seen;
  out.n_relations = x.n_relations;
  out.n_entities = x.n_entities();
  out.sets.resize(x.n_columns());

  const auto cols = normalized_columns(x);
  for (std::size_t j = 0; j < cols.size(); ++j) {
    auto& set = out.sets[j];
    for (const auto& [entity, score] : cols[j]) {
      if (score >= thresholds[j]) set.push_back(entity);
    }
    if (include_seen) {
      const auto relation = static_cast<RelationId>(j % x.n_relations);
      const auto seen = store.seen(relation, j < x.n_relations ? Direction::kHead : Direction::kTail);
      std::vector<EntityId> merged;
      merged.reserve(set.size() + seen.size());
      std::set_union(set.begin(), set.end(), seen.begin(), seen.end(),
                     std::back_inserter(merged));
      set = std::move(merged);
    }
  }
  return out;
}

CandidateSets optimized_candidate_sets(const ScoreMatrix& x, const TripleStore& store,
                                       bool include_seen) {
  const auto thresholds = optimize_thresholds(x, default_threshold_positives(store));
  return materialize(x, thresholds, store, include_seen);
}

CrRrPoint candidate_recall(const CandidateSets& sets, const TripleStore& store,
                           RecallMode mode) {
  std::unordered_set<std::uint64_t> known_heads, known_tails;
  if (mode == RecallMode::kUnseen) {
    for (Split s : {Split::kTrain, Split::kValid}) {
      for (const Triple& t : store.split(s)) {
        known_heads.insert(pair_key(t.head, t.relation));
        known_tails.insert(pair_key(t.tail, t.relation));
      }
    }
  }
  std::unordered_set<std::uint64_t> head_pairs, tail_pairs;
  std::size_t hits = 0;
  auto visit = [&](EntityId entity, RelationId relation, Direction direction) {
    const auto key = pair_key(entity, relation);
    auto& visited = direction == Direction::kHead ? head_pairs : tail_pairs;
    const auto& known = direction == Direction::kHead ? known_heads : known_tails;
    if (known.contains(key) || !visited.insert(key).second) return;
    const auto set = sets.set(relation, direction);
    hits += std::binary_search(set.begin(), set.end(), entity);
  };
  for (const Triple& t : store.test()) {
    visit(t.head, t.relation, Direction::kHead);
    visit(t.tail, t.relation, Direction::kTail);
  }
  CrRrPoint point;
  point.mode = mode;
  point.n_pairs = head_pairs.size() + tail_pairs.size();
  point.cr = point.n_pairs == 0 ? std::numeric_limits<double>::quiet_NaN()
                                : static_cast<double>(hits) / static_cast<double>(point.n_pairs);
  point.rr = reduction_rate(sets);
  return point;
}

double reduction_rate(const CandidateSets& sets) {
  if (sets.sets.empty() || sets.n_entities == 0) return 1.0;
  double covered = 0.0;
  for (const auto& set : sets.sets) covered += static_cast<double>(set.size());
  return 1.0 - covered / (static_cast<double>(sets.sets.size()) *
                          static_cast<double>(sets.n_entities));
}

}  // namespace kgeval
