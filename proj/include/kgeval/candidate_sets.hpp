#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "kgeval/kg_store.hpp"
#include "kgeval/recommenders.hpp"

namespace kgeval {

/// Threshold above every normalized score: selects the empty set.
inline constexpr double kEmptySetThreshold = 0x1.0000000000001p0;

/// Per-column entity sets, indexed like ScoreMatrix columns.
struct CandidateSets {
  std::vector<std::vector<EntityId>> sets;
  std::vector<double> thresholds;
  Method origin = Method::kPt;
  bool includes_seen = false;
  std::size_t n_relations = 0;
  std::size_t n_entities = 0;

  std::span<const EntityId> set(RelationId relation, Direction direction) const {
    return sets.at(score_column(relation, direction, n_relations));
  }
};

/// One sorted entity list per score column.
using ColumnPositives = std::vector<std::vector<EntityId>>;

/// Heads (domain columns) and tails (range columns) observed in `split`.
ColumnPositives column_positives(const TripleStore& store, Split split);

/// Validation positives when a validation split exists, train positives otherwise.
ColumnPositives default_threshold_positives(const TripleStore& store);

/// Each column's nonzeros scaled by the column maximum, sorted by entity.
std::vector<std::vector<std::pair<EntityId, double>>> normalized_columns(const ScoreMatrix& x);

/// Per column, the cut among the distinct normalized scores (or the empty-set
/// sentinel) closest in l2 to (CR, RR) = (1, 1). Ties go to the higher cut.
/// A column without positives takes the empty-set sentinel.
std::vector<double> optimize_thresholds(const ScoreMatrix& x, const ColumnPositives& positives);

/// Entities whose normalized score reaches the column threshold, optionally
/// united with the train-seen domain or range.
CandidateSets materialize(const ScoreMatrix& x, std::span<const double> thresholds,
                          const TripleStore& store, bool include_seen);

/// optimize_thresholds on default_threshold_positives, then materialize.
CandidateSets optimized_candidate_sets(const ScoreMatrix& x, const TripleStore& store,
                                       bool include_seen);

enum class RecallMode { kTest, kUnseen };

struct CrRrPoint {
  double cr = 0.0;  // NaN when no pairs qualify
  double rr = 0.0;
  RecallMode mode = RecallMode::kTest;
  std::size_t n_pairs = 0;
};

/// Candidate recall over distinct test (h, r) and (r, t) pairs. The unseen
/// mode keeps only pairs absent from train and valid.
CrRrPoint candidate_recall(const CandidateSets& sets, const TripleStore& store,
                           RecallMode mode);

/// 1 - mean over columns of |set| / |E|.
double reduction_rate(const CandidateSets& sets);

}  // namespace kgeval
