#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "kgeval/candidate_sets.hpp"
#include "kgeval/kg_store.hpp"
#include "kgeval/recommenders.hpp"

namespace kgeval {

enum class Strategy { kStatic, kProbabilistic, kRandom };

std::string_view to_string(Strategy strategy);

/// Sample size as an absolute count or as a fraction of |E| (rounded up).
class SampleSize {
 public:
  static SampleSize absolute(std::size_t count);
  static SampleSize fraction(double f);

  std::size_t resolve(std::size_t n_entities) const;
  bool is_fraction() const noexcept { return fraction_.has_value(); }
  double fraction_value() const { return fraction_.value(); }

 private:
  std::size_t count_ = 1;
  std::optional<double> fraction_;
};

/// One duplicate-free sorted sample per (relation, direction): 2|R| entries,
/// indexed like ScoreMatrix columns.
struct SamplePlan {
  std::vector<std::vector<EntityId>> columns;
  std::size_t n_s = 0;
  Strategy strategy = Strategy::kRandom;
  std::uint64_t seed = 0;
  std::size_t n_relations = 0;

  std::span<const EntityId> sample(RelationId relation, Direction direction) const {
    return columns.at(score_column(relation, direction, n_relations));
  }
};

/// Uniform without replacement inside each candidate set; the whole set when
/// it holds at most n_s entities.
SamplePlan sample_static(const CandidateSets& sets, std::size_t n_s, std::uint64_t seed);

/// Score-weighted sampling without replacement (exponential keys). Zero-score
/// entities are never drawn.
SamplePlan sample_probabilistic(const ScoreMatrix& x, std::size_t n_s, std::uint64_t seed);

/// Uniform without replacement over all entities, per column.
SamplePlan sample_uniform(std::size_t n_entities, std::size_t n_relations, std::size_t n_s,
                          std::uint64_t seed);

/// k distinct indices out of [0, n), uniformly; all of them when k >= n. Sorted.
std::vector<std::uint32_t> choose_uniform(std::size_t n, std::size_t k, std::uint64_t key);

/// k distinct indices drawn with inclusion driven by weights (A-Res keys).
/// Zero weights are never drawn. Sorted.
std::vector<std::uint32_t> choose_weighted(std::span<const double> weights, std::size_t k,
                                           std::uint64_t key);

/// Sampling work of relation-level sampling against a per-query generator.
struct SamplingLedger {
  std::size_t events = 0;           // sampling events in the plan (2|R|)
  std::uint64_t sampled_ids = 0;    // ids actually drawn
  std::size_t distinct_pairs = 0;   // distinct test (h, r) and (r, t) pairs
  double per_query_ids = 0.0;       // one n_s-sample per distinct pair
  double relational_ids = 0.0;      // one n_s-sample per plan column
  double reduction = 0.0;           // per_query_ids / relational_ids
};

SamplingLedger sampling_ledger(const SamplePlan& plan, const TripleStore& store);

/// Ratio between per-query and relation-level sample counts.
double sampling_reduction(double per_query_ids, double relational_ids);

/// Distinct (h, r) plus distinct (r, t) pairs in the test split.
std::size_t distinct_test_pairs(const TripleStore& store);

}  // namespace kgeval
