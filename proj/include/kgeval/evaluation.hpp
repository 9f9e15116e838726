#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kgeval/candidate_sets.hpp"
#include "kgeval/kg_store.hpp"
#include "kgeval/recommenders.hpp"
#include "kgeval/sampling.hpp"
#include "kgeval/scorers.hpp"

namespace kgeval {

struct Query {
  std::size_t query_id = 0;
  EntityId anchor = 0;
  RelationId relation = 0;
  Direction direction = Direction::kTail;
  EntityId true_entity = 0;
};

/// Two queries per triple of `split`: (h, r, ?) with id 2i, (?, r, t) with id 2i + 1.
std::vector<Query> ranking_queries(const TripleStore& store, Split split = Split::kTest);

struct RankRecord {
  Query query;
  double rank = 0.0;  // tie-averaged, may be a half-integer
  std::size_t pool_size = 0;
};

struct EvalOptions {
  std::size_t threads = 1;
  Split split = Split::kTest;
};

/// 1 + |higher| + |other ties| / 2.
double tie_averaged_rank(std::size_t higher, std::size_t ties_excluding_true);

/// Ranks every true entity against all entities minus the other known positives.
std::vector<RankRecord> full_filtered_ranks(const Scorer& scorer, const TripleStore& store,
                                            const EvalOptions& options = {});

/// Ranks against the plan's shared per-(relation, direction) sample minus known
/// positives, with the true entity always in the pool.
std::vector<RankRecord> sampled_ranks(const Scorer& scorer, const TripleStore& store,
                                      const SamplePlan& plan, const EvalOptions& options = {});

struct MetricBundle {
  double mrr = 0.0;
  double hits1 = 0.0;
  double hits3 = 0.0;
  double hits10 = 0.0;
  std::size_t n_queries = 0;
  double wall_time_seconds = 0.0;
};

MetricBundle metrics(std::span<const RankRecord> records);

/// Pairwise (cascade) summation.
double pairwise_sum(std::span<const double> values);

struct ComparisonReport {
  double mae = 0.0;
  double mape = 0.0;
  std::size_t mape_skipped = 0;  // zero-truth entries left out of MAPE
  double pearson = 0.0;          // NaN for a constant series
  double kendall_tau = 0.0;      // tau-b; NaN when undefined
  double speedup = 0.0;          // NaN without timings
};

ComparisonReport compare(std::span<const double> estimates, std::span<const double> truth,
                         std::optional<double> full_time = std::nullopt,
                         std::optional<double> estimator_time = std::nullopt);

double pearson(std::span<const double> x, std::span<const double> y);

/// Kendall tau-b in O(n log n).
double kendall_tau_b(std::span<const double> x, std::span<const double> y);

enum class SuiteStrategy { kFull, kRandom, kProbabilistic, kStatic };

std::string_view to_string(SuiteStrategy strategy);
std::optional<SuiteStrategy> parse_suite_strategy(std::string_view name);

struct SuiteConfig {
  std::vector<SuiteStrategy> strategies;
  SampleSize sample_size = SampleSize::fraction(0.1);
  std::vector<std::uint64_t> seeds{0};
  const ScoreMatrix* recommender = nullptr;  // probabilistic
  const CandidateSets* candidates = nullptr;  // static
  EvalOptions eval;
  bool keep_records = true;
};

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;  // population standard deviation over seeds
};

struct StrategyResult {
  SuiteStrategy strategy = SuiteStrategy::kFull;
  std::vector<MetricBundle> runs;  // one per seed; a single run for full
  MeanStd mrr, hits1, hits3, hits10;
  double wall_time_s = 0.0;        // mean over runs, sampling included
  std::optional<double> speedup;   // full time / this time
  /// MAE and MAPE over the per-seed MRR estimates; Pearson and Kendall over
  /// per-query reciprocal ranks averaged across seeds.
  std::optional<ComparisonReport> vs_full;
  std::vector<RankRecord> records;  // first run
};

struct EvaluationReport {
  std::vector<StrategyResult> strategies;
  std::size_t n_s = 0;
  std::size_t n_queries = 0;
  Split split = Split::kTest;

  const StrategyResult* find(SuiteStrategy strategy) const;
};

EvaluationReport evaluate_suite(const Scorer& scorer, const TripleStore& store,
                                const SuiteConfig& config);

/// `query_id,direction,relation,true_entity,rank,pool_size` with labels.
std::string records_to_csv(std::span<const RankRecord> records, const TripleStore& store);

}  // namespace kgeval
