#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "kgeval/candidate_sets.hpp"
#include "kgeval/error.hpp"
#include "kgeval/evaluation.hpp"
#include "kgeval/report.hpp"
#include "support.hpp"

using namespace kgeval;

namespace {

/// Score depends only on the candidate: table[candidate].
class TableScorer final : public Scorer {
 public:
  TableScorer(std::vector<double> table, std::size_t n_relations)
      : table_(std::move(table)), n_relations_(n_relations) {}
  std::size_t num_entities() const override { return table_.size(); }
  std::size_t num_relations() const override { return n_relations_; }
  void score(EntityId, RelationId, Direction, std::span<const EntityId> c,
             std::span<double> out) const override {
    for (std::size_t i = 0; i < c.size(); ++i) out[i] = table_[c[i]];
  }
  using Scorer::score;

 private:
  std::vector<double> table_;
  std::size_t n_relations_;
};

/// Random scores rounded to a coarse grid, so ties are common.
class CoarseScorer final : public Scorer {
 public:
  CoarseScorer(std::size_t ne, std::size_t nr, std::uint64_t seed) : inner_(ne, nr, seed) {}
  std::size_t num_entities() const override { return inner_.num_entities(); }
  std::size_t num_relations() const override { return inner_.num_relations(); }
  void score(EntityId a, RelationId r, Direction d, std::span<const EntityId> c,
             std::span<double> out) const override {
    inner_.score(a, r, d, c, out);
    for (double& v : out) v = std::floor(v * 4.0);
  }
  using Scorer::score;

 private:
  RandomScorer inner_;
};

/// Independent oracle: sort the filtered pool by score and average the
/// first and last positions sharing the true entity's score.
std::vector<double> sort_oracle_ranks(const Scorer& scorer, const TripleStore& s) {
  const auto known = kgeval::testing::all_triples(s);
  std::vector<double> ranks;
  for (const Triple& t : s.test()) {
    for (Direction d : {Direction::kTail, Direction::kHead}) {
      const EntityId anchor = d == Direction::kTail ? t.head : t.tail;
      const EntityId truth = d == Direction::kTail ? t.tail : t.head;
      std::vector<EntityId> pool;
      for (EntityId e = 0; e < s.num_entities(); ++e) {
        const bool positive = d == Direction::kTail ? known.count({anchor, t.relation, e}) > 0
                                                    : known.count({e, t.relation, anchor}) > 0;
        if (e == truth || !positive) pool.push_back(e);
      }
      const auto scores = scorer.score(anchor, t.relation, d, pool);
      std::vector<double> sorted = scores;
      std::sort(sorted.begin(), sorted.end(), std::greater<>());
      const double target = scores[std::find(pool.begin(), pool.end(), truth) - pool.begin()];
      const auto first = std::find(sorted.begin(), sorted.end(), target) - sorted.begin();
      const auto last = sorted.rend() - std::find(sorted.rbegin(), sorted.rend(), target) - 1;
      ranks.push_back(1.0 + 0.5 * static_cast<double>(first + last));
    }
  }
  return ranks;
}

double kendall_oracle(const std::vector<double>& x, const std::vector<double>& y) {
  double concordant = 0, discordant = 0, tx = 0, ty = 0;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = i + 1; j < x.size(); ++j) {
      const double a = x[i] - x[j], b = y[i] - y[j];
      if (a == 0 && b == 0) continue;
      if (a == 0) {
        ++tx;
      } else if (b == 0) {
        ++ty;
      } else if ((a > 0) == (b > 0)) {
        ++concordant;
      } else {
        ++discordant;
      }
    }
  return (concordant - discordant) /
         std::sqrt((concordant + discordant + tx) * (concordant + discordant + ty));
}

std::vector<RankRecord> records_with_ranks(std::vector<double> ranks) {
  std::vector<RankRecord> out;
  for (double r : ranks) out.push_back({Query{}, r, 10});
  return out;
}

SamplePlan exhaustive_plan(const TripleStore& s) {
  return sample_uniform(s.num_entities(), s.num_relations(), s.num_entities(), 0);
}

}  // namespace

TEST(Ranking, HandCountedRank) {
  // e0 -r0-> e1 is the test triple; tail candidates e1 (true), e2, e3, e4.
  const TripleStore s = parse_triples("e0\tr0\te0\n", "", "e0\tr0\te1\n");
  ASSERT_EQ(s.num_entities(), 2u);
  const TripleStore wide =
      parse_triples("e0\tr0\te0\ne2\tr1\te3\ne4\tr1\te4\n", "", "e2\tr0\te1\n");
  // ids: e0=0, e2=1, e3=2, e4=3, e1=4. Query (e2, r0, ?): pool = everything.
  std::vector<double> table{0.1, 0.95, 0.8, 0.7, 0.9};
  const TableScorer scorer(table, wide.num_relations());
  const auto records = full_filtered_ranks(scorer, wide);
  ASSERT_EQ(records.size(), 2u);
  EXPECT_EQ(records[0].query.direction, Direction::kTail);
  EXPECT_EQ(records[0].rank, 2.0);
  EXPECT_EQ(records[0].pool_size, 5u);
}

TEST(Ranking, ConstantScorerSitsAtChance) {
  const TripleStore s = kgeval::testing::random_store(1);
  const ConstantScorer c(s.num_entities(), s.num_relations());
  for (const RankRecord& r : full_filtered_ranks(c, s)) {
    EXPECT_EQ(r.rank, (static_cast<double>(r.pool_size) + 1.0) / 2.0);
  }
}

TEST(Ranking, TieAveraging) {
  EXPECT_EQ(tie_averaged_rank(0, 0), 1.0);
  EXPECT_EQ(tie_averaged_rank(2, 3), 4.5);
}

TEST(Ranking, FullMatchesSortOracle) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    kgeval::testing::RandomGraphShape shape;
    shape.n_entities = seed < 10 ? 50 : 200;
    shape.n_train = seed < 10 ? 200 : 800;
    const TripleStore s = kgeval::testing::random_store(seed, shape);
    const RandomScorer random(s.num_entities(), s.num_relations(), seed);
    const CoarseScorer coarse(s.num_entities(), s.num_relations(), seed);
    for (const Scorer* scorer : {static_cast<const Scorer*>(&random),
                                 static_cast<const Scorer*>(&coarse)}) {
      const auto records = full_filtered_ranks(*scorer, s);
      const auto oracle = sort_oracle_ranks(*scorer, s);
      ASSERT_EQ(records.size(), oracle.size());
      for (std::size_t i = 0; i < records.size(); ++i) {
        EXPECT_EQ(records[i].query.query_id, i);
        EXPECT_EQ(records[i].rank, oracle[i]) << "seed " << seed << " query " << i;
        EXPECT_GE(records[i].rank, 1.0);
        EXPECT_LE(records[i].rank, static_cast<double>(records[i].pool_size));
      }
    }
  }
}

TEST(Ranking, ParallelMatchesSerial) {
  const TripleStore s = kgeval::testing::random_store(2, {120, 5, 500, 50, 100});
  const CoarseScorer scorer(s.num_entities(), s.num_relations(), 3);
  const auto serial = full_filtered_ranks(scorer, s, {1, Split::kTest});
  const auto parallel = full_filtered_ranks(scorer, s, {4, Split::kTest});
  const auto plan = sample_uniform(s.num_entities(), s.num_relations(), 30, 1);
  const auto s1 = sampled_ranks(scorer, s, plan, {1, Split::kTest});
  const auto s4 = sampled_ranks(scorer, s, plan, {4, Split::kTest});
  ASSERT_EQ(serial.size(), parallel.size());
  for (std::size_t i = 0; i < serial.size(); ++i) {
    EXPECT_EQ(serial[i].rank, parallel[i].rank);
    EXPECT_EQ(serial[i].pool_size, parallel[i].pool_size);
    EXPECT_EQ(s1[i].rank, s4[i].rank);
  }
}

TEST(Ranking, ValidSplitQueries) {
  const TripleStore s = kgeval::testing::random_store(3);
  const RandomScorer scorer(s.num_entities(), s.num_relations(), 0);
  EXPECT_EQ(full_filtered_ranks(scorer, s, {1, Split::kValid}).size(), 2 * s.valid().size());
}

TEST(Ranking, ScorerStoreMismatch) {
  const TripleStore s = kgeval::testing::random_store(3);
  const RandomScorer scorer(s.num_entities() + 1, s.num_relations(), 0);
  EXPECT_THROW(full_filtered_ranks(scorer, s), ConsistencyError);
}

TEST(SampledRanks, ExhaustiveSampleEqualsFull) {
  const TripleStore s = kgeval::testing::random_store(4);
  const EmbeddingModel model =
      EmbeddingModel::random(ModelKind::kComplEx, s.num_entities(), s.num_relations(), 8, 1);
  const CoarseScorer coarse(s.num_entities(), s.num_relations(), 2);
  for (const Scorer* scorer : {static_cast<const Scorer*>(&model),
                               static_cast<const Scorer*>(&coarse)}) {
    const auto full = full_filtered_ranks(*scorer, s);
    const auto sampled = sampled_ranks(*scorer, s, exhaustive_plan(s));
    for (std::size_t i = 0; i < full.size(); ++i) {
      EXPECT_EQ(full[i].rank, sampled[i].rank);
      EXPECT_EQ(full[i].pool_size, sampled[i].pool_size);
    }
    const MetricBundle a = metrics(full), b = metrics(sampled);
    EXPECT_EQ(a.mrr, b.mrr);
    EXPECT_EQ(a.hits10, b.hits10);
  }
}

TEST(SampledRanks, EmptySampleGivesRankOne) {
  const TripleStore s = kgeval::testing::random_store(5);
  SamplePlan plan = exhaustive_plan(s);
  for (auto& col : plan.columns) col.clear();
  const RandomScorer scorer(s.num_entities(), s.num_relations(), 0);
  for (const auto& r : sampled_ranks(scorer, s, plan)) {
    EXPECT_EQ(r.rank, 1.0);
    EXPECT_EQ(r.pool_size, 1u);
  }
}

TEST(SampledRanks, PlanMustCoverRelations) {
  const TripleStore s = kgeval::testing::random_store(5);
  const SamplePlan plan = sample_uniform(s.num_entities(), s.num_relations() - 1, 5, 0);
  const RandomScorer scorer(s.num_entities(), s.num_relations(), 0);
  EXPECT_THROW(sampled_ranks(scorer, s, plan), ConsistencyError);
}

TEST(SampledRanks, SmallSamplesAreOptimistic) {
  const TripleStore s = kgeval::testing::random_store(6);
  const RandomScorer scorer(s.num_entities(), s.num_relations(), 6);
  const auto full = full_filtered_ranks(scorer, s);
  std::vector<double> gap(full.size(), 0.0);
  const int plans = 10000;
  for (int p = 0; p < plans; ++p) {
    const auto plan = sample_uniform(s.num_entities(), s.num_relations(), 10,
                                     static_cast<std::uint64_t>(p));
    const auto sampled = sampled_ranks(scorer, s, plan);
    for (std::size_t i = 0; i < full.size(); ++i) gap[i] += full[i].rank - sampled[i].rank;
  }
  for (double g : gap) EXPECT_GE(g / plans, 0.0);
}

TEST(SampledRanks, MeanMrrShrinksTowardTruthAsSampleGrows) {
  const TripleStore s = kgeval::testing::random_store(7, {200, 5, 800, 50, 100});
  const RandomScorer scorer(s.num_entities(), s.num_relations(), 7);
  const double truth = metrics(full_filtered_ranks(scorer, s)).mrr;
  double previous = INFINITY;
  for (double f : {0.01, 0.05, 0.1, 0.25, 1.0}) {
    const std::size_t n_s = SampleSize::fraction(f).resolve(s.num_entities());
    double mean = 0.0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      mean += metrics(sampled_ranks(
                          scorer, s, sample_uniform(s.num_entities(), s.num_relations(), n_s, seed)))
                  .mrr;
    }
    mean /= 10.0;
    EXPECT_LE(mean, previous);
    EXPECT_GE(mean, truth - 1e-12);
    previous = mean;
  }
  EXPECT_EQ(previous, truth);
}

TEST(Metrics, Arithmetic) {
  const MetricBundle m = metrics(records_with_ranks({1, 2, 4}));
  EXPECT_NEAR(m.mrr, (1.0 + 0.5 + 0.25) / 3.0, 1e-15);
  EXPECT_DOUBLE_EQ(m.hits1, 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(m.hits3, 2.0 / 3.0);
  EXPECT_EQ(m.hits10, 1.0);
  const MetricBundle ones = metrics(records_with_ranks({1, 1, 1}));
  EXPECT_EQ(ones.mrr, 1.0);
  EXPECT_EQ(ones.hits1, 1.0);
  EXPECT_THROW(metrics({}), ConsistencyError);
}

TEST(Metrics, OrderingInvariants) {
  const TripleStore s = kgeval::testing::random_store(8);
  const CoarseScorer scorer(s.num_entities(), s.num_relations(), 1);
  const MetricBundle m = metrics(full_filtered_ranks(scorer, s));
  EXPECT_LE(m.hits1, m.hits3);
  EXPECT_LE(m.hits3, m.hits10);
  EXPECT_GE(m.mrr, m.hits1);
  EXPECT_LE(m.mrr, 1.0);
}

TEST(Metrics, PairwiseSumIsAccurate) {
  std::vector<double> v(1000001, 0.1);
  EXPECT_NEAR(pairwise_sum(v), 100000.1, 1e-6);
  EXPECT_EQ(pairwise_sum({}), 0.0);
}

TEST(Compare, Examples) {
  const std::vector<double> x{1, 2, 3}, y{2, 4, 6}, rev{3, 2, 1};
  const ComparisonReport a = compare(x, y);
  EXPECT_NEAR(a.pearson, 1.0, 1e-15);
  EXPECT_NEAR(a.kendall_tau, 1.0, 1e-15);
  EXPECT_TRUE(std::isnan(a.speedup));
  EXPECT_NEAR(compare(x, rev).kendall_tau, -1.0, 1e-15);
  const std::vector<double> e{0.5, 0.5}, t{0.3, 0.7};
  const ComparisonReport m = compare(e, t, 10.0, 2.0);
  EXPECT_NEAR(m.mae, 0.2, 1e-15);
  EXPECT_NEAR(m.mape, (0.2 / 0.3 + 0.2 / 0.7) / 2.0, 1e-15);
  EXPECT_EQ(m.speedup, 5.0);
}

TEST(Compare, Errors) {
  const std::vector<double> a{1, 2, 3}, b{1, 2};
  EXPECT_THROW(compare(a, b), ConsistencyError);
  const std::vector<double> one{1};
  EXPECT_THROW(compare(one, one), ConsistencyError);
  const std::vector<double> flat{2, 2, 2};
  EXPECT_TRUE(std::isnan(compare(flat, a).pearson));
  const std::vector<double> zeros{0, 1, 2};
  const ComparisonReport r = compare(a, zeros);
  EXPECT_EQ(r.mape_skipped, 1u);
}

TEST(Compare, KendallMatchesQuadraticOracle) {
  CounterRng rng(derive_key(31, 0));
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + rng.below(80);
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = static_cast<double>(rng.below(trial % 2 ? 5 : 1000));
      y[i] = static_cast<double>(rng.below(trial % 3 ? 6 : 1000));
    }
    const double oracle = kendall_oracle(x, y);
    const double got = kendall_tau_b(x, y);
    if (std::isnan(oracle)) {
      EXPECT_TRUE(std::isnan(got));
    } else {
      EXPECT_NEAR(got, oracle, 1e-12) << "trial " << trial;
    }
  }
}

TEST(Suite, FullOnly) {
  const TripleStore s = kgeval::testing::random_store(9);
  const RandomScorer scorer(s.num_entities(), s.num_relations(), 0);
  SuiteConfig c;
  c.strategies = {SuiteStrategy::kFull};
  const EvaluationReport r = evaluate_suite(scorer, s, c);
  ASSERT_EQ(r.strategies.size(), 1u);
  EXPECT_EQ(r.strategies[0].speedup.value(), 1.0);
  EXPECT_FALSE(r.strategies[0].vs_full.has_value());
  EXPECT_EQ(r.n_queries, 2 * s.test().size());
}

TEST(Suite, ExhaustiveSampleHasZeroError) {
  const TripleStore s = kgeval::testing::random_store(10);
  const RandomScorer scorer(s.num_entities(), s.num_relations(), 0);
  SuiteConfig c;
  c.strategies = {SuiteStrategy::kFull, SuiteStrategy::kRandom};
  c.sample_size = SampleSize::fraction(1.0);
  c.seeds = {1, 2, 3};
  const EvaluationReport r = evaluate_suite(scorer, s, c);
  const StrategyResult* random = r.find(SuiteStrategy::kRandom);
  ASSERT_NE(random, nullptr);
  EXPECT_EQ(random->vs_full->mae, 0.0);
  EXPECT_EQ(random->mrr.mean, r.find(SuiteStrategy::kFull)->mrr.mean);
  EXPECT_EQ(random->mrr.std, 0.0);
  EXPECT_EQ(random->runs.size(), 3u);
}

TEST(Suite, GuidedStrategiesNeedInputs) {
  const TripleStore s = kgeval::testing::random_store(11);
  const RandomScorer scorer(s.num_entities(), s.num_relations(), 0);
  SuiteConfig c;
  c.strategies = {SuiteStrategy::kStatic};
  EXPECT_THROW(evaluate_suite(scorer, s, c), ConsistencyError);
  c.strategies = {SuiteStrategy::kProbabilistic};
  EXPECT_THROW(evaluate_suite(scorer, s, c), ConsistencyError);
  c.strategies = {};
  EXPECT_THROW(evaluate_suite(scorer, s, c), UsageError);
}

TEST(Suite, AllStrategiesAndJson) {
  const TripleStore s = kgeval::testing::random_store(12);
  const RandomScorer scorer(s.num_entities(), s.num_relations(), 0);
  const ScoreMatrix x = lwd(s);
  const CandidateSets sets = optimized_candidate_sets(x, s, true);
  SuiteConfig c;
  c.strategies = {SuiteStrategy::kFull, SuiteStrategy::kRandom, SuiteStrategy::kStatic,
                  SuiteStrategy::kProbabilistic};
  c.seeds = {0, 1};
  c.recommender = &x;
  c.candidates = &sets;
  const EvaluationReport r = evaluate_suite(scorer, s, c);
  const Json j = to_json(r, false);
  for (const char* key : {"full", "random", "static", "probabilistic"}) {
    ASSERT_TRUE(j.contains(key)) << key;
    EXPECT_TRUE(j[key]["wall_time_s"].is_null());
    EXPECT_TRUE(j[key]["mrr"].contains("mean"));
  }
  EXPECT_TRUE(j["static"].contains("mae_vs_full"));
  EXPECT_EQ(to_json(r, false).dump(), to_json(evaluate_suite(scorer, s, c), false).dump());
  EXPECT_FALSE(to_json(r, true)["full"]["wall_time_s"].is_null());

  const std::string csv = records_to_csv(r.strategies[0].records, s);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "query_id,direction,relation,true_entity,rank,pool_size");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), static_cast<long>(1 + r.n_queries));
}

TEST(Suite, StrategyNames) {
  EXPECT_EQ(parse_suite_strategy("prob"), SuiteStrategy::kProbabilistic);
  EXPECT_EQ(parse_suite_strategy("probabilistic"), SuiteStrategy::kProbabilistic);
  EXPECT_EQ(parse_suite_strategy("full"), SuiteStrategy::kFull);
  EXPECT_FALSE(parse_suite_strategy("kp").has_value());
}
