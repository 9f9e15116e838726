#include "kgeval/evaluation.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "kgeval/error.hpp"
#include "kgeval/parallel.hpp"

namespace kgeval {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void check_scorer(const Scorer& scorer, const TripleStore& store) {
  if (scorer.num_entities() != store.num_entities() ||
      scorer.num_relations() != store.num_relations()) {
    throw ConsistencyError("scorer covers " + std::to_string(scorer.num_entities()) +
                           " entities / " + std::to_string(scorer.num_relations()) +
                           " relations; store has " + std::to_string(store.num_entities()) +
                           " / " + std::to_string(store.num_relations()));
  }
}

bool contains(std::span<const EntityId> sorted, EntityId e) {
  return std::binary_search(sorted.begin(), sorted.end(), e);
}

MeanStd mean_std(const std::vector<MetricBundle>& runs, double MetricBundle::*field) {
  std::vector<double> values;
  for (const auto& run : runs) values.push_back(run.*field);
  MeanStd out;
  out.mean = pairwise_sum(values) / static_cast<double>(values.size());
  std::vector<double> sq;
  for (double v : values) sq.push_back((v - out.mean) * (v - out.mean));
  out.std = std::sqrt(pairwise_sum(sq) / static_cast<double>(values.size()));
  return out;
}

}  // namespace

std::vector<Query> ranking_queries(const TripleStore& store, Split split) {
  const auto triples = store.split(split);
  std::vector<Query> queries;
  queries.reserve(2 * triples.size());
  for (std::size_t i = 0; i < triples.size(); ++i) {
    const Triple& t = triples[i];
    queries.push_back({2 * i, t.head, t.relation, Direction::kTail, t.tail});
    queries.push_back({2 * i + 1, t.tail, t.relation, Direction::kHead, t.head});
  }
  return queries;
}

double tie_averaged_rank(std::size_t higher, std::size_t ties_excluding_true) {
  return 1.0 + static_cast<double>(higher) + 0.5 * static_cast<double>(ties_excluding_true);
}

std::vector<RankRecord> full_filtered_ranks(const Scorer& scorer, const TripleStore& store,
                                            const EvalOptions& options) {
  check_scorer(scorer, store);
  const auto queries = ranking_queries(store, options.split);
  if (queries.empty()) throw ConsistencyError("no queries in the evaluated split");
  std::vector<RankRecord> records(queries.size());
  const std::size_t n_entities = store.num_entities();

  parallel_for(queries.size(), options.threads, [&](std::size_t i) {
    thread_local std::vector<double> scores;
    scores.resize(n_entities);
    const Query& q = queries[i];
    scorer.score_all(q.anchor, q.relation, q.direction, scores);
    const double target = scores[q.true_entity];
    std::size_t higher = 0, ties = 0;
    for (std::size_t e = 0; e < n_entities; ++e) {
      higher += scores[e] > target;
      ties += scores[e] == target;
    }
    --ties;  // the true entity itself
    std::size_t removed = 0;
    for (EntityId e : store.filtered_candidates(q.anchor, q.relation, q.direction)) {
      if (e == q.true_entity) continue;
      ++removed;
      higher -= scores[e] > target;
      ties -= scores[e] == target;
    }
    records[i] = {q, tie_averaged_rank(higher, ties), n_entities - removed};
  });
  return records;
}

std::vector<RankRecord> sampled_ranks(const Scorer& scorer, const TripleStore& store,
                                      const SamplePlan& plan, const EvalOptions& options) {
  check_scorer(scorer, store);
  if (plan.n_relations != store.num_relations() ||
      plan.columns.size() != 2 * store.num_relations()) {
    throw ConsistencyError("sample plan covers " + std::to_string(plan.n_relations) +
                           " relations, store has " + std::to_string(store.num_relations()));
  }
  const auto queries = ranking_queries(store, options.split);
  if (queries.empty()) throw ConsistencyError("no queries in the evaluated split");
  std::vector<RankRecord> records(queries.size());

  parallel_for(queries.size(), options.threads, [&](std::size_t i) {
    thread_local std::vector<EntityId> pool;
    thread_local std::vector<double> scores;
    const Query& q = queries[i];
    const auto sample = plan.sample(q.relation, q.direction);
    const auto known = store.filtered_candidates(q.anchor, q.relation, q.direction);
    pool.clear();
    pool.push_back(q.true_entity);
    for (EntityId c : sample) {
      if (c != q.true_entity && !contains(known, c)) pool.push_back(c);
    }
    scores.resize(pool.size());
    scorer.score(q.anchor, q.relation, q.direction, pool, scores);
    const double target = scores[0];
    std::size_t higher = 0, ties = 0;
    for (std::size_t k = 1; k < scores.size(); ++k) {
      higher += scores[k] > target;
      ties += scores[k] == target;
    }
    records[i] = {q, tie_averaged_rank(higher, ties), pool.size()};
  });
  return records;
}

double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 8) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

MetricBundle metrics(std::span<const RankRecord> records) {
  if (records.empty()) throw ConsistencyError("cannot aggregate an empty rank list");
  std::vector<double> rr, h1, h3, h10;
  rr.reserve(records.size());
  for (const auto& r : records) {
    rr.push_back(1.0 / r.rank);
    h1.push_back(r.rank <= 1.0);
    h3.push_back(r.rank <= 3.0);
    h10.push_back(r.rank <= 10.0);
  }
  const double n = static_cast<double>(records.size());
  MetricBundle m;
  m.mrr = pairwise_sum(rr) / n;
  m.hits1 = pairwise_sum(h1) / n;
  m.hits3 = pairwise_sum(h3) / n;
  m.hits10 = pairwise_sum(h10) / n;
  m.n_queries = records.size();
  return m;
}

double pearson(std::span<const double> x, std::span<const double> y) {
  const double n = static_cast<double>(x.size());
  const double mx = pairwise_sum(x) / n, my = pairwise_sum(y) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return kNaN;
  return sxy / std::sqrt(sxx * syy);
}

namespace {

/// Merge sort on `v`, returning the number of inversions.
std::uint64_t count_inversions(std::vector<double>& v, std::vector<double>& buffer,
                               std::size_t lo, std::size_t hi) {
  if (hi - lo < 2) return 0;
  const std::size_t mid = lo + (hi - lo) / 2;
  std::uint64_t swaps = count_inversions(v, buffer, lo, mid) + count_inversions(v, buffer, mid, hi);
  std::size_t i = lo, j = mid, k = lo;
  while (i < mid && j < hi) {
    if (v[j] < v[i]) {
      swaps += mid - i;
      buffer[k++] = v[j++];
    } else {
      buffer[k++] = v[i++];
    }
  }
  while (i < mid) buffer[k++] = v[i++];
  while (j < hi) buffer[k++] = v[j++];
  std::copy(buffer.begin() + static_cast<std::ptrdiff_t>(lo),
            buffer.begin() + static_cast<std::ptrdiff_t>(hi),
            v.begin() + static_cast<std::ptrdiff_t>(lo));
  return swaps;
}

/// Sum over runs of equal values of len * (len - 1) / 2; `v` must be sorted.
template <typename Eq>
std::uint64_t tied_pairs(std::size_t n, Eq equal) {
  std::uint64_t total = 0, run = 1;
  for (std::size_t i = 1; i <= n; ++i) {
    if (i < n && equal(i - 1, i)) {
      ++run;
    } else {
      total += run * (run - 1) / 2;
      run = 1;
    }
  }
  return total;
}

}  // namespace

double kendall_tau_b(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return x[a] != x[b] ? x[a] < x[b] : y[a] < y[b];
  });
  const std::uint64_t n0 = static_cast<std::uint64_t>(n) * (n - 1) / 2;
  const std::uint64_t tx = tied_pairs(n, [&](std::size_t a, std::size_t b) {
    return x[order[a]] == x[order[b]];
  });
  const std::uint64_t txy = tied_pairs(n, [&](std::size_t a, std::size_t b) {
    return x[order[a]] == x[order[b]] && y[order[a]] == y[order[b]];
  });
  std::vector<double> ys(n), buffer(n);
  for (std::size_t i = 0; i < n; ++i) ys[i] = y[order[i]];
  const std::uint64_t discordant = count_inversions(ys, buffer, 0, n);
  const std::uint64_t ty = tied_pairs(n, [&](std::size_t a, std::size_t b) { return ys[a] == ys[b]; });
  const double denom =
      std::sqrt(static_cast<double>(n0 - tx)) * std::sqrt(static_cast<double>(n0 - ty));
  if (denom == 0.0) return kNaN;
  const double concordant_minus_discordant = static_cast<double>(n0) - static_cast<double>(tx) -
                                             static_cast<double>(ty) + static_cast<double>(txy) -
                                             2.0 * static_cast<double>(discordant);
  return concordant_minus_discordant / denom;
}

ComparisonReport compare(std::span<const double> estimates, std::span<const double> truth,
                         std::optional<double> full_time, std::optional<double> estimator_time) {
  if (estimates.size() != truth.size()) {
    throw ConsistencyError("series lengths differ: " + std::to_string(estimates.size()) +
                           " vs " + std::to_string(truth.size()));
  }
  if (estimates.size() < 2) throw ConsistencyError("comparison needs at least two points");
  ComparisonReport report;
  std::vector<double> abs_err, pct_err;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const double err = std::abs(estimates[i] - truth[i]);
    abs_err.push_back(err);
    if (truth[i] == 0.0) {
      ++report.mape_skipped;
    } else {
      pct_err.push_back(err / std::abs(truth[i]));
    }
  }
  report.mae = pairwise_sum(abs_err) / static_cast<double>(abs_err.size());
  report.mape =
      pct_err.empty() ? kNaN : pairwise_sum(pct_err) / static_cast<double>(pct_err.size());
  report.pearson = pearson(estimates, truth);
  report.kendall_tau = kendall_tau_b(estimates, truth);
  report.speedup = (full_time && estimator_time && *estimator_time > 0.0)
                       ? *full_time / *estimator_time
                       : kNaN;
  return report;
}

std::string_view to_string(SuiteStrategy strategy) {
  switch (strategy) {
    case SuiteStrategy::kFull: return "full";
    case SuiteStrategy::kRandom: return "random";
    case SuiteStrategy::kProbabilistic: return "probabilistic";
    case SuiteStrategy::kStatic: return "static";
  }
  return "?";
}

std::optional<SuiteStrategy> parse_suite_strategy(std::string_view name) {
  if (name == "full") return SuiteStrategy::kFull;
  if (name == "random") return SuiteStrategy::kRandom;
  if (name == "probabilistic" || name == "prob") return SuiteStrategy::kProbabilistic;
  if (name == "static") return SuiteStrategy::kStatic;
  return std::nullopt;
}

const StrategyResult* EvaluationReport::find(SuiteStrategy strategy) const {
  for (const auto& s : strategies) {
    if (s.strategy == strategy) return &s;
  }
  return nullptr;
}

EvaluationReport evaluate_suite(const Scorer& scorer, const TripleStore& store,
                                const SuiteConfig& config) {
  if (config.strategies.empty()) throw UsageError("at least one strategy is required");
  if (config.seeds.empty()) throw UsageError("at least one seed is required");
  check_scorer(scorer, store);

  EvaluationReport report;
  report.n_s = config.sample_size.resolve(store.num_entities());
  report.split = config.eval.split;

  auto make_plan = [&](SuiteStrategy strategy, std::uint64_t seed) -> SamplePlan {
    switch (strategy) {
      case SuiteStrategy::kRandom:
        return sample_uniform(store.num_entities(), store.num_relations(), report.n_s, seed);
      case SuiteStrategy::kProbabilistic:
        if (!config.recommender) throw ConsistencyError("probabilistic sampling needs a score matrix");
        return sample_probabilistic(*config.recommender, report.n_s, seed);
      case SuiteStrategy::kStatic:
        if (!config.candidates) throw ConsistencyError("static sampling needs candidate sets");
        return sample_static(*config.candidates, report.n_s, seed);
      case SuiteStrategy::kFull: break;
    }
    throw ConsistencyError("full evaluation has no sample plan");
  };

  // The full ranking is needed as the reference for every estimator.
  std::optional<StrategyResult> full;
  const bool full_requested =
      std::find(config.strategies.begin(), config.strategies.end(), SuiteStrategy::kFull) !=
      config.strategies.end();
  if (full_requested) {
    StrategyResult result;
    result.strategy = SuiteStrategy::kFull;
    const auto start = Clock::now();
    auto records = full_filtered_ranks(scorer, store, config.eval);
    MetricBundle m = metrics(records);
    m.wall_time_seconds = seconds_since(start);
    result.runs.push_back(m);
    result.wall_time_s = m.wall_time_seconds;
    result.speedup = 1.0;
    // Kept even without keep_records: the per-query correlations need them.
    result.records = std::move(records);
    full = std::move(result);
  }

  for (SuiteStrategy strategy : config.strategies) {
    if (strategy == SuiteStrategy::kFull) {
      report.strategies.push_back(*full);
      continue;
    }
    StrategyResult result;
    result.strategy = strategy;
    std::vector<double> mean_rr;
    for (std::size_t s = 0; s < config.seeds.size(); ++s) {
      const auto start = Clock::now();
      const SamplePlan plan = make_plan(strategy, config.seeds[s]);
      auto records = sampled_ranks(scorer, store, plan, config.eval);
      MetricBundle m = metrics(records);
      m.wall_time_seconds = seconds_since(start);
      result.runs.push_back(m);
      if (mean_rr.empty()) mean_rr.assign(records.size(), 0.0);
      for (std::size_t i = 0; i < records.size(); ++i) mean_rr[i] += 1.0 / records[i].rank;
      if (s == 0) result.records = std::move(records);
    }
    for (double& v : mean_rr) v /= static_cast<double>(config.seeds.size());
    std::vector<double> times;
    for (const auto& run : result.runs) times.push_back(run.wall_time_seconds);
    result.wall_time_s = pairwise_sum(times) / static_cast<double>(times.size());

    if (full) {
      result.speedup =
          result.wall_time_s > 0.0 ? full->wall_time_s / result.wall_time_s : kNaN;
      const double truth = full->runs.front().mrr;
      ComparisonReport cmp;
      std::vector<double> abs_err, pct_err;
      for (const auto& run : result.runs) {
        abs_err.push_back(std::abs(run.mrr - truth));
        if (truth != 0.0) pct_err.push_back(std::abs(run.mrr - truth) / truth);
      }
      cmp.mae = pairwise_sum(abs_err) / static_cast<double>(abs_err.size());
      cmp.mape = pct_err.empty() ? kNaN
                                 : pairwise_sum(pct_err) / static_cast<double>(pct_err.size());
      cmp.mape_skipped = truth == 0.0 ? result.runs.size() : 0;
      std::vector<double> full_rr;
      for (const auto& r : full->records) full_rr.push_back(1.0 / r.rank);
      if (full_rr.size() >= 2) {
        cmp.pearson = pearson(mean_rr, full_rr);
        cmp.kendall_tau = kendall_tau_b(mean_rr, full_rr);
      } else {
        cmp.pearson = cmp.kendall_tau = kNaN;
      }
      cmp.speedup = *result.speedup;
      result.vs_full = cmp;
    }
    if (!config.keep_records) result.records.clear();
    report.strategies.push_back(std::move(result));
  }

  for (auto& result : report.strategies) {
    result.mrr = mean_std(result.runs, &MetricBundle::mrr);
    result.hits1 = mean_std(result.runs, &MetricBundle::hits1);
    result.hits3 = mean_std(result.runs, &MetricBundle::hits3);
    result.hits10 = mean_std(result.runs, &MetricBundle::hits10);
    if (result.strategy == SuiteStrategy::kFull && !config.keep_records) result.records.clear();
  }
  report.n_queries = report.strategies.front().runs.front().n_queries;
  return report;
}

std::string records_to_csv(std::span<const RankRecord> records, const TripleStore& store) {
  std::ostringstream out;
  out.precision(17);
  out << "query_id,direction,relation,true_entity,rank,pool_size\n";
  for (const auto& r : records) {
    out << r.query.query_id << ',' << to_string(r.query.direction) << ','
        << store.relations().label(r.query.relation) << ','
        << store.entities().label(r.query.true_entity) << ',' << r.rank << ',' << r.pool_size
        << '\n';
  }
  return out.str();
}

}  // namespace kgeval
