#include "kgeval/sampling.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include "kgeval/error.hpp"
#include "kgeval/rng.hpp"

namespace kgeval {

namespace {

std::uint64_t column_key(std::uint64_t seed, Strategy strategy, std::size_t column) {
  return derive_key(seed, static_cast<std::uint64_t>(strategy) + 1, column);
}

void require_positive(std::size_t n_s) {
  if (n_s == 0) throw UsageError("sample size must be at least 1");
}

}  // namespace

std::string_view to_string(Strategy strategy) {
  switch (strategy) {
    case Strategy::kStatic: return "static";
    case Strategy::kProbabilistic: return "probabilistic";
    case Strategy::kRandom: return "random";
  }
  return "?";
}

SampleSize SampleSize::absolute(std::size_t count) {
  require_positive(count);
  SampleSize s;
  s.count_ = count;
  return s;
}

SampleSize SampleSize::fraction(double f) {
  if (!(f > 0.0) || f > 1.0) throw UsageError("sample fraction must lie in (0, 1]");
  SampleSize s;
  s.fraction_ = f;
  return s;
}

std::size_t SampleSize::resolve(std::size_t n_entities) const {
  if (!fraction_) return count_;
  // Guards against products like 0.1 * 200 landing a hair above an integer.
  const double scaled = *fraction_ * static_cast<double>(n_entities);
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(scaled - 1e-9)));
}

std::vector<std::uint32_t> choose_uniform(std::size_t n, std::size_t k, std::uint64_t key) {
  std::vector<std::uint32_t> pool(n);
  std::iota(pool.begin(), pool.end(), 0u);
  if (k >= n) return pool;
  CounterRng rng(key);
  for (std::size_t i = 0; i < k; ++i) {
    const auto j = i + rng.below(n - i);
    std::swap(pool[i], pool[j]);
  }
  pool.resize(k);
  std::sort(pool.begin(), pool.end());
  return pool;
}

std::vector<std::uint32_t> choose_weighted(std::span<const double> weights, std::size_t k,
                                           std::uint64_t key) {
  CounterRng rng(key);
  std::vector<std::pair<double, std::uint32_t>> keyed;
  keyed.reserve(weights.size());
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] < 0.0 || !std::isfinite(weights[i])) {
      throw NumericError("sampling weights must be finite and non-negative");
    }
    // Every entry consumes one draw so keys stay aligned with positions.
    const double u = rng.uniform_open_zero();
    if (weights[i] == 0.0) continue;
    keyed.emplace_back(std::log(u) / weights[i], static_cast<std::uint32_t>(i));
  }
  if (keyed.size() > k) {
    std::nth_element(keyed.begin(), keyed.begin() + static_cast<std::ptrdiff_t>(k), keyed.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    keyed.resize(k);
  }
  std::vector<std::uint32_t> out;
  out.reserve(keyed.size());
  for (const auto& entry : keyed) out.push_back(entry.second);
  std::sort(out.begin(), out.end());
  return out;
}

SamplePlan sample_static(const CandidateSets& sets, std::size_t n_s, std::uint64_t seed) {
  require_positive(n_s);
  SamplePlan plan{{}, n_s, Strategy::kStatic, seed, sets.n_relations};
  plan.columns.resize(sets.sets.size());
  for (std::size_t j = 0; j < sets.sets.size(); ++j) {
    const auto& pool = sets.sets[j];
    if (pool.empty()) {
      spdlog::debug("static sampling: column {} has an empty candidate set", j);
      continue;
    }
    for (auto idx : choose_uniform(pool.size(), n_s, column_key(seed, plan.strategy, j))) {
      plan.columns[j].push_back(pool[idx]);
    }
  }
  return plan;
}

SamplePlan sample_probabilistic(const ScoreMatrix& x, std::size_t n_s, std::uint64_t seed) {
  require_positive(n_s);
  SamplePlan plan{{}, n_s, Strategy::kProbabilistic, seed, x.n_relations};
  plan.columns.resize(x.n_columns());
  std::vector<double> weights;
  for (std::size_t j = 0; j < x.n_columns(); ++j) {
    const auto column = x.scores.column(j);
    if (column.empty()) {
      spdlog::debug("probabilistic sampling: column {} has no nonzero score", j);
      continue;
    }
    weights.clear();
    for (const auto& [row, value] : column) {
      if (value < 0.0) throw NumericError("negative recommender score");
      weights.push_back(value);
    }
    for (auto idx : choose_weighted(weights, n_s, column_key(seed, plan.strategy, j))) {
      plan.columns[j].push_back(static_cast<EntityId>(column[idx].first));
    }
  }
  return plan;
}

SamplePlan sample_uniform(std::size_t n_entities, std::size_t n_relations, std::size_t n_s,
                          std::uint64_t seed) {
  require_positive(n_s);
  SamplePlan plan{{}, n_s, Strategy::kRandom, seed, n_relations};
  plan.columns.resize(2 * n_relations);
  for (std::size_t j = 0; j < plan.columns.size(); ++j) {
    for (auto idx : choose_uniform(n_entities, n_s, column_key(seed, plan.strategy, j))) {
      plan.columns[j].push_back(idx);
    }
  }
  return plan;
}

std::size_t distinct_test_pairs(const TripleStore& store) {
  std::unordered_set<std::uint64_t> heads, tails;
  for (const Triple& t : store.test()) {
    heads.insert((static_cast<std::uint64_t>(t.head) << 32) | t.relation);
    tails.insert((static_cast<std::uint64_t>(t.tail) << 32) | t.relation);
  }
  return heads.size() + tails.size();
}

double sampling_reduction(double per_query_ids, double relational_ids) {
  if (!(relational_ids > 0.0)) throw NumericError("relational sample count must be positive");
  return per_query_ids / relational_ids;
}

SamplingLedger sampling_ledger(const SamplePlan& plan, const TripleStore& store) {
  SamplingLedger ledger;
  ledger.events = plan.columns.size();
  for (const auto& column : plan.columns) ledger.sampled_ids += column.size();
  ledger.distinct_pairs = distinct_test_pairs(store);
  const double n_s = static_cast<double>(plan.n_s);
  ledger.per_query_ids = static_cast<double>(ledger.distinct_pairs) * n_s;
  ledger.relational_ids = static_cast<double>(ledger.events) * n_s;
  ledger.reduction = ledger.relational_ids > 0.0
                         ? sampling_reduction(ledger.per_query_ids, ledger.relational_ids)
                         : 0.0;
  return ledger;
}

}  // namespace kgeval
