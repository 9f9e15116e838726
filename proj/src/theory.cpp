#include "kgeval/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "kgeval/error.hpp"
#include "kgeval/parallel.hpp"
#include "kgeval/rng.hpp"

namespace kgeval {

void RankingScenario::validate() const {
  auto fail = [this](const std::string& why) {
    throw ConsistencyError("invalid scenario (|E|=" + std::to_string(n_entities) +
                           ", above=" + std::to_string(n_above) +
                           ", range=" + std::to_string(range_size) +
                           ", n_s=" + std::to_string(n_s) + "): " + why);
  };
  if (n_above > range_size) fail("entities above the answer must lie in the range");
  if (range_size > n_entities) fail("range larger than the entity set");
  if (range_size == 0) fail("empty range");
  if (n_s == 0 || n_s > n_entities) fail("sample size outside (0, |E|]");
}

double expected_demotions_uniform(const RankingScenario& s) {
  s.validate();
  return static_cast<double>(s.n_s) * static_cast<double>(s.n_above) /
         static_cast<double>(s.n_entities);
}

double expected_demotions_range(const RankingScenario& s) {
  s.validate();
  const auto drawn = std::min(s.n_s, s.range_size);
  return static_cast<double>(s.n_above) * static_cast<double>(drawn) /
         static_cast<double>(s.range_size);
}

double expected_gain(const RankingScenario& s) {
  s.validate();
  const double above = static_cast<double>(s.n_above);
  const double entities = static_cast<double>(s.n_entities);
  const double range = static_cast<double>(s.range_size);
  const double n_s = static_cast<double>(s.n_s);
  if (s.n_s < s.range_size) return above * n_s * (entities - range) / (range * entities);
  return above * (entities - n_s) / entities;
}

namespace {

/// Floyd's subset sampling: counts how many of k distinct draws from [0, n)
/// fall below `marked`. `stamp` is scratch of size >= n.
std::size_t marked_in_subset(std::size_t n, std::size_t k, std::size_t marked, CounterRng& rng,
                             std::vector<std::uint64_t>& stamp, std::uint64_t tag) {
  std::size_t hits = 0;
  for (std::size_t j = n - k; j < n; ++j) {
    std::size_t pick = rng.below(j + 1);
    if (stamp[pick] == tag) pick = j;
    stamp[pick] = tag;
    hits += pick < marked;
  }
  return hits;
}

}  // namespace

MonteCarloGain monte_carlo_gain(const RankingScenario& s, std::size_t trials, std::uint64_t seed,
                                std::size_t threads) {
  s.validate();
  if (trials == 0) throw UsageError("monte_carlo_gain needs at least one trial");
  constexpr std::size_t kChunk = 4096;
  const std::size_t n_chunks = (trials + kChunk - 1) / kChunk;
  std::vector<std::int64_t> sums(n_chunks, 0), squares(n_chunks, 0);
  const std::size_t range_draws = std::min(s.n_s, s.range_size);

  parallel_for(n_chunks, threads, [&](std::size_t chunk) {
    std::vector<std::uint64_t> stamp(s.n_entities, 0);
    std::uint64_t tag = 0;
    const std::size_t end = std::min(trials, (chunk + 1) * kChunk);
    for (std::size_t trial = chunk * kChunk; trial < end; ++trial) {
      CounterRng rng(derive_key(seed, trial));
      const auto uniform =
          marked_in_subset(s.n_entities, s.n_s, s.n_above, rng, stamp, ++tag);
      const auto in_range =
          marked_in_subset(s.range_size, range_draws, s.n_above, rng, stamp, ++tag);
      const auto y = static_cast<std::int64_t>(in_range) - static_cast<std::int64_t>(uniform);
      sums[chunk] += y;
      squares[chunk] += y * y;
    }
  });

  std::int64_t sum = 0, sum_sq = 0;
  for (std::size_t c = 0; c < n_chunks; ++c) {
    sum += sums[c];
    sum_sq += squares[c];
  }
  MonteCarloGain out;
  out.trials = trials;
  const double n = static_cast<double>(trials);
  out.mean_gain = static_cast<double>(sum) / n;
  if (trials < 2) {
    out.std_error = out.half_width = std::numeric_limits<double>::quiet_NaN();
    return out;
  }
  const double variance =
      std::max(0.0, (static_cast<double>(sum_sq) - static_cast<double>(sum) * out.mean_gain) /
                        (n - 1.0));
  out.std_error = std::sqrt(variance / n);
  out.half_width = 1.96 * out.std_error;
  return out;
}

}  // namespace kgeval
