#pragma once

#include <cstddef>
#include <cstdint>

namespace kgeval {

/// One (h, r, ?) query: `n_above` entities outrank the true answer under full
/// ranking and all of them lie in a range of `range_size` entities.
struct RankingScenario {
  std::size_t n_entities = 0;
  std::size_t n_above = 0;
  std::size_t range_size = 0;
  std::size_t n_s = 0;

  /// Throws ConsistencyError unless n_above <= range_size <= n_entities,
  /// range_size >= 1 and 0 < n_s <= n_entities.
  void validate() const;
};

/// E[X_u] for uniform sampling over all entities: n_s * n_above / |E|.
double expected_demotions_uniform(const RankingScenario& s);

/// E[X_range] for uniform sampling of min(n_s, range) entities inside the range.
double expected_demotions_range(const RankingScenario& s);

/// E[X_range - X_u] in closed form:
///   n_above * n_s * (|E| - range) / (range * |E|)   if n_s < range
///   n_above * (|E| - n_s) / |E|                     otherwise
double expected_gain(const RankingScenario& s);

struct MonteCarloGain {
  double mean_gain = 0.0;
  double std_error = 0.0;   // sample sd / sqrt(trials)
  double half_width = 0.0;  // 95% normal-approximation half-width
  std::size_t trials = 0;
};

/// Simulates both samplers by drawing index subsets. Each trial owns a
/// counter-based stream, so results do not depend on `threads`.
MonteCarloGain monte_carlo_gain(const RankingScenario& s, std::size_t trials,
                                std::uint64_t seed, std::size_t threads = 1);

}  // namespace kgeval
