#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kgeval/kg_store.hpp"

namespace kgeval {

struct SynthConfig {
  std::size_t n_types = 4;
  std::size_t entities_per_type = 50;
  std::size_t n_relations = 6;
  /// (head type, tail type) per relation; drawn from the seed when empty.
  std::vector<std::pair<TypeId, TypeId>> signatures;
  std::size_t triples_per_relation = 300;
  double test_fraction = 0.1;
  double valid_fraction = 0.1;
  /// Share of triples whose head and tail ignore the signature.
  double noise_fraction = 0.0;
  /// Entities of a type are split round-robin into clusters; a relation maps
  /// head cluster c onto one tail cluster, which gives models learnable structure.
  std::size_t clusters_per_type = 5;
  /// Head clusters a relation draws from; 0 uses all of them. Small values
  /// give relations narrow domains and ranges inside their types.
  std::size_t active_clusters = 0;
  std::uint64_t seed = 0;

  /// Throws UsageError on out-of-range fields.
  void validate() const;
};

/// Named configurations: "small" (4 x 50 entities, 24 narrow relations) and
/// "large" (10 x 5000 entities, 50 relations).
std::optional<SynthConfig> synth_preset(std::string_view name);

struct SynthKg {
  TripleStore store;
  TypeAssignment types;
  std::string train_tsv, valid_tsv, test_tsv, types_tsv;
  std::vector<std::pair<TypeId, TypeId>> signatures;
};

/// Deterministic under config.seed. Splits are stratified per relation.
/// Throws ConsistencyError when a relation asks for more distinct
/// signature-respecting triples than its type pair can hold.
SynthKg generate(const SynthConfig& config);

}  // namespace kgeval
