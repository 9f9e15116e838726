#include "kgeval/synthkg.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "kgeval/error.hpp"
#include "kgeval/rng.hpp"
#include "kgeval/sampling.hpp"

namespace kgeval {

namespace {

std::string entity_label(std::size_t type, std::size_t index) {
  return "t" + std::to_string(type) + "_e" + std::to_string(index);
}

struct LocalTriple {
  std::uint32_t head;  // global entity index = type * per_type + local
  std::uint32_t tail;
};

}  // namespace

void SynthConfig::validate() const {
  if (n_types == 0 || entities_per_type == 0 || n_relations == 0 ||
      triples_per_relation == 0 || clusters_per_type == 0) {
    throw UsageError("synthetic KG counts must be at least 1");
  }
  if (clusters_per_type > entities_per_type) {
    throw UsageError("clusters_per_type exceeds entities_per_type");
  }
  if (active_clusters > clusters_per_type) {
    throw UsageError("active_clusters exceeds clusters_per_type");
  }
  for (double f : {test_fraction, valid_fraction, noise_fraction}) {
    if (!(f >= 0.0 && f <= 1.0)) throw UsageError("synthetic KG fractions must lie in [0, 1]");
  }
  if (test_fraction + valid_fraction >= 1.0) {
    throw UsageError("test and valid fractions leave no training triples");
  }
  if (!signatures.empty() && signatures.size() != n_relations) {
    throw UsageError("need one signature per relation");
  }
  for (const auto& [h, t] : signatures) {
    if (h >= n_types || t >= n_types) throw UsageError("signature references an unknown type");
  }
}

std::optional<SynthConfig> synth_preset(std::string_view name) {
  SynthConfig c;
  if (name == "small") {
    c.n_relations = 24;
    c.triples_per_relation = 80;
    c.active_clusters = 1;
    c.noise_fraction = 0.05;
    return c;
  }
  if (name == "large") {
    c.n_types = 10;
    c.entities_per_type = 5000;
    c.n_relations = 50;
    c.triples_per_relation = 4000;
    c.test_fraction = 0.01;
    c.valid_fraction = 0.01;
    c.noise_fraction = 0.05;
    c.clusters_per_type = 50;
    return c;
  }
  return std::nullopt;
}

SynthKg generate(const SynthConfig& config) {
  config.validate();
  const std::size_t per_type = config.entities_per_type;
  const std::size_t n_entities = config.n_types * per_type;
  const std::size_t per_cluster_min = per_type / config.clusters_per_type;

  SynthKg out;
  out.signatures = config.signatures;
  if (out.signatures.empty()) {
    CounterRng rng(derive_key(config.seed, 0x5167));
    for (std::size_t r = 0; r < config.n_relations; ++r) {
      const auto h = static_cast<TypeId>(rng.below(config.n_types));
      const auto t = static_cast<TypeId>(rng.below(config.n_types));
      out.signatures.emplace_back(h, t);
    }
  }

  std::vector<LocalTriple> train, valid, test;
  std::vector<std::size_t> train_rel, valid_rel, test_rel;
  for (std::size_t r = 0; r < config.n_relations; ++r) {
    CounterRng rng(derive_key(config.seed, 0x7269, r));
    const auto [head_type, tail_type] = out.signatures[r];
    const std::size_t n_total = config.triples_per_relation;
    const auto n_noise = static_cast<std::size_t>(
        std::llround(config.noise_fraction * static_cast<double>(n_total)));
    const std::size_t n_clean = n_total - n_noise;

    std::vector<std::size_t> cluster_map(config.clusters_per_type);
    for (std::size_t c = 0; c < cluster_map.size(); ++c) {
      cluster_map[c] = rng.below(config.clusters_per_type);
    }
    std::vector<bool> active(config.clusters_per_type, config.active_clusters == 0);
    if (config.active_clusters != 0) {
      for (auto c : choose_uniform(config.clusters_per_type, config.active_clusters,
                                   derive_key(config.seed, 0x6163, r))) {
        active[c] = true;
      }
    }
    // Clean candidates: every active head paired with each tail of its mapped cluster.
    std::vector<LocalTriple> clean;
    for (std::size_t h = 0; h < per_type; ++h) {
      if (!active[h % config.clusters_per_type]) continue;
      const std::size_t target = cluster_map[h % config.clusters_per_type];
      for (std::size_t t = target; t < per_type; t += config.clusters_per_type) {
        clean.push_back({static_cast<std::uint32_t>(head_type * per_type + h),
                         static_cast<std::uint32_t>(tail_type * per_type + t)});
      }
    }
    if (n_clean > clean.size()) {
      throw ConsistencyError("relation " + std::to_string(r) + " requests " +
                             std::to_string(n_clean) + " distinct typed triples; its type pair "
                             "holds only " + std::to_string(clean.size()) +
                             " (at least " + std::to_string(per_cluster_min) +
                             " tails per head)");
    }
    if (n_total > n_entities * n_entities) {
      throw ConsistencyError("relation " + std::to_string(r) + " requests more triples than "
                             "entity pairs exist");
    }
    std::vector<LocalTriple> chosen;
    std::unordered_set<std::uint64_t> used;
    for (auto idx : choose_uniform(clean.size(), n_clean, derive_key(config.seed, 0x636c, r))) {
      chosen.push_back(clean[idx]);
      used.insert((std::uint64_t{clean[idx].head} << 32) | clean[idx].tail);
    }
    while (chosen.size() < n_total) {
      const auto h = static_cast<std::uint32_t>(rng.below(n_entities));
      const auto t = static_cast<std::uint32_t>(rng.below(n_entities));
      if (used.insert((std::uint64_t{h} << 32) | t).second) chosen.push_back({h, t});
    }
    for (std::size_t i = chosen.size(); i > 1; --i) {
      std::swap(chosen[i - 1], chosen[rng.below(i)]);
    }
    const auto n_test = static_cast<std::size_t>(
        std::llround(config.test_fraction * static_cast<double>(n_total)));
    const auto n_valid = static_cast<std::size_t>(
        std::llround(config.valid_fraction * static_cast<double>(n_total)));
    for (std::size_t i = 0; i < chosen.size(); ++i) {
      if (i < n_test) {
        test.push_back(chosen[i]);
        test_rel.push_back(r);
      } else if (i < n_test + n_valid) {
        valid.push_back(chosen[i]);
        valid_rel.push_back(r);
      } else {
        train.push_back(chosen[i]);
        train_rel.push_back(r);
      }
    }
  }

  // Interleave relations in the train file so id assignment is not relation-major.
  std::vector<std::size_t> train_order(train.size());
  for (std::size_t i = 0; i < train_order.size(); ++i) train_order[i] = i;
  CounterRng shuffle(derive_key(config.seed, 0x7368));
  for (std::size_t i = train_order.size(); i > 1; --i) {
    std::swap(train_order[i - 1], train_order[shuffle.below(i)]);
  }
  auto line = [&](const LocalTriple& t, std::size_t r) {
    return entity_label(t.head / per_type, t.head % per_type) + "\tr" + std::to_string(r) +
           "\t" + entity_label(t.tail / per_type, t.tail % per_type) + "\n";
  };
  for (auto i : train_order) out.train_tsv += line(train[i], train_rel[i]);
  for (std::size_t i = 0; i < valid.size(); ++i) out.valid_tsv += line(valid[i], valid_rel[i]);
  for (std::size_t i = 0; i < test.size(); ++i) out.test_tsv += line(test[i], test_rel[i]);

  out.store = parse_triples(out.train_tsv, out.valid_tsv, out.test_tsv);
  for (std::size_t type = 0; type < config.n_types; ++type) {
    for (std::size_t i = 0; i < per_type; ++i) {
      const std::string label = entity_label(type, i);
      if (out.store.entities().find(label)) {
        out.types_tsv += label + "\tT" + std::to_string(type) + "\n";
      }
    }
  }
  out.types = load_types(out.types_tsv, out.store);
  return out;
}

}  // namespace kgeval
