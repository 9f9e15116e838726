#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "kgeval/kg_store.hpp"
#include "kgeval/rng.hpp"

namespace kgeval::testing {

// train: e0 r0 e2, e1 r0 e2, e0 r1 e1; test: e3 r0 e2.
inline const char* kToyTrain = "e0\tr0\te2\ne1\tr0\te2\ne0\tr1\te1\n";
inline const char* kToyTest = "e3\tr0\te2\n";
inline const char* kToyTypes = "e0\tPerson\ne1\tPerson\ne2\tCity\ne3\tCity\n";

inline TripleStore toy_store() { return parse_triples(kToyTrain, "", kToyTest); }

struct RandomGraphShape {
  std::size_t n_entities = 50;
  std::size_t n_relations = 4;
  std::size_t n_train = 200;
  std::size_t n_valid = 20;
  std::size_t n_test = 30;
};

/// TSV text for one split of a random graph. Entities are `e<i>`, relations `r<j>`.
inline std::string random_split(CounterRng& rng, const RandomGraphShape& shape, std::size_t n) {
  std::string text;
  for (std::size_t i = 0; i < n; ++i) {
    text += "e" + std::to_string(rng.below(shape.n_entities)) + "\tr" +
            std::to_string(rng.below(shape.n_relations)) + "\te" +
            std::to_string(rng.below(shape.n_entities)) + "\n";
  }
  return text;
}

inline TripleStore random_store(std::uint64_t seed, const RandomGraphShape& shape = {},
                                const StoreOptions& options = {}) {
  CounterRng rng(derive_key(seed, 0xabc));
  const std::string train = random_split(rng, shape, shape.n_train);
  const std::string valid = random_split(rng, shape, shape.n_valid);
  const std::string test = random_split(rng, shape, shape.n_test);
  return parse_triples(train, valid, test, options);
}

/// Row-major dense matrix for oracle computations.
struct Dense {
  std::size_t rows = 0, cols = 0;
  std::vector<double> v;

  Dense(std::size_t r, std::size_t c) : rows(r), cols(c), v(r * c, 0.0) {}
  double& operator()(std::size_t i, std::size_t j) { return v[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const { return v[i * cols + j]; }
};

inline Dense matmul(const Dense& a, const Dense& b) {
  Dense c(a.rows, b.cols);
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t k = 0; k < a.cols; ++k)
      for (std::size_t j = 0; j < b.cols; ++j) c(i, j) += a(i, k) * b(k, j);
  return c;
}

inline Dense transposed(const Dense& a) {
  Dense t(a.cols, a.rows);
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t j = 0; j < a.cols; ++j) t(j, i) = a(i, j);
  return t;
}

inline Dense rownorm(const Dense& a) {
  Dense out = a;
  for (std::size_t i = 0; i < a.rows; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.cols; ++j) s += a(i, j);
    if (s == 0.0) continue;
    for (std::size_t j = 0; j < a.cols; ++j) out(i, j) = a(i, j) / s;
  }
  return out;
}

/// Dense L-WD built straight from the triples: B from train, X = B rownorm(B^T B).
/// With `types` (per entity type ids), type columns join B and are dropped afterwards.
inline Dense dense_lwd(const TripleStore& store,
                       const std::vector<std::vector<std::uint32_t>>* types = nullptr,
                       std::size_t n_types = 0) {
  const std::size_t ne = store.num_entities(), nr = store.num_relations();
  const std::size_t width = 2 * nr + (types ? n_types : 0);
  Dense b(ne, width);
  for (const Triple& t : store.train()) {
    b(t.head, t.relation) = 1.0;
    b(t.tail, nr + t.relation) = 1.0;
  }
  if (types) {
    for (std::size_t e = 0; e < types->size(); ++e)
      for (auto ty : (*types)[e]) b(e, 2 * nr + ty) = 1.0;
  }
  const Dense x = matmul(b, rownorm(matmul(transposed(b), b)));
  Dense out(ne, 2 * nr);
  for (std::size_t i = 0; i < ne; ++i)
    for (std::size_t j = 0; j < 2 * nr; ++j) out(i, j) = x(i, j);
  return out;
}

/// Every (head, relation, tail) in any split, for brute-force filtering.
inline std::set<std::tuple<EntityId, RelationId, EntityId>> all_triples(const TripleStore& s) {
  std::set<std::tuple<EntityId, RelationId, EntityId>> out;
  for (Split sp : {Split::kTrain, Split::kValid, Split::kTest})
    for (const Triple& t : s.split(sp)) out.insert({t.head, t.relation, t.tail});
  return out;
}

}  // namespace kgeval::testing
