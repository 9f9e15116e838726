#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kgeval/kg_store.hpp"
#include "kgeval/sparse_matrix.hpp"

namespace kgeval {

enum class Method { kLwd, kLwdT, kDbh, kDbhT, kOntoSim, kPt };

std::string_view to_string(Method method);
std::optional<Method> parse_method(std::string_view name);
bool requires_types(Method method);

/// Column r of the score matrix is the domain of relation r, column r + |R|
/// its range. Head-prediction queries look up the domain column.
constexpr std::size_t score_column(RelationId relation, Direction direction,
                                   std::size_t n_relations) noexcept {
  return direction == Direction::kHead ? relation : relation + n_relations;
}

/// |E| x 2|R| non-negative relation-recommender scores.
struct ScoreMatrix {
  SparseMatrix scores;
  Method method = Method::kPt;
  std::size_t n_relations = 0;

  std::size_t n_entities() const noexcept { return scores.n_rows(); }
  std::size_t n_columns() const noexcept { return scores.n_cols(); }
};

/// How DBH-T credits a type for a relation slot.
enum class TypeCredit {
  kDistinctEntity,  // +1 per distinct seen entity of the type
  kOccurrence,      // +1 per train triple
};

struct RecommendOptions {
  TypeCredit type_credit = TypeCredit::kDistinctEntity;
  std::size_t threads = 1;
};

/// Binary domain/range incidence, |E| x 2|R|, with |T| type columns appended
/// when `types` is given.
SparseMatrix build_b(const TripleStore& store, const TypeAssignment* types = nullptr);

/// Linear association-rule scores X = B * rownorm(B^T B). With types the
/// type columns take part in B and W and are dropped from the result.
ScoreMatrix lwd(const TripleStore& store, const TypeAssignment* types = nullptr,
                std::size_t threads = 1);

/// Head/tail multiplicities in train.
ScoreMatrix dbh(const TripleStore& store);

/// Typed entities collect, per type they carry, a credit for every seen
/// member of that type; untyped entities keep their own DBH count.
ScoreMatrix dbh_t(const TripleStore& store, const TypeAssignment& types,
                  TypeCredit credit = TypeCredit::kDistinctEntity);

/// Binary: seen entities plus every entity sharing a type with one.
ScoreMatrix ontosim(const TripleStore& store, const TypeAssignment& types);

/// Binary indicator of the train-seen domains and ranges.
ScoreMatrix pt(const TripleStore& store);

/// Dispatches on `method`; throws ConsistencyError when types are required but absent.
ScoreMatrix recommend(Method method, const TripleStore& store, const TypeAssignment* types,
                      const RecommendOptions& options = {});

struct FalseEasyNegative {
  Triple triple;
  Direction slot;  // kHead: the head scored 0 in the domain column
};

struct EasyNegativeReport {
  std::vector<std::uint64_t> per_column;
  std::uint64_t total = 0;
  std::uint64_t cells = 0;
  double fraction = 0.0;
  std::vector<FalseEasyNegative> false_easy_negatives;
};

/// Every zero cell is an easy negative; test triples hitting one are reported.
EasyNegativeReport mine_easy_negatives(const ScoreMatrix& x, const TripleStore& store);

}  // namespace kgeval
