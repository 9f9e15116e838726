#include "kgeval/recommenders.hpp"

#include <algorithm>
#include <array>

#include "kgeval/error.hpp"

namespace kgeval {

namespace {

constexpr std::array<std::pair<Method, std::string_view>, 6> kMethodNames{{
    {Method::kLwd, "lwd"},
    {Method::kLwdT, "lwd-t"},
    {Method::kDbh, "dbh"},
    {Method::kDbhT, "dbh-t"},
    {Method::kOntoSim, "ontosim"},
    {Method::kPt, "pt"},
}};

void require_same_entities(const TripleStore& store, const TypeAssignment& types) {
  if (types.memberships.size() != store.num_entities()) {
    throw ConsistencyError("type assignment covers " +
                           std::to_string(types.memberships.size()) +
                           " entities, store has " + std::to_string(store.num_entities()));
  }
}

/// Per column, the sorted distinct entities seen in train.
std::vector<std::span<const EntityId>> seen_columns(const TripleStore& store) {
  const std::size_t n_rel = store.num_relations();
  std::vector<std::span<const EntityId>> cols(2 * n_rel);
  for (RelationId r = 0; r < n_rel; ++r) {
    cols[r] = store.seen_domain(r);
    cols[r + n_rel] = store.seen_range(r);
  }
  return cols;
}

}  // namespace

std::string_view to_string(Method method) {
  for (const auto& [m, name] : kMethodNames) {
    if (m == method) return name;
  }
  return "?";
}

std::optional<Method> parse_method(std::string_view name) {
  for (const auto& [m, n] : kMethodNames) {
    if (n == name) return m;
  }
  return std::nullopt;
}

bool requires_types(Method method) {
  return method == Method::kLwdT || method == Method::kDbhT || method == Method::kOntoSim;
}

SparseMatrix build_b(const TripleStore& store, const TypeAssignment* types) {
  const std::size_t n_rel = store.num_relations();
  const std::size_t n_types = types ? types->num_types() : 0;
  if (types) require_same_entities(store, *types);
  std::vector<SparseMatrix::Entry> entries;
  for (RelationId r = 0; r < n_rel; ++r) {
    for (EntityId e : store.seen_domain(r)) entries.push_back({e, r, 1.0});
    for (EntityId e : store.seen_range(r)) entries.push_back({e, r + n_rel, 1.0});
  }
  if (types) {
    for (EntityId e = 0; e < types->memberships.size(); ++e) {
      for (TypeId t : types->memberships[e]) entries.push_back({e, 2 * n_rel + t, 1.0});
    }
  }
  return SparseMatrix::from_pairs(store.num_entities(), 2 * n_rel + n_types, entries);
}

ScoreMatrix lwd(const TripleStore& store, const TypeAssignment* types, std::size_t threads) {
  const SparseMatrix b = build_b(store, types);
  const SparseMatrix w = row_normalize(spmm(transpose(b), b, threads));
  SparseMatrix x = spmm(b, w, threads);
  const std::size_t n_cols = 2 * store.num_relations();
  if (x.n_cols() != n_cols) x = leading_columns(x, n_cols);
  return {std::move(x), types ? Method::kLwdT : Method::kLwd, store.num_relations()};
}

ScoreMatrix dbh(const TripleStore& store) {
  const std::size_t n_rel = store.num_relations();
  std::vector<SparseMatrix::Entry> entries;
  entries.reserve(2 * store.train().size());
  for (const Triple& t : store.train()) {
    entries.push_back({t.head, t.relation, 1.0});
    entries.push_back({t.tail, t.relation + n_rel, 1.0});
  }
  return {SparseMatrix::from_pairs(store.num_entities(), 2 * n_rel, entries), Method::kDbh,
          n_rel};
}

ScoreMatrix dbh_t(const TripleStore& store, const TypeAssignment& types, TypeCredit credit) {
  require_same_entities(store, types);
  const std::size_t n_rel = store.num_relations();
  const std::size_t n_cols = 2 * n_rel;
  const ScoreMatrix counts = dbh(store);
  const auto members = types.members_by_type();

  std::vector<SparseMatrix::Entry> entries;
  std::vector<double> type_credit(types.num_types());
  for (std::size_t col = 0; col < n_cols; ++col) {
    std::fill(type_credit.begin(), type_credit.end(), 0.0);
    const auto seen = counts.scores.column(col);
    for (const auto& [entity, occurrences] : seen) {
      for (TypeId t : types.memberships[entity]) {
        type_credit[t] += credit == TypeCredit::kDistinctEntity ? 1.0 : occurrences;
      }
    }
    for (TypeId t = 0; t < types.num_types(); ++t) {
      if (type_credit[t] == 0.0) continue;
      for (EntityId e : members[t]) entries.push_back({e, col, type_credit[t]});
    }
    for (const auto& [entity, occurrences] : seen) {
      if (types.memberships[entity].empty()) entries.push_back({entity, col, occurrences});
    }
  }
  return {SparseMatrix::from_pairs(store.num_entities(), n_cols, entries), Method::kDbhT,
          n_rel};
}

ScoreMatrix ontosim(const TripleStore& store, const TypeAssignment& types) {
  require_same_entities(store, types);
  const std::size_t n_rel = store.num_relations();
  const auto members = types.members_by_type();
  const auto cols = seen_columns(store);

  std::vector<SparseMatrix::Entry> entries;
  std::vector<char> type_seen(types.num_types());
  std::vector<char> in_column(store.num_entities());
  for (std::size_t col = 0; col < cols.size(); ++col) {
    std::fill(type_seen.begin(), type_seen.end(), 0);
    std::fill(in_column.begin(), in_column.end(), 0);
    for (EntityId e : cols[col]) {
      in_column[e] = 1;
      for (TypeId t : types.memberships[e]) type_seen[t] = 1;
    }
    for (TypeId t = 0; t < types.num_types(); ++t) {
      if (!type_seen[t]) continue;
      for (EntityId e : members[t]) in_column[e] = 1;
    }
    for (EntityId e = 0; e < in_column.size(); ++e) {
      if (in_column[e]) entries.push_back({e, col, 1.0});
    }
  }
  return {SparseMatrix::from_pairs(store.num_entities(), 2 * n_rel, entries),
          Method::kOntoSim, n_rel};
}

ScoreMatrix pt(const TripleStore& store) {
  return {build_b(store), Method::kPt, store.num_relations()};
}

ScoreMatrix recommend(Method method, const TripleStore& store, const TypeAssignment* types,
                      const RecommendOptions& options) {
  if (requires_types(method) && (types == nullptr || types->empty())) {
    throw ConsistencyError(std::string(to_string(method)) + " requires a type assignment");
  }
  switch (method) {
    case Method::kLwd: return lwd(store, nullptr, options.threads);
    case Method::kLwdT: return lwd(store, types, options.threads);
    case Method::kDbh: return dbh(store);
    case Method::kDbhT: return dbh_t(store, *types, options.type_credit);
    case Method::kOntoSim: return ontosim(store, *types);
    case Method::kPt: return pt(store);
  }
  throw ConsistencyError("unknown recommender method");
}

EasyNegativeReport mine_easy_negatives(const ScoreMatrix& x, const TripleStore& store) {
  const std::size_t n_rel = store.num_relations();
  if (x.n_entities() != store.num_entities() || x.n_columns() != 2 * n_rel) {
    throw ConsistencyError("score matrix does not match the store dimensions");
  }
  EasyNegativeReport report;
  report.per_column.assign(x.n_columns(), store.num_entities());
  for (auto col : x.scores.indices()) --report.per_column[col];
  for (auto count : report.per_column) report.total += count;
  report.cells = static_cast<std::uint64_t>(x.n_entities()) * x.n_columns();
  report.fraction =
      report.cells == 0 ? 0.0 : static_cast<double>(report.total) / static_cast<double>(report.cells);
  for (const Triple& t : store.test()) {
    if (x.scores.at(t.head, score_column(t.relation, Direction::kHead, n_rel)) == 0.0) {
      report.false_easy_negatives.push_back({t, Direction::kHead});
    }
    if (x.scores.at(t.tail, score_column(t.relation, Direction::kTail, n_rel)) == 0.0) {
      report.false_easy_negatives.push_back({t, Direction::kTail});
    }
  }
  return report;
}

}  // namespace kgeval
