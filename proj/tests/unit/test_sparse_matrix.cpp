#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "kgeval/error.hpp"
#include "kgeval/rng.hpp"
#include "kgeval/sparse_matrix.hpp"
#include "support.hpp"

using namespace kgeval;
using kgeval::testing::Dense;

namespace {

SparseMatrix random_sparse(CounterRng& rng, std::size_t rows, std::size_t cols, double density,
                           bool integer) {
  std::vector<SparseMatrix::Entry> entries;
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j)
      if (rng.uniform() < density) {
        entries.push_back({i, j, integer ? 1.0 : rng.uniform() * 4.0 - 1.0});
      }
  return SparseMatrix::from_pairs(rows, cols, entries);
}

Dense dense_of(const SparseMatrix& m) {
  Dense d(m.n_rows(), m.n_cols());
  d.v = m.to_dense();
  return d;
}

void expect_canonical(const SparseMatrix& m) {
  ASSERT_EQ(m.offsets().size(), m.n_rows() + 1);
  for (std::size_t i = 0; i < m.n_rows(); ++i) {
    const auto row = m.row(i);
    for (std::size_t k = 0; k < row.size(); ++k) {
      EXPECT_NE(row.values[k], 0.0);
      EXPECT_LT(row.cols[k], m.n_cols());
      if (k > 0) {
        EXPECT_LT(row.cols[k - 1], row.cols[k]);
      }
    }
  }
}

}  // namespace

TEST(SparseMatrix, FromPairsSumsDuplicates) {
  const std::vector<SparseMatrix::Entry> e{{0, 0, 1.0}, {0, 0, 1.0}};
  const auto m = SparseMatrix::from_pairs(2, 2, e);
  EXPECT_EQ(m.nnz(), 1u);
  EXPECT_EQ(m.at(0, 0), 2.0);
}

TEST(SparseMatrix, FromPairsDropsZeros) {
  const std::vector<SparseMatrix::Entry> e{{1, 1, 0.0}};
  EXPECT_EQ(SparseMatrix::from_pairs(2, 2, e).nnz(), 0u);
  const std::vector<SparseMatrix::Entry> cancel{{0, 1, 2.0}, {0, 1, -2.0}};
  EXPECT_EQ(SparseMatrix::from_pairs(2, 2, cancel).nnz(), 0u);
}

TEST(SparseMatrix, FromPairsCsrLayout) {
  const std::vector<SparseMatrix::Entry> e{{2, 0, 1.0}, {0, 1, 2.0}};
  const auto m = SparseMatrix::from_pairs(3, 2, e);
  EXPECT_EQ(m.nnz(), 2u);
  const auto off = m.offsets();
  EXPECT_EQ(std::vector<std::uint64_t>(off.begin(), off.end()),
            (std::vector<std::uint64_t>{0, 1, 1, 2}));
  EXPECT_EQ(m.indices()[0], 1u);
  EXPECT_EQ(m.indices()[1], 0u);
}

TEST(SparseMatrix, OutOfRangeEntriesRejected) {
  const std::vector<SparseMatrix::Entry> e{{3, 0, 1.0}};
  EXPECT_THROW(SparseMatrix::from_pairs(3, 2, e), ConsistencyError);
  EXPECT_THROW(SparseMatrix::from_csr(2, 2, {0, 1, 1}, {0}, {1.0, 2.0}), ConsistencyError);
  EXPECT_THROW(SparseMatrix::from_csr(1, 3, {0, 2}, {2, 1}, {1.0, 2.0}), ConsistencyError);
}

TEST(Spmm, IdentityIsNeutral) {
  CounterRng rng(derive_key(3, 3));
  const auto m = random_sparse(rng, 3, 5, 0.5, false);
  EXPECT_EQ(spmm(SparseMatrix::identity(3), m), m);
  EXPECT_EQ(spmm(m, SparseMatrix::identity(5)), m);
}

TEST(Spmm, DimensionMismatch) {
  EXPECT_THROW(spmm(SparseMatrix(2, 3), SparseMatrix(2, 3)), ConsistencyError);
}

TEST(Spmm, ToyGramMatrixDiagonal) {
  // Toy B rows: e0:[D0,D1], e1:[D0,R1], e2:[R0], e3:[]
  const std::vector<SparseMatrix::Entry> e{{0, 0, 1}, {0, 1, 1}, {1, 0, 1}, {1, 3, 1}, {2, 2, 1}};
  const auto b = SparseMatrix::from_pairs(4, 4, e);
  const auto w = spmm(transpose(b), b);
  EXPECT_EQ(w.at(0, 0), 2.0);
  EXPECT_EQ(w.at(1, 1), 1.0);
  EXPECT_EQ(w.at(2, 2), 1.0);
  EXPECT_EQ(w.at(3, 3), 1.0);
  EXPECT_EQ(w.at(0, 1), 1.0);
  EXPECT_EQ(w.at(0, 3), 1.0);
  EXPECT_EQ(w.at(0, 2), 0.0);
}

TEST(Spmm, MatchesDenseOracle) {
  CounterRng rng(derive_key(11, 0));
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 1 + rng.below(64), k = 1 + rng.below(64), m = 1 + rng.below(64);
    const bool integer = trial % 2 == 0;
    const auto a = random_sparse(rng, n, k, 0.15, integer);
    const auto b = random_sparse(rng, k, m, 0.15, integer);
    const auto c = spmm(a, b, 1 + trial % 3);
    expect_canonical(c);
    EXPECT_LE(c.nnz(), n * m);
    const Dense oracle = kgeval::testing::matmul(dense_of(a), dense_of(b));
    const auto got = c.to_dense();
    for (std::size_t i = 0; i < got.size(); ++i) {
      if (integer) {
        ASSERT_EQ(got[i], oracle.v[i]);
      } else {
        ASSERT_NEAR(got[i], oracle.v[i], 1e-12);
      }
    }
  }
}

TEST(Spmm, ThreadCountDoesNotChangeResult) {
  CounterRng rng(derive_key(12, 0));
  const auto a = random_sparse(rng, 300, 40, 0.1, false);
  const auto b = random_sparse(rng, 40, 30, 0.2, false);
  EXPECT_EQ(spmm(a, b, 1), spmm(a, b, 4));
}

TEST(Transpose, Basics) {
  const std::vector<SparseMatrix::Entry> e{{0, 0, 1.0}, {0, 2, 2.0}};
  const auto t = transpose(SparseMatrix::from_pairs(1, 3, e));
  EXPECT_EQ(t.n_rows(), 3u);
  EXPECT_EQ(t.n_cols(), 1u);
  EXPECT_EQ(t.to_dense(), (std::vector<double>{1.0, 0.0, 2.0}));

  const std::vector<SparseMatrix::Entry> sym{{0, 1, 3.0}, {1, 0, 3.0}, {1, 1, 1.0}};
  const auto s = SparseMatrix::from_pairs(2, 2, sym);
  EXPECT_EQ(transpose(s), s);
}

TEST(Transpose, MatchesDenseOracleAndInvolution) {
  CounterRng rng(derive_key(13, 0));
  const auto a = random_sparse(rng, 50, 70, 0.1, false);
  const auto t = transpose(a);
  expect_canonical(t);
  const Dense oracle = kgeval::testing::transposed(dense_of(a));
  EXPECT_EQ(t.to_dense(), oracle.v);
  EXPECT_EQ(transpose(t), a);
}

TEST(RowNormalize, Examples) {
  const std::vector<SparseMatrix::Entry> e{{0, 0, 2}, {0, 1, 1}, {0, 3, 1}, {1, 0, 5}};
  const auto n = row_normalize(SparseMatrix::from_pairs(3, 4, e));
  EXPECT_EQ(n.at(0, 0), 0.5);
  EXPECT_EQ(n.at(0, 1), 0.25);
  EXPECT_EQ(n.at(0, 2), 0.0);
  EXPECT_EQ(n.at(0, 3), 0.25);
  EXPECT_EQ(n.at(1, 0), 1.0);
  EXPECT_EQ(n.row(2).size(), 0u);
}

TEST(RowNormalize, NegativeValuesRejected) {
  const std::vector<SparseMatrix::Entry> e{{0, 0, -1.0}};
  EXPECT_THROW(row_normalize(SparseMatrix::from_pairs(1, 1, e)), NumericError);
}

TEST(RowNormalize, SumsToOneAndIdempotent) {
  CounterRng rng(derive_key(14, 0));
  std::vector<SparseMatrix::Entry> e;
  for (std::size_t i = 0; i < 40; ++i)
    for (std::size_t j = 0; j < 30; ++j)
      if (rng.uniform() < 0.2) e.push_back({i, j, rng.uniform() * 10.0});
  const auto once = row_normalize(SparseMatrix::from_pairs(40, 30, e));
  const auto twice = row_normalize(once);
  for (std::size_t i = 0; i < once.n_rows(); ++i) {
    const auto row = once.row(i);
    if (row.size() == 0) continue;
    double s = 0.0;
    for (double v : row.values) s += v;
    EXPECT_NEAR(s, 1.0, 1e-12);
    for (std::size_t k = 0; k < row.size(); ++k) {
      EXPECT_NEAR(twice.row(i).values[k], row.values[k], 1e-12);
    }
  }
}

TEST(Column, FromCscMirror) {
  const auto id = SparseMatrix::identity(3);
  const auto col = id.column(1);
  ASSERT_EQ(col.size(), 1u);
  EXPECT_EQ(col[0].first, 1u);
  EXPECT_EQ(col[0].second, 1.0);
  EXPECT_TRUE(SparseMatrix(3, 2).column(1).empty());
  EXPECT_THROW(id.column(3), ConsistencyError);
}

TEST(Column, MatchesRowScan) {
  CounterRng rng(derive_key(15, 0));
  const auto a = random_sparse(rng, 60, 20, 0.1, false);
  for (std::size_t j = 0; j < a.n_cols(); ++j) {
    std::vector<std::pair<std::size_t, double>> expected;
    for (std::size_t i = 0; i < a.n_rows(); ++i)
      if (a.at(i, j) != 0.0) expected.emplace_back(i, a.at(i, j));
    EXPECT_EQ(a.column(j), expected);
  }
}

TEST(LeadingColumns, KeepsPrefix) {
  const std::vector<SparseMatrix::Entry> e{{0, 0, 1}, {0, 3, 2}, {1, 1, 3}};
  const auto m = leading_columns(SparseMatrix::from_pairs(2, 4, e), 2);
  EXPECT_EQ(m.n_cols(), 2u);
  EXPECT_EQ(m.nnz(), 2u);
  EXPECT_EQ(m.at(1, 1), 3.0);
}

TEST(BinaryFormat, RoundTrip) {
  CounterRng rng(derive_key(16, 0));
  const auto a = random_sparse(rng, 25, 13, 0.3, false);
  std::stringstream buf;
  write_binary(buf, a);
  EXPECT_EQ(buf.str().substr(0, 4), "KGSM");
  EXPECT_EQ(read_binary(buf), a);

  const auto path = std::filesystem::temp_directory_path() / "kgeval_sm_test.kgsm";
  save(path, a);
  EXPECT_EQ(load(path), a);
}

TEST(BinaryFormat, RejectsGarbage) {
  std::stringstream bad("NOPE....");
  EXPECT_THROW(read_binary(bad), ParseError);
  CounterRng rng(derive_key(17, 0));
  std::stringstream buf;
  write_binary(buf, random_sparse(rng, 5, 5, 0.5, false));
  std::stringstream truncated(buf.str().substr(0, buf.str().size() - 3));
  EXPECT_THROW(read_binary(truncated), ParseError);
}
