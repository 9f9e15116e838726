#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <span>
#include <utility>
#include <vector>

namespace kgeval {

/// Compressed sparse row matrix in canonical form: minor indices strictly
/// increasing within each row, no explicitly stored zeros. Immutable.
///
/// Column access goes through a lazily built column-major mirror, so the
/// matrix stays safe to share across concurrent readers.
class SparseMatrix {
 public:
  struct Entry {
    std::size_t row = 0;
    std::size_t col = 0;
    double value = 0.0;
  };

  struct RowView {
    std::span<const std::uint64_t> cols;
    std::span<const double> values;
    std::size_t size() const noexcept { return cols.size(); }
  };

  SparseMatrix() : SparseMatrix(0, 0) {}
  SparseMatrix(std::size_t n_rows, std::size_t n_cols);

  /// Builds from coordinate entries: duplicates summed, zeros dropped.
  static SparseMatrix from_pairs(std::size_t n_rows, std::size_t n_cols,
                                 std::span<const Entry> entries);

  /// Adopts CSR arrays after validating that they are canonical.
  static SparseMatrix from_csr(std::size_t n_rows, std::size_t n_cols,
                               std::vector<std::uint64_t> offsets,
                               std::vector<std::uint64_t> indices,
                               std::vector<double> values);

  static SparseMatrix identity(std::size_t n);

  std::size_t n_rows() const noexcept { return n_rows_; }
  std::size_t n_cols() const noexcept { return n_cols_; }
  std::size_t nnz() const noexcept { return values_.size(); }

  std::span<const std::uint64_t> offsets() const noexcept { return offsets_; }
  std::span<const std::uint64_t> indices() const noexcept { return indices_; }
  std::span<const double> values() const noexcept { return values_; }

  RowView row(std::size_t i) const;

  /// Nonzeros of column j sorted by row.
  std::vector<std::pair<std::size_t, double>> column(std::size_t j) const;

  /// Zero when the entry is not stored.
  double at(std::size_t i, std::size_t j) const;

  /// Row-major dense copy.
  std::vector<double> to_dense() const;

  friend bool operator==(const SparseMatrix& a, const SparseMatrix& b);

 private:
  struct ColumnMirror;

  std::size_t n_rows_ = 0;
  std::size_t n_cols_ = 0;
  std::vector<std::uint64_t> offsets_;
  std::vector<std::uint64_t> indices_;
  std::vector<double> values_;
  std::shared_ptr<ColumnMirror> mirror_;
};

/// Gustavson row-by-row product. Rows of the result are computed
/// independently, so the output does not depend on `threads`.
SparseMatrix spmm(const SparseMatrix& a, const SparseMatrix& b, std::size_t threads = 1);

SparseMatrix transpose(const SparseMatrix& a);

/// Scales each nonzero row to sum to one. Values must be non-negative.
SparseMatrix row_normalize(const SparseMatrix& a);

/// Keeps columns [0, n_cols).
SparseMatrix leading_columns(const SparseMatrix& a, std::size_t n_cols);

/// Little-endian "KGSM" dump: magic, u32 version, u64 n_rows, n_cols, nnz,
/// then u64 offsets, u64 indices, f64 values.
void write_binary(std::ostream& out, const SparseMatrix& m);
SparseMatrix read_binary(std::istream& in);
void save(const std::filesystem::path& path, const SparseMatrix& m);
SparseMatrix load(const std::filesystem::path& path);

}  // namespace kgeval
