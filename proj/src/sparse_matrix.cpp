#include "kgeval/sparse_matrix.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <mutex>
#include <numeric>
#include <ostream>
#include <string>

#include "kgeval/error.hpp"
#include "kgeval/parallel.hpp"

namespace kgeval {

static_assert(std::endian::native == std::endian::little,
              "binary formats assume a little-endian host");

struct SparseMatrix::ColumnMirror {
  std::once_flag once;
  std::vector<std::uint64_t> offsets;
  std::vector<std::uint64_t> rows;
  std::vector<double> values;
};

SparseMatrix::SparseMatrix(std::size_t n_rows, std::size_t n_cols)
    : n_rows_(n_rows),
      n_cols_(n_cols),
      offsets_(n_rows + 1, 0),
      mirror_(std::make_shared<ColumnMirror>()) {}

SparseMatrix SparseMatrix::from_pairs(std::size_t n_rows, std::size_t n_cols,
                                      std::span<const Entry> entries) {
  for (const Entry& e : entries) {
    if (e.row >= n_rows || e.col >= n_cols) {
      throw ConsistencyError("entry (" + std::to_string(e.row) + ", " +
                             std::to_string(e.col) + ") outside " +
                             std::to_string(n_rows) + "x" + std::to_string(n_cols));
    }
  }
  std::vector<Entry> sorted(entries.begin(), entries.end());
  std::stable_sort(sorted.begin(), sorted.end(), [](const Entry& a, const Entry& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });

  SparseMatrix m(n_rows, n_cols);
  std::vector<std::uint64_t> counts(n_rows, 0);
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    double sum = 0.0;
    while (j < sorted.size() && sorted[j].row == sorted[i].row &&
           sorted[j].col == sorted[i].col) {
      sum += sorted[j].value;
      ++j;
    }
    if (sum != 0.0) {
      m.indices_.push_back(sorted[i].col);
      m.values_.push_back(sum);
      ++counts[sorted[i].row];
    }
    i = j;
  }
  for (std::size_t r = 0; r < n_rows; ++r) m.offsets_[r + 1] = m.offsets_[r] + counts[r];
  return m;
}

SparseMatrix SparseMatrix::from_csr(std::size_t n_rows, std::size_t n_cols,
                                    std::vector<std::uint64_t> offsets,
                                    std::vector<std::uint64_t> indices,
                                    std::vector<double> values) {
  if (offsets.size() != n_rows + 1 || offsets.front() != 0 ||
      offsets.back() != indices.size() || indices.size() != values.size()) {
    throw ConsistencyError("CSR arrays have inconsistent lengths");
  }
  for (std::size_t r = 0; r < n_rows; ++r) {
    if (offsets[r] > offsets[r + 1]) throw ConsistencyError("CSR offsets decrease");
    for (std::uint64_t k = offsets[r]; k < offsets[r + 1]; ++k) {
      if (indices[k] >= n_cols) throw ConsistencyError("CSR column index out of range");
      if (k > offsets[r] && indices[k] <= indices[k - 1]) {
        throw ConsistencyError("CSR column indices not strictly increasing");
      }
      if (values[k] == 0.0) throw ConsistencyError("CSR stores an explicit zero");
    }
  }
  SparseMatrix m(n_rows, n_cols);
  m.offsets_ = std::move(offsets);
  m.indices_ = std::move(indices);
  m.values_ = std::move(values);
  return m;
}

SparseMatrix SparseMatrix::identity(std::size_t n) {
  SparseMatrix m(n, n);
  m.indices_.resize(n);
  std::iota(m.indices_.begin(), m.indices_.end(), 0);
  m.values_.assign(n, 1.0);
  std::iota(m.offsets_.begin(), m.offsets_.end(), 0);
  return m;
}

SparseMatrix::RowView SparseMatrix::row(std::size_t i) const {
  if (i >= n_rows_) throw ConsistencyError("row " + std::to_string(i) + " out of range");
  const auto begin = offsets_[i];
  const auto len = offsets_[i + 1] - begin;
  return {std::span(indices_).subspan(begin, len), std::span(values_).subspan(begin, len)};
}

std::vector<std::pair<std::size_t, double>> SparseMatrix::column(std::size_t j) const {
  if (j >= n_cols_) throw ConsistencyError("column " + std::to_string(j) + " out of range");
  ColumnMirror& mirror = *mirror_;
  std::call_once(mirror.once, [this, &mirror] {
    const SparseMatrix t = transpose(*this);
    mirror.offsets = t.offsets_;
    mirror.rows = t.indices_;
    mirror.values = t.values_;
  });
  std::vector<std::pair<std::size_t, double>> out;
  out.reserve(mirror.offsets[j + 1] - mirror.offsets[j]);
  for (auto k = mirror.offsets[j]; k < mirror.offsets[j + 1]; ++k) {
    out.emplace_back(mirror.rows[k], mirror.values[k]);
  }
  return out;
}

double SparseMatrix::at(std::size_t i, std::size_t j) const {
  const RowView r = row(i);
  auto it = std::lower_bound(r.cols.begin(), r.cols.end(), j);
  if (it == r.cols.end() || *it != j) return 0.0;
  return r.values[static_cast<std::size_t>(it - r.cols.begin())];
}

std::vector<double> SparseMatrix::to_dense() const {
  std::vector<double> dense(n_rows_ * n_cols_, 0.0);
  for (std::size_t i = 0; i < n_rows_; ++i) {
    for (auto k = offsets_[i]; k < offsets_[i + 1]; ++k) {
      dense[i * n_cols_ + indices_[k]] = values_[k];
    }
  }
  return dense;
}

bool operator==(const SparseMatrix& a, const SparseMatrix& b) {
  return a.n_rows_ == b.n_rows_ && a.n_cols_ == b.n_cols_ && a.offsets_ == b.offsets_ &&
         a.indices_ == b.indices_ && a.values_ == b.values_;
}

SparseMatrix spmm(const SparseMatrix& a, const SparseMatrix& b, std::size_t threads) {
  if (a.n_cols() != b.n_rows()) {
    throw ConsistencyError("spmm dimension mismatch: " + std::to_string(a.n_rows()) + "x" +
                           std::to_string(a.n_cols()) + " times " +
                           std::to_string(b.n_rows()) + "x" + std::to_string(b.n_cols()));
  }
  const std::size_t n_rows = a.n_rows();
  std::vector<std::vector<std::uint64_t>> row_cols(n_rows);
  std::vector<std::vector<double>> row_values(n_rows);

  const std::size_t workers = std::min(resolve_threads(threads), std::max<std::size_t>(n_rows, 1));
  const std::size_t block = (n_rows + workers - 1) / std::max<std::size_t>(workers, 1);
  parallel_for(workers, workers, [&](std::size_t w) {
    std::vector<double> accumulator(b.n_cols(), 0.0);
    std::vector<char> touched(b.n_cols(), 0);
    std::vector<std::uint64_t> pattern;
    const std::size_t end = std::min(n_rows, (w + 1) * block);
    for (std::size_t i = w * block; i < end; ++i) {
      pattern.clear();
      const auto ra = a.row(i);
      for (std::size_t p = 0; p < ra.size(); ++p) {
        const auto rb = b.row(ra.cols[p]);
        const double scale = ra.values[p];
        for (std::size_t q = 0; q < rb.size(); ++q) {
          const auto j = rb.cols[q];
          if (!touched[j]) {
            touched[j] = 1;
            pattern.push_back(j);
          }
          accumulator[j] += scale * rb.values[q];
        }
      }
      std::sort(pattern.begin(), pattern.end());
      for (auto j : pattern) {
        if (accumulator[j] != 0.0) {
          row_cols[i].push_back(j);
          row_values[i].push_back(accumulator[j]);
        }
        accumulator[j] = 0.0;
        touched[j] = 0;
      }
    }
  });

  std::vector<std::uint64_t> offsets(n_rows + 1, 0);
  for (std::size_t i = 0; i < n_rows; ++i) offsets[i + 1] = offsets[i] + row_cols[i].size();
  std::vector<std::uint64_t> indices;
  std::vector<double> values;
  indices.reserve(offsets.back());
  values.reserve(offsets.back());
  for (std::size_t i = 0; i < n_rows; ++i) {
    indices.insert(indices.end(), row_cols[i].begin(), row_cols[i].end());
    values.insert(values.end(), row_values[i].begin(), row_values[i].end());
  }
  return SparseMatrix::from_csr(n_rows, b.n_cols(), std::move(offsets), std::move(indices),
                                std::move(values));
}

SparseMatrix transpose(const SparseMatrix& a) {
  std::vector<std::uint64_t> offsets(a.n_cols() + 1, 0);
  for (auto j : a.indices()) ++offsets[j + 1];
  std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());
  std::vector<std::uint64_t> cursor(offsets.begin(), offsets.end() - 1);
  std::vector<std::uint64_t> indices(a.nnz());
  std::vector<double> values(a.nnz());
  // Rows are visited in order, so every output row receives increasing indices.
  for (std::size_t i = 0; i < a.n_rows(); ++i) {
    const auto r = a.row(i);
    for (std::size_t p = 0; p < r.size(); ++p) {
      const auto slot = cursor[r.cols[p]]++;
      indices[slot] = i;
      values[slot] = r.values[p];
    }
  }
  return SparseMatrix::from_csr(a.n_cols(), a.n_rows(), std::move(offsets),
                                std::move(indices), std::move(values));
}

SparseMatrix row_normalize(const SparseMatrix& a) {
  std::vector<double> values(a.values().begin(), a.values().end());
  for (double v : values) {
    if (v < 0.0) throw NumericError("row_normalize requires non-negative values");
  }
  for (std::size_t i = 0; i < a.n_rows(); ++i) {
    const auto begin = a.offsets()[i];
    const auto end = a.offsets()[i + 1];
    double sum = 0.0;
    for (auto k = begin; k < end; ++k) sum += values[k];
    for (auto k = begin; k < end; ++k) values[k] /= sum;
  }
  return SparseMatrix::from_csr(
      a.n_rows(), a.n_cols(), {a.offsets().begin(), a.offsets().end()},
      {a.indices().begin(), a.indices().end()}, std::move(values));
}

SparseMatrix leading_columns(const SparseMatrix& a, std::size_t n_cols) {
  if (n_cols > a.n_cols()) throw ConsistencyError("leading_columns exceeds column count");
  std::vector<std::uint64_t> offsets(a.n_rows() + 1, 0);
  std::vector<std::uint64_t> indices;
  std::vector<double> values;
  for (std::size_t i = 0; i < a.n_rows(); ++i) {
    const auto r = a.row(i);
    for (std::size_t p = 0; p < r.size() && r.cols[p] < n_cols; ++p) {
      indices.push_back(r.cols[p]);
      values.push_back(r.values[p]);
    }
    offsets[i + 1] = indices.size();
  }
  return SparseMatrix::from_csr(a.n_rows(), n_cols, std::move(offsets), std::move(indices),
                                std::move(values));
}

namespace {

constexpr char kMagic[4] = {'K', 'G', 'S', 'M'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void put(std::ostream& out, const T& value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
void put_array(std::ostream& out, std::span<const T> values) {
  out.write(reinterpret_cast<const char*>(values.data()),
            static_cast<std::streamsize>(values.size_bytes()));
}

template <typename T>
T get(std::istream& in) {
  T value{};
  if (!in.read(reinterpret_cast<char*>(&value), sizeof(T))) {
    throw ParseError("truncated KGSM stream");
  }
  return value;
}

template <typename T>
std::vector<T> get_array(std::istream& in, std::uint64_t count) {
  std::vector<T> values(count);
  if (!in.read(reinterpret_cast<char*>(values.data()),
               static_cast<std::streamsize>(count * sizeof(T)))) {
    throw ParseError("truncated KGSM stream");
  }
  return values;
}

}  // namespace

void write_binary(std::ostream& out, const SparseMatrix& m) {
  out.write(kMagic, sizeof kMagic);
  put(out, kVersion);
  put<std::uint64_t>(out, m.n_rows());
  put<std::uint64_t>(out, m.n_cols());
  put<std::uint64_t>(out, m.nnz());
  put_array(out, m.offsets());
  put_array(out, m.indices());
  put_array(out, m.values());
  if (!out) throw IoError("failed writing KGSM stream");
}

SparseMatrix read_binary(std::istream& in) {
  char magic[4];
  if (!in.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof magic) != 0) {
    throw ParseError("not a KGSM stream (bad magic)");
  }
  const auto version = get<std::uint32_t>(in);
  if (version != kVersion) {
    throw ParseError("unsupported KGSM version " + std::to_string(version));
  }
  const auto n_rows = get<std::uint64_t>(in);
  const auto n_cols = get<std::uint64_t>(in);
  const auto nnz = get<std::uint64_t>(in);
  auto offsets = get_array<std::uint64_t>(in, n_rows + 1);
  auto indices = get_array<std::uint64_t>(in, nnz);
  auto values = get_array<double>(in, nnz);
  return SparseMatrix::from_csr(n_rows, n_cols, std::move(offsets), std::move(indices),
                                std::move(values));
}

void save(const std::filesystem::path& path, const SparseMatrix& m) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  write_binary(out, m);
}

SparseMatrix load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return read_binary(in);
}

}  // namespace kgeval
