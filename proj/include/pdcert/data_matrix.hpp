#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace pdcert {

using Vector = Eigen::VectorXd;

/// Read-only view of one sparse column: parallel index/value arrays.
struct SparseColumn {
  std::span<const std::size_t> indices;
  std::span<const double> values;

  std::size_t nnz() const { return indices.size(); }
  double squared_norm() const;
  double dot(const Vector& dense) const;
};

/// A single (row, value) entry used when assembling a column.
struct Entry {
  std::size_t index;
  double value;
};

/**
 * Sparse d x n matrix stored column-major (CSC).
 *
 * Columns are the coordinate-update unit of every solver, so the storage is
 * optimized for column access. Invariants checked at construction:
 *   - rows >= 1, cols >= 1
 *   - every stored row index is < rows
 *   - row indices strictly increasing within a column
 *   - no explicit zeros are stored
 *
 * Instances are immutable after construction and safe to share across
 * threads. All products use a fixed summation order (column order, then
 * index order) so results are bitwise reproducible.
 */
class DataMatrix {
 public:
  /// Builds from per-column entry lists. Zero-valued entries are dropped.
  DataMatrix(std::size_t rows, std::vector<std::vector<Entry>> columns);

  /// Builds from a dense matrix, dropping exact zeros.
  static DataMatrix from_dense(const Eigen::MatrixXd& dense);
  static DataMatrix identity(std::size_t size);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return col_ptr_.size() - 1; }
  std::size_t nnz() const { return values_.size(); }

  SparseColumn column(std::size_t i) const;

  Eigen::MatrixXd to_dense() const;
  DataMatrix transpose() const;

  /// Returns a copy with every nonzero column scaled to unit Euclidean norm.
  DataMatrix normalized_columns() const;

 private:
  DataMatrix() = default;

  std::size_t rows_ = 0;
  std::vector<std::size_t> col_ptr_{0};
  std::vector<std::size_t> row_idx_;
  std::vector<double> values_;
};

/// Column/row norm bounds and the squared spectral norm of a DataMatrix.
struct MatrixConstants {
  double R = 0.0;      // max column Euclidean norm
  double P = 0.0;      // max row Euclidean norm
  double sigma = 0.0;  // largest eigenvalue of A^T A
};

struct PowerIterationOptions {
  double tol = 1e-9;
  std::size_t max_iterations = 10000;
};

/// Exact R and P; sigma via deterministic power iteration on A^T A, started
/// from the normalized all-ones vector, until the relative change of the
/// Rayleigh quotient drops below `tol`.
MatrixConstants matrix_constants(const DataMatrix& A, PowerIterationOptions options = {});

/// A * alpha. Throws std::invalid_argument on dimension mismatch.
Vector matvec(const DataMatrix& A, const Vector& alpha);

/// A^T * w. Throws std::invalid_argument on dimension mismatch.
Vector transpose_matvec(const DataMatrix& A, const Vector& w);

/// v += scale * A[:, i]; the incremental update used after each coordinate step.
void axpy_column(const DataMatrix& A, std::size_t i, double scale, Vector& v);

/// Parse failure in a LIBSVM file, carrying the 1-based line number.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Design matrix plus per-example labels. Examples are the columns of
/// `matrix` (the layout LIBSVM files load into).
struct LabeledDataset {
  DataMatrix matrix;
  Vector labels;
};

/// Loads "label idx:val idx:val ..." lines with 1-based strictly increasing
/// indices. Each line becomes one column; rows = max feature index.
LabeledDataset load_libsvm(const std::filesystem::path& path);
LabeledDataset parse_libsvm(const std::string& text);

/// Writes the dataset back in LIBSVM format with round-trip exact values.
void write_libsvm(const LabeledDataset& data, const std::filesystem::path& path);
std::string format_libsvm(const LabeledDataset& data);

}  // namespace pdcert
