#include "pdcert/data_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace pdcert {

double SparseColumn::squared_norm() const {
  double sum = 0.0;
  for (double v : values) sum += v * v;
  return sum;
}

double SparseColumn::dot(const Vector& dense) const {
  double sum = 0.0;
  for (std::size_t k = 0; k < indices.size(); ++k) sum += values[k] * dense[static_cast<Eigen::Index>(indices[k])];
  return sum;
}

DataMatrix::DataMatrix(std::size_t rows, std::vector<std::vector<Entry>> columns) : rows_(rows) {
  if (rows == 0) throw std::invalid_argument("DataMatrix: need at least one row");
  if (columns.empty()) throw std::invalid_argument("DataMatrix: need at least one column");

  col_ptr_.reserve(columns.size() + 1);
  for (std::size_t c = 0; c < columns.size(); ++c) {
    const auto& col = columns[c];
    for (std::size_t k = 0; k < col.size(); ++k) {
      if (col[k].index >= rows) {
        throw std::invalid_argument("DataMatrix: row index " + std::to_string(col[k].index) +
                                    " out of range in column " + std::to_string(c));
      }
      if (k > 0 && col[k].index <= col[k - 1].index) {
        throw std::invalid_argument("DataMatrix: row indices not strictly increasing in column " +
                                    std::to_string(c));
      }
      if (!std::isfinite(col[k].value)) {
        throw std::invalid_argument("DataMatrix: non-finite value in column " + std::to_string(c));
      }
      if (col[k].value == 0.0) continue;
      row_idx_.push_back(col[k].index);
      values_.push_back(col[k].value);
    }
    col_ptr_.push_back(values_.size());
  }
}

DataMatrix DataMatrix::from_dense(const Eigen::MatrixXd& dense) {
  std::vector<std::vector<Entry>> columns(static_cast<std::size_t>(dense.cols()));
  for (Eigen::Index c = 0; c < dense.cols(); ++c) {
    for (Eigen::Index r = 0; r < dense.rows(); ++r) {
      if (dense(r, c) != 0.0) columns[static_cast<std::size_t>(c)].push_back({static_cast<std::size_t>(r), dense(r, c)});
    }
  }
  return DataMatrix(static_cast<std::size_t>(dense.rows()), std::move(columns));
}

DataMatrix DataMatrix::identity(std::size_t size) {
  std::vector<std::vector<Entry>> columns(size);
  for (std::size_t i = 0; i < size; ++i) columns[i].push_back({i, 1.0});
  return DataMatrix(size, std::move(columns));
}

SparseColumn DataMatrix::column(std::size_t i) const {
  const std::size_t begin = col_ptr_[i];
  const std::size_t count = col_ptr_[i + 1] - begin;
  return {std::span<const std::size_t>(row_idx_.data() + begin, count),
          std::span<const double>(values_.data() + begin, count)};
}

Eigen::MatrixXd DataMatrix::to_dense() const {
  Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows_), static_cast<Eigen::Index>(cols()));
  for (std::size_t c = 0; c < cols(); ++c) {
    const SparseColumn col = column(c);
    for (std::size_t k = 0; k < col.nnz(); ++k) {
      dense(static_cast<Eigen::Index>(col.indices[k]), static_cast<Eigen::Index>(c)) = col.values[k];
    }
  }
  return dense;
}

DataMatrix DataMatrix::transpose() const {
  std::vector<std::vector<Entry>> columns(rows_);
  // Visiting columns in order keeps the new row indices sorted.
  for (std::size_t c = 0; c < cols(); ++c) {
    const SparseColumn col = column(c);
    for (std::size_t k = 0; k < col.nnz(); ++k) columns[col.indices[k]].push_back({c, col.values[k]});
  }
  return DataMatrix(cols(), std::move(columns));
}

DataMatrix DataMatrix::normalized_columns() const {
  DataMatrix out = *this;
  for (std::size_t c = 0; c < cols(); ++c) {
    const double norm = std::sqrt(column(c).squared_norm());
    if (norm == 0.0) continue;
    for (std::size_t k = col_ptr_[c]; k < col_ptr_[c + 1]; ++k) out.values_[k] /= norm;
  }
  return out;
}

MatrixConstants matrix_constants(const DataMatrix& A, PowerIterationOptions options) {
  if (!(options.tol > 0.0)) throw std::invalid_argument("matrix_constants: tol must be positive");

  MatrixConstants out;
  Vector row_sq = Vector::Zero(static_cast<Eigen::Index>(A.rows()));
  for (std::size_t c = 0; c < A.cols(); ++c) {
    const SparseColumn col = A.column(c);
    out.R = std::max(out.R, std::sqrt(col.squared_norm()));
    for (std::size_t k = 0; k < col.nnz(); ++k) row_sq[static_cast<Eigen::Index>(col.indices[k])] += col.values[k] * col.values[k];
  }
  out.P = std::sqrt(row_sq.maxCoeff());
  if (A.nnz() == 0) return out;

  Vector x = Vector::Ones(static_cast<Eigen::Index>(A.cols()));
  x /= x.norm();
  double estimate = 0.0;
  for (std::size_t it = 0; it < options.max_iterations; ++it) {
    const Vector Ax = matvec(A, x);
    const double rayleigh = Ax.squaredNorm();
    Vector next = transpose_matvec(A, Ax);
    const double norm = next.norm();
    if (norm == 0.0) {
      estimate = rayleigh;
      break;
    }
    const bool done = it > 0 && std::abs(rayleigh - estimate) <= options.tol * rayleigh;
    estimate = rayleigh;
    if (done) break;
    x = next / norm;
  }
  out.sigma = estimate;
  return out;
}

Vector matvec(const DataMatrix& A, const Vector& alpha) {
  if (static_cast<std::size_t>(alpha.size()) != A.cols()) {
    throw std::invalid_argument("matvec: expected vector of length " + std::to_string(A.cols()) + ", got " +
                                std::to_string(alpha.size()));
  }
  Vector out = Vector::Zero(static_cast<Eigen::Index>(A.rows()));
  for (std::size_t c = 0; c < A.cols(); ++c) {
    const double a = alpha[static_cast<Eigen::Index>(c)];
    if (a == 0.0) continue;
    axpy_column(A, c, a, out);
  }
  return out;
}

Vector transpose_matvec(const DataMatrix& A, const Vector& w) {
  if (static_cast<std::size_t>(w.size()) != A.rows()) {
    throw std::invalid_argument("transpose_matvec: expected vector of length " + std::to_string(A.rows()) +
                                ", got " + std::to_string(w.size()));
  }
  Vector out(static_cast<Eigen::Index>(A.cols()));
  for (std::size_t c = 0; c < A.cols(); ++c) out[static_cast<Eigen::Index>(c)] = A.column(c).dot(w);
  return out;
}

void axpy_column(const DataMatrix& A, std::size_t i, double scale, Vector& v) {
  const SparseColumn col = A.column(i);
  for (std::size_t k = 0; k < col.nnz(); ++k) v[static_cast<Eigen::Index>(col.indices[k])] += scale * col.values[k];
}

}  // namespace pdcert
