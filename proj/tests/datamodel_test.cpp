#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <filesystem>
#include <fstream>

#include "pdcert/data_matrix.hpp"
#include "pdcert/synthetic.hpp"
#include "test_util.hpp"

namespace pdcert {
namespace {

using testing::random_matrix;
using testing::random_vector;

std::filesystem::path temp_file(const std::string& name, const std::string& contents) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << contents;
  return path;
}

TEST(DataMatrix, RejectsOutOfRangeIndex) {
  EXPECT_THROW(DataMatrix(2, {{{2, 1.0}}}), std::invalid_argument);
}

TEST(DataMatrix, RejectsUnsortedIndices) {
  EXPECT_THROW(DataMatrix(3, {{{1, 1.0}, {0, 2.0}}}), std::invalid_argument);
  EXPECT_THROW(DataMatrix(3, {{{1, 1.0}, {1, 2.0}}}), std::invalid_argument);
}

TEST(DataMatrix, RejectsEmptyShape) {
  EXPECT_THROW(DataMatrix(0, {{}}), std::invalid_argument);
  EXPECT_THROW(DataMatrix(2, {}), std::invalid_argument);
}

TEST(DataMatrix, DropsExplicitZeros) {
  DataMatrix A(3, {{{0, 0.0}, {2, 5.0}}});
  EXPECT_EQ(A.nnz(), 1u);
  EXPECT_EQ(A.column(0).indices[0], 2u);
}

TEST(DataMatrix, TransposeRoundTrip) {
  const DataMatrix A = random_matrix(4, 7, 3, 0.5);
  EXPECT_EQ(A.transpose().transpose().to_dense(), A.to_dense());
  EXPECT_EQ(A.transpose().to_dense(), A.to_dense().transpose());
}

TEST(DataMatrix, NormalizedColumnsHaveUnitNorm) {
  DataMatrix A(2, {{{0, 3.0}, {1, 4.0}}, {}, {{1, -2.0}}});
  const DataMatrix N = A.normalized_columns();
  EXPECT_NEAR(N.column(0).squared_norm(), 1.0, 1e-15);
  EXPECT_EQ(N.column(1).nnz(), 0u);
  EXPECT_NEAR(N.column(2).values[0], -1.0, 1e-15);
}

TEST(MatrixConstants, Identity) {
  const MatrixConstants c = matrix_constants(DataMatrix::identity(2));
  EXPECT_DOUBLE_EQ(c.R, 1.0);
  EXPECT_DOUBLE_EQ(c.P, 1.0);
  EXPECT_NEAR(c.sigma, 1.0, 1e-12);
}

TEST(MatrixConstants, Diagonal) {
  Eigen::MatrixXd D(2, 2);
  D << 2, 0, 0, 1;
  const MatrixConstants c = matrix_constants(DataMatrix::from_dense(D));
  EXPECT_DOUBLE_EQ(c.R, 2.0);
  EXPECT_DOUBLE_EQ(c.P, 2.0);
  EXPECT_NEAR(c.sigma, 4.0, 4e-9);
}

TEST(MatrixConstants, ZeroMatrixGivesZeroSigma) {
  DataMatrix A(3, {{}, {}});
  const MatrixConstants c = matrix_constants(A);
  EXPECT_EQ(c.sigma, 0.0);
  EXPECT_EQ(c.R, 0.0);
}

TEST(MatrixConstants, MatchesDenseEigenDecomposition) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const DataMatrix A = random_matrix(3, 3, seed);
    const Eigen::MatrixXd dense = A.to_dense();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(dense.transpose() * dense);
    const double truth = eig.eigenvalues().maxCoeff();
    EXPECT_NEAR(matrix_constants(A).sigma, truth, 1e-6 * truth) << "seed " << seed;
  }
}

TEST(MatrixConstants, RayleighLowerBoundAndFrobeniusUpperBound) {
  const double tol = 1e-9;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const DataMatrix A = random_matrix(6, 9, seed, 0.6);
    const MatrixConstants c = matrix_constants(A, {tol, 10000});
    for (int k = 0; k < 100; ++k) {
      Vector a = random_vector(9, seed * 1000 + k);
      a.normalize();
      EXPECT_LE(matvec(A, a).squaredNorm(), c.sigma * (1 + 10 * tol) + 1e-12);
    }
    double frob = 0.0;
    for (std::size_t i = 0; i < A.cols(); ++i) frob += A.column(i).squared_norm();
    EXPECT_LE(c.R * c.R, c.sigma + tol * c.sigma);
    EXPECT_LE(c.sigma, frob + tol);
  }
}

TEST(Products, HandArithmetic) {
  Eigen::MatrixXd D(2, 2);
  D << 1, 2, 0, 3;
  const DataMatrix A = DataMatrix::from_dense(D);
  const Vector r = matvec(A, Vector::Ones(2));
  EXPECT_EQ(r[0], 3.0);
  EXPECT_EQ(r[1], 3.0);
  const Vector x = random_vector(2, 1);
  EXPECT_EQ(matvec(DataMatrix::identity(2), x), x);
}

TEST(Products, DimensionMismatchThrows) {
  const DataMatrix A = random_matrix(3, 4, 1);
  EXPECT_THROW(matvec(A, Vector::Zero(3)), std::invalid_argument);
  EXPECT_THROW(transpose_matvec(A, Vector::Zero(4)), std::invalid_argument);
}

TEST(Products, IntegerInputsMatchDenseExactly) {
  SplitMix64 rng(77);
  std::vector<std::vector<Entry>> cols(6);
  for (auto& col : cols) {
    for (std::size_t j = 0; j < 5; ++j) {
      if (rng.below(2) == 0) col.push_back({j, static_cast<double>(static_cast<int>(rng.below(9)) - 4)});
    }
  }
  const DataMatrix A(5, cols);
  const Eigen::MatrixXd dense = A.to_dense();
  for (std::size_t i = 0; i < 6; ++i) {
    Vector e = Vector::Zero(6);
    e[static_cast<Eigen::Index>(i)] = 1.0;
    const Vector direct = transpose_matvec(A, matvec(A, e));
    const Vector via_dense = dense.transpose() * (dense * e);
    EXPECT_EQ(direct, via_dense);
  }
  Vector alpha(6);
  alpha << 1, -2, 3, 0, 5, -1;
  EXPECT_EQ(matvec(A, alpha), Vector(dense * alpha));
}

TEST(Products, AxpyColumn) {
  const DataMatrix A = random_matrix(4, 3, 2);
  Vector v = Vector::Zero(4);
  axpy_column(A, 1, 2.0, v);
  EXPECT_TRUE(v.isApprox(2.0 * A.to_dense().col(1)));
}

TEST(Libsvm, ParsesReferenceFormatExample) {
  const LabeledDataset data = parse_libsvm("+1 1:0.5 3:-2\n-1 2:1\n");
  ASSERT_EQ(data.matrix.rows(), 3u);
  ASSERT_EQ(data.matrix.cols(), 2u);
  const SparseColumn c0 = data.matrix.column(0);
  ASSERT_EQ(c0.nnz(), 2u);
  EXPECT_EQ(c0.indices[0], 0u);
  EXPECT_EQ(c0.values[0], 0.5);
  EXPECT_EQ(c0.indices[1], 2u);
  EXPECT_EQ(c0.values[1], -2.0);
  EXPECT_EQ(data.matrix.column(1).indices[0], 1u);
  EXPECT_EQ(data.labels[0], 1.0);
  EXPECT_EQ(data.labels[1], -1.0);
}

TEST(Libsvm, MinimalFile) {
  const auto path = temp_file("pdcert_minimal.libsvm", "1 1:1\n");
  const LabeledDataset data = load_libsvm(path);
  EXPECT_EQ(data.matrix.to_dense(), Eigen::MatrixXd::Ones(1, 1));
  EXPECT_EQ(data.labels[0], 1.0);
}

TEST(Libsvm, MalformedLineReportsLineNumber) {
  try {
    parse_libsvm("1 1:1\n1 2:x\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  EXPECT_THROW(parse_libsvm("1 2:1 1:1\n"), ParseError);
  EXPECT_THROW(parse_libsvm("1 0:1\n"), ParseError);
}

TEST(Libsvm, EmptyFileIsAnError) {
  EXPECT_THROW(parse_libsvm(""), ParseError);
  EXPECT_THROW(load_libsvm(temp_file("pdcert_empty.libsvm", "")), ParseError);
}

TEST(Libsvm, MissingFileIsAnError) {
  EXPECT_THROW(load_libsvm("/nonexistent/pdcert.libsvm"), std::runtime_error);
}

TEST(Libsvm, SyntheticRoundTrip) {
  SyntheticSpec spec;
  spec.features = 7;
  spec.examples = 10;
  spec.density = 0.6;
  spec.seed = 4;
  const LabeledDataset data = generate_synthetic(spec);
  const auto path = std::filesystem::temp_directory_path() / "pdcert_roundtrip.libsvm";
  write_libsvm(data, path);
  const LabeledDataset back = load_libsvm(path);
  ASSERT_EQ(back.matrix.cols(), data.matrix.cols());
  EXPECT_EQ(back.labels, data.labels);
  for (std::size_t i = 0; i < data.matrix.cols(); ++i) {
    const SparseColumn a = data.matrix.column(i);
    const SparseColumn b = back.matrix.column(i);
    ASSERT_EQ(a.nnz(), b.nnz());
    for (std::size_t k = 0; k < a.nnz(); ++k) {
      EXPECT_EQ(a.indices[k], b.indices[k]);
      EXPECT_EQ(a.values[k], b.values[k]);
    }
  }
}

TEST(Synthetic, IsDeterministic) {
  SyntheticSpec spec;
  spec.seed = 9;
  spec.target = TargetKind::classification;
  const LabeledDataset a = generate_synthetic(spec);
  const LabeledDataset b = generate_synthetic(spec);
  EXPECT_EQ(format_libsvm(a), format_libsvm(b));
  for (Eigen::Index i = 0; i < a.labels.size(); ++i) EXPECT_TRUE(a.labels[i] == 1.0 || a.labels[i] == -1.0);
}

TEST(Random, BelowIsInRangeAndReproducible) {
  SplitMix64 a(5), b(5);
  for (int k = 0; k < 1000; ++k) {
    const auto x = a.below(7);
    EXPECT_LT(x, 7u);
    EXPECT_EQ(x, b.below(7));
  }
  // Pin the stream so index sequences cannot silently change across builds.
  SplitMix64 c(0);
  EXPECT_EQ(c.next(), 0xE220A8397B1DCDAFULL);
}

}  // namespace
}  // namespace pdcert
