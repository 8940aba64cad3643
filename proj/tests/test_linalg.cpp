#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "stein_lasso/csv.hpp"
#include "stein_lasso/error.hpp"
#include "stein_lasso/eval.hpp"
#include "stein_lasso/linalg.hpp"

using namespace stein;

namespace {

Matrix random_spd(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> z;
  Matrix B(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) B(i, j) = z(rng);
  return B * B.transpose() + n * Matrix::Identity(n, n);
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("cholesky_solve small exact cases") {
  const Vector b = (Vector(3) << 1, 2, 3).finished();
  CHECK(cholesky_solve(Matrix::Identity(3, 3), b).isApprox(b, 1e-15));

  Matrix D = Matrix::Zero(2, 2);
  D(0, 0) = 4;
  D(1, 1) = 9;
  const Vector x = cholesky_solve(D, (Vector(2) << 8, 27).finished());
  CHECK(x(0) == doctest::Approx(2).epsilon(1e-15));
  CHECK(x(1) == doctest::Approx(3).epsilon(1e-15));
}

TEST_CASE("cholesky_solve agrees with Gauss-Jordan inverse") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> z;
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix A = random_spd(8, rng);
    Vector b(8);
    for (auto& v : b) v = z(rng);
    const Vector x = cholesky_solve(A, b);
    const Vector ref = oracle::gauss_jordan_inverse(A) * b;
    CHECK((x - ref).cwiseAbs().maxCoeff() < 1e-8);
    CHECK((A * x - b).cwiseAbs().maxCoeff() <= 1e-8 * (1 + b.cwiseAbs().maxCoeff()));
  }
}

TEST_CASE("cholesky_solve errors") {
  CHECK(code_of([] { cholesky_solve(Matrix::Identity(3, 3), Vector::Ones(2)); }) ==
        ErrorCode::DimensionMismatch);
  CHECK(code_of([] { cholesky_solve(Matrix::Identity(3, 2), Vector::Ones(3)); }) ==
        ErrorCode::DimensionMismatch);
  Matrix singular = Matrix::Ones(3, 3);
  CHECK(code_of([&] { cholesky_solve(singular, Vector::Ones(3)); }) ==
        ErrorCode::NotPositiveDefinite);
  Matrix indefinite = Matrix::Identity(2, 2);
  indefinite(1, 1) = -1;
  CHECK(code_of([&] { cholesky_solve(indefinite, Vector::Ones(2)); }) ==
        ErrorCode::NotPositiveDefinite);
}

TEST_CASE("center_columns examples") {
  Matrix X(3, 2);
  X << 1, 0, 2, 5, 3, -5;
  const auto [Xc, means] = center_columns(X);
  CHECK(Xc(0, 0) == -1);
  CHECK(Xc(1, 0) == 0);
  CHECK(Xc(2, 0) == 1);
  CHECK(means(0) == 2);
  CHECK(means(1) == 0);
  CHECK(Xc.col(1) == X.col(1));

  CHECK(code_of([] { center_columns(Matrix(0, 3)); }) == ErrorCode::EmptyMatrix);
}

TEST_CASE("center_columns is idempotent and zeroes column sums") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> z(5.0, 3.0);
  Matrix X(40, 6);
  for (auto& v : X.reshaped()) v = z(rng);
  const auto [once, m1] = center_columns(X);
  const auto [twice, m2] = center_columns(once);
  CHECK((once - twice).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(m2.cwiseAbs().maxCoeff() < 1e-12);
  for (Eigen::Index j = 0; j < once.cols(); ++j) CHECK(std::abs(once.col(j).sum()) < 1e-10 * 40);
}

TEST_CASE("Longley GNP column recentres to zero sum") {
  const auto csv = parse_csv(*bundled_csv("longley"));
  const std::size_t gnp = csv.column("GNP");
  REQUIRE(csv.rows.size() == 16);
  Matrix col(16, 1);
  double direct = 0.0;
  for (std::size_t i = 0; i < 16; ++i) {
    col(static_cast<Eigen::Index>(i), 0) = parse_number(csv.rows[i][gnp]);
    direct += col(static_cast<Eigen::Index>(i), 0);
  }
  const auto [Xc, means] = center_columns(col);
  CHECK(means(0) == doctest::Approx(direct / 16.0).epsilon(1e-14));
  CHECK(std::abs(Xc.sum()) < 1e-10 * 16);
}

TEST_CASE("equicorr_cholesky reconstructs the equicorrelation matrix") {
  CHECK(equicorr_cholesky(5, 0.0).isIdentity(0.0));

  for (const auto& [p, r] : std::vector<std::pair<int, double>>{{2, 0.5}, {10, 0.3}, {50, 0.9}, {20, 0.999}}) {
    const Matrix L = equicorr_cholesky(p, r);
    Matrix sigma = Matrix::Constant(p, p, r);
    sigma.diagonal().setOnes();
    CHECK((L * L.transpose() - sigma).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(L.isLowerTriangular(0.0));
    CHECK(L.diagonal().minCoeff() > 0.0);
  }
  const Matrix L2 = equicorr_cholesky(2, 0.5);
  const Matrix S2 = L2 * L2.transpose();
  CHECK(S2(0, 1) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("equicorr_cholesky rejects correlations outside [0, 1)") {
  CHECK(code_of([] { equicorr_cholesky(3, 1.0); }) == ErrorCode::InvalidCorrelation);
  CHECK(code_of([] { equicorr_cholesky(3, -0.1); }) == ErrorCode::InvalidCorrelation);
}

TEST_CASE("templated core works in single precision") {
  const MatrixX<float> L = equicorr_cholesky<float>(4, 0.5f);
  MatrixX<float> sigma = MatrixX<float>::Constant(4, 4, 0.5f);
  sigma.diagonal().setOnes();
  CHECK((L * L.transpose() - sigma).cwiseAbs().maxCoeff() < 1e-6f);
  const VectorX<float> x = cholesky_solve(sigma, VectorX<float>::Ones(4));
  CHECK((sigma * x - VectorX<float>::Ones(4)).cwiseAbs().maxCoeff() < 1e-5f);
}
