#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "opnorm/errors.hpp"
#include "opnorm/matcore.hpp"
#include "opnorm/optim.hpp"
#include "oracles.hpp"

using namespace opnorm;

namespace {

Matrix random_matrix(std::uint64_t seed, int r, int c) {
  auto rng = substream(seed, "test_matcore");
  return gaussian_matrix(rng, r, c);
}

}  // namespace

TEST_CASE("operator_norm examples") {
  CHECK(operator_norm(Matrix::Identity(2, 2)) == doctest::Approx(1.0).epsilon(1e-12));
  Matrix m = Matrix::Zero(2, 2);
  m(0, 1) = 2.0;
  CHECK(operator_norm(m) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(operator_norm(Matrix::Zero(3, 3)) == 0.0);

  for (std::uint64_t s = 0; s < 5; ++s) {
    const Matrix r = random_matrix(s, 4, 4);
    CHECK(std::abs(operator_norm(r) - oracle::power_norm(r)) < 1e-10);
  }
}

TEST_CASE("operator_norm is a norm and adjoint-invariant") {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const Matrix a = random_matrix(2 * s, 4, 4);
    const Matrix b = random_matrix(2 * s + 1, 4, 4);
    const Scalar lambda(0.7 * static_cast<double>(s) - 3.0, 0.3);
    CHECK(std::abs(operator_norm(lambda * a) - std::abs(lambda) * operator_norm(a)) < 1e-10);
    CHECK(operator_norm(a + b) <= operator_norm(a) + operator_norm(b) + 1e-10);
    CHECK(std::abs(operator_norm(a) - operator_norm(a.adjoint())) < 1e-12);
  }
}

TEST_CASE("commutant_basis") {
  SUBCASE("diagonal") {
    Matrix d = Matrix::Zero(2, 2);
    d(0, 0) = 1.0;
    d(1, 1) = 2.0;
    const std::vector<Matrix> in{d};
    const auto basis = commutant_basis(in);
    CHECK(basis.size() == 2);
    for (const Matrix& x : basis) {
      CHECK(std::abs(x(0, 1)) < 1e-12);
      CHECK(std::abs(x(1, 0)) < 1e-12);
    }
  }
  SUBCASE("all matrix units give scalars") {
    std::vector<Matrix> units;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) units.push_back(matrix_unit(2, 2, i, j));
    const auto basis = commutant_basis(units);
    REQUIRE(basis.size() == 1);
    const Matrix x = basis[0] / basis[0](0, 0);
    CHECK((x - Matrix::Identity(2, 2)).norm() < 1e-10);
  }
  SUBCASE("identity commutes with everything") {
    for (int k = 1; k <= 4; ++k) {
      const std::vector<Matrix> in{Matrix::Identity(k, k)};
      CHECK(commutant_basis(in).size() == static_cast<std::size_t>(k * k));
    }
  }
  SUBCASE("generic matrix has commutant of dimension k") {
    for (int k = 2; k <= 5; ++k) {
      const std::vector<Matrix> in{random_matrix(100 + k, k, k)};
      const auto basis = commutant_basis(in);
      CHECK(basis.size() == static_cast<std::size_t>(k));
      for (std::size_t i = 0; i < basis.size(); ++i) {
        CHECK((basis[i] * in[0] - in[0] * basis[i]).norm() <= 1e-10);
        for (std::size_t j = 0; j < basis.size(); ++j)
          CHECK(std::abs(trace_inner(basis[i], basis[j]) - (i == j ? 1.0 : 0.0)) < 1e-10);
      }
    }
  }
  SUBCASE("several generators") {
    const Matrix a = kron(random_matrix(7, 2, 2), Matrix::Identity(3, 3));
    const Matrix b = kron(random_matrix(8, 2, 2), Matrix::Identity(3, 3));
    const std::vector<Matrix> in{a, b};
    const auto basis = commutant_basis(in);
    CHECK(basis.size() == 9);  // 1 (x) M_3
    for (const Matrix& x : basis) {
      CHECK((x * a - a * x).norm() <= 1e-10);
      CHECK((x * b - b * x).norm() <= 1e-10);
    }
  }
  CHECK_THROWS_AS(commutant_basis(std::vector<Matrix>{Matrix::Zero(2, 3)}), ShapeMismatch);
}

TEST_CASE("gl_param") {
  for (int r = 1; r <= 4; ++r) {
    const std::vector<double> zero(static_cast<std::size_t>(2 * r * r), 0.0);
    CHECK((gl_param(r, zero) - Matrix::Identity(r, r)).norm() < 1e-15);
  }
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<double> theta(8), minus(8);
    for (std::size_t i = 0; i < theta.size(); ++i) {
      theta[i] = gaussian(rng);
      minus[i] = -theta[i];
    }
    const Matrix s = gl_param(2, theta);
    CHECK(std::abs(s.determinant()) > 0.0);
    CHECK((s * gl_param(2, minus) - Matrix::Identity(2, 2)).norm() < 1e-10);
  }
  CHECK_THROWS_AS(gl_param(2, std::vector<double>(3, 0.0)), ShapeMismatch);
}

TEST_CASE("kron matches the oracle") {
  const Matrix a = random_matrix(11, 2, 3);
  const Matrix b = random_matrix(12, 3, 1);
  CHECK((kron(a, b) - oracle::kron(a, b)).norm() < 1e-14);
}
