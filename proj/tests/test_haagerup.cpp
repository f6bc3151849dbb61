#include <cmath>

#include "doctest.h"
#include "opnorm/errors.hpp"
#include "opnorm/haagerup.hpp"
#include "oracles.hpp"

using namespace opnorm;

namespace {

ConcreteOperatorSpace row(int n) { return standard_space(StandardKind::Row, n); }
ConcreteOperatorSpace col(int n) { return standard_space(StandardKind::Column, n); }

HaagerupOptions budget(std::uint64_t seed = 0) {
  HaagerupOptions o;
  o.restarts = 4;
  o.iters = 400;
  o.seed = seed;
  return o;
}

const Decomposition& cert(const NormEstimate& e) { return std::get<Decomposition>(e.certificate); }

}  // namespace

TEST_CASE("initial_decomposition") {
  auto rng = substream(1, "test_h_init");
  const auto f = full_space(2, 2);
  const auto ab = tensor_from_terms(f, f, {f.element(gaussian_matrix(rng, 4, 1))}, {f.element(gaussian_matrix(rng, 4, 1))});
  CHECK(initial_decomposition(ab).terms() == 1);
  CHECK(initial_decomposition(tensor_element(row(2), col(2), Matrix::Identity(2, 2))).terms() == 2);

  const auto e3 = full_space(1, 3);
  const Matrix c = gaussian_matrix(rng, 3, 2) * gaussian_matrix(rng, 2, 3);
  const auto d = initial_decomposition(tensor_element(e3, e3, c));
  CHECK(d.terms() == 2);
  CHECK(reconstruction_error(d) <= 1e-12);
  CHECK_THROWS_AS(initial_decomposition(tensor_element(e3, e3, Matrix::Zero(3, 3))), ZeroTensor);
}

TEST_CASE("haagerup examples") {
  SUBCASE("column (x) row identity") {
    const auto t = tensor_element(col(2), row(2), Matrix::Identity(2, 2));
    const auto e = haagerup_upper(t, budget());
    CHECK(e.bound_kind == BoundKind::Upper);
    CHECK(std::abs(e.value - 1.0) <= 1e-4);
    CHECK(min_norm(t) <= e.value + 1e-8);
  }
  SUBCASE("row (x) column identity") {
    for (int n = 2; n <= 3; ++n) {
      const auto e = haagerup_upper(tensor_element(row(n), col(n), Matrix::Identity(n, n)), budget());
      CHECK(e.value >= n - 1e-9);
      CHECK(e.value <= n + 1e-2);
    }
  }
  SUBCASE("rank one") {
    auto rng = substream(2, "test_h_rank1");
    const auto f = full_space(2, 2);
    const Matrix a = f.element(gaussian_matrix(rng, 4, 1));
    const Matrix b = f.element(gaussian_matrix(rng, 4, 1));
    const auto e = haagerup_upper(tensor_from_terms(f, f, {a}, {b}), budget());
    CHECK(std::abs(e.value - operator_norm(a) * operator_norm(b)) <= 1e-6);
  }
  SUBCASE("zero") {
    const auto e = haagerup_upper(tensor_element(row(2), col(2), Matrix::Zero(2, 2)));
    CHECK(e.value == 0.0);
    CHECK(e.bound_kind == BoundKind::Exact);
  }
}

TEST_CASE("Hilbertian pairs match their known closed forms") {
  // Oracle values computed from the coefficient matrix alone:
  // C (x)_h R -> operator norm, R (x)_h C -> trace norm, C (x)_h C and R (x)_h R -> Frobenius norm.
  auto rng = substream(3, "test_h_closed");
  for (int trial = 0; trial < 4; ++trial) {
    const Matrix c = gaussian_matrix(rng, 3, 3);
    const RealVector s = Eigen::JacobiSVD<Matrix>(c).singularValues();
    struct Case {
      ConcreteOperatorSpace l, r;
      double expect;
    };
    const Case cases[] = {{col(3), row(3), s(0)}, {row(3), col(3), s.sum()}, {col(3), col(3), c.norm()},
                          {row(3), row(3), c.norm()}};
    for (const Case& k : cases) {
      const auto e = haagerup_upper(tensor_element(k.l, k.r, c), budget(static_cast<std::uint64_t>(trial)));
      CHECK(e.value >= k.expect - 1e-9);
      CHECK(e.value <= k.expect * (1.0 + 1e-3));
    }
  }
}

TEST_CASE("certificates") {
  auto rng = substream(4, "test_h_cert");
  const auto rc = standard_space(StandardKind::RowCap, 2);
  const auto f = full_space(2, 2);
  for (int trial = 0; trial < 5; ++trial) {
    const auto t = tensor_element(rc, f, gaussian_matrix(rng, 2, 4));
    const auto e = haagerup_upper(t, budget());
    const auto& d = cert(e);
    CHECK(reconstruction_error(d) <= 1e-10 * std::max(1.0, t.coeffs.norm()));
    CHECK(std::abs(decomposition_value(d) - e.value) <= 1e-8);
    CHECK(d.terms() >= numerical_rank(t.coeffs));
    CHECK(min_norm(t) <= e.value + 1e-8);

    // Reparametrizing the certificate keeps the represented tensor.
    std::vector<double> theta(static_cast<std::size_t>(2 * d.terms() * d.terms()));
    for (double& x : theta) x = 0.3 * gaussian(rng);
    const Matrix s = gl_param(d.terms(), theta);
    Decomposition moved{t, s * d.left, s.transpose().inverse() * d.right};
    CHECK(std::abs(reconstruction_error(moved) - reconstruction_error(d)) <= 1e-10);
  }
}

TEST_CASE("homogeneity and transposition gap") {
  auto rng = substream(5, "test_h_homog");
  const auto f = full_space(2, 2);
  const auto t = tensor_element(f, standard_space(StandardKind::Row, 2), gaussian_matrix(rng, 4, 2));
  const Scalar lambda(2.5, -1.0);
  const double base = haagerup_upper(t, budget()).value;
  CHECK(std::abs(haagerup_upper(scale(t, lambda), budget()).value - std::abs(lambda) * base) <= 1e-6 * std::abs(lambda) * base);

  const auto cr = tensor_element(col(2), row(2), Matrix::Identity(2, 2));
  const double forward = haagerup_upper(cr, budget()).value;
  const double flipped = haagerup_upper(transpose_tensor(cr), budget()).value;
  CHECK(flipped - forward > 0.5);
}

TEST_CASE("rank slack adds terms") {
  const auto t = tensor_element(col(2), row(2), Matrix::Identity(2, 2));
  auto o = budget();
  o.rank_slack = 1;
  const auto e = haagerup_upper(t, o);
  CHECK(cert(e).terms() == 3);
  CHECK(std::abs(e.value - 1.0) <= 1e-4);
  o.rank_slack = -1;
  CHECK_THROWS_AS(haagerup_upper(t, o), InvalidInput);
}

TEST_CASE("three-fold examples") {
  const auto c2 = col(2), r2 = row(2), s = scalar_space();
  auto identity3 = [&](Scalar x) {
    std::vector<Scalar> coeffs(4, 0.0);
    coeffs[0] = x;  // (0, 0, 0)
    coeffs[3] = x;  // (1, 0, 1)
    return tensor3(c2, s, r2, coeffs);
  };
  const auto e1 = haagerup3_upper(identity3(1.0), budget());
  CHECK(e1.value >= 1.0 - 1e-9);
  CHECK(e1.value <= 1.0 + 1e-3);
  const auto& d = std::get<Decomposition3>(e1.certificate);
  CHECK(reconstruction3_error(d) <= 1e-10);
  CHECK(std::abs(decomposition3_value(d) - e1.value) <= 1e-8);

  CHECK(std::abs(haagerup3_upper(identity3(3.0), budget()).value - 3.0) <= 1e-2);

  auto rng = substream(6, "test_h3_rank1");
  const auto f = full_space(2, 2);
  const Vector a = gaussian_matrix(rng, 4, 1), m = gaussian_matrix(rng, 4, 1), c = gaussian_matrix(rng, 4, 1);
  std::vector<Scalar> coeffs;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k) coeffs.push_back(a(i) * m(j) * c(k));
  const auto e = haagerup3_upper(tensor3(f, f, f, coeffs), budget());
  const double expect = operator_norm(f.element(a)) * operator_norm(f.element(m)) * operator_norm(f.element(c));
  CHECK(std::abs(e.value - expect) <= 1e-6 * expect);
}

TEST_CASE("three-fold on random tensors reproduces and dominates the two-fold reduction") {
  // With a one-dimensional middle space, the three-fold norm equals the two-fold one.
  auto rng = substream(7, "test_h3_random");
  const auto e1 = full_space(2, 2), e3 = standard_space(StandardKind::RowCap, 2);
  for (int trial = 0; trial < 3; ++trial) {
    const Matrix c = gaussian_matrix(rng, 4, 2);
    std::vector<Scalar> coeffs;
    for (int i = 0; i < 4; ++i)
      for (int k = 0; k < 2; ++k) coeffs.push_back(c(i, k));
    const auto three = haagerup3_upper(tensor3(e1, scalar_space(), e3, coeffs), budget());
    const auto two = haagerup_upper(tensor_element(e1, e3, c), budget());
    CHECK(reconstruction3_error(std::get<Decomposition3>(three.certificate)) <= 1e-10);
    CHECK(std::abs(three.value - two.value) <= 2e-2 * two.value);
  }
}
