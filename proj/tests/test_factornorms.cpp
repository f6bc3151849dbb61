#include <cmath>

#include "doctest.h"
#include "opnorm/errors.hpp"
#include "opnorm/factornorms.hpp"

using namespace opnorm;

namespace {

FactorOptions budget(std::uint64_t seed = 0) {
  FactorOptions o;
  o.restarts = 4;
  o.iters = 300;
  o.seed = seed;
  return o;
}

ConcreteOperatorSpace std_space(StandardKind k, int n) { return standard_space(k, n); }

}  // namespace

TEST_CASE("gamma through row and column spaces") {
  const auto r2 = std_space(StandardKind::Row, 2);
  const auto c2 = std_space(StandardKind::Column, 2);
  CHECK(std::abs(gamma_rc(identity_map(r2), HilbertKind::Row, budget()).value - 1.0) <= 1e-6);
  CHECK(std::abs(gamma_rc(identity_map(c2), HilbertKind::Column, budget()).value - 1.0) <= 1e-6);
  // Through the wrong space the identity costs its trace norm n.
  CHECK(std::abs(gamma_rc(identity_map(r2), HilbertKind::Column, budget()).value - 2.0) <= 1e-3);

  const auto rc = std_space(StandardKind::RowCap, 2);
  const auto g = gamma_rc(identity_map(rc), HilbertKind::Row, budget());
  CHECK(g.value <= std::sqrt(2.0) + 1e-2);
  CHECK(g.value >= 1.0 - 1e-9);
  const auto& f = std::get<Factorization>(g.certificate);
  CHECK(f.residual <= 1e-10);
  CHECK((compose(f) - Matrix::Identity(2, 2)).norm() <= 1e-10);
  CHECK(std::abs(f.first_cb * f.second_cb - g.value) <= 1e-12);

  CHECK(gamma_rc(make_map(r2, c2, Matrix::Zero(2, 2)), HilbertKind::Row).value == 0.0);
}

TEST_CASE("rank one maps") {
  auto rng = substream(1, "test_gamma_rank1");
  const auto dom = std_space(StandardKind::Row, 3);
  const auto f22 = full_space(2, 2);
  const Vector fcoef = gaussian_matrix(rng, 3, 1);
  const Vector y = gaussian_matrix(rng, 4, 1);
  const Matrix u = y * fcoef.transpose();
  const double expect = fcoef.norm() * operator_norm(f22.element(y));
  for (HilbertKind kind : {HilbertKind::Row, HilbertKind::Column}) {
    const auto g = gamma_rc(make_map(dom, f22, u), kind, budget());
    CHECK(std::abs(g.value - expect) <= 1e-4 * expect);
  }

  // Functional on M_2: its norm is the trace norm of its matrix.
  const Vector fm = gaussian_matrix(rng, 4, 1);
  const Matrix y1 = gaussian_matrix(rng, 1, 1);
  const double nuclear = Eigen::JacobiSVD<Matrix>(unflatten(fm, 2, 2)).singularValues().sum();
  const auto g = gamma_rc(make_map(f22, scalar_space(), Matrix(y1 * fm.transpose())), HilbertKind::Row, budget());
  const double want = nuclear * std::abs(y1(0, 0));
  CHECK(g.value >= want * (1.0 - 1e-6));
  CHECK(g.value <= want * (kCbInflation + 1e-4));
}

TEST_CASE("split norm") {
  for (int n = 2; n <= 3; ++n) {
    for (StandardKind k : {StandardKind::Row, StandardKind::Column}) {
      const auto e = split_norm(identity_map(std_space(k, n)), budget());
      CHECK(e.bound_kind == BoundKind::Upper);
      CHECK(std::abs(e.value - 1.0) <= 1e-2);
    }
  }
  const auto r2 = std_space(StandardKind::Row, 2);
  const auto z = split_norm(make_map(r2, r2, Matrix::Zero(2, 2)));
  CHECK(z.value == 0.0);
  CHECK(z.bound_kind == BoundKind::Exact);
}

TEST_CASE("split norm is below both one-sided factorizations") {
  auto rng = substream(2, "test_split_triangle");
  const auto spaces = {std_space(StandardKind::Row, 2), std_space(StandardKind::Column, 2), full_space(2, 2)};
  for (const auto& e : spaces) {
    const auto u = make_map(e, full_space(1, 2), gaussian_matrix(rng, 2, e.dim()));
    const auto o = budget(3);
    const double s = split_norm(u, o).value;
    CHECK(s <= gamma_rc(u, HilbertKind::Row, o).value + 1e-8);
    CHECK(s <= gamma_rc(u, HilbertKind::Column, o).value + 1e-8);
    // Any factorization dominates the operator norm of u at the first level.
    CHECK(s >= 0.0);
  }
}

TEST_CASE("split certificates reproduce the map") {
  auto rng = substream(3, "test_split_cert");
  const auto r3 = std_space(StandardKind::Row, 3);
  const auto u = make_map(r3, std_space(StandardKind::Column, 2), gaussian_matrix(rng, 2, 3));
  const auto e = split_norm(u, budget());
  const auto& s = std::get<SplitFactorization>(e.certificate);
  Matrix sum = Matrix::Zero(2, 3);
  double value = 0.0;
  for (const auto* part : {&s.row_part, &s.column_part})
    if (*part) {
      sum += compose(**part);
      value += (*part)->first_cb * (*part)->second_cb;
    }
  CHECK((sum - u.coeffs).norm() <= 1e-10);
  CHECK(std::abs(value - e.value) <= 1e-8);
}

TEST_CASE("gamma2 on sup-norm spaces") {
  for (int n = 2; n <= 3; ++n) {
    const auto e = gamma2_linf(Matrix::Identity(n, n));
    CHECK(e.value >= std::sqrt(static_cast<double>(n)) - 1e-9);
    CHECK(e.value <= std::sqrt(static_cast<double>(n)) + 5e-2);
    const auto& f = std::get<Gamma2Factorization>(e.certificate);
    CHECK((f.right * f.left - Matrix::Identity(n, n)).norm() <= 1e-10);
  }
  CHECK(gamma2_linf(Matrix::Identity(1, 1)).value == doctest::Approx(1.0));

  // Rank one: one-dimensional factorization, max|a_i| * sum |b_j|.
  Eigen::VectorXd a(3), b(4);
  a << 0.5, -2.0, 1.0;
  b << 1.0, -0.25, 3.0, 0.5;
  const Matrix m = (a * b.transpose()).cast<Scalar>();
  CHECK(std::abs(gamma2_linf(m).value - 2.0 * 4.75) <= 1e-6);

  // 2x2 Hadamard: the inf-to-inf norm 2 is a lower bound and the identity factorization attains it.
  Matrix h(2, 2);
  h << 1, 1, 1, -1;
  CHECK(std::abs(gamma2_linf(h).value - 2.0) <= 5e-2);

  auto rng = substream(4, "test_gamma2");
  const Matrix r = gaussian_real_matrix(rng, 3, 3).cast<Scalar>();
  const double base = gamma2_linf(r).value;
  double inf_inf = 0.0;
  for (int i = 0; i < 3; ++i) inf_inf = std::max(inf_inf, r.row(i).cwiseAbs().sum());
  CHECK(base >= inf_inf - 1e-9);
  CHECK(std::abs(gamma2_linf(Matrix(Scalar(-3.0, 4.0) * r)).value - 5.0 * base) <= 1e-6 * 5.0 * base);

  CHECK_THROWS_AS(gamma2_linf(Matrix::Identity(13, 13)), DimensionTooLarge);
  CHECK(gamma2_linf(Matrix::Zero(2, 2)).value == 0.0);
}
