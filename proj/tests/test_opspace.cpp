#include <cmath>

#include "doctest.h"
#include "opnorm/errors.hpp"
#include "opnorm/opspace.hpp"
#include "opnorm/optim.hpp"
#include "oracles.hpp"

using namespace opnorm;

TEST_CASE("make_space validation") {
  const auto e = make_space({matrix_unit(1, 2, 0, 0), matrix_unit(1, 2, 0, 1)}, "r2");
  CHECK(e.dim() == 2);
  CHECK(e.ambient_rows() == 1);
  CHECK(e.ambient_cols() == 2);
  CHECK_THROWS_AS(make_space({matrix_unit(2, 2, 0, 0), Matrix(2.0 * matrix_unit(2, 2, 0, 0))}, "dep"),
                  DependentBasis);
  CHECK_THROWS_AS(make_space({matrix_unit(2, 2, 0, 0), matrix_unit(1, 2, 0, 1)}, "bad"), ShapeMismatch);
  CHECK_THROWS_AS(make_space({}, "empty"), DependentBasis);
}

TEST_CASE("standard spaces") {
  const auto r3 = standard_space(StandardKind::Row, 3);
  CHECK(r3.dim() == 3);
  for (const Matrix& b : r3.basis()) {
    CHECK(b.rows() == 1);
    CHECK(b.cols() == 3);
  }
  const auto rc2 = standard_space(StandardKind::RowCap, 2);
  CHECK(rc2.dim() == 2);
  for (const Matrix& b : rc2.basis()) {
    CHECK(b.rows() == 4);
    CHECK(b.cols() == 4);
    CHECK(operator_norm(b) == doctest::Approx(1.0));
  }
  const auto s = scalar_space();
  CHECK(s.dim() == 1);
  CHECK(s.basis(0)(0, 0) == Scalar(1.0));
  CHECK(full_space(2, 3).dim() == 6);
  CHECK(parse_space_ref("full:2x3").dim() == 6);
  CHECK(parse_space_ref("rowcap:3").ambient_rows() == 6);
  CHECK(parse_space_ref("column:2").hilbert_kind() == HilbertKind::Column);
  CHECK_THROWS_AS(parse_space_ref("diag:2"), InvalidKind);
  CHECK_THROWS_AS(parse_space_ref("row:0"), InvalidKind);
  CHECK_THROWS_AS(standard_space(StandardKind::Row, 0), InvalidKind);
}

TEST_CASE("rowcap realizes the max of row and column norms at matrix levels") {
  auto rng = substream(5, "rowcap");
  const int n = 3;
  const auto rc = standard_space(StandardKind::RowCap, n);
  const auto r = standard_space(StandardKind::Row, n);
  const auto c = standard_space(StandardKind::Column, n);
  for (int trial = 0; trial < 10; ++trial) {
    const int k = 1 + trial % 3;
    Matrix xr = Matrix::Zero(k, k * n), xc = Matrix::Zero(k * n, k), xrc = Matrix::Zero(2 * n * k, 2 * n * k);
    for (int i = 0; i < n; ++i) {
      const Matrix x = gaussian_matrix(rng, k, k);
      xr += oracle::kron(x, r.basis(i));
      xc += oracle::kron(x, c.basis(i));
      xrc += oracle::kron(x, rc.basis(i));
    }
    CHECK(oracle::power_norm(xrc) ==
          doctest::Approx(std::max(oracle::power_norm(xr), oracle::power_norm(xc))).epsilon(1e-8));
  }
}

TEST_CASE("row and column spaces are Hilbertian at the first level") {
  auto rng = substream(9, "hilbert");
  for (int n = 1; n <= 4; ++n) {
    const auto r = standard_space(StandardKind::Row, n);
    const auto c = standard_space(StandardKind::Column, n);
    const Vector x = gaussian_matrix(rng, n, 1);
    CHECK(operator_norm(r.element(x)) == doctest::Approx(x.norm()).epsilon(1e-12));
    CHECK(operator_norm(c.element(x)) == doctest::Approx(x.norm()).epsilon(1e-12));
  }
}

TEST_CASE("tensor_element and transpose") {
  const auto r2 = standard_space(StandardKind::Row, 2);
  const auto c2 = standard_space(StandardKind::Column, 2);
  const auto t = tensor_element(r2, c2, Matrix::Identity(2, 2));
  CHECK(t.left.label() == "row:2");
  const auto z = tensor_element(r2, c2, Matrix::Zero(2, 2));
  CHECK(z.is_zero());
  CHECK_THROWS_AS(tensor_element(r2, c2, Matrix::Zero(3, 2)), ShapeMismatch);

  Matrix m(2, 2);
  m << 1, 2, 3, 4;
  const auto tm = tensor_element(r2, c2, m);
  const auto tt = transpose_tensor(tm);
  Matrix expect(2, 2);
  expect << 1, 3, 2, 4;
  CHECK(tt.coeffs == expect);
  CHECK(tt.left.label() == "column:2");
  CHECK(transpose_tensor(tt).coeffs == tm.coeffs);

  // rank one a (x) b -> b (x) a
  const auto a = tensor_from_terms(r2, c2, {r2.basis(0)}, {c2.basis(1)});
  const auto b = transpose_tensor(a);
  CHECK(b.coeffs(1, 0) == Scalar(1.0));
  CHECK(b.coeffs.cwiseAbs().sum() == doctest::Approx(1.0));
}

TEST_CASE("min_norm examples") {
  const auto r2 = standard_space(StandardKind::Row, 2);
  const auto c2 = standard_space(StandardKind::Column, 2);
  const auto cr = tensor_element(c2, r2, Matrix::Identity(2, 2));
  // Oracle: assemble the Kronecker sum by hand and use power iteration.
  Matrix direct = oracle::kron(c2.basis(0), r2.basis(0)) + oracle::kron(c2.basis(1), r2.basis(1));
  CHECK(oracle::power_norm(direct) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(min_norm(cr) == doctest::Approx(1.0).epsilon(1e-12));

  auto rng = substream(1, "min_norm");
  const auto f = full_space(2, 2);
  const Matrix a = f.element(gaussian_matrix(rng, 4, 1));
  const Matrix b = f.element(gaussian_matrix(rng, 4, 1));
  const auto ab = tensor_from_terms(f, f, {a}, {b});
  CHECK(min_norm(ab) == doctest::Approx(operator_norm(a) * operator_norm(b)).epsilon(1e-12));
  CHECK(min_norm(tensor_element(f, f, Matrix::Zero(4, 4))) == 0.0);
}

TEST_CASE("min_norm transposition and homogeneity") {
  auto rng = substream(2, "min_norm_props");
  const std::vector<ConcreteOperatorSpace> spaces{
      standard_space(StandardKind::Row, 2), standard_space(StandardKind::Column, 3),
      standard_space(StandardKind::RowCap, 2), full_space(2, 2)};
  for (const auto& e : spaces)
    for (const auto& f : spaces) {
      const auto t = tensor_element(e, f, gaussian_matrix(rng, e.dim(), f.dim()));
      CHECK(std::abs(min_norm(transpose_tensor(t)) - min_norm(t)) < 1e-10);
      const Scalar lambda(-1.5, 2.0);
      CHECK(std::abs(min_norm(scale(t, lambda)) - std::abs(lambda) * min_norm(t)) < 1e-10);
      CHECK(std::abs(min_norm(t) - oracle::power_norm(spatial_matrix(t))) < 1e-8);
    }
}

TEST_CASE("space maps") {
  const auto f = full_space(2, 2);
  const auto id = identity_map(f);
  const Matrix x = f.element(Vector::LinSpaced(4, 1.0, 4.0));
  CHECK((id.apply(x) - x).norm() < 1e-14);
  CHECK_THROWS_AS(make_map(f, f, Matrix::Zero(3, 4)), ShapeMismatch);
  const auto m = map_to_full(standard_space(StandardKind::Row, 2), {matrix_unit(2, 2, 0, 1), matrix_unit(2, 2, 1, 0)});
  CHECK(m.codomain.dim() == 4);
  CHECK((m.image(1) - matrix_unit(2, 2, 1, 0)).norm() == 0.0);
}

TEST_CASE("orthonormalizer produces an orthonormal frame") {
  const auto e = make_space({Matrix::Constant(1, 3, 1.0), matrix_unit(1, 3, 0, 2)}, "skew");
  const Matrix t = orthonormalizer(e);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      Matrix ei = Matrix::Zero(1, 3), ej = Matrix::Zero(1, 3);
      for (int k = 0; k < 2; ++k) {
        ei += t(i, k) * e.basis(k);
        ej += t(j, k) * e.basis(k);
      }
      CHECK(std::abs(trace_inner(ei, ej) - (i == j ? 1.0 : 0.0)) < 1e-12);
    }
}
