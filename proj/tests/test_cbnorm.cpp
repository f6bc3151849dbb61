#include <cmath>

#include "doctest.h"
#include "opnorm/cbnorm.hpp"
#include "opnorm/errors.hpp"
#include "oracles.hpp"

using namespace opnorm;

namespace {

SpaceMap transpose_map() {
  const auto f = full_space(2, 2);
  Matrix p = Matrix::Zero(4, 4);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) p(j * 2 + i, i * 2 + j) = 1.0;
  return make_map(f, f, p);
}

SpaceMap row_to_column(int n) {
  return make_map(standard_space(StandardKind::Row, n), standard_space(StandardKind::Column, n),
                  Matrix::Identity(n, n));
}

CbOptions small_budget(std::uint64_t seed) {
  CbOptions o;
  o.restarts = 6;
  o.iters = 300;
  o.seed = seed;
  return o;
}

}  // namespace

TEST_CASE("transpose on 2x2 matrices") {
  const auto t = transpose_map();
  const auto l1 = level_norm(t, 1, small_budget(1));
  CHECK(l1.bound_kind == BoundKind::Lower);
  CHECK(l1.value == doctest::Approx(1.0).epsilon(1e-6));
  const auto l2 = level_norm(t, 2, small_budget(1));
  CHECK(l2.value == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(l2.value <= 2.0 + 1e-9);

  // independent random search never beats the classical values
  CHECK(oracle::random_search_level_norm(t.domain.basis(), t.images(), 2, 3, 5) <= 2.0 + 1e-6);

  const auto cb = cb_norm(t, small_budget(2));
  CHECK(cb.value == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("row to column identity") {
  for (int n = 2; n <= 4; ++n) {
    const auto u = row_to_column(n);
    const auto cf = cb_norm(u);
    CHECK(cf.bound_kind == BoundKind::Exact);
    CHECK(cf.value == doctest::Approx(std::sqrt(static_cast<double>(n))).epsilon(1e-12));
    const auto ln = level_norm(u, n, small_budget(3));
    CHECK(std::abs(ln.value - std::sqrt(static_cast<double>(n))) < 1e-3);
  }
  const auto u = row_to_column(2);
  CHECK(level_norm(u, 1, small_budget(4)).value == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("identity maps are complete contractions") {
  const auto r3 = standard_space(StandardKind::Row, 3);
  for (int k = 1; k <= 3; ++k)
    CHECK(std::abs(level_norm(identity_map(r3), k, small_budget(5)).value - 1.0) < 1e-6);
  const auto rc = standard_space(StandardKind::RowCap, 2);
  CHECK(std::abs(cb_norm(identity_map(rc), small_budget(6)).value - 1.0) < 1e-6);
}

TEST_CASE("zero map") {
  const auto f = full_space(2, 2);
  const auto z = make_map(f, f, Matrix::Zero(4, 4));
  const auto e = cb_norm(z);
  CHECK(e.value == 0.0);
  CHECK(e.bound_kind == BoundKind::Exact);
}

TEST_CASE("level witnesses are normalized and reproduce the value") {
  const auto t = transpose_map();
  const auto e = level_norm(t, 2, small_budget(7));
  const auto& w = std::get<LevelWitness>(e.certificate);
  CHECK(w.level == 2);
  Matrix x = Matrix::Zero(4, 4);
  for (int i = 0; i < 4; ++i) x += oracle::kron(w.blocks[static_cast<std::size_t>(i)], t.domain.basis(i));
  CHECK(oracle::power_norm(x) <= 1.0 + 1e-8);
  CHECK(std::abs(evaluate_level_witness(t, w) - e.value) < 1e-9);
}

TEST_CASE("monotone in the level with warm starts") {
  auto rng = substream(11, "cb_mono");
  const auto f = full_space(2, 2);
  for (int trial = 0; trial < 3; ++trial) {
    const auto u = make_map(f, f, gaussian_matrix(rng, 4, 4));
    auto o = small_budget(20 + trial);
    double prev = 0.0;
    for (int k = 1; k <= 3; ++k) {
      const auto e = level_norm(u, k, o);
      CHECK(e.value >= prev - 1e-9);
      prev = e.value;
      o.warm_start = std::get<LevelWitness>(e.certificate).blocks;
    }
  }
}

TEST_CASE("Smith level stabilization") {
  auto rng = substream(12, "cb_smith");
  const auto f = full_space(2, 2);
  const auto u = make_map(f, f, gaussian_matrix(rng, 4, 4));
  const int q = smith_level(u);
  CHECK(q == 2);
  auto o = small_budget(30);
  const auto at_q = level_norm(u, q, o);
  o.warm_start = std::get<LevelWitness>(at_q.certificate).blocks;
  const auto above = level_norm(u, q + 1, o);
  CHECK(std::abs(above.value - at_q.value) <= 1e-3 * std::max(1.0, at_q.value));
}

TEST_CASE("closed form agrees with the optimizer on Hilbertian domains") {
  auto rng = substream(13, "cb_closed");
  for (int trial = 0; trial < 4; ++trial) {
    const auto kind = trial % 2 == 0 ? StandardKind::Row : StandardKind::Column;
    const auto dom = standard_space(kind, 3);
    std::vector<Matrix> images;
    for (int i = 0; i < 3; ++i) images.push_back(gaussian_matrix(rng, 2, 2));
    const auto u = map_to_full(dom, images);
    const auto closed = cb_norm(u);
    CHECK(closed.bound_kind == BoundKind::Exact);
    const auto opt = level_norm(u, smith_level(u), small_budget(40 + trial));
    CHECK(opt.value <= closed.value * (1.0 + 1e-8));
    CHECK(std::abs(opt.value - closed.value) <= 1e-2 * closed.value);
  }
}

TEST_CASE("Hilbertian closed forms") {
  // R_n -> R_k with matrix A is ||A||; C_n -> R_k is the Hilbert-Schmidt norm.
  auto rng = substream(14, "cb_forms");
  const Matrix a = gaussian_matrix(rng, 2, 3);
  const auto rn = standard_space(StandardKind::Row, 3);
  const auto cn = standard_space(StandardKind::Column, 3);
  const auto r2 = standard_space(StandardKind::Row, 2);
  CHECK(cb_norm(make_map(rn, r2, a)).value == doctest::Approx(operator_norm(a)).epsilon(1e-12));
  CHECK(cb_norm(make_map(cn, r2, a)).value == doctest::Approx(a.norm()).epsilon(1e-12));
}

TEST_CASE("invalid levels") {
  CHECK_THROWS_AS(level_norm(transpose_map(), 0), InvalidInput);
}
