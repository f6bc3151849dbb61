#pragma once

#include "opnorm/cbnorm.hpp"

namespace opnorm {

struct FactorOptions : OptimizerOptions {
  FactorOptions() {
    restarts = 11;
    iters = 800;
    first_leg.restarts = 4;
    first_leg.iters = 200;
  }
  /// Extra intermediate dimensions beyond rank(u).
  int rank_slack = 0;
  /// Budget of the level-norm estimates of first legs whose domain is not a row or column space.
  CbOptions first_leg;
};

/// Safety factor applied to cb norms that are only known through lower-bound estimates.
inline constexpr double kCbInflation = 1.0 + 1e-3;

/// Upper bound for gamma_R(u) (kind Row) or gamma_C(u) (kind Column); certificate Factorization.
NormEstimate gamma_rc(const SpaceMap& u, HilbertKind kind, const FactorOptions& opts = {});

/// Upper bound for inf over u = v + w of gamma_R(v) + gamma_C(w); certificate SplitFactorization.
NormEstimate split_norm(const SpaceMap& u, const FactorOptions& opts = {});

/// second_leg o first_leg as a coefficient matrix.
Matrix compose(const Factorization& f);

/// Upper bound for gamma_2 of m, viewed as a map from l_inf^n to l_inf^m. The
/// inf-to-2 norm is evaluated over real sign vectors. Throws DimensionTooLarge for n > 12.
NormEstimate gamma2_linf(const Matrix& m, const OptimizerOptions& opts = {});

/// max over sign vectors s of ||a s||_2.
double inf_to_two_norm(const Matrix& a);
/// Largest l_2 norm of a row.
double two_to_inf_norm(const Matrix& b);

}  // namespace opnorm
