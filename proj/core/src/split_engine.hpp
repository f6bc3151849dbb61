#pragma once

// Descent over sums of two-factor decompositions sum_h P_h^T Q_h = C where each
// half costs s(P_h) s(Q_h) and s is sigma_max of a row or column stack of
// basis combinations. One half gives the Haagerup norm; a forward and a
// transposed half give the split formula behind the mu-norm and gamma_R + gamma_C.

#include <random>
#include <vector>

#include "opnorm/matcore.hpp"
#include "opnorm/optim.hpp"

namespace opnorm::detail {

/// Vertical stack (rows) or horizontal stack (cols) of sum_j P(i, j) basis_j over i.
enum class Stack { Vertical, Horizontal };

struct FactorCost {
  std::vector<Matrix> basis;
  Stack stack = Stack::Vertical;
};

struct HalfSpec {
  FactorCost p;
  FactorCost q;
};

struct Half {
  Matrix p;  // r x dim(p basis)
  Matrix q;  // r x dim(q basis)
};

struct SplitResult {
  std::vector<Half> halves;
  double value = 0.0;
  long iterations = 0;
  bool converged = false;
};

/// Frobenius norm times the phase of the largest entry; dividing by it makes
/// lambda c and c the same normalized problem.
Scalar normalizer(const Matrix& c);

/// sigma_max of the stack of P over `cost`.
double factor_sigma(const FactorCost& cost, const Matrix& p);

/// Matrix whose sigma_max is the factor cost.
Matrix factor_stack(const FactorCost& cost, const Matrix& p);

double split_value(const std::vector<HalfSpec>& specs, const std::vector<Half>& halves);

/// Frobenius distance of sum_h P_h^T Q_h to `target`.
double split_residual(const Matrix& target, const std::vector<Half>& halves);

/// Rank-minimal P^T Q = c from the SVD, padded with `extra` rows (random P rows of
/// size `pad_scale`, zero Q rows) up to `rows` if positive.
Half svd_half(const Matrix& c, int rows, double pad_scale, std::mt19937_64& rng);

/// Random invertible reparametrization P <- S P, Q <- S^{-T} Q.
void reparametrize(Half& h, const Matrix& generator);

/// Minimizes sum_h s(P_h) s(Q_h) from `start`; every iterate reproduces `target`.
/// Returns the best iterate seen (including the start).
SplitResult descend_split(const std::vector<HalfSpec>& specs, const Matrix& target,
                          std::vector<Half> start, int max_iters, double tol);

}  // namespace opnorm::detail
