#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "opnorm/matcore.hpp"

namespace opnorm {

/// Budget shared by the nonconvex optimizers.
struct OptimizerOptions {
  int restarts = 16;
  int iters = 500;
  std::uint64_t seed = 0;
  double tol = 1e-8;   // relative objective change that ends a smoothing stage
  int threads = 1;     // restarts run on this many threads; results do not depend on it
};

/// Record of one optimizer run.
struct Trace {
  int restarts_used = 0;
  long iterations = 0;
  std::uint64_t seed = 0;
  bool converged = false;  // some restart met its stopping rule within budget
  std::string path;        // which algorithm produced the value
};

/// Deterministic generator for a named substream of a seed.
std::mt19937_64 substream(std::uint64_t seed, std::string_view tag, std::uint64_t index = 0);

double gaussian(std::mt19937_64& rng);
Matrix gaussian_matrix(std::mt19937_64& rng, int rows, int cols, double scale = 1.0);
RealMatrix gaussian_real_matrix(std::mt19937_64& rng, int rows, int cols, double scale = 1.0);

/// Largest singular value together with a smooth majorant.
///
/// For q > 0 the majorant is the Schatten-q norm (sum sigma_k^q)^(1/q) >= sigma_max,
/// and `grad` is its gradient G in the convention df = Re tr(G^* dX). For q <= 0
/// the majorant is sigma_max itself and `grad` is u_1 v_1^*.
struct SigmaEval {
  double exact = 0.0;
  double smooth = 0.0;
  Matrix grad;
};

SigmaEval smooth_sigma(const Matrix& x, double q, bool want_grad);

/// A linear map from complex coefficients z to matrices X(z).
class LinearMatrixMap {
 public:
  virtual ~LinearMatrixMap() = default;
  virtual int input_dim() const = 0;
  virtual int out_rows() const = 0;
  virtual int out_cols() const = 0;
  virtual Matrix apply(const Vector& z) const = 0;
  /// Returns g with g_i = tr(K_i^* G) where K_i = X(e_i); this pulls a matrix
  /// gradient back to the coefficients.
  virtual Vector pullback(const Matrix& g) const = 0;
};

/// X(z) = sum_i z_i K_i with explicit K_i.
class DenseLinearMap final : public LinearMatrixMap {
 public:
  DenseLinearMap(int rows, int cols, const std::vector<Matrix>& generators);
  int input_dim() const override { return static_cast<int>(columns_.cols()); }
  int out_rows() const override { return rows_; }
  int out_cols() const override { return cols_; }
  Matrix apply(const Vector& z) const override;
  Vector pullback(const Matrix& g) const override;

 private:
  int rows_;
  int cols_;
  Matrix columns_;  // column i = flatten(K_i)
};

/// X(z) = sum_i Z_i (x) C_i where z packs the k1 x k2 blocks Z_i row-major.
class KronSumMap final : public LinearMatrixMap {
 public:
  KronSumMap(int k1, int k2, std::vector<Matrix> inner);
  int input_dim() const override;
  int out_rows() const override;
  int out_cols() const override;
  Matrix apply(const Vector& z) const override;
  Vector pullback(const Matrix& g) const override;

  int k1() const { return k1_; }
  int k2() const { return k2_; }
  const std::vector<Matrix>& inner() const { return inner_; }

 private:
  int k1_;
  int k2_;
  std::vector<Matrix> inner_;
};

/// Runs `fn(i)` for i in [0, n) on up to `threads` threads and returns the results
/// in index order.
template <class R>
std::vector<R> run_indexed(int n, int threads, const std::function<R(int)>& fn);

/// Index of the best value; ties go to the smallest index.
int best_index(const std::vector<double>& values, bool maximize);

/// Stepsize bookkeeping for Armijo backtracking.
struct LineSearch {
  double step = 1.0;
  double shrink = 0.5;
  double grow = 2.0;
  double armijo = 1e-4;
  double min_step = 1e-14;
  int max_backtracks = 40;
};

/// Schedule of smoothing exponents used by the descent engines, from soft to sharp.
const std::vector<double>& smoothing_schedule();

}  // namespace opnorm

#include "opnorm/optim_inl.hpp"
