#pragma once

#include <optional>
#include <vector>

#include "opnorm/estimate.hpp"

namespace opnorm {

struct CbOptions : OptimizerOptions {
  CbOptions() {
    restarts = 16;
    iters = 500;
  }
  /// Blocks x_i of a lower-level witness; zero-padded into restart 0.
  std::optional<std::vector<Matrix>> warm_start;
};

/// The amplification X = sum x_i (x) b_i -> sum x_i (x) u(b_i) at level k, as a
/// ratio of two Kronecker-sum maps over the packed blocks z.
class LevelProblem {
 public:
  LevelProblem(const SpaceMap& u, int level);

  int level() const { return level_; }
  int dim() const { return denominator_.input_dim(); }
  const KronSumMap& numerator() const { return numerator_; }
  const KronSumMap& denominator() const { return denominator_; }

  /// ||(id (x) u)(X)|| / ||X||, zero when X = 0.
  double ratio(const Vector& z) const;
  /// Rescales z so that ||X||_{M_k(E)} = 1.
  Vector normalize(const Vector& z) const;

  std::vector<Matrix> blocks(const Vector& z) const;
  Vector pack(const std::vector<Matrix>& blocks) const;

  struct Ascent {
    Vector z;
    double ratio = 0.0;
    long iterations = 0;
    bool converged = false;
  };
  /// Smoothed gradient ascent on log ||N z|| - log ||D z||_q over the smoothing
  /// schedule; returns the best exact ratio seen.
  Ascent ascend(Vector z, int max_iters, double tol, std::mt19937_64& rng) const;

 private:
  int level_;
  KronSumMap numerator_;
  KronSumMap denominator_;
};

/// Lower bound for ||id_{M_k} (x) u|| by multi-start ascent; certificate is a LevelWitness.
NormEstimate level_norm(const SpaceMap& u, int k, const CbOptions& opts = {});

/// Re-evaluates a level witness.
double evaluate_level_witness(const SpaceMap& u, const LevelWitness& witness);

/// Amplification level at which maps into the codomain's ambient attain their cb norm.
int smith_level(const SpaceMap& u);

/// Exact closed form for a row/column domain, or level_norm at the Smith level.
NormEstimate cb_norm(const SpaceMap& u, const CbOptions& opts = {});

/// Exact cb norm of the map sending the i-th unit vector of R_n (row) or C_n
/// (column) to images[i]: ||sum y_i^* y_i||^{1/2} or ||sum y_i y_i^*||^{1/2}.
NormEstimate cb_norm_hilbertian_domain(const std::vector<Matrix>& images, HilbertKind domain_kind);

/// Images of an orthonormalized basis of a Hilbertian domain.
std::vector<Matrix> hilbertian_images(const SpaceMap& u);

/// sigma_max of the vertical (row domain) or horizontal (column domain) stack.
Matrix hilbertian_stack(const std::vector<Matrix>& images, HilbertKind domain_kind);

}  // namespace opnorm
