#pragma once

#include "opnorm/estimate.hpp"

namespace opnorm {

struct HaagerupOptions : OptimizerOptions {
  HaagerupOptions() {
    restarts = 24;
    iters = 800;
  }
  /// Extra zero terms beyond rank(coeffs).
  int rank_slack = 0;
};

/// Rank-many terms from the SVD of the coefficient matrix. Throws ZeroTensor.
Decomposition initial_decomposition(const TensorElement& t);

/// ||sum a_i a_i^*||^{1/2} ||sum b_i^* b_i||^{1/2}.
double decomposition_value(const Decomposition& d);

/// Frobenius distance between the coefficients of sum a_i (x) b_i and the target.
double reconstruction_error(const Decomposition& d);

/// Upper bound for the Haagerup norm of t in left (x)_h right.
NormEstimate haagerup_upper(const TensorElement& t, const HaagerupOptions& opts = {});

/// ||sum a_i a_i^*||^{1/2} ||[m_ij]|| ||sum c_j^* c_j||^{1/2}.
double decomposition3_value(const Decomposition3& d);
double reconstruction3_error(const Decomposition3& d);

/// Rank-minimal decomposition from the two outer unfoldings. Throws ZeroTensor.
Decomposition3 initial_decomposition3(const Tensor3& t);

/// Upper bound for the three-fold Haagerup norm.
NormEstimate haagerup3_upper(const Tensor3& t, const HaagerupOptions& opts = {});

}  // namespace opnorm
