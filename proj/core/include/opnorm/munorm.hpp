#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "opnorm/factornorms.hpp"
#include "opnorm/haagerup.hpp"

namespace opnorm {

enum class SampleProvenance { TensorSplit, CommutantSampled, Theorem2Block };

const char* to_string(SampleProvenance p);

/// Two maps into M_k with commuting ranges, scaled so that their (estimated) cb
/// norms are at most one.
struct CommutingPairSample {
  int k = 0;
  SpaceMap sigma1;  // left space -> full(k, k)
  SpaceMap sigma2;  // right space -> full(k, k)
  std::optional<Matrix> v;  // inclusion of the small space (block samples)
  std::optional<Matrix> w;  // projection onto the small space (block samples)
  NormEstimate cb1;
  NormEstimate cb2;
  SampleProvenance provenance = SampleProvenance::TensorSplit;
};

using SamplePtr = std::shared_ptr<const CommutingPairSample>;

struct MuWindow {
  NormEstimate lower;
  NormEstimate upper;
};

struct MuOptions : HaagerupOptions {
  MuOptions() {
    restarts = 11;  // the splits v = t, 0, t/2 and eight random ones
    iters = 800;
    oracle_cb.restarts = 4;
    oracle_cb.iters = 200;
  }
  int commutant_samples = 200;
  int block_samples = 100;
  /// Random pairings tried by mu_of_space on top of the canonical ones.
  int pairing_samples = 20;
  /// Budget for cb estimates of sampled maps and of first legs.
  CbOptions oracle_cb;
};

/// Upper bound inf over t = v + w of h(v) + h(tw); certificate MuSplit.
NormEstimate mu_upper(const TensorElement& t, const MuOptions& opts = {});

/// h(v) + h(tw) of a split certificate.
double mu_split_value(const MuSplit& s);

/// Lower bound from commuting pairs; certificate is the best sample.
NormEstimate mu_lower(const TensorElement& t, const MuOptions& opts = {});
NormEstimate mu_lower(const TensorElement& t, const std::vector<SamplePtr>& samples);

MuWindow mu_window(const TensorElement& t, const MuOptions& opts = {});

/// sigma_1 = x -> x^ (x) 1, sigma_2 = y -> 1 (x) y^ with x^ the zero-padded square
/// ambient matrix; complete isometries with commuting ranges.
SamplePtr tensor_split_sample(const ConcreteOperatorSpace& left, const ConcreteOperatorSpace& right);

/// The tensor split sample plus the configured number of commutant and block samples.
std::vector<SamplePtr> commuting_samples(const ConcreteOperatorSpace& left, const ConcreteOperatorSpace& right,
                                         const MuOptions& opts = {});

struct CommutingBlocks {
  SpaceMap sigma1;
  SpaceMap sigma2;
  Matrix v;  // inclusion into the third block
  Matrix w;  // projection onto the first block
};

/// Strictly upper triangular 3 x 3 block maps on K (+) H (+) K built from
/// alpha1: E1 -> B(H, K), alpha2: E2 -> B(K, H), beta1: E1 -> B(K, H), beta2: E2 -> B(H, K).
/// Throws IdentityViolated when alpha1(x) alpha2(y) and beta2(y) beta1(x) differ by more than 1e-10.
CommutingBlocks theorem2_blocks(const SpaceMap& alpha1, const SpaceMap& alpha2, const SpaceMap& beta1,
                               const SpaceMap& beta2);

/// alpha1, beta1 on E1 and alpha2, beta2 on E2 with alpha1(x) alpha2(y) = beta2(y) beta1(x),
/// scaled so that cb(alpha1) cb(alpha2) and cb(beta1) cb(beta2) are at most one.
struct BlockQuadruple {
  SpaceMap alpha1, alpha2, beta1, beta2;
  double cb_alpha1 = 0.0, cb_alpha2 = 0.0, cb_beta1 = 0.0, cb_beta2 = 0.0;
};

/// Random quadruple through a one-dimensional K and H = C^dim(E2); alpha's
/// and beta2 are free, beta1 is solved for. Empty when the solve is rejected
/// or a map vanishes.
std::optional<BlockQuadruple> random_quadruple(const ConcreteOperatorSpace& left,
                                                  const ConcreteOperatorSpace& right, std::mt19937_64& rng,
                                                  const CbOptions& cb = {});

struct PairValue {
  Matrix matrix;
  double norm = 0.0;
};

/// sum c_ij sigma_1(b_i) sigma_2(b'_j) and its norm, optionally divided by cb1 cb2.
PairValue pair_eval(const CommutingPairSample& sample, const TensorElement& t, bool normalize = false);

/// Largest commutator norm over pairs of basis images.
double commutator_defect(const CommutingPairSample& sample);

/// Window for mu(E) = ||i_E||_mu: upper from split_norm(id_E), lower from the
/// exact value 1 and pairings phi = alpha1 alpha2 = beta2 beta1 on E* x E.
MuWindow mu_of_space(const ConcreteOperatorSpace& e, const MuOptions& opts = {});

/// Evaluates a pairing witness for i_E; returns tr(phi) / max(cb a1 cb a2, cb b1 cb b2).
PairingWitness evaluate_pairing(const ConcreteOperatorSpace& e, const Matrix& alpha1, const Matrix& alpha2,
                                const Matrix& beta2, const Matrix& beta1, const CbOptions& cb);

/// FactorOptions with the budget of `opts`.
FactorOptions factor_options(const MuOptions& opts);

}  // namespace opnorm
