#pragma once

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "opnorm/opspace.hpp"
#include "opnorm/optim.hpp"

namespace opnorm {

enum class BoundKind { Upper, Lower, Exact };

const char* to_string(BoundKind kind);

/// Matrix-level input X = sum_i x_i (x) b_i in M_k(E) with ||X|| = 1 that
/// witnesses a level-k lower bound for a map.
struct LevelWitness {
  int level = 0;
  std::vector<Matrix> blocks;  // x_i, one k x k block per domain basis element
};

/// Exact closed form from Hilbertian-domain images.
struct ClosedFormWitness {
  HilbertKind domain_kind = HilbertKind::Row;
  std::vector<Matrix> images;  // values on the orthonormal unit vector basis
};

/// t = sum_i a_i (x) b_i, a_i = sum_j left(i, j) e_j and b_i = sum_l right(i, l) f_l.
struct Decomposition {
  TensorElement target;
  Matrix left;   // r x dim(target.left)
  Matrix right;  // r x dim(target.right)

  int terms() const { return static_cast<int>(left.rows()); }
  Matrix a(int i) const { return target.left.element(left.row(i).transpose()); }
  Matrix b(int i) const { return target.right.element(right.row(i).transpose()); }
};

/// t3 = sum_{i,j} a_i (x) m_ij (x) c_j.
struct Decomposition3 {
  Tensor3 target;
  Matrix first;   // r1 x dim(first)
  Matrix middle;  // (r1 r2) x dim(second), row i r2 + j holds m_ij
  Matrix third;   // r2 x dim(third)
};

/// u = v + w with decompositions of v in E1 (x)_h E2 and of tw in E2 (x)_h E1.
struct MuSplit {
  TensorElement v;
  TensorElement w;
  Decomposition v_decomposition;
  Decomposition tw_decomposition;
};

/// u = second_leg o first_leg through an intermediate row or column space.
struct Factorization {
  HilbertKind through = HilbertKind::Row;
  int k = 0;
  SpaceMap first_leg;   // domain -> R_k or C_k
  SpaceMap second_leg;  // R_k or C_k -> codomain
  double first_cb = 0.0;
  double second_cb = 0.0;
  double residual = 0.0;
};

/// u = v + w with v through a row space and w through a column space.
struct SplitFactorization {
  std::optional<Factorization> row_part;
  std::optional<Factorization> column_part;
};

/// M = right * left as maps l_inf^n -> l_2^k -> l_inf^m.
struct Gamma2Factorization {
  Matrix left;   // k x n
  Matrix right;  // m x k
  double inf_to_two = 0.0;
  double two_to_inf = 0.0;
};

/// Data behind a lower bound for mu(E) obtained by pairing i_E with a
/// functional phi = alpha_1 alpha_2 = beta_2 beta_1 on E* (x) E.
struct PairingWitness {
  Matrix alpha1;  // n x H, row i is alpha_1(e_i^*) in R_H
  Matrix alpha2;  // H x n, column j is alpha_2(e_j) in C_H
  Matrix beta2;   // n x H, row j is beta_2(e_j) in R_H
  Matrix beta1;   // H x n, column i is beta_1(e_i^*) in C_H
  double cb_alpha1 = 0.0, cb_alpha2 = 0.0, cb_beta1 = 0.0, cb_beta2 = 0.0;
  double pairing = 0.0;
};

struct CommutingPairSample;

using Certificate =
    std::variant<std::monostate, LevelWitness, ClosedFormWitness, Decomposition, Decomposition3,
                 MuSplit, Factorization, SplitFactorization, Gamma2Factorization, PairingWitness,
                 std::shared_ptr<const CommutingPairSample>>;

/// A computed norm value with its direction, witness and optimizer trace.
struct NormEstimate {
  double value = 0.0;
  BoundKind bound_kind = BoundKind::Exact;
  Certificate certificate;
  Trace trace;
};

}  // namespace opnorm
