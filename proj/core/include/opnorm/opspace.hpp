#pragma once

#include <optional>
#include <string>
#include <vector>

#include "opnorm/matcore.hpp"

namespace opnorm {

enum class StandardKind { Row, Column, RowCap, Full, Scalar };

/// Which Hilbertian structure a space carries when its ambient is a single
/// row (p = 1) or a single column (q = 1).
enum class HilbertKind { Row, Column };

/// A linearly independent family of p x q matrices spanning a subspace of
/// M_{p x q}. Matrix-level norms are those of M_k(M_{p x q}).
class ConcreteOperatorSpace {
 public:
  /// Empty placeholder (dimension 0); usable spaces come from make_space.
  ConcreteOperatorSpace() = default;

  int ambient_rows() const { return rows_; }
  int ambient_cols() const { return cols_; }
  int dim() const { return static_cast<int>(basis_.size()); }
  const std::vector<Matrix>& basis() const { return basis_; }
  const Matrix& basis(int i) const { return basis_[static_cast<std::size_t>(i)]; }
  const std::string& label() const { return label_; }

  /// Sum_i c_i b_i.
  Matrix element(const Vector& coeffs) const;

  /// Least-squares coordinates of an ambient matrix; `residual` receives the
  /// Frobenius distance of `m` to the span.
  Vector coordinates(const Matrix& m, double* residual = nullptr) const;

  /// Row or Column when the ambient is 1 x q or p x 1.
  std::optional<HilbertKind> hilbert_kind() const;

  /// The square size N = max(p, q) used to embed the ambient into M_N.
  int square_size() const { return rows_ > cols_ ? rows_ : cols_; }

  bool same_as(const ConcreteOperatorSpace& other) const;

 private:
  friend ConcreteOperatorSpace make_space(std::vector<Matrix> basis, std::string label);

  int rows_ = 0;
  int cols_ = 0;
  std::vector<Matrix> basis_;
  std::string label_;
  Matrix vectorized_;  // dim x (p q), row i = flatten(b_i)
};

/// Validates and wraps a basis. Throws ShapeMismatch or DependentBasis.
ConcreteOperatorSpace make_space(std::vector<Matrix> basis, std::string label);

/// row(n), column(n), rowcap(n) = R_n cap C_n, scalar. Use full_space for full(p, q).
ConcreteOperatorSpace standard_space(StandardKind kind, int n);
ConcreteOperatorSpace full_space(int p, int q);
ConcreteOperatorSpace scalar_space();

/// Parses "row:3", "column:2", "rowcap:2", "full:2x2", "scalar".
ConcreteOperatorSpace parse_space_ref(const std::string& ref);

/// For Hilbertian spaces: T with rows of T * [b_i] orthonormal (Frobenius), so
/// that e'_j = sum_i T(j, i) b_i is a completely isometric copy of the unit
/// vector basis of R_m or C_m.
Matrix orthonormalizer(const ConcreteOperatorSpace& e);

/// Element of E1 (x) E2 stored over the two bases.
struct TensorElement {
  ConcreteOperatorSpace left;
  ConcreteOperatorSpace right;
  Matrix coeffs;  // dim(left) x dim(right)

  bool is_zero() const { return coeffs.cwiseAbs().maxCoeff() == 0.0; }
};

TensorElement tensor_element(const ConcreteOperatorSpace& left,
                             const ConcreteOperatorSpace& right, Matrix coeffs);

/// The flip v -> t v, living in right (x) left.
TensorElement transpose_tensor(const TensorElement& t);

TensorElement scale(const TensorElement& t, Scalar lambda);

/// sum_i a_i (x) b_i for the given ambient representatives.
TensorElement tensor_from_terms(const ConcreteOperatorSpace& left, const ConcreteOperatorSpace& right,
                                const std::vector<Matrix>& a, const std::vector<Matrix>& b);

/// The spatial tensor norm: || sum c_ij b_i (x) b'_j || in M_{p p'} x M_{q q'}.
double min_norm(const TensorElement& t);

/// Ambient realization sum c_ij b_i (x) b'_j.
Matrix spatial_matrix(const TensorElement& t);

/// Linear map between spaces; coeffs(l, i) is the l-th codomain coordinate of
/// the image of the i-th domain basis element.
struct SpaceMap {
  ConcreteOperatorSpace domain;
  ConcreteOperatorSpace codomain;
  Matrix coeffs;  // dim(codomain) x dim(domain)

  Matrix image(int i) const;
  std::vector<Matrix> images() const;
  Matrix apply(const Matrix& x) const;
  bool is_zero() const { return coeffs.size() == 0 || coeffs.cwiseAbs().maxCoeff() == 0.0; }
};

SpaceMap make_map(const ConcreteOperatorSpace& domain, const ConcreteOperatorSpace& codomain,
                  Matrix coeffs);
SpaceMap identity_map(const ConcreteOperatorSpace& e);

/// Map whose images of the domain basis are given ambient matrices, with
/// codomain the full matrix space of their shape.
SpaceMap map_to_full(const ConcreteOperatorSpace& domain, const std::vector<Matrix>& images);

/// Three-fold tensor, coefficient (i, j, k) at index (i m2 + j) m3 + k.
struct Tensor3 {
  ConcreteOperatorSpace first;
  ConcreteOperatorSpace second;
  ConcreteOperatorSpace third;
  std::vector<Scalar> coeffs;

  Scalar at(int i, int j, int k) const {
    return coeffs[static_cast<std::size_t>((i * second.dim() + j) * third.dim() + k)];
  }
};

Tensor3 tensor3(const ConcreteOperatorSpace& first, const ConcreteOperatorSpace& second,
                const ConcreteOperatorSpace& third, std::vector<Scalar> coeffs);

}  // namespace opnorm
