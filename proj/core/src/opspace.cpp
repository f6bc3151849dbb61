#include "opnorm/opspace.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "opnorm/errors.hpp"

namespace opnorm {

namespace {

std::string shape_str(const Matrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

int parse_int(std::string_view s, const std::string& ref) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || value < 1)
    throw InvalidKind("bad space reference '" + ref + "'");
  return value;
}

}  // namespace

Matrix ConcreteOperatorSpace::element(const Vector& coeffs) const {
  if (coeffs.size() != dim()) throw ShapeMismatch("element: coefficient length != dim");
  Matrix m = Matrix::Zero(rows_, cols_);
  for (int i = 0; i < dim(); ++i) m += coeffs(i) * basis_[static_cast<std::size_t>(i)];
  return m;
}

Vector ConcreteOperatorSpace::coordinates(const Matrix& m, double* residual) const {
  if (m.rows() != rows_ || m.cols() != cols_)
    throw ShapeMismatch("coordinates: ambient shape mismatch");
  const Vector target = flatten(m);
  // Solve vectorized_^T c = target.
  const Matrix a = vectorized_.transpose();
  const Vector c = a.completeOrthogonalDecomposition().solve(target);
  if (residual) *residual = (a * c - target).norm();
  return c;
}

std::optional<HilbertKind> ConcreteOperatorSpace::hilbert_kind() const {
  if (rows_ == 1) return HilbertKind::Row;
  if (cols_ == 1) return HilbertKind::Column;
  return std::nullopt;
}

bool ConcreteOperatorSpace::same_as(const ConcreteOperatorSpace& other) const {
  if (rows_ != other.rows_ || cols_ != other.cols_ || dim() != other.dim()) return false;
  return vectorized_ == other.vectorized_;
}

ConcreteOperatorSpace make_space(std::vector<Matrix> basis, std::string label) {
  if (basis.empty()) throw DependentBasis("make_space: empty basis");
  const Eigen::Index p = basis.front().rows();
  const Eigen::Index q = basis.front().cols();
  if (p < 1 || q < 1) throw ShapeMismatch("make_space: empty ambient");
  for (const Matrix& b : basis) {
    if (b.rows() != p || b.cols() != q)
      throw ShapeMismatch("make_space: basis shapes differ (" + shape_str(basis.front()) +
                          " vs " + shape_str(b) + ")");
    require_finite(b, "make_space");
  }
  Matrix vec(static_cast<Eigen::Index>(basis.size()), p * q);
  for (std::size_t i = 0; i < basis.size(); ++i)
    vec.row(static_cast<Eigen::Index>(i)) = flatten(basis[i]).transpose();
  const RealVector s = singular_values(vec);
  const double smax = s.size() ? s(0) : 0.0;
  const double smin = static_cast<Eigen::Index>(basis.size()) <= s.size()
                          ? s(static_cast<Eigen::Index>(basis.size()) - 1)
                          : 0.0;
  if (smax == 0.0 || smin <= kRankTolerance * smax)
    throw DependentBasis("make_space: basis is linearly dependent");

  ConcreteOperatorSpace e;
  e.rows_ = static_cast<int>(p);
  e.cols_ = static_cast<int>(q);
  e.basis_ = std::move(basis);
  e.label_ = std::move(label);
  e.vectorized_ = std::move(vec);
  return e;
}

ConcreteOperatorSpace standard_space(StandardKind kind, int n) {
  if (n < 1) throw InvalidKind("standard_space: n must be positive");
  std::vector<Matrix> basis;
  switch (kind) {
    case StandardKind::Row:
      for (int j = 0; j < n; ++j) basis.push_back(matrix_unit(1, n, 0, j));
      return make_space(std::move(basis), "row:" + std::to_string(n));
    case StandardKind::Column:
      for (int i = 0; i < n; ++i) basis.push_back(matrix_unit(n, 1, i, 0));
      return make_space(std::move(basis), "column:" + std::to_string(n));
    case StandardKind::RowCap:
      for (int i = 0; i < n; ++i) {
        Matrix b = Matrix::Zero(2 * n, 2 * n);
        b(0, i) = 1.0;          // e_{1i} in the first n x n block
        b(n + i, n) = 1.0;      // e_{i1} in the second block
        basis.push_back(std::move(b));
      }
      return make_space(std::move(basis), "rowcap:" + std::to_string(n));
    case StandardKind::Full:
      return full_space(n, n);
    case StandardKind::Scalar:
      return scalar_space();
  }
  throw InvalidKind("standard_space: unknown kind");
}

ConcreteOperatorSpace full_space(int p, int q) {
  if (p < 1 || q < 1) throw InvalidKind("full_space: sizes must be positive");
  std::vector<Matrix> basis;
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < q; ++j) basis.push_back(matrix_unit(p, q, i, j));
  return make_space(std::move(basis), "full:" + std::to_string(p) + "x" + std::to_string(q));
}

ConcreteOperatorSpace scalar_space() {
  return make_space({Matrix::Identity(1, 1)}, "scalar");
}

ConcreteOperatorSpace parse_space_ref(const std::string& ref) {
  if (ref == "scalar") return scalar_space();
  const auto colon = ref.find(':');
  if (colon == std::string::npos) throw InvalidKind("bad space reference '" + ref + "'");
  const std::string kind = ref.substr(0, colon);
  const std::string arg = ref.substr(colon + 1);
  if (kind == "row") return standard_space(StandardKind::Row, parse_int(arg, ref));
  if (kind == "column" || kind == "col") return standard_space(StandardKind::Column, parse_int(arg, ref));
  if (kind == "rowcap") return standard_space(StandardKind::RowCap, parse_int(arg, ref));
  if (kind == "full") {
    const auto x = arg.find('x');
    if (x == std::string::npos) {
      const int n = parse_int(arg, ref);
      return full_space(n, n);
    }
    return full_space(parse_int(std::string_view(arg).substr(0, x), ref),
                      parse_int(std::string_view(arg).substr(x + 1), ref));
  }
  throw InvalidKind("unknown space kind '" + kind + "'");
}

Matrix orthonormalizer(const ConcreteOperatorSpace& e) {
  const int m = e.dim();
  Matrix gram(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) gram(i, j) = trace_inner(e.basis(j), e.basis(i));
  // gram(i, j) = <b_i, b_j> conjugated so that gram = B B^* for the row-stacked B.
  const Eigen::LLT<Matrix> llt(gram);
  const Matrix l = llt.matrixL();
  return l.triangularView<Eigen::Lower>().solve(Matrix::Identity(m, m));
}

TensorElement tensor_element(const ConcreteOperatorSpace& left,
                             const ConcreteOperatorSpace& right, Matrix coeffs) {
  if (coeffs.rows() != left.dim() || coeffs.cols() != right.dim())
    throw ShapeMismatch("tensor_element: coefficients are " + shape_str(coeffs) + ", spaces have dims " +
                        std::to_string(left.dim()) + "x" + std::to_string(right.dim()));
  require_finite(coeffs, "tensor_element");
  return TensorElement{left, right, std::move(coeffs)};
}

TensorElement transpose_tensor(const TensorElement& t) {
  return TensorElement{t.right, t.left, t.coeffs.transpose()};
}

TensorElement scale(const TensorElement& t, Scalar lambda) {
  return TensorElement{t.left, t.right, lambda * t.coeffs};
}

TensorElement tensor_from_terms(const ConcreteOperatorSpace& left, const ConcreteOperatorSpace& right,
                                const std::vector<Matrix>& a, const std::vector<Matrix>& b) {
  if (a.size() != b.size()) throw ShapeMismatch("tensor_from_terms: term counts differ");
  Matrix c = Matrix::Zero(left.dim(), right.dim());
  for (std::size_t i = 0; i < a.size(); ++i)
    c += left.coordinates(a[i]) * right.coordinates(b[i]).transpose();
  return tensor_element(left, right, std::move(c));
}

Matrix spatial_matrix(const TensorElement& t) {
  const ConcreteOperatorSpace& e = t.left;
  const ConcreteOperatorSpace& f = t.right;
  Matrix out = Matrix::Zero(e.ambient_rows() * f.ambient_rows(), e.ambient_cols() * f.ambient_cols());
  for (int j = 0; j < f.dim(); ++j) {
    const Matrix a = e.element(t.coeffs.col(j));
    if (a.cwiseAbs().maxCoeff() == 0.0) continue;
    out += kron(a, f.basis(j));
  }
  return out;
}

double min_norm(const TensorElement& t) {
  if (t.is_zero()) return 0.0;
  return operator_norm(spatial_matrix(t));
}

Matrix SpaceMap::image(int i) const { return codomain.element(coeffs.col(i)); }

std::vector<Matrix> SpaceMap::images() const {
  std::vector<Matrix> out;
  out.reserve(static_cast<std::size_t>(domain.dim()));
  for (int i = 0; i < domain.dim(); ++i) out.push_back(image(i));
  return out;
}

Matrix SpaceMap::apply(const Matrix& x) const {
  return codomain.element(coeffs * domain.coordinates(x));
}

SpaceMap make_map(const ConcreteOperatorSpace& domain, const ConcreteOperatorSpace& codomain,
                  Matrix coeffs) {
  if (coeffs.rows() != codomain.dim() || coeffs.cols() != domain.dim())
    throw ShapeMismatch("make_map: coefficients are " + shape_str(coeffs) + ", expected " +
                        std::to_string(codomain.dim()) + "x" + std::to_string(domain.dim()));
  require_finite(coeffs, "make_map");
  return SpaceMap{domain, codomain, std::move(coeffs)};
}

SpaceMap identity_map(const ConcreteOperatorSpace& e) {
  return SpaceMap{e, e, Matrix::Identity(e.dim(), e.dim())};
}

SpaceMap map_to_full(const ConcreteOperatorSpace& domain, const std::vector<Matrix>& images) {
  if (static_cast<int>(images.size()) != domain.dim())
    throw ShapeMismatch("map_to_full: need one image per basis element");
  const int p = static_cast<int>(images.front().rows());
  const int q = static_cast<int>(images.front().cols());
  ConcreteOperatorSpace full = full_space(p, q);
  Matrix coeffs(p * q, domain.dim());
  for (int i = 0; i < domain.dim(); ++i) {
    const Matrix& y = images[static_cast<std::size_t>(i)];
    if (y.rows() != p || y.cols() != q) throw ShapeMismatch("map_to_full: image shapes differ");
    coeffs.col(i) = flatten(y);
  }
  return make_map(domain, full, std::move(coeffs));
}

Tensor3 tensor3(const ConcreteOperatorSpace& first, const ConcreteOperatorSpace& second,
                const ConcreteOperatorSpace& third, std::vector<Scalar> coeffs) {
  const std::size_t expect = static_cast<std::size_t>(first.dim()) *
                             static_cast<std::size_t>(second.dim()) *
                             static_cast<std::size_t>(third.dim());
  if (coeffs.size() != expect) throw ShapeMismatch("tensor3: coefficient count mismatch");
  for (const Scalar& z : coeffs)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      throw InvalidInput("tensor3: non-finite coefficient");
  return Tensor3{first, second, third, std::move(coeffs)};
}

}  // namespace opnorm
