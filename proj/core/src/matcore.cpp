#include "opnorm/matcore.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <unsupported/Eigen/MatrixFunctions>

#include "opnorm/errors.hpp"

namespace opnorm {

bool all_finite(const Matrix& m) {
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    const Scalar z = m.data()[i];
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  }
  return true;
}

void require_finite(const Matrix& m, const char* what) {
  if (!all_finite(m)) throw InvalidInput(std::string(what) + ": non-finite entry");
}

Matrix matrix_unit(int rows, int cols, int i, int j) {
  Matrix e = Matrix::Zero(rows, cols);
  e(i, j) = 1.0;
  return e;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

RealVector singular_values(const Matrix& m) {
  if (m.size() == 0) return RealVector();
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues();
}

double operator_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  const RealVector s = singular_values(m);
  return s.size() ? s(0) : 0.0;
}

int numerical_rank(const Matrix& m, double rel_tol) {
  const RealVector s = singular_values(m);
  if (s.size() == 0 || s(0) == 0.0) return 0;
  const double thr = rel_tol * s(0);
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > thr) ++r;
  return r;
}

Vector flatten(const Matrix& m) {
  Vector v(m.size());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) v(i * m.cols() + j) = m(i, j);
  return v;
}

Matrix unflatten(const Vector& v, int rows, int cols) {
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = v(i * cols + j);
  return m;
}

Scalar trace_inner(const Matrix& a, const Matrix& b) {
  return (a.conjugate().cwiseProduct(b)).sum();
}

std::vector<Matrix> commutant_basis(std::span<const Matrix> mats) {
  if (mats.empty()) throw InvalidInput("commutant_basis: empty input");
  const Eigen::Index k = mats.front().rows();
  for (const Matrix& a : mats)
    if (a.rows() != k || a.cols() != k)
      throw ShapeMismatch("commutant_basis: inputs must be square of equal size");

  // Row-major vec: vec(XA) = (I kron A^T) vec(X), vec(AX) = (A kron I) vec(X).
  const Eigen::Index n = k * k;
  const Matrix id = Matrix::Identity(k, k);
  Matrix sys(n * static_cast<Eigen::Index>(mats.size()), n);
  for (std::size_t i = 0; i < mats.size(); ++i)
    sys.block(static_cast<Eigen::Index>(i) * n, 0, n, n) =
        kron(id, mats[i].transpose()) - kron(mats[i], id);

  Eigen::JacobiSVD<Matrix> svd(sys, Eigen::ComputeFullV);
  const RealVector s = svd.singularValues();
  const double smax = s.size() ? s(0) : 0.0;
  const double thr = kRankTolerance * smax;
  std::vector<Matrix> basis;
  for (Eigen::Index c = 0; c < n; ++c) {
    const double sc = c < s.size() ? s(c) : 0.0;
    if (smax == 0.0 || sc <= thr)
      basis.push_back(unflatten(svd.matrixV().col(c), static_cast<int>(k), static_cast<int>(k)));
  }
  return basis;
}

Matrix unpack_generator(int r, std::span<const double> theta) {
  if (static_cast<int>(theta.size()) != 2 * r * r)
    throw ShapeMismatch("gl_param: theta must have length 2 r^2");
  Matrix t(r, r);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) {
      const std::size_t at = 2 * static_cast<std::size_t>(i * r + j);
      t(i, j) = Scalar(theta[at], theta[at + 1]);
    }
  return t;
}

std::vector<double> pack_generator(const Matrix& t) {
  std::vector<double> theta;
  theta.reserve(2 * t.size());
  for (Eigen::Index i = 0; i < t.rows(); ++i)
    for (Eigen::Index j = 0; j < t.cols(); ++j) {
      theta.push_back(t(i, j).real());
      theta.push_back(t(i, j).imag());
    }
  return theta;
}

Matrix expm(const Matrix& t) {
  if (t.rows() != t.cols()) throw ShapeMismatch("expm: square matrix required");
  if (t.size() == 0) return t;
  return t.exp();
}

Matrix gl_param(int r, std::span<const double> theta) {
  if (r < 1) throw InvalidInput("gl_param: r must be positive");
  for (double x : theta)
    if (!std::isfinite(x)) throw InvalidInput("gl_param: non-finite theta");
  return expm(unpack_generator(r, theta));
}

}  // namespace opnorm
