#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace opnorm {

using Scalar = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

/// Relative singular-value threshold used for every rank and null-space decision.
inline constexpr double kRankTolerance = 1e-9;

bool all_finite(const Matrix& m);

/// Throws InvalidInput if any entry is NaN or infinite.
void require_finite(const Matrix& m, const char* what);

/// The matrix unit e_{ij} of shape rows x cols.
Matrix matrix_unit(int rows, int cols, int i, int j);

/// Kronecker product with `a` as the outer factor.
Matrix kron(const Matrix& a, const Matrix& b);

/// Largest singular value (the norm of B(H)); zero for an empty or zero matrix.
double operator_norm(const Matrix& m);

RealVector singular_values(const Matrix& m);

/// Numerical rank with threshold `rel_tol * sigma_max`.
int numerical_rank(const Matrix& m, double rel_tol = kRankTolerance);

/// Row-major flattening of a matrix into a vector.
Vector flatten(const Matrix& m);
Matrix unflatten(const Vector& v, int rows, int cols);

/// Trace inner product <a, b> = tr(a^* b).
Scalar trace_inner(const Matrix& a, const Matrix& b);

/// Orthonormal (trace inner product) basis of {X : XA = AX for every A in mats}.
/// The null space is decided by singular values at or below 1e-9 * sigma_max.
std::vector<Matrix> commutant_basis(std::span<const Matrix> mats);

/// Packs theta (length 2 r^2, interleaved real/imaginary, row-major) as a complex
/// r x r matrix T and returns exp(T). The result is always invertible and its
/// inverse is exp(-T).
Matrix gl_param(int r, std::span<const double> theta);

/// The r x r matrix T packed by gl_param.
Matrix unpack_generator(int r, std::span<const double> theta);
std::vector<double> pack_generator(const Matrix& t);

/// Matrix exponential of a square complex matrix.
Matrix expm(const Matrix& t);

}  // namespace opnorm
