#include "opnorm/optim.hpp"

#include <cmath>

#include "opnorm/errors.hpp"

namespace opnorm {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ull;
  }
  return h;
}

}  // namespace

std::mt19937_64 substream(std::uint64_t seed, std::string_view tag, std::uint64_t index) {
  const std::uint64_t s = splitmix64(splitmix64(seed) ^ fnv1a(tag)) ^ splitmix64(index + 0x51ull);
  std::seed_seq seq{static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(s >> 32)};
  return std::mt19937_64(seq);
}

double gaussian(std::mt19937_64& rng) {
  // Box-Muller on 53-bit uniforms keeps streams identical across standard libraries.
  constexpr double kTwoPi = 6.283185307179586476925286766559;
  auto uniform = [&rng] { return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53; };
  const double u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

Matrix gaussian_matrix(std::mt19937_64& rng, int rows, int cols, double scale) {
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) {
      const double re = gaussian(rng);
      const double im = gaussian(rng);
      m(i, j) = Scalar(re, im) * (scale / std::sqrt(2.0));
    }
  return m;
}

RealMatrix gaussian_real_matrix(std::mt19937_64& rng, int rows, int cols, double scale) {
  RealMatrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = scale * gaussian(rng);
  return m;
}

SigmaEval smooth_sigma(const Matrix& x, double q, bool want_grad) {
  SigmaEval out;
  if (x.size() == 0) return out;
  const unsigned opts = want_grad ? (Eigen::ComputeThinU | Eigen::ComputeThinV) : 0u;
  Eigen::JacobiSVD<Matrix> svd(x, opts);
  const RealVector& s = svd.singularValues();
  const double smax = s.size() ? s(0) : 0.0;
  out.exact = smax;
  if (want_grad) out.grad = Matrix::Zero(x.rows(), x.cols());
  if (smax == 0.0) return out;
  if (q <= 0.0) {
    out.smooth = smax;
    if (want_grad) out.grad = svd.matrixU().col(0) * svd.matrixV().col(0).adjoint();
    return out;
  }
  double acc = 0.0;
  for (Eigen::Index k = 0; k < s.size(); ++k) acc += std::pow(s(k) / smax, q);
  out.smooth = smax * std::pow(acc, 1.0 / q);
  if (want_grad) {
    for (Eigen::Index k = 0; k < s.size(); ++k) {
      const double w = std::pow(s(k) / out.smooth, q - 1.0);
      if (w < 1e-300) continue;
      out.grad.noalias() += w * svd.matrixU().col(k) * svd.matrixV().col(k).adjoint();
    }
  }
  return out;
}

DenseLinearMap::DenseLinearMap(int rows, int cols, const std::vector<Matrix>& generators)
    : rows_(rows), cols_(cols), columns_(rows * cols, static_cast<Eigen::Index>(generators.size())) {
  for (std::size_t i = 0; i < generators.size(); ++i) {
    const Matrix& k = generators[i];
    if (k.rows() != rows || k.cols() != cols) throw ShapeMismatch("DenseLinearMap: generator shape");
    columns_.col(static_cast<Eigen::Index>(i)) = flatten(k);
  }
}

Matrix DenseLinearMap::apply(const Vector& z) const {
  return unflatten(columns_ * z, rows_, cols_);
}

Vector DenseLinearMap::pullback(const Matrix& g) const {
  return columns_.adjoint() * flatten(g);
}

KronSumMap::KronSumMap(int k1, int k2, std::vector<Matrix> inner)
    : k1_(k1), k2_(k2), inner_(std::move(inner)) {
  if (inner_.empty()) throw ShapeMismatch("KronSumMap: no inner matrices");
  for (const Matrix& c : inner_)
    if (c.rows() != inner_.front().rows() || c.cols() != inner_.front().cols())
      throw ShapeMismatch("KronSumMap: inner shapes differ");
}

int KronSumMap::input_dim() const { return static_cast<int>(inner_.size()) * k1_ * k2_; }
int KronSumMap::out_rows() const { return k1_ * static_cast<int>(inner_.front().rows()); }
int KronSumMap::out_cols() const { return k2_ * static_cast<int>(inner_.front().cols()); }

Matrix KronSumMap::apply(const Vector& z) const {
  const Eigen::Index p = inner_.front().rows();
  const Eigen::Index q = inner_.front().cols();
  Matrix out = Matrix::Zero(k1_ * p, k2_ * q);
  Eigen::Index at = 0;
  for (const Matrix& c : inner_)
    for (int a = 0; a < k1_; ++a)
      for (int b = 0; b < k2_; ++b, ++at) {
        const Scalar w = z(at);
        if (w != Scalar(0.0)) out.block(a * p, b * q, p, q) += w * c;
      }
  return out;
}

Vector KronSumMap::pullback(const Matrix& g) const {
  const Eigen::Index p = inner_.front().rows();
  const Eigen::Index q = inner_.front().cols();
  Vector out(input_dim());
  Eigen::Index at = 0;
  for (const Matrix& c : inner_)
    for (int a = 0; a < k1_; ++a)
      for (int b = 0; b < k2_; ++b, ++at)
        out(at) = (c.conjugate().cwiseProduct(g.block(a * p, b * q, p, q))).sum();
  return out;
}

int best_index(const std::vector<double>& values, bool maximize) {
  int best = -1;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double v = values[i];
    if (!std::isfinite(v)) continue;
    if (best < 0 || (maximize ? v > values[static_cast<std::size_t>(best)]
                              : v < values[static_cast<std::size_t>(best)]))
      best = static_cast<int>(i);
  }
  return best;
}

const std::vector<double>& smoothing_schedule() {
  static const std::vector<double> schedule{8.0, 32.0, 128.0, 512.0, 2048.0};
  return schedule;
}

}  // namespace opnorm
