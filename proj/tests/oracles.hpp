#pragma once

// Test-only reference computations, deliberately independent of the library's
// SVD and optimizer code paths.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

/// sigma_max by power iteration on M^* M.
inline double power_norm(const Eigen::MatrixXcd& m, int iters = 5000) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Ones(m.cols());
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = std::complex<double>(1.0 + 0.1 * i, 0.3 * i);
  double lambda = 0.0;
  for (int it = 0; it < iters; ++it) {
    Eigen::VectorXcd w = m.adjoint() * (m * v);
    const double n = w.norm();
    if (n == 0.0) return 0.0;
    v = w / n;
    lambda = n;
  }
  return std::sqrt(lambda);
}

/// Kronecker product written out entry by entry.
inline Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      for (Eigen::Index k = 0; k < b.rows(); ++k)
        for (Eigen::Index l = 0; l < b.cols(); ++l) out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return out;
}

/// Crude random search for sup ||sum x_i (x) y_i|| / ||sum x_i (x) b_i|| at level k:
/// `samples` random blocks, each refined by coordinate-free random perturbations.
inline double random_search_level_norm(const std::vector<Eigen::MatrixXcd>& domain,
                                       const std::vector<Eigen::MatrixXcd>& images, int k,
                                       int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  auto ratio = [&](const std::vector<Eigen::MatrixXcd>& x) {
    Eigen::MatrixXcd num = Eigen::MatrixXcd::Zero(k * images[0].rows(), k * images[0].cols());
    Eigen::MatrixXcd den = Eigen::MatrixXcd::Zero(k * domain[0].rows(), k * domain[0].cols());
    for (std::size_t i = 0; i < x.size(); ++i) {
      num += kron(x[i], images[i]);
      den += kron(x[i], domain[i]);
    }
    const double d = power_norm(den, 300);
    return d > 0 ? power_norm(num, 300) / d : 0.0;
  };
  auto random_blocks = [&](double scale) {
    std::vector<Eigen::MatrixXcd> x;
    for (std::size_t i = 0; i < domain.size(); ++i) {
      Eigen::MatrixXcd b(k, k);
      for (int r = 0; r < k; ++r)
        for (int c = 0; c < k; ++c) b(r, c) = std::complex<double>(g(rng), g(rng)) * scale;
      x.push_back(b);
    }
    return x;
  };
  double best = 0.0;
  for (int s = 0; s < samples; ++s) {
    auto x = random_blocks(1.0);
    double cur = ratio(x);
    double scale = 0.5;
    for (int it = 0; it < 400; ++it) {
      auto d = random_blocks(scale);
      for (std::size_t i = 0; i < x.size(); ++i) d[i] += x[i];
      const double r = ratio(d);
      if (r > cur) {
        cur = r;
        x = d;
      } else if (it % 40 == 39) {
        scale *= 0.5;
      }
    }
    best = std::max(best, cur);
  }
  return best;
}

}  // namespace oracle
