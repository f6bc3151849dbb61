#include "opnorm/haagerup.hpp"

#include <cmath>
#include <limits>

#include "opnorm/errors.hpp"
#include "split_engine.hpp"

namespace opnorm {

namespace {

using detail::FactorCost;
using detail::Stack;

detail::HalfSpec haagerup_spec(const TensorElement& t) {
  return {FactorCost{t.left.basis(), Stack::Horizontal}, FactorCost{t.right.basis(), Stack::Vertical}};
}

Scalar normalizer(const std::vector<Scalar>& c) {
  std::size_t best = 0;
  double norm2 = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    norm2 += std::norm(c[i]);
    if (std::abs(c[i]) > std::abs(c[best])) best = i;
  }
  return std::sqrt(norm2) * (c[best] / std::abs(c[best]));
}

Matrix as_matrix(const Vector& v, Eigen::Index rows, Eigen::Index cols) {
  return Eigen::Map<const Matrix>(v.data(), rows, cols);
}

Vector as_vector(const Matrix& m) { return Eigen::Map<const Vector>(m.data(), m.size()); }

}  // namespace

Decomposition initial_decomposition(const TensorElement& t) {
  if (t.is_zero()) throw ZeroTensor("initial_decomposition: zero tensor");
  std::mt19937_64 unused(0);
  const detail::Half h = detail::svd_half(t.coeffs, 0, 0.0, unused);
  return Decomposition{t, h.p, h.q};
}

double decomposition_value(const Decomposition& d) {
  const auto spec = haagerup_spec(d.target);
  return detail::factor_sigma(spec.p, d.left) * detail::factor_sigma(spec.q, d.right);
}

double reconstruction_error(const Decomposition& d) {
  return (d.left.transpose() * d.right - d.target.coeffs).norm();
}

NormEstimate haagerup_upper(const TensorElement& t, const HaagerupOptions& opts) {
  if (opts.rank_slack < 0) throw InvalidInput("haagerup_upper: rank_slack must be nonnegative");
  NormEstimate est;
  est.bound_kind = BoundKind::Upper;
  est.trace.seed = opts.seed;
  est.trace.path = "haagerup";
  if (t.is_zero()) {
    est.bound_kind = BoundKind::Exact;
    est.trace.converged = true;
    est.certificate = Decomposition{t, Matrix::Zero(1, t.left.dim()), Matrix::Zero(1, t.right.dim())};
    return est;
  }
  const Scalar scale = detail::normalizer(t.coeffs);
  const Matrix c = t.coeffs / scale;
  const int rows = numerical_rank(c) + opts.rank_slack;
  const std::vector<detail::HalfSpec> specs{haagerup_spec(t)};

  const std::function<detail::SplitResult(int)> run = [&](int r) {
    auto rng = substream(opts.seed, "haagerup", static_cast<std::uint64_t>(r));
    detail::Half h = detail::svd_half(c, rows, 0.0, rng);
    if (r > 0) detail::reparametrize(h, gaussian_matrix(rng, rows, rows, 0.5));
    return detail::descend_split(specs, c, {h}, opts.iters, opts.tol);
  };
  auto results = run_indexed(opts.restarts, opts.threads, run);

  detail::Half best;
  if (results.empty()) {
    std::mt19937_64 unused(0);
    best = detail::svd_half(c, rows, 0.0, unused);
  } else {
    std::vector<double> values;
    for (const auto& res : results) {
      values.push_back(res.value);
      est.trace.iterations += res.iterations;
      est.trace.converged = est.trace.converged || res.converged;
    }
    best = results[static_cast<std::size_t>(best_index(values, false))].halves.front();
  }
  est.trace.restarts_used = opts.restarts;
  // t = scale * p^T q; put the scale on the right factor and rebalance.
  Decomposition d{t, best.p, scale * best.q};
  const double sl = detail::factor_sigma(specs[0].p, d.left);
  const double sr = detail::factor_sigma(specs[0].q, d.right);
  if (sl > 0.0 && sr > 0.0) {
    const double lambda = std::sqrt(sr / sl);
    d.left *= lambda;
    d.right /= lambda;
  }
  est.value = decomposition_value(d);
  est.certificate = std::move(d);
  return est;
}

// ---------------------------------------------------------------------------
// Three-fold

double decomposition3_value(const Decomposition3& d) {
  const Tensor3& t = d.target;
  const Eigen::Index r1 = d.first.rows(), r2 = d.third.rows();
  const KronSumMap ma(1, static_cast<int>(r1), t.first.basis());
  const KronSumMap mm(static_cast<int>(r1), static_cast<int>(r2), t.second.basis());
  const KronSumMap mc(static_cast<int>(r2), 1, t.third.basis());
  return operator_norm(ma.apply(as_vector(d.first))) * operator_norm(mm.apply(as_vector(d.middle))) *
         operator_norm(mc.apply(as_vector(d.third)));
}

double reconstruction3_error(const Decomposition3& d) {
  const Tensor3& t = d.target;
  const int d1 = t.first.dim(), d2 = t.second.dim(), d3 = t.third.dim();
  const Eigen::Index r1 = d.first.rows(), r2 = d.third.rows();
  double err2 = 0.0;
  for (int a = 0; a < d1; ++a)
    for (int b = 0; b < d2; ++b)
      for (int c = 0; c < d3; ++c) {
        Scalar s = 0.0;
        for (Eigen::Index i = 0; i < r1; ++i)
          for (Eigen::Index j = 0; j < r2; ++j) s += d.first(i, a) * d.middle(i * r2 + j, b) * d.third(j, c);
        err2 += std::norm(s - t.at(a, b, c));
      }
  return std::sqrt(err2);
}

Decomposition3 initial_decomposition3(const Tensor3& t) {
  const int d1 = t.first.dim(), d2 = t.second.dim(), d3 = t.third.dim();
  bool zero = true;
  for (const Scalar& s : t.coeffs) zero = zero && s == Scalar(0.0);
  if (zero) throw ZeroTensor("initial_decomposition3: zero tensor");

  Matrix u1(d1, d2 * d3), u3(d3, d1 * d2);
  for (int a = 0; a < d1; ++a)
    for (int b = 0; b < d2; ++b)
      for (int c = 0; c < d3; ++c) {
        u1(a, b * d3 + c) = t.at(a, b, c);
        u3(c, a * d2 + b) = t.at(a, b, c);
      }
  auto range = [](const Matrix& m) {
    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU);
    const int r = numerical_rank(m);
    return Matrix(svd.matrixU().leftCols(r));
  };
  const Matrix p1 = range(u1), p3 = range(u3);
  const Eigen::Index r1 = p1.cols(), r2 = p3.cols();
  Decomposition3 d{t, p1.transpose(), Matrix::Zero(r1 * r2, d2), p3.transpose()};
  for (Eigen::Index i = 0; i < r1; ++i)
    for (Eigen::Index j = 0; j < r2; ++j)
      for (int b = 0; b < d2; ++b) {
        Scalar s = 0.0;
        for (int a = 0; a < d1; ++a)
          for (int c = 0; c < d3; ++c) s += std::conj(p1(a, i)) * std::conj(p3(c, j)) * t.at(a, b, c);
        d.middle(i * r2 + j, b) = s;
      }
  return d;
}

namespace {

struct Three {
  Matrix a, m, c;  // r1 x d1, (r1 r2) x d2, r2 x d3
};

struct Problem3 {
  KronSumMap ma, mm, mc;
  Eigen::Index r1, r2;

  struct Point {
    double f = std::numeric_limits<double>::infinity();
    double exact = 0.0;
    Matrix g1, g2;  // gradients with respect to the two generators
  };

  Point eval(const Three& x, double q, bool want_grad) const {
    Point p;
    const SigmaEval ea = smooth_sigma(ma.apply(as_vector(x.a)), q, want_grad);
    const SigmaEval em = smooth_sigma(mm.apply(as_vector(x.m)), q, want_grad);
    const SigmaEval ec = smooth_sigma(mc.apply(as_vector(x.c)), q, want_grad);
    p.exact = ea.exact * em.exact * ec.exact;
    if (ea.smooth <= 0.0 || em.smooth <= 0.0 || ec.smooth <= 0.0) return p;
    p.f = std::log(ea.smooth) + std::log(em.smooth) + std::log(ec.smooth);
    if (!want_grad) return p;
    const Matrix ga = as_matrix(ma.pullback(ea.grad), x.a.rows(), x.a.cols()) / ea.smooth;
    const Matrix gm = as_matrix(mm.pullback(em.grad), x.m.rows(), x.m.cols()) / em.smooth;
    const Matrix gc = as_matrix(mc.pullback(ec.grad), x.c.rows(), x.c.cols()) / ec.smooth;
    p.g1 = ga * x.a.adjoint();
    p.g2 = gc * x.c.adjoint();
    for (Eigen::Index b = 0; b < x.m.cols(); ++b) {
      const Matrix z = block(x.m, b), gz = block(gm, b);
      p.g1 -= (z * gz.adjoint()).conjugate();
      p.g2 -= z.adjoint() * gz;
    }
    return p;
  }

  Matrix block(const Matrix& m, Eigen::Index b) const {
    Matrix z(r1, r2);
    for (Eigen::Index i = 0; i < r1; ++i)
      for (Eigen::Index j = 0; j < r2; ++j) z(i, j) = m(i * r2 + j, b);
    return z;
  }

  // a <- S1 a, c <- S2 c, Z_b <- S1^{-T} Z_b S2^{-1} with S = exp(t).
  Three move(const Three& x, const Matrix& t1, const Matrix& t2) const {
    Three y{expm(t1) * x.a, x.m, expm(t2) * x.c};
    const Matrix left = expm(Matrix(-t1.transpose()));
    const Matrix right = expm(Matrix(-t2));
    for (Eigen::Index b = 0; b < x.m.cols(); ++b) {
      const Matrix z = left * block(x.m, b) * right;
      for (Eigen::Index i = 0; i < r1; ++i)
        for (Eigen::Index j = 0; j < r2; ++j) y.m(i * r2 + j, b) = z(i, j);
    }
    return y;
  }
};

struct Result3 {
  Three best;
  double value = 0.0;
  long iterations = 0;
  bool converged = false;
};

Result3 descend3(const Problem3& pb, Three x, int max_iters, double tol) {
  Result3 out{x, pb.eval(x, 0.0, false).exact};
  long it = 0;
  bool all_done = true;
  for (double q : smoothing_schedule()) {
    double step = 0.1;
    bool stage_done = false;
    while (it < max_iters) {
      ++it;
      const auto cur = pb.eval(x, q, true);
      const double slope = cur.g1.squaredNorm() + cur.g2.squaredNorm();
      if (!std::isfinite(cur.f) || slope <= 1e-28) {
        stage_done = true;
        break;
      }
      bool accepted = false;
      double gain = 0.0;
      for (int bt = 0; bt < 40 && step > 1e-14; ++bt) {
        Three y = pb.move(x, Matrix(-step * cur.g1), Matrix(-step * cur.g2));
        const auto next = pb.eval(y, q, false);
        if (std::isfinite(next.f) && next.f <= cur.f - 1e-4 * step * slope) {
          gain = cur.f - next.f;
          x = std::move(y);
          if (next.exact < out.value) {
            out.value = next.exact;
            out.best = x;
          }
          accepted = true;
          step *= 2.0;
          break;
        }
        step *= 0.5;
      }
      if (!accepted || gain <= tol) {
        stage_done = true;
        break;
      }
    }
    if (!stage_done) {
      all_done = false;
      break;
    }
  }
  out.iterations = it;
  out.converged = all_done;
  return out;
}

}  // namespace

NormEstimate haagerup3_upper(const Tensor3& t, const HaagerupOptions& opts) {
  NormEstimate est;
  est.bound_kind = BoundKind::Upper;
  est.trace.seed = opts.seed;
  est.trace.path = "haagerup3";
  bool zero = true;
  for (const Scalar& s : t.coeffs) zero = zero && s == Scalar(0.0);
  if (zero) {
    est.bound_kind = BoundKind::Exact;
    est.trace.converged = true;
    est.certificate = Decomposition3{t, Matrix::Zero(1, t.first.dim()), Matrix::Zero(1, t.second.dim()),
                                     Matrix::Zero(1, t.third.dim())};
    return est;
  }
  const Scalar scale = normalizer(t.coeffs);
  Tensor3 unit = t;
  for (Scalar& s : unit.coeffs) s /= scale;
  const Decomposition3 init = initial_decomposition3(unit);
  const Eigen::Index r1 = init.first.rows(), r2 = init.third.rows();
  const Problem3 pb{KronSumMap(1, static_cast<int>(r1), t.first.basis()),
                    KronSumMap(static_cast<int>(r1), static_cast<int>(r2), t.second.basis()),
                    KronSumMap(static_cast<int>(r2), 1, t.third.basis()), r1, r2};
  const Three x0{init.first, init.middle, init.third};

  const std::function<Result3(int)> run = [&](int r) {
    auto rng = substream(opts.seed, "haagerup3", static_cast<std::uint64_t>(r));
    Three x = x0;
    if (r > 0)
      x = pb.move(x, gaussian_matrix(rng, static_cast<int>(r1), static_cast<int>(r1), 0.5),
                  gaussian_matrix(rng, static_cast<int>(r2), static_cast<int>(r2), 0.5));
    return descend3(pb, x, opts.iters, opts.tol);
  };
  const auto results = run_indexed(opts.restarts, opts.threads, run);
  Three best = x0;
  if (!results.empty()) {
    std::vector<double> values;
    for (const auto& res : results) {
      values.push_back(res.value);
      est.trace.iterations += res.iterations;
      est.trace.converged = est.trace.converged || res.converged;
    }
    best = results[static_cast<std::size_t>(best_index(values, false))].best;
  }
  est.trace.restarts_used = opts.restarts;
  Decomposition3 d{t, best.a, scale * best.m, best.c};
  est.value = decomposition3_value(d);
  est.certificate = std::move(d);
  return est;
}

}  // namespace opnorm
