#include "opnorm/factornorms.hpp"

#include <cmath>
#include <limits>

#include "opnorm/errors.hpp"
#include "split_engine.hpp"

namespace opnorm {

namespace {

using detail::FactorCost;
using detail::Half;
using detail::HalfSpec;
using detail::Stack;

ConcreteOperatorSpace through_space(HilbertKind kind, int k) {
  return standard_space(kind == HilbertKind::Row ? StandardKind::Row : StandardKind::Column, k);
}

// Cost of the second leg R_k -> F (vertical stack of the images) or C_k -> F (horizontal).
FactorCost second_leg_cost(const SpaceMap& u, HilbertKind through) {
  return {u.codomain.basis(), through == HilbertKind::Row ? Stack::Vertical : Stack::Horizontal};
}

// For a row or column domain in orthonormal coordinates, the first leg's cb norm
// is the operator or Hilbert-Schmidt norm of its coefficient matrix.
HalfSpec hilbert_spec(const SpaceMap& u, HilbertKind domain, HilbertKind through) {
  return {FactorCost{through_space(through, u.domain.dim()).basis(),
                     domain == HilbertKind::Row ? Stack::Vertical : Stack::Horizontal},
          second_leg_cost(u, through)};
}

struct Frame {
  Matrix target;    // dim(E) x dim(F); a half (P, Q) with P^T Q = target factors u
  Matrix to_basis;  // first-leg coefficients are P * to_basis
  Scalar scale;
};

Frame make_frame(const SpaceMap& u) {
  Frame f;
  f.scale = detail::normalizer(u.coeffs);
  const Matrix unit = u.coeffs / f.scale;
  if (u.domain.hilbert_kind()) {
    const Matrix t = orthonormalizer(u.domain);
    f.target = t * unit.transpose();
    f.to_basis = t.inverse().transpose();
  } else {
    f.target = unit.transpose();
    f.to_basis = Matrix::Identity(u.domain.dim(), u.domain.dim());
  }
  return f;
}

Factorization to_factorization(const SpaceMap& u, HilbertKind through, const Frame& frame, const Half& h) {
  const int k = static_cast<int>(h.p.rows());
  const auto mid = through_space(through, k);
  Factorization f;
  f.through = through;
  f.k = k;
  f.first_leg = make_map(u.domain, mid, h.p * frame.to_basis);
  f.second_leg = make_map(mid, u.codomain, frame.scale * h.q.transpose());
  f.second_cb = cb_norm(f.second_leg).value;
  f.residual = (compose(f) - u.coeffs).norm();
  return f;
}

int intermediate_dim(const Matrix& target, int slack) { return std::max(1, numerical_rank(target) + slack); }

NormEstimate zero_estimate(const OptimizerOptions& opts, const char* path) {
  NormEstimate est;
  est.bound_kind = BoundKind::Exact;
  est.trace.seed = opts.seed;
  est.trace.converged = true;
  est.trace.path = path;
  return est;
}

// Row or column domain: both legs have closed forms and the search is one
// smooth descent over reparametrizations.
NormEstimate gamma_hilbertian(const SpaceMap& u, HilbertKind through, const FactorOptions& opts) {
  NormEstimate est;
  est.bound_kind = BoundKind::Upper;
  est.trace.seed = opts.seed;
  est.trace.path = through == HilbertKind::Row ? "gamma_row" : "gamma_column";
  const Frame frame = make_frame(u);
  const int k = intermediate_dim(frame.target, opts.rank_slack);
  const std::vector<HalfSpec> specs{hilbert_spec(u, *u.domain.hilbert_kind(), through)};
  const std::function<detail::SplitResult(int)> run = [&](int r) {
    auto rng = substream(opts.seed, est.trace.path, static_cast<std::uint64_t>(r));
    Half h = detail::svd_half(frame.target, k, 0.0, rng);
    if (r > 0) detail::reparametrize(h, gaussian_matrix(rng, k, k, 0.5));
    return detail::descend_split(specs, frame.target, {h}, opts.iters, opts.tol);
  };
  const auto results = run_indexed(opts.restarts, opts.threads, run);
  Half best;
  if (results.empty()) {
    std::mt19937_64 unused(0);
    best = detail::svd_half(frame.target, k, 0.0, unused);
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
  Factorization f = to_factorization(u, through, frame, best);
  f.first_cb = cb_norm(f.first_leg).value;
  est.value = f.first_cb * f.second_cb;
  est.certificate = std::move(f);
  return est;
}

// General domain: the first leg's cb norm is a supremum over level-k inputs.
// Alternate between a witness for that supremum and a descent of the resulting
// closed-form surrogate, then re-estimate the first leg from scratch.
NormEstimate gamma_general(const SpaceMap& u, HilbertKind through, const FactorOptions& opts) {
  NormEstimate est;
  est.bound_kind = BoundKind::Upper;
  est.trace.seed = opts.seed;
  est.trace.path = through == HilbertKind::Row ? "gamma_row_levels" : "gamma_column_levels";
  const Frame frame = make_frame(u);
  const int k = intermediate_dim(frame.target, opts.rank_slack);
  const int level = k;  // Smith level of a map into R_k or C_k
  const int rounds = 3;
  const int inner = std::max(20, opts.iters / 8);

  struct Candidate {
    Factorization f;
    double value = std::numeric_limits<double>::infinity();
    long iterations = 0;
    bool converged = false;
  };
  auto assess = [&](const Half& h, const std::optional<std::vector<Matrix>>& warm, Candidate& c) {
    Factorization f = to_factorization(u, through, frame, h);
    CbOptions cb = opts.first_leg;
    cb.seed = opts.seed;
    cb.threads = 1;
    cb.warm_start = warm;
    const NormEstimate first = level_norm(f.first_leg, level, cb);
    c.iterations += first.trace.iterations;
    f.first_cb = first.value * kCbInflation;
    const double v = f.first_cb * f.second_cb;
    if (v < c.value) {
      c.value = v;
      c.f = std::move(f);
    }
  };

  const std::function<Candidate(int)> run = [&](int r) {
    auto rng = substream(opts.seed, est.trace.path, static_cast<std::uint64_t>(r));
    Half h = detail::svd_half(frame.target, k, 0.0, rng);
    if (r > 0) detail::reparametrize(h, gaussian_matrix(rng, k, k, 0.5));
    Candidate c;
    assess(h, std::nullopt, c);
    std::optional<Vector> witness;
    bool settled = false;
    for (int round = 0; round < rounds; ++round) {
      const Factorization f = to_factorization(u, through, frame, h);
      const LevelProblem lp(f.first_leg, level);
      const Vector z0 = witness ? *witness : Vector(gaussian_matrix(rng, lp.dim(), 1));
      const auto asc = lp.ascend(z0, inner, opts.tol, rng);
      witness = asc.z;
      c.iterations += asc.iterations;
      // Blocks of the witness expressed against the half's P coordinates.
      const std::vector<Matrix> blocks = lp.blocks(asc.z);
      std::vector<Matrix> mixed;
      for (int j = 0; j < u.domain.dim(); ++j) {
        Matrix x = Matrix::Zero(level, level);
        for (int i = 0; i < u.domain.dim(); ++i) x += frame.to_basis(j, i) * blocks[static_cast<std::size_t>(i)];
        mixed.push_back(std::move(x));
      }
      const std::vector<HalfSpec> specs{
          {FactorCost{mixed, through == HilbertKind::Row ? Stack::Horizontal : Stack::Vertical},
           second_leg_cost(u, through)}};
      // The last round gets the full budget so that its stopping rule can be met.
      const int budget = round + 1 == rounds ? opts.iters : inner;
      const auto res = detail::descend_split(specs, frame.target, {h}, budget, opts.tol);
      c.iterations += res.iterations;
      settled = res.converged;
      h = res.halves.front();
    }
    c.converged = settled;
    assess(h, witness ? std::optional<std::vector<Matrix>>(LevelProblem(
                            to_factorization(u, through, frame, h).first_leg, level).blocks(*witness))
                      : std::nullopt,
           c);
    return c;
  };
  auto results = run_indexed(opts.restarts, opts.threads, run);
  if (results.empty()) {
    std::mt19937_64 unused(0);
    Candidate c;
    assess(detail::svd_half(frame.target, k, 0.0, unused), std::nullopt, c);
    results.push_back(std::move(c));
    est.trace.converged = false;
  } else {
    for (const auto& c : results) {
      est.trace.iterations += c.iterations;
      est.trace.converged = est.trace.converged || c.converged;
    }
  }
  est.trace.restarts_used = opts.restarts;
  std::vector<double> values;
  for (const auto& c : results) values.push_back(c.value);
  auto& best = results[static_cast<std::size_t>(best_index(values, false))];
  est.value = best.value;
  est.certificate = std::move(best.f);
  return est;
}

double factorization_value(const Factorization& f) { return f.first_cb * f.second_cb; }

}  // namespace

Matrix compose(const Factorization& f) { return f.second_leg.coeffs * f.first_leg.coeffs; }

NormEstimate gamma_rc(const SpaceMap& u, HilbertKind kind, const FactorOptions& opts) {
  if (opts.rank_slack < 0) throw InvalidInput("gamma: rank_slack must be nonnegative");
  if (u.is_zero()) return zero_estimate(opts, kind == HilbertKind::Row ? "gamma_row" : "gamma_column");
  return u.domain.hilbert_kind() ? gamma_hilbertian(u, kind, opts) : gamma_general(u, kind, opts);
}

NormEstimate split_norm(const SpaceMap& u, const FactorOptions& opts) {
  if (u.is_zero()) return zero_estimate(opts, "split");
  NormEstimate est;
  est.bound_kind = BoundKind::Upper;
  est.trace.seed = opts.seed;
  est.trace.path = "split";

  const NormEstimate gr = gamma_rc(u, HilbertKind::Row, opts);
  const NormEstimate gc = gamma_rc(u, HilbertKind::Column, opts);
  for (const NormEstimate* g : {&gr, &gc}) {
    est.trace.iterations += g->trace.iterations;
    est.trace.converged = est.trace.converged || g->trace.converged;
  }
  SplitFactorization best_split;
  if (gr.value <= gc.value) {
    est.value = gr.value;
    best_split.row_part = std::get<Factorization>(gr.certificate);
  } else {
    est.value = gc.value;
    best_split.column_part = std::get<Factorization>(gc.certificate);
  }
  est.trace.restarts_used = opts.restarts;

  if (const auto domain = u.domain.hilbert_kind()) {
    const Frame frame = make_frame(u);
    const int k = std::max(1, std::min(u.domain.dim(), u.codomain.dim()) + opts.rank_slack);
    const std::vector<HalfSpec> specs{hilbert_spec(u, *domain, HilbertKind::Row),
                                      hilbert_spec(u, *domain, HilbertKind::Column)};
    const Matrix& c = frame.target;
    const std::function<detail::SplitResult(int)> run = [&](int r) {
      auto rng = substream(opts.seed, "split", static_cast<std::uint64_t>(r));
      const double pad = 1e-3 / std::sqrt(static_cast<double>(c.size()));
      std::vector<Half> start(2);
      if (r <= 1) {
        const int full = r == 0 ? 0 : 1;
        start[static_cast<std::size_t>(full)] = detail::svd_half(c, k, 0.0, rng);
        Half& empty = start[static_cast<std::size_t>(1 - full)];
        empty.p = gaussian_matrix(rng, k, static_cast<int>(c.rows()), pad);
        empty.q = Matrix::Zero(k, c.cols());
      } else {
        Matrix v = c / 2.0;
        if (r > 2) v += gaussian_matrix(rng, static_cast<int>(c.rows()), static_cast<int>(c.cols()),
                                        0.5 / std::sqrt(static_cast<double>(c.size())));
        start[0] = detail::svd_half(v, k, pad, rng);
        start[1] = detail::svd_half(Matrix(c - v), k, pad, rng);
        if (r > 2)
          for (Half& h : start) detail::reparametrize(h, gaussian_matrix(rng, k, k, 0.3));
      }
      return detail::descend_split(specs, c, std::move(start), opts.iters, opts.tol);
    };
    const auto results = run_indexed(opts.restarts, opts.threads, run);
    for (const auto& res : results) {
      est.trace.iterations += res.iterations;
      est.trace.converged = est.trace.converged || res.converged;
      SplitFactorization s;
      double value = 0.0;
      const HilbertKind kinds[2] = {HilbertKind::Row, HilbertKind::Column};
      for (int h = 0; h < 2; ++h) {
        const Half& half = res.halves[static_cast<std::size_t>(h)];
        if ((half.p.transpose() * half.q).norm() <= 1e-14 && (half.q.norm() == 0.0 || half.p.norm() == 0.0))
          continue;
        Factorization f = to_factorization(u, kinds[h], frame, half);
        f.first_cb = cb_norm(f.first_leg).value;
        value += factorization_value(f);
        (h == 0 ? s.row_part : s.column_part) = std::move(f);
      }
      if (value < est.value) {
        est.value = value;
        best_split = std::move(s);
      }
    }
  } else {
    FactorOptions inner = opts;
    inner.restarts = std::min(opts.restarts, 2);
    const int seeds = std::max(0, opts.restarts - 2);
    for (int r = 0; r < seeds; ++r) {
      auto rng = substream(opts.seed, "split_levels", static_cast<std::uint64_t>(r));
      Matrix v = u.coeffs / 2.0;
      if (r > 0)
        v += gaussian_matrix(rng, static_cast<int>(v.rows()), static_cast<int>(v.cols()),
                             0.5 * u.coeffs.norm() / std::sqrt(static_cast<double>(v.size())));
      const NormEstimate a = gamma_rc(make_map(u.domain, u.codomain, v), HilbertKind::Row, inner);
      const NormEstimate b = gamma_rc(make_map(u.domain, u.codomain, Matrix(u.coeffs - v)), HilbertKind::Column, inner);
      est.trace.iterations += a.trace.iterations + b.trace.iterations;
      if (a.value + b.value < est.value) {
        est.value = a.value + b.value;
        SplitFactorization s;
        if (const auto* f = std::get_if<Factorization>(&a.certificate)) s.row_part = *f;
        if (const auto* f = std::get_if<Factorization>(&b.certificate)) s.column_part = *f;
        best_split = std::move(s);
      }
    }
  }
  est.certificate = std::move(best_split);
  return est;
}

// ---------------------------------------------------------------------------
// gamma_2 between sup-norm spaces

namespace {

std::vector<RealVector> sign_vectors(int n) {
  std::vector<RealVector> out;
  const std::uint32_t count = n > 0 ? (1u << (n - 1)) : 1u;  // s and -s give the same norm
  for (std::uint32_t mask = 0; mask < count; ++mask) {
    RealVector s(n);
    for (int j = 0; j < n; ++j) s(j) = (j > 0 && ((mask >> (j - 1)) & 1u)) ? -1.0 : 1.0;
    out.push_back(std::move(s));
  }
  return out;
}

// (sum x_i^p)^{1/p} with weights (x_i / F)^{p-1}.
double smooth_max(const std::vector<double>& x, double p, std::vector<double>* weights) {
  double top = 0.0;
  for (double v : x) top = std::max(top, v);
  if (top <= 0.0) {
    if (weights) weights->assign(x.size(), 0.0);
    return 0.0;
  }
  double acc = 0.0;
  for (double v : x) acc += std::pow(v / top, p);
  const double f = top * std::pow(acc, 1.0 / p);
  if (weights) {
    weights->resize(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) (*weights)[i] = std::pow(x[i] / f, p - 1.0);
  }
  return f;
}

struct Gamma2Problem {
  std::vector<RealVector> signs;

  struct Point {
    double f = std::numeric_limits<double>::infinity();
    double exact = 0.0;
    Matrix g;  // gradient with respect to the generator
  };

  Point eval(const Matrix& a, const Matrix& b, double p, bool want_grad) const {
    Point out;
    std::vector<double> xs, ys;
    std::vector<Vector> as;
    for (const RealVector& s : signs) {
      Vector v = a * s.cast<Scalar>();
      xs.push_back(v.squaredNorm());
      as.push_back(std::move(v));
    }
    for (Eigen::Index i = 0; i < b.rows(); ++i) ys.push_back(b.row(i).squaredNorm());
    std::vector<double> wx, wy;
    const double f1 = smooth_max(xs, p, want_grad ? &wx : nullptr);
    const double f2 = smooth_max(ys, p, want_grad ? &wy : nullptr);
    double mx = 0.0, my = 0.0;
    for (double v : xs) mx = std::max(mx, v);
    for (double v : ys) my = std::max(my, v);
    out.exact = std::sqrt(mx * my);
    if (f1 <= 0.0 || f2 <= 0.0) return out;
    out.f = 0.5 * (std::log(f1) + std::log(f2));
    if (!want_grad) return out;
    Matrix ga = Matrix::Zero(a.rows(), a.cols());
    for (std::size_t s = 0; s < signs.size(); ++s) ga += (wx[s] / f1) * as[s] * signs[s].cast<Scalar>().transpose();
    Matrix gb = Matrix::Zero(b.rows(), b.cols());
    for (Eigen::Index i = 0; i < b.rows(); ++i) gb.row(i) = (wy[static_cast<std::size_t>(i)] / f2) * b.row(i);
    out.g = ga * a.adjoint() - b.adjoint() * gb;
    return out;
  }
};

struct Gamma2Run {
  Matrix a, b;
  double value = 0.0;
  long iterations = 0;
  bool converged = false;
};

Gamma2Run descend_gamma2(const Gamma2Problem& pb, Matrix a, Matrix b, int max_iters, double tol) {
  Gamma2Run out{a, b, pb.eval(a, b, 0.0, false).exact};
  long it = 0;
  bool all_done = true;
  for (double p : smoothing_schedule()) {
    double step = 0.1;
    bool stage_done = false;
    while (it < max_iters) {
      ++it;
      const auto cur = pb.eval(a, b, p, true);
      const double slope = cur.g.squaredNorm();
      if (!std::isfinite(cur.f) || slope <= 1e-28) {
        stage_done = true;
        break;
      }
      bool accepted = false;
      double gain = 0.0;
      for (int bt = 0; bt < 40 && step > 1e-14; ++bt) {
        const Matrix na = expm(Matrix(-step * cur.g)) * a;
        const Matrix nb = b * expm(Matrix(step * cur.g));
        const auto next = pb.eval(na, nb, p, false);
        if (std::isfinite(next.f) && next.f <= cur.f - 1e-4 * step * slope) {
          gain = cur.f - next.f;
          a = na;
          b = nb;
          if (next.exact < out.value) {
            out.value = next.exact;
            out.a = a;
            out.b = b;
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

double inf_to_two_norm(const Matrix& a) {
  double best = 0.0;
  for (const RealVector& s : sign_vectors(static_cast<int>(a.cols())))
    best = std::max(best, (a * s.cast<Scalar>()).norm());
  return best;
}

double two_to_inf_norm(const Matrix& b) {
  double best = 0.0;
  for (Eigen::Index i = 0; i < b.rows(); ++i) best = std::max(best, b.row(i).norm());
  return best;
}

NormEstimate gamma2_linf(const Matrix& m, const OptimizerOptions& opts) {
  require_finite(m, "gamma2_linf");
  if (m.cols() > 12) throw DimensionTooLarge("gamma2_linf: at most 12 columns");
  if (m.size() == 0) throw ShapeMismatch("gamma2_linf: empty matrix");
  NormEstimate est;
  est.trace.seed = opts.seed;
  est.trace.path = "gamma2_linf";
  if (m.cwiseAbs().maxCoeff() == 0.0) {
    est.bound_kind = BoundKind::Exact;
    est.trace.converged = true;
    est.certificate = Gamma2Factorization{Matrix::Zero(1, m.cols()), Matrix::Zero(m.rows(), 1), 0.0, 0.0};
    return est;
  }
  est.bound_kind = BoundKind::Upper;
  const int n = static_cast<int>(m.cols());
  const Gamma2Problem pb{sign_vectors(n)};

  auto start = [&](int r, std::mt19937_64& rng) -> std::pair<Matrix, Matrix> {
    if (r == 1) {
      Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
      const int k = numerical_rank(m);
      const RealVector root = svd.singularValues().head(k).cwiseSqrt();
      return {root.cast<Scalar>().asDiagonal() * svd.matrixV().leftCols(k).adjoint(),
              svd.matrixU().leftCols(k) * root.cast<Scalar>().asDiagonal()};
    }
    Matrix a = Matrix::Identity(n, n), b = m;
    if (r > 1) {
      const Matrix g = gaussian_matrix(rng, n, n, 0.5);
      a = expm(g) * a;
      b = b * expm(Matrix(-g));
    }
    return {a, b};
  };
  const std::function<Gamma2Run(int)> run = [&](int r) {
    auto rng = substream(opts.seed, "gamma2", static_cast<std::uint64_t>(r));
    auto [a, b] = start(r, rng);
    return descend_gamma2(pb, a, b, opts.iters, opts.tol);
  };
  auto results = run_indexed(opts.restarts, opts.threads, run);
  if (results.empty()) {
    std::mt19937_64 unused(0);
    auto [a, b] = start(0, unused);
    results.push_back(Gamma2Run{a, b, pb.eval(a, b, 0.0, false).exact});
  } else {
    for (const auto& res : results) {
      est.trace.iterations += res.iterations;
      est.trace.converged = est.trace.converged || res.converged;
    }
  }
  est.trace.restarts_used = opts.restarts;
  std::vector<double> values;
  for (const auto& res : results) values.push_back(res.value);
  const auto& best = results[static_cast<std::size_t>(best_index(values, false))];
  Gamma2Factorization f{best.a, best.b, inf_to_two_norm(best.a), two_to_inf_norm(best.b)};
  est.value = f.inf_to_two * f.two_to_inf;
  est.certificate = std::move(f);
  return est;
}

}  // namespace opnorm
