#include "split_engine.hpp"

#include <cmath>

#include "opnorm/errors.hpp"

namespace opnorm::detail {

namespace {

// Flattened basis (row j = flatten(basis_j)) plus the block shape.
struct PreparedCost {
  Matrix rows;
  int p = 0;
  int q = 0;
  Stack stack = Stack::Vertical;

  explicit PreparedCost(const FactorCost& c) : stack(c.stack) {
    if (c.basis.empty()) throw InvalidInput("split engine: empty basis");
    p = static_cast<int>(c.basis.front().rows());
    q = static_cast<int>(c.basis.front().cols());
    rows.resize(static_cast<Eigen::Index>(c.basis.size()), p * q);
    for (std::size_t j = 0; j < c.basis.size(); ++j) rows.row(static_cast<Eigen::Index>(j)) = flatten(c.basis[j]).transpose();
  }

  Matrix stack_of(const Matrix& f) const {
    const Eigen::Index r = f.rows();
    Matrix out = stack == Stack::Vertical ? Matrix(r * p, q) : Matrix(p, r * q);
    for (Eigen::Index i = 0; i < r; ++i) {
      const Matrix block = unflatten((f.row(i) * rows).transpose(), p, q);
      if (stack == Stack::Vertical)
        out.block(i * p, 0, p, q) = block;
      else
        out.block(0, i * q, p, q) = block;
    }
    return out;
  }

  Matrix pullback(const Matrix& g, Eigen::Index r) const {
    Matrix out(r, rows.rows());
    for (Eigen::Index i = 0; i < r; ++i) {
      const Matrix block = stack == Stack::Vertical ? Matrix(g.block(i * p, 0, p, q)) : Matrix(g.block(0, i * q, p, q));
      out.row(i) = (rows.conjugate() * flatten(block)).transpose();
    }
    return out;
  }
};

struct PreparedHalf {
  PreparedCost p;
  PreparedCost q;
};

struct Point {
  double f = 0.0;       // sum of 1/2 (s_p^2 + s_q^2) with smoothed s
  double exact = 0.0;   // sum of exact products
  std::vector<double> sp, sq;
  std::vector<Matrix> gp, gq;  // gradients of f
};

Point evaluate(const std::vector<PreparedHalf>& prep, const std::vector<Half>& halves, double q,
               bool want_grad) {
  Point pt;
  for (std::size_t h = 0; h < halves.size(); ++h) {
    const SigmaEval ep = smooth_sigma(prep[h].p.stack_of(halves[h].p), q, want_grad);
    const SigmaEval eq = smooth_sigma(prep[h].q.stack_of(halves[h].q), q, want_grad);
    pt.f += 0.5 * (ep.smooth * ep.smooth + eq.smooth * eq.smooth);
    pt.exact += ep.exact * eq.exact;
    pt.sp.push_back(ep.smooth);
    pt.sq.push_back(eq.smooth);
    if (want_grad) {
      pt.gp.push_back(ep.smooth * prep[h].p.pullback(ep.grad, halves[h].p.rows()));
      pt.gq.push_back(eq.smooth * prep[h].q.pullback(eq.grad, halves[h].q.rows()));
    }
  }
  return pt;
}

Matrix vstack_all(const std::vector<Matrix>& parts) {
  Eigen::Index rows = 0;
  for (const Matrix& m : parts) rows += m.rows();
  Matrix out(rows, parts.front().cols());
  Eigen::Index at = 0;
  for (const Matrix& m : parts) {
    out.middleRows(at, m.rows()) = m;
    at += m.rows();
  }
  return out;
}

// Orthogonal projector onto {d : n d = 0}.
Matrix null_projector(const Matrix& n) {
  const Eigen::Index dim = n.cols();
  Matrix proj = Matrix::Identity(dim, dim);
  if (n.size() == 0) return proj;
  Eigen::JacobiSVD<Matrix> svd(n, Eigen::ComputeFullV);
  const RealVector& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return proj;
  for (Eigen::Index k = 0; k < s.size(); ++k)
    if (s(k) > kRankTolerance * s(0)) proj -= svd.matrixV().col(k) * svd.matrixV().col(k).adjoint();
  return proj;
}

void balance(std::vector<Half>& halves, const Point& pt) {
  for (std::size_t h = 0; h < halves.size(); ++h) {
    if (pt.sp[h] <= 0.0 || pt.sq[h] <= 0.0) continue;
    const double lambda = std::sqrt(pt.sq[h] / pt.sp[h]);
    halves[h].p *= lambda;
    halves[h].q /= lambda;
  }
}

}  // namespace

Scalar normalizer(const Matrix& c) {
  Eigen::Index bi = 0, bj = 0;
  c.cwiseAbs().maxCoeff(&bi, &bj);
  const Scalar pivot = c(bi, bj);
  return c.norm() * (pivot / std::abs(pivot));
}

Matrix factor_stack(const FactorCost& cost, const Matrix& p) { return PreparedCost(cost).stack_of(p); }

double factor_sigma(const FactorCost& cost, const Matrix& p) { return operator_norm(factor_stack(cost, p)); }

double split_value(const std::vector<HalfSpec>& specs, const std::vector<Half>& halves) {
  double v = 0.0;
  for (std::size_t h = 0; h < halves.size(); ++h)
    v += factor_sigma(specs[h].p, halves[h].p) * factor_sigma(specs[h].q, halves[h].q);
  return v;
}

double split_residual(const Matrix& target, const std::vector<Half>& halves) {
  Matrix sum = -target;
  for (const Half& h : halves) sum += h.p.transpose() * h.q;
  return sum.norm();
}

Half svd_half(const Matrix& c, int rows, double pad_scale, std::mt19937_64& rng) {
  Eigen::JacobiSVD<Matrix> svd(c, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RealVector& s = svd.singularValues();
  int rank = 0;
  if (s.size() && s(0) > 0.0)
    for (Eigen::Index k = 0; k < s.size(); ++k)
      if (s(k) > kRankTolerance * s(0)) ++rank;
  const int r = std::max({rows, rank, 1});
  Half h;
  h.p = Matrix::Zero(r, c.rows());
  h.q = Matrix::Zero(r, c.cols());
  for (int k = 0; k < rank; ++k) {
    const double root = std::sqrt(s(k));
    // p^T q = sum_k u_k s_k v_k^*, so row k of p is root * u_k^T and of q is root * v_k^*.
    h.p.row(k) = root * svd.matrixU().col(k).transpose();
    h.q.row(k) = root * svd.matrixV().col(k).adjoint();
  }
  if (r > rank && pad_scale > 0.0)
    h.p.bottomRows(r - rank) = gaussian_matrix(rng, r - rank, static_cast<int>(c.rows()), pad_scale);
  return h;
}

void reparametrize(Half& h, const Matrix& generator) {
  h.p = expm(generator) * h.p;
  h.q = expm(Matrix(-generator.transpose())) * h.q;
}

SplitResult descend_split(const std::vector<HalfSpec>& specs, const Matrix& target,
                          std::vector<Half> start, int max_iters, double tol) {
  std::vector<PreparedHalf> prep;
  for (const HalfSpec& s : specs) prep.push_back({PreparedCost(s.p), PreparedCost(s.q)});

  const double residual_cap = 1e-11 * std::max(1.0, target.norm());
  SplitResult best;
  best.halves = start;
  best.value = evaluate(prep, start, 0.0, false).exact;

  std::vector<Half> cur = std::move(start);
  auto record = [&](const std::vector<Half>& hs, double exact) {
    if (exact < best.value && split_residual(target, hs) <= residual_cap) {
      best.value = exact;
      best.halves = hs;
    }
  };

  // Armijo step along `dir` produced by `apply(step)`; returns the accepted point.
  auto line_search = [&](double& step, double slope, const Point& at, double q,
                         const auto& apply) -> std::pair<bool, std::vector<Half>> {
    for (int bt = 0; bt < 40 && step > 1e-14; ++bt) {
      std::vector<Half> trial = apply(step);
      const Point tp = evaluate(prep, trial, q, false);
      if (std::isfinite(tp.f) && tp.f <= at.f - 1e-4 * step * slope) {
        step *= 2.0;
        return {true, std::move(trial)};
      }
      step *= 0.5;
    }
    return {false, {}};
  };

  // Continuation: each smoothing stage gets an equal share of the budget and
  // may end early; only the last stage has to meet the stopping rule.
  const auto& schedule = smoothing_schedule();
  long it = 0;
  bool stage_done = false;
  for (std::size_t stage = 0; stage < schedule.size(); ++stage) {
    const double q = schedule[stage];
    const long stage_end =
        stage + 1 == schedule.size() ? max_iters : it + max_iters / static_cast<long>(schedule.size());
    double step_t = 0.1, step_p = 0.1, step_q = 0.1;
    stage_done = false;
    while (it < stage_end) {
      ++it;
      Point pt = evaluate(prep, cur, q, true);
      const double f0 = pt.f;
      bool moved = false;

      // Reparametrization of each half; keeps every product P_h^T Q_h.
      {
        std::vector<Matrix> gt;
        double slope = 0.0;
        for (std::size_t h = 0; h < cur.size(); ++h) {
          Matrix g = pt.gp[h] * cur[h].p.adjoint() - (cur[h].q * pt.gq[h].adjoint()).conjugate();
          slope += g.squaredNorm();
          gt.push_back(std::move(g));
        }
        if (slope > 1e-28) {
          auto [ok, next] = line_search(step_t, slope, pt, q, [&](double s) {
            std::vector<Half> trial = cur;
            for (std::size_t h = 0; h < trial.size(); ++h) reparametrize(trial[h], Matrix(-s * gt[h]));
            return trial;
          });
          if (ok) {
            cur = std::move(next);
            moved = true;
            pt = evaluate(prep, cur, q, true);
          }
        }
      }

      // Moves of the Q factors (then the P factors) inside the constraint's null space.
      for (int side = 0; side < 2; ++side) {
        std::vector<Matrix> fixed, grads;
        for (std::size_t h = 0; h < cur.size(); ++h) {
          fixed.push_back(side == 0 ? cur[h].p : cur[h].q);
          grads.push_back(side == 0 ? pt.gq[h] : pt.gp[h]);
        }
        const Matrix proj = null_projector(vstack_all(fixed).transpose());
        const Matrix dir = -(proj * vstack_all(grads));
        const double slope = dir.squaredNorm();
        if (slope <= 1e-28) continue;
        double& step = side == 0 ? step_q : step_p;
        auto [ok, next] = line_search(step, slope, pt, q, [&](double s) {
          std::vector<Half> trial = cur;
          Eigen::Index at = 0;
          for (Half& h : trial) {
            Matrix& m = side == 0 ? h.q : h.p;
            m += s * dir.middleRows(at, m.rows());
            at += m.rows();
          }
          return trial;
        });
        if (ok) {
          cur = std::move(next);
          moved = true;
          pt = evaluate(prep, cur, q, true);
        }
      }

      balance(cur, pt);
      const Point after = evaluate(prep, cur, q, false);
      record(cur, after.exact);
      if (!moved || f0 - after.f <= tol * std::max(f0, 1e-300)) {
        stage_done = true;
        break;
      }
    }
  }
  best.iterations = it;
  best.converged = stage_done;
  return best;
}

}  // namespace opnorm::detail
