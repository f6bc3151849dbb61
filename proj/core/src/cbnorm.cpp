#include "opnorm/cbnorm.hpp"

#include <algorithm>
#include <cmath>

#include "opnorm/errors.hpp"

namespace opnorm {

const char* to_string(BoundKind kind) {
  switch (kind) {
    case BoundKind::Upper: return "upper";
    case BoundKind::Lower: return "lower";
    case BoundKind::Exact: return "exact";
  }
  return "unknown";
}

LevelProblem::LevelProblem(const SpaceMap& u, int level)
    : level_(level),
      numerator_(level, level, u.images()),
      denominator_(level, level, u.domain.basis()) {
  if (level < 1) throw InvalidInput("level_norm: level must be positive");
}

double LevelProblem::ratio(const Vector& z) const {
  const double den = operator_norm(denominator_.apply(z));
  if (den == 0.0) return 0.0;
  return operator_norm(numerator_.apply(z)) / den;
}

Vector LevelProblem::normalize(const Vector& z) const {
  const double den = operator_norm(denominator_.apply(z));
  return den > 0.0 ? Vector(z / den) : z;
}

std::vector<Matrix> LevelProblem::blocks(const Vector& z) const {
  std::vector<Matrix> out;
  const int kk = level_ * level_;
  for (int i = 0; i * kk < z.size(); ++i)
    out.push_back(unflatten(z.segment(i * kk, kk), level_, level_));
  return out;
}

Vector LevelProblem::pack(const std::vector<Matrix>& blocks) const {
  Vector z = Vector::Zero(dim());
  const int kk = level_ * level_;
  for (std::size_t i = 0; i < blocks.size() && static_cast<int>(i) * kk < dim(); ++i) {
    const Matrix& b = blocks[i];
    Matrix padded = Matrix::Zero(level_, level_);
    const Eigen::Index r = std::min<Eigen::Index>(b.rows(), level_);
    const Eigen::Index c = std::min<Eigen::Index>(b.cols(), level_);
    padded.topLeftCorner(r, c) = b.topLeftCorner(r, c);
    z.segment(static_cast<Eigen::Index>(i) * kk, kk) = flatten(padded);
  }
  return z;
}

LevelProblem::Ascent LevelProblem::ascend(Vector z, int max_iters, double tol,
                                          std::mt19937_64& rng) const {
  Ascent best;
  z = normalize(z);
  best.z = z;
  best.ratio = ratio(z);
  if (max_iters <= 0) return best;

  struct Point {
    double f = -INFINITY;
    double exact = 0.0;
    Vector grad;
  };
  auto eval = [&](const Vector& x, double q, bool want_grad) {
    Point p;
    const SigmaEval num = smooth_sigma(numerator_.apply(x), 0.0, want_grad);
    const SigmaEval den = smooth_sigma(denominator_.apply(x), q, want_grad);
    if (num.exact <= 0.0 || den.smooth <= 0.0) return p;
    p.f = std::log(num.exact) - std::log(den.smooth);
    p.exact = num.exact / den.exact;
    if (want_grad)
      p.grad = numerator_.pullback(num.grad) / num.exact - denominator_.pullback(den.grad) / den.smooth;
    return p;
  };

  long it = 0;
  bool all_stages_done = true;
  for (double q : smoothing_schedule()) {
    Point cur = eval(z, q, true);
    if (!std::isfinite(cur.f)) {
      z = normalize(z + gaussian_matrix(rng, static_cast<int>(z.size()), 1, 1e-3 * z.norm() + 1e-12));
      cur = eval(z, q, true);
      if (!std::isfinite(cur.f)) continue;
    }
    double step = 0.1 * z.norm() / std::max(cur.grad.norm(), 1e-300);
    bool perturbed = false;
    bool stage_done = false;
    while (it < max_iters) {
      ++it;
      const double gnorm2 = cur.grad.squaredNorm();
      bool accepted = false;
      Point next;
      Vector trial;
      for (int bt = 0; bt < 40 && step * std::sqrt(gnorm2) > 1e-14 * z.norm(); ++bt) {
        trial = normalize(z + step * cur.grad);
        next = eval(trial, q, true);
        if (std::isfinite(next.f) && next.f >= cur.f + 1e-4 * step * gnorm2) {
          accepted = true;
          break;
        }
        step *= 0.5;
      }
      if (!accepted) {
        if (perturbed) {
          stage_done = true;
          break;
        }
        // Near-degenerate top singular value: nudge and retry once.
        perturbed = true;
        z = normalize(z + gaussian_matrix(rng, static_cast<int>(z.size()), 1, 1e-7 * z.norm()));
        cur = eval(z, q, true);
        step = 0.1 * z.norm() / std::max(cur.grad.norm(), 1e-300);
        continue;
      }
      const double gain = next.f - cur.f;
      z = trial;
      cur = next;
      if (cur.exact > best.ratio) {
        best.ratio = cur.exact;
        best.z = z;
      }
      step *= 2.0;
      if (gain < tol) {
        stage_done = true;
        break;
      }
    }
    if (!stage_done) {
      all_stages_done = false;
      break;
    }
  }
  best.iterations = it;
  best.converged = all_stages_done;
  best.z = normalize(best.z);
  best.ratio = ratio(best.z);
  return best;
}

double evaluate_level_witness(const SpaceMap& u, const LevelWitness& witness) {
  LevelProblem problem(u, witness.level);
  return problem.ratio(problem.pack(witness.blocks));
}

int smith_level(const SpaceMap& u) {
  return std::max(u.codomain.ambient_rows(), u.codomain.ambient_cols());
}

NormEstimate level_norm(const SpaceMap& u, int k, const CbOptions& opts) {
  NormEstimate est;
  est.bound_kind = BoundKind::Lower;
  est.trace.seed = opts.seed;
  est.trace.path = "level_norm@" + std::to_string(k);
  LevelProblem problem(u, k);
  if (u.is_zero()) {
    est.bound_kind = BoundKind::Exact;
    est.trace.converged = true;
    est.certificate = LevelWitness{k, problem.blocks(problem.normalize(Vector::Ones(problem.dim())))};
    return est;
  }

  const std::function<LevelProblem::Ascent(int)> run = [&](int r) {
    auto rng = substream(opts.seed, "level_norm", static_cast<std::uint64_t>(r));
    Vector z = gaussian_matrix(rng, problem.dim(), 1);
    if (r == 0 && opts.warm_start) {
      const Vector warm = problem.pack(*opts.warm_start);
      if (warm.norm() > 0.0) z = warm;
    }
    return problem.ascend(z, opts.iters, opts.tol, rng);
  };
  const auto results = run_indexed(opts.restarts, opts.threads, run);

  std::vector<double> values;
  for (const auto& res : results) {
    values.push_back(res.ratio);
    est.trace.iterations += res.iterations;
    est.trace.converged = est.trace.converged || res.converged;
  }
  est.trace.restarts_used = opts.restarts;
  const int best = best_index(values, true);
  if (best < 0) {
    est.value = 0.0;
    est.certificate = LevelWitness{k, problem.blocks(Vector::Zero(problem.dim()))};
    return est;
  }
  const auto& winner = results[static_cast<std::size_t>(best)];
  est.value = winner.ratio;
  est.certificate = LevelWitness{k, problem.blocks(winner.z)};
  return est;
}

Matrix hilbertian_stack(const std::vector<Matrix>& images, HilbertKind domain_kind) {
  if (images.empty()) throw InvalidInput("hilbertian domain: no images");
  const Eigen::Index p = images.front().rows();
  const Eigen::Index q = images.front().cols();
  for (const Matrix& y : images)
    if (y.rows() != p || y.cols() != q) throw ShapeMismatch("hilbertian domain: image shapes differ");
  const Eigen::Index n = static_cast<Eigen::Index>(images.size());
  Matrix stack = domain_kind == HilbertKind::Row ? Matrix(n * p, q) : Matrix(p, n * q);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (domain_kind == HilbertKind::Row)
      stack.block(i * p, 0, p, q) = images[static_cast<std::size_t>(i)];
    else
      stack.block(0, i * q, p, q) = images[static_cast<std::size_t>(i)];
  }
  return stack;
}

NormEstimate cb_norm_hilbertian_domain(const std::vector<Matrix>& images, HilbertKind domain_kind) {
  NormEstimate est;
  est.bound_kind = BoundKind::Exact;
  est.value = operator_norm(hilbertian_stack(images, domain_kind));
  est.certificate = ClosedFormWitness{domain_kind, images};
  est.trace.converged = true;
  est.trace.path = domain_kind == HilbertKind::Row ? "closed_form_row" : "closed_form_column";
  return est;
}

std::vector<Matrix> hilbertian_images(const SpaceMap& u) {
  const Matrix t = orthonormalizer(u.domain);
  const std::vector<Matrix> raw = u.images();
  std::vector<Matrix> out;
  for (int j = 0; j < u.domain.dim(); ++j) {
    Matrix y = Matrix::Zero(u.codomain.ambient_rows(), u.codomain.ambient_cols());
    for (int i = 0; i < u.domain.dim(); ++i) y += t(j, i) * raw[static_cast<std::size_t>(i)];
    out.push_back(std::move(y));
  }
  return out;
}

NormEstimate cb_norm(const SpaceMap& u, const CbOptions& opts) {
  if (u.is_zero()) {
    NormEstimate est;
    est.bound_kind = BoundKind::Exact;
    est.trace.converged = true;
    est.trace.seed = opts.seed;
    est.trace.path = "zero";
    return est;
  }
  if (const auto kind = u.domain.hilbert_kind()) {
    NormEstimate est = cb_norm_hilbertian_domain(hilbertian_images(u), *kind);
    est.trace.seed = opts.seed;
    return est;
  }
  return level_norm(u, smith_level(u), opts);
}

}  // namespace opnorm
