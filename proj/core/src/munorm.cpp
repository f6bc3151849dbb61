#include "opnorm/munorm.hpp"

#include <cmath>

#include "opnorm/errors.hpp"
#include "split_engine.hpp"

namespace opnorm {

const char* to_string(SampleProvenance p) {
  switch (p) {
    case SampleProvenance::TensorSplit: return "tensor_split";
    case SampleProvenance::CommutantSampled: return "commutant_sampled";
    case SampleProvenance::Theorem2Block: return "theorem2_block";
  }
  return "unknown";
}

FactorOptions factor_options(const MuOptions& opts) {
  FactorOptions f;
  f.restarts = opts.restarts;
  f.iters = opts.iters;
  f.seed = opts.seed;
  f.tol = opts.tol;
  f.threads = opts.threads;
  f.rank_slack = opts.rank_slack;
  f.first_leg = opts.oracle_cb;
  return f;
}

namespace {

using detail::FactorCost;
using detail::Half;
using detail::HalfSpec;
using detail::Stack;

void rebalance(Decomposition& d) {
  if (d.left.size() == 0 || d.right.size() == 0) return;
  const double sl = operator_norm(detail::factor_stack({d.target.left.basis(), Stack::Horizontal}, d.left));
  const double sr = operator_norm(detail::factor_stack({d.target.right.basis(), Stack::Vertical}, d.right));
  if (sl <= 0.0 || sr <= 0.0) return;
  const double lambda = std::sqrt(sr / sl);
  d.left *= lambda;
  d.right /= lambda;
}

Decomposition zero_decomposition(const ConcreteOperatorSpace& l, const ConcreteOperatorSpace& r) {
  return Decomposition{tensor_element(l, r, Matrix::Zero(l.dim(), r.dim())), Matrix::Zero(1, l.dim()),
                       Matrix::Zero(1, r.dim())};
}

MuSplit swap_split(const MuSplit& s) {
  // A split of tt = v' + w' gives t = tw' + tv', with the decompositions trading places.
  return MuSplit{transpose_tensor(s.w), transpose_tensor(s.v), s.tw_decomposition, s.v_decomposition};
}

struct SplitSearch {
  MuSplit split;
  double value = 0.0;
  Trace trace;
};

// Joint descent over t = P_f^T Q_f + P_t^T Q_t, where the forward half pays
// h(v) and the transposed half pays h(tw).
SplitSearch split_search(const TensorElement& t, const MuOptions& opts) {
  const Scalar scale = detail::normalizer(t.coeffs);
  const Matrix c = t.coeffs / scale;
  const int m1 = t.left.dim(), m2 = t.right.dim();
  const int k = std::min(m1, m2) + opts.rank_slack;
  const std::vector<HalfSpec> specs{
      {FactorCost{t.left.basis(), Stack::Horizontal}, FactorCost{t.right.basis(), Stack::Vertical}},
      {FactorCost{t.left.basis(), Stack::Vertical}, FactorCost{t.right.basis(), Stack::Horizontal}}};
  const double pad = 1e-3 / std::sqrt(static_cast<double>(c.size()));

  const std::function<detail::SplitResult(int)> run = [&](int r) {
    auto rng = substream(opts.seed, "mu_upper", static_cast<std::uint64_t>(r));
    std::vector<Half> start(2);
    if (r <= 1) {
      const std::size_t full = r == 0 ? 0 : 1;
      start[full] = detail::svd_half(c, k, 0.0, rng);
      start[1 - full].p = gaussian_matrix(rng, k, m1, pad);
      start[1 - full].q = Matrix::Zero(k, m2);
    } else {
      Matrix v = c / 2.0;
      if (r > 2) v += gaussian_matrix(rng, m1, m2, 0.5 / std::sqrt(static_cast<double>(c.size())));
      start[0] = detail::svd_half(v, k, pad, rng);
      start[1] = detail::svd_half(Matrix(c - v), k, pad, rng);
      if (r > 2)
        for (Half& h : start) detail::reparametrize(h, gaussian_matrix(rng, k, k, 0.3));
    }
    return detail::descend_split(specs, c, std::move(start), opts.iters, opts.tol);
  };
  const auto results = run_indexed(opts.restarts, opts.threads, run);

  SplitSearch out;
  out.trace.seed = opts.seed;
  out.trace.restarts_used = opts.restarts;
  out.value = INFINITY;
  if (results.empty()) return out;
  std::vector<double> values;
  for (const auto& res : results) {
    values.push_back(res.value);
    out.trace.iterations += res.iterations;
    out.trace.converged = out.trace.converged || res.converged;
  }
  const auto& best = results[static_cast<std::size_t>(best_index(values, false))].halves;
  const Matrix v = scale * best[0].p.transpose() * best[0].q;
  const Matrix w = t.coeffs - v;
  Decomposition vd{tensor_element(t.left, t.right, v), best[0].p, scale * best[0].q};
  Decomposition wd{tensor_element(t.right, t.left, w.transpose()), scale * best[1].q, best[1].p};
  rebalance(vd);
  rebalance(wd);
  out.split = MuSplit{vd.target, tensor_element(t.left, t.right, w), std::move(vd), std::move(wd)};
  out.value = mu_split_value(out.split);
  return out;
}

NormEstimate zero_mu(const TensorElement& t, const OptimizerOptions& opts, const char* path) {
  NormEstimate est;
  est.bound_kind = BoundKind::Exact;
  est.trace.seed = opts.seed;
  est.trace.converged = true;
  est.trace.path = path;
  (void)t;
  return est;
}

}  // namespace

double mu_split_value(const MuSplit& s) {
  return decomposition_value(s.v_decomposition) + decomposition_value(s.tw_decomposition);
}

NormEstimate mu_upper(const TensorElement& t, const MuOptions& opts) {
  if (opts.rank_slack < 0) throw InvalidInput("mu_upper: rank_slack must be nonnegative");
  if (t.is_zero()) {
    NormEstimate est = zero_mu(t, opts, "mu_upper");
    est.certificate = MuSplit{t, t, zero_decomposition(t.left, t.right), zero_decomposition(t.right, t.left)};
    return est;
  }
  const TensorElement tt = transpose_tensor(t);
  const NormEstimate ht = haagerup_upper(t, opts);
  const NormEstimate htt = haagerup_upper(tt, opts);
  const SplitSearch jt = split_search(t, opts);
  const SplitSearch jtt = split_search(tt, opts);

  const TensorElement zero = scale(t, 0.0);
  std::vector<MuSplit> candidates;
  candidates.push_back(MuSplit{t, zero, std::get<Decomposition>(ht.certificate), zero_decomposition(t.right, t.left)});
  candidates.push_back(MuSplit{zero, t, zero_decomposition(t.left, t.right), std::get<Decomposition>(htt.certificate)});
  std::vector<double> values{ht.value, htt.value};
  if (std::isfinite(jt.value)) {
    candidates.push_back(jt.split);
    values.push_back(jt.value);
  }
  if (std::isfinite(jtt.value)) {
    candidates.push_back(swap_split(jtt.split));
    values.push_back(jtt.value);
  }

  NormEstimate est;
  est.bound_kind = BoundKind::Upper;
  est.trace.seed = opts.seed;
  est.trace.path = "mu_upper";
  est.trace.restarts_used = opts.restarts;
  for (const Trace* tr : {&ht.trace, &htt.trace, &jt.trace, &jtt.trace}) {
    est.trace.iterations += tr->iterations;
    est.trace.converged = est.trace.converged || tr->converged;
  }
  const int best = best_index(values, false);
  est.value = values[static_cast<std::size_t>(best)];
  est.certificate = candidates[static_cast<std::size_t>(best)];
  return est;
}

// ---------------------------------------------------------------------------
// Commuting pairs

namespace {

Matrix pad_square(const Matrix& m, int n) {
  Matrix out = Matrix::Zero(n, n);
  out.topLeftCorner(m.rows(), m.cols()) = m;
  return out;
}

struct CbEstimate {
  NormEstimate estimate;
  double safe = 0.0;  // estimate inflated unless exact
};

CbEstimate safe_cb(const SpaceMap& u, const CbOptions& opts) {
  CbEstimate out{cb_norm(u, opts), 0.0};
  out.safe = out.estimate.value * (out.estimate.bound_kind == BoundKind::Exact ? 1.0 : kCbInflation);
  return out;
}

NormEstimate scaled(NormEstimate e, double factor) {
  e.value *= factor;
  e.certificate = std::monostate{};
  return e;
}

std::vector<Matrix> scaled_images(const std::vector<Matrix>& in, double factor) {
  std::vector<Matrix> out;
  for (const Matrix& m : in) out.push_back(m * factor);
  return out;
}

Matrix random_unitary(std::mt19937_64& rng, int n) {
  Eigen::HouseholderQR<Matrix> qr(gaussian_matrix(rng, n, n));
  return qr.householderQ() * Matrix::Identity(n, n);
}

SamplePtr commutant_sample(const ConcreteOperatorSpace& left, const ConcreteOperatorSpace& right,
                           std::mt19937_64& rng, const CbOptions& cb) {
  constexpr int a = 2, b = 2, k = a * b;
  const Matrix u = random_unitary(rng, k);
  std::vector<Matrix> xs, s1;
  for (int i = 0; i < left.dim(); ++i) {
    xs.push_back(gaussian_matrix(rng, a, a));
    s1.push_back(u * kron(xs.back(), Matrix::Identity(b, b)) * u.adjoint());
  }
  const auto comm = commutant_basis(s1);
  std::vector<Matrix> s2, ys;
  bool structured = true;
  for (int j = 0; j < right.dim(); ++j) {
    Matrix y = Matrix::Zero(k, k);
    for (const Matrix& c : comm) y += Scalar(gaussian(rng), gaussian(rng)) * c;
    s2.push_back(y);
    // When the commutant is 1 (x) M_b, the map is an amplification of its corner.
    const Matrix z = u.adjoint() * y * u;
    ys.push_back(z.topLeftCorner(b, b));
    structured = structured && (z - kron(Matrix::Identity(a, a), ys.back())).norm() <= 1e-10 * std::max(1.0, z.norm());
  }
  const CbEstimate c1 = safe_cb(map_to_full(left, xs), cb);
  const CbEstimate c2 = safe_cb(structured ? map_to_full(right, ys) : map_to_full(right, s2), cb);
  if (c1.safe <= 0.0 || c2.safe <= 0.0) return nullptr;
  auto s = std::make_shared<CommutingPairSample>();
  s->k = k;
  s->sigma1 = map_to_full(left, scaled_images(s1, 1.0 / c1.safe));
  s->sigma2 = map_to_full(right, scaled_images(s2, 1.0 / c2.safe));
  s->cb1 = scaled(c1.estimate, 1.0 / c1.safe);
  s->cb2 = scaled(c2.estimate, 1.0 / c2.safe);
  s->provenance = SampleProvenance::CommutantSampled;
  return s;
}

SamplePtr block_sample(const ConcreteOperatorSpace& left, const ConcreteOperatorSpace& right,
                       std::mt19937_64& rng, const CbOptions& cb) {
  const auto q = random_quadruple(left, right, rng, cb);
  if (!q) return nullptr;
  const CommutingBlocks blocks = theorem2_blocks(q->alpha1, q->alpha2, q->beta1, q->beta2);
  auto s = std::make_shared<CommutingPairSample>();
  s->k = blocks.sigma1.codomain.ambient_rows();
  s->sigma1 = blocks.sigma1;
  s->sigma2 = blocks.sigma2;
  s->v = blocks.v;
  s->w = blocks.w;
  // cb(sigma_1) <= max(cb alpha_1, cb beta_1) and likewise for sigma_2.
  s->cb1.bound_kind = BoundKind::Upper;
  s->cb1.value = std::max(q->cb_alpha1, q->cb_beta1);
  s->cb1.trace.path = "block_bound";
  s->cb2.bound_kind = BoundKind::Upper;
  s->cb2.value = std::max(q->cb_alpha2, q->cb_beta2);
  s->cb2.trace.path = "block_bound";
  s->provenance = SampleProvenance::Theorem2Block;
  return s;
}

void require_same_spaces(const CommutingPairSample& s, const TensorElement& t) {
  if (!s.sigma1.domain.same_as(t.left) || !s.sigma2.domain.same_as(t.right))
    throw ShapeMismatch("pair_eval: sample spaces differ from the tensor's");
}

}  // namespace

std::optional<BlockQuadruple> random_quadruple(const ConcreteOperatorSpace& left,
                                                  const ConcreteOperatorSpace& right, std::mt19937_64& rng,
                                                  const CbOptions& cb) {
  const int m1 = left.dim(), m2 = right.dim();
  const int h = m2;  // beta2 is then generically invertible and beta1 is solvable
  Matrix A1(m1, h), A2(h, m2), B2(m2, h);
  for (int i = 0; i < m1; ++i) A1.row(i) = gaussian_matrix(rng, 1, h);
  for (int j = 0; j < m2; ++j) A2.col(j) = gaussian_matrix(rng, h, 1);
  for (int j = 0; j < m2; ++j) B2.row(j) = gaussian_matrix(rng, 1, h);
  const Matrix phi = A1 * A2;
  const Matrix B1 = B2.colPivHouseholderQr().solve(Matrix(phi.transpose()));
  if ((B2 * B1 - phi.transpose()).cwiseAbs().maxCoeff() > 1e-10) return std::nullopt;

  std::vector<Matrix> a1, a2, b1, b2;
  for (int i = 0; i < m1; ++i) {
    a1.push_back(A1.row(i));
    b1.push_back(B1.col(i));
  }
  for (int j = 0; j < m2; ++j) {
    a2.push_back(A2.col(j));
    b2.push_back(B2.row(j));
  }
  const CbEstimate ca1 = safe_cb(map_to_full(left, a1), cb), ca2 = safe_cb(map_to_full(right, a2), cb);
  const CbEstimate cb1 = safe_cb(map_to_full(left, b1), cb), cb2 = safe_cb(map_to_full(right, b2), cb);
  const double kk = std::max(ca1.safe * ca2.safe, cb1.safe * cb2.safe);
  if (ca1.safe <= 0.0 || cb1.safe <= 0.0 || kk <= 0.0) return std::nullopt;
  const double fa1 = 1.0 / ca1.safe, fa2 = ca1.safe / kk, fb1 = 1.0 / cb1.safe, fb2 = cb1.safe / kk;
  BlockQuadruple q;
  q.alpha1 = map_to_full(left, scaled_images(a1, fa1));
  q.alpha2 = map_to_full(right, scaled_images(a2, fa2));
  q.beta1 = map_to_full(left, scaled_images(b1, fb1));
  q.beta2 = map_to_full(right, scaled_images(b2, fb2));
  q.cb_alpha1 = ca1.estimate.value * fa1;
  q.cb_alpha2 = ca2.estimate.value * fa2;
  q.cb_beta1 = cb1.estimate.value * fb1;
  q.cb_beta2 = cb2.estimate.value * fb2;
  return q;
}

SamplePtr tensor_split_sample(const ConcreteOperatorSpace& left, const ConcreteOperatorSpace& right) {
  const int n1 = left.square_size(), n2 = right.square_size();
  std::vector<Matrix> s1, s2;
  for (const Matrix& b : left.basis()) s1.push_back(kron(pad_square(b, n1), Matrix::Identity(n2, n2)));
  for (const Matrix& b : right.basis()) s2.push_back(kron(Matrix::Identity(n1, n1), pad_square(b, n2)));
  auto s = std::make_shared<CommutingPairSample>();
  s->k = n1 * n2;
  s->sigma1 = map_to_full(left, s1);
  s->sigma2 = map_to_full(right, s2);
  for (NormEstimate* e : {&s->cb1, &s->cb2}) {
    e->value = 1.0;
    e->bound_kind = BoundKind::Exact;
    e->trace.converged = true;
    e->trace.path = "complete_isometry";
  }
  s->provenance = SampleProvenance::TensorSplit;
  return s;
}

std::vector<SamplePtr> commuting_samples(const ConcreteOperatorSpace& left, const ConcreteOperatorSpace& right,
                                         const MuOptions& opts) {
  std::vector<SamplePtr> out{tensor_split_sample(left, right)};
  CbOptions cb = opts.oracle_cb;
  cb.seed = opts.seed;
  cb.threads = 1;
  const int nc = std::max(0, opts.commutant_samples), nb = std::max(0, opts.block_samples);
  const std::function<SamplePtr(int)> draw = [&](int i) {
    if (i < nc) {
      auto rng = substream(opts.seed, "commutant", static_cast<std::uint64_t>(i));
      return commutant_sample(left, right, rng, cb);
    }
    auto rng = substream(opts.seed, "block", static_cast<std::uint64_t>(i - nc));
    return block_sample(left, right, rng, cb);
  };
  for (SamplePtr& s : run_indexed(nc + nb, opts.threads, draw))
    if (s) out.push_back(std::move(s));
  return out;
}

CommutingBlocks theorem2_blocks(const SpaceMap& alpha1, const SpaceMap& alpha2, const SpaceMap& beta1,
                               const SpaceMap& beta2) {
  if (!alpha1.domain.same_as(beta1.domain) || !alpha2.domain.same_as(beta2.domain))
    throw ShapeMismatch("theorem2_blocks: alpha_i and beta_i need a common domain");
  const int dk = alpha1.codomain.ambient_rows();
  const int dh = alpha1.codomain.ambient_cols();
  auto shape_is = [](const SpaceMap& m, int r, int c) {
    return m.codomain.ambient_rows() == r && m.codomain.ambient_cols() == c;
  };
  if (!shape_is(alpha2, dh, dk) || !shape_is(beta1, dh, dk) || !shape_is(beta2, dk, dh))
    throw ShapeMismatch("theorem2_blocks: intermediate dimensions do not match");

  const auto a1 = alpha1.images(), a2 = alpha2.images(), b1 = beta1.images(), b2 = beta2.images();
  double defect = 0.0;
  for (std::size_t i = 0; i < a1.size(); ++i)
    for (std::size_t j = 0; j < a2.size(); ++j)
      defect = std::max(defect, (a1[i] * a2[j] - b2[j] * b1[i]).cwiseAbs().maxCoeff());
  if (defect > 1e-10)
    throw IdentityViolated("theorem2_blocks: alpha1(x) alpha2(y) != beta2(y) beta1(x) (defect " +
                           std::to_string(defect) + ")");

  const int k = 2 * dk + dh;
  std::vector<Matrix> s1, s2;
  for (std::size_t i = 0; i < a1.size(); ++i) {
    Matrix m = Matrix::Zero(k, k);
    m.block(0, dk, dk, dh) = a1[i];
    m.block(dk, dk + dh, dh, dk) = b1[i];
    s1.push_back(std::move(m));
  }
  for (std::size_t j = 0; j < a2.size(); ++j) {
    Matrix m = Matrix::Zero(k, k);
    m.block(0, dk, dk, dh) = b2[j];
    m.block(dk, dk + dh, dh, dk) = a2[j];
    s2.push_back(std::move(m));
  }
  Matrix w = Matrix::Zero(dk, k), v = Matrix::Zero(k, dk);
  w.leftCols(dk) = Matrix::Identity(dk, dk);
  v.bottomRows(dk) = Matrix::Identity(dk, dk);
  return CommutingBlocks{map_to_full(alpha1.domain, s1), map_to_full(alpha2.domain, s2), v, w};
}

PairValue pair_eval(const CommutingPairSample& sample, const TensorElement& t, bool normalize) {
  require_same_spaces(sample, t);
  const auto s1 = sample.sigma1.images(), s2 = sample.sigma2.images();
  PairValue out;
  out.matrix = Matrix::Zero(sample.k, sample.k);
  for (int i = 0; i < t.left.dim(); ++i) {
    Matrix right = Matrix::Zero(sample.k, sample.k);
    for (int j = 0; j < t.right.dim(); ++j) right += t.coeffs(i, j) * s2[static_cast<std::size_t>(j)];
    out.matrix += s1[static_cast<std::size_t>(i)] * right;
  }
  out.norm = operator_norm(out.matrix);
  if (normalize) {
    const double d = sample.cb1.value * sample.cb2.value;
    if (d > 0.0) out.norm /= d;
  }
  return out;
}

double commutator_defect(const CommutingPairSample& sample) {
  double d = 0.0;
  for (const Matrix& a : sample.sigma1.images())
    for (const Matrix& b : sample.sigma2.images()) d = std::max(d, (a * b - b * a).norm());
  return d;
}

NormEstimate mu_lower(const TensorElement& t, const std::vector<SamplePtr>& samples) {
  NormEstimate est;
  est.bound_kind = BoundKind::Lower;
  est.trace.path = "commuting_pairs";
  est.trace.restarts_used = static_cast<int>(samples.size());
  est.trace.converged = true;
  if (t.is_zero()) {
    est.bound_kind = BoundKind::Exact;
    if (!samples.empty()) est.certificate = samples.front();
    return est;
  }
  std::vector<double> values;
  for (const SamplePtr& s : samples) values.push_back(pair_eval(*s, t).norm);
  const int best = best_index(values, true);
  if (best >= 0) {
    est.value = values[static_cast<std::size_t>(best)];
    est.certificate = samples[static_cast<std::size_t>(best)];
  }
  return est;
}

NormEstimate mu_lower(const TensorElement& t, const MuOptions& opts) {
  NormEstimate est = mu_lower(t, commuting_samples(t.left, t.right, opts));
  est.trace.seed = opts.seed;
  return est;
}

MuWindow mu_window(const TensorElement& t, const MuOptions& opts) {
  return MuWindow{mu_lower(t, opts), mu_upper(t, opts)};
}

// ---------------------------------------------------------------------------
// mu(E)

PairingWitness evaluate_pairing(const ConcreteOperatorSpace& e, const Matrix& alpha1, const Matrix& alpha2,
                                const Matrix& beta2, const Matrix& beta1, const CbOptions& cb) {
  const int n = e.dim();
  const int h = static_cast<int>(alpha1.cols());
  if (alpha1.rows() != n || alpha2.rows() != h || alpha2.cols() != n || beta2.rows() != n ||
      beta2.cols() != beta1.rows() || beta1.cols() != n)
    throw ShapeMismatch("evaluate_pairing: shapes");
  const int hb = static_cast<int>(beta2.cols());
  const Matrix phi = alpha1 * alpha2;
  if ((beta2 * beta1 - phi.transpose()).cwiseAbs().maxCoeff() > 1e-10 * std::max(1.0, phi.norm()))
    throw IdentityViolated("evaluate_pairing: alpha1 alpha2 != beta2 beta1");
  const auto row_h = standard_space(StandardKind::Row, h), col_h = standard_space(StandardKind::Column, h);
  const auto row_hb = standard_space(StandardKind::Row, hb), col_hb = standard_space(StandardKind::Column, hb);
  PairingWitness w{alpha1, alpha2, beta2, beta1};
  // Maps out of E* are tensors in E (x)_min R_H or E (x)_min C_H.
  w.cb_alpha1 = min_norm(tensor_element(e, row_h, alpha1));
  w.cb_beta1 = min_norm(tensor_element(e, col_hb, beta1.transpose()));
  w.cb_alpha2 = safe_cb(make_map(e, col_h, alpha2), cb).safe;
  w.cb_beta2 = safe_cb(make_map(e, row_hb, beta2.transpose()), cb).safe;
  const double k = std::max(w.cb_alpha1 * w.cb_alpha2, w.cb_beta1 * w.cb_beta2);
  w.pairing = k > 0.0 ? std::abs(phi.trace()) / k : 0.0;
  return w;
}

MuWindow mu_of_space(const ConcreteOperatorSpace& e, const MuOptions& opts) {
  MuWindow win;
  win.upper = split_norm(identity_map(e), factor_options(opts));
  win.upper.trace.path = "split_norm(id)";

  NormEstimate& lo = win.lower;
  lo.bound_kind = BoundKind::Lower;
  lo.value = 1.0;  // ||i_E||_min = ||id_E||_cb = 1
  lo.trace.seed = opts.seed;
  lo.trace.converged = true;
  lo.trace.path = "identity";

  CbOptions cb = opts.oracle_cb;
  cb.seed = opts.seed;
  const int n = e.dim();
  const Matrix id = Matrix::Identity(n, n);
  const Matrix t = orthonormalizer(e);
  const Matrix tinv = t.inverse();
  std::vector<std::array<Matrix, 4>> candidates{{id, id, id, id},
                                                {t.transpose(), tinv.transpose(), tinv, t}};
  for (int i = 0; i < opts.pairing_samples; ++i) {
    auto rng = substream(opts.seed, "pairing", static_cast<std::uint64_t>(i));
    const Matrix s = expm(gaussian_matrix(rng, n, n, 0.5));
    const Matrix r = expm(gaussian_matrix(rng, n, n, 0.5));
    candidates.push_back({s, s.inverse(), r, r.inverse()});
  }
  for (const auto& c : candidates) {
    PairingWitness w = evaluate_pairing(e, c[0], c[1], c[2], c[3], cb);
    if (w.pairing > lo.value) {
      lo.value = w.pairing;
      lo.trace.path = "pairing";
      lo.certificate = std::move(w);
    }
  }
  lo.trace.restarts_used = static_cast<int>(candidates.size());
  return win;
}

}  // namespace opnorm
