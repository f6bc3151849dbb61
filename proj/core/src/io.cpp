#include "opnorm/io.hpp"

#include <fstream>
#include <sstream>

#include "opnorm/errors.hpp"
#include "opnorm/munorm.hpp"

namespace opnorm::io {

namespace {

Json scalar_json(Scalar z) { return Json::array({z.real(), z.imag()}); }

Scalar scalar_from(const Json& j) {
  if (j.is_number()) return Scalar(j.get<double>(), 0.0);
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return Scalar(j[0].get<double>(), j[1].get<double>());
  throw InvalidInput("expected a number or [re, im], got " + j.dump());
}

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw InvalidInput(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

Json optional_matrix(const std::optional<Matrix>& m) { return m ? to_json(*m) : Json(nullptr); }

Json factorization_json(const Factorization& f) {
  return Json{{"through", f.through == HilbertKind::Row ? "row" : "column"},
              {"k", f.k},
              {"first_leg", to_json(f.first_leg)},
              {"second_leg", to_json(f.second_leg)},
              {"first_cb", f.first_cb},
              {"second_cb", f.second_cb},
              {"residual", f.residual}};
}

Json decomposition_json(const Decomposition& d) {
  return Json{{"target", to_json(d.target)}, {"left", to_json(d.left)}, {"right", to_json(d.right)}};
}

}  // namespace

Json to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json r = Json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) r.push_back(scalar_json(m(i, k)));
    rows.push_back(std::move(r));
  }
  return rows;
}

Matrix matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty() || !j[0].is_array()) throw InvalidInput("expected a matrix (array of rows)");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const Json& r = j[static_cast<std::size_t>(i)];
    if (!r.is_array() || static_cast<Eigen::Index>(r.size()) != cols) throw ShapeMismatch("ragged matrix rows");
    for (Eigen::Index k = 0; k < cols; ++k) m(i, k) = scalar_from(r[static_cast<std::size_t>(k)]);
  }
  return m;
}

Json to_json(const ConcreteOperatorSpace& e) {
  Json basis = Json::array();
  for (const Matrix& b : e.basis()) {
    Json flat = Json::array();
    for (Eigen::Index i = 0; i < b.rows(); ++i)
      for (Eigen::Index k = 0; k < b.cols(); ++k) flat.push_back(scalar_json(b(i, k)));
    basis.push_back(std::move(flat));
  }
  return Json{{"label", e.label()}, {"ambient", {e.ambient_rows(), e.ambient_cols()}}, {"basis", basis}};
}

ConcreteOperatorSpace space_from_json(const Json& j) {
  if (j.is_string()) return parse_space_ref(j.get<std::string>());
  const Json& amb = field(j, "ambient");
  if (!amb.is_array() || amb.size() != 2) throw InvalidInput("\"ambient\" must be [p, q]");
  const int p = amb[0].get<int>(), q = amb[1].get<int>();
  if (p <= 0 || q <= 0) throw InvalidInput("ambient sizes must be positive");
  std::vector<Matrix> basis;
  for (const Json& flat : field(j, "basis")) {
    if (!flat.is_array() || static_cast<int>(flat.size()) != p * q)
      throw ShapeMismatch("basis element does not have p*q entries");
    Matrix b(p, q);
    for (int i = 0; i < p; ++i)
      for (int k = 0; k < q; ++k) b(i, k) = scalar_from(flat[static_cast<std::size_t>(i * q + k)]);
    basis.push_back(std::move(b));
  }
  return make_space(std::move(basis), j.value("label", std::string("space")));
}

Json to_json(const TensorElement& t) {
  return Json{{"left", to_json(t.left)}, {"right", to_json(t.right)}, {"coeffs", to_json(t.coeffs)}};
}

TensorElement tensor_from_json(const Json& j) {
  return tensor_element(space_from_json(field(j, "left")), space_from_json(field(j, "right")),
                        matrix_from_json(field(j, "coeffs")));
}

Json to_json(const SpaceMap& u) {
  return Json{{"domain", to_json(u.domain)}, {"codomain", to_json(u.codomain)}, {"coeffs", to_json(u.coeffs)}};
}

SpaceMap map_from_json(const Json& j) {
  return make_map(space_from_json(field(j, "domain")), space_from_json(field(j, "codomain")),
                  matrix_from_json(field(j, "coeffs")));
}

Json to_json(const Tensor3& t) {
  Json c = Json::array();
  for (int i = 0; i < t.first.dim(); ++i) {
    Json ci = Json::array();
    for (int k = 0; k < t.second.dim(); ++k) {
      Json ck = Json::array();
      for (int l = 0; l < t.third.dim(); ++l) ck.push_back(scalar_json(t.at(i, k, l)));
      ci.push_back(std::move(ck));
    }
    c.push_back(std::move(ci));
  }
  return Json{{"spaces", {to_json(t.first), to_json(t.second), to_json(t.third)}}, {"coeffs", c}};
}

Tensor3 tensor3_from_json(const Json& j) {
  const Json& s = field(j, "spaces");
  if (!s.is_array() || s.size() != 3) throw InvalidInput("\"spaces\" must list three spaces");
  const auto a = space_from_json(s[0]), b = space_from_json(s[1]), c = space_from_json(s[2]);
  const Json& cj = field(j, "coeffs");
  std::vector<Scalar> coeffs;
  if (!cj.is_array() || static_cast<int>(cj.size()) != a.dim()) throw ShapeMismatch("three-fold coefficients: first index");
  for (const Json& ci : cj) {
    if (!ci.is_array() || static_cast<int>(ci.size()) != b.dim()) throw ShapeMismatch("three-fold coefficients: second index");
    for (const Json& ck : ci) {
      if (!ck.is_array() || static_cast<int>(ck.size()) != c.dim()) throw ShapeMismatch("three-fold coefficients: third index");
      for (const Json& z : ck) coeffs.push_back(scalar_from(z));
    }
  }
  return tensor3(a, b, c, std::move(coeffs));
}

const char* certificate_kind(const Certificate& c) {
  static constexpr const char* names[] = {"none",          "level_witness",      "closed_form",
                                          "decomposition", "decomposition3",     "mu_split",
                                          "factorization", "split_factorization", "gamma2_factorization",
                                          "pairing",       "commuting_pair"};
  return names[c.index()];
}

Json certificate_to_json(const Certificate& c) {
  return std::visit(
      [](const auto& x) -> Json {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return nullptr;
        } else if constexpr (std::is_same_v<T, LevelWitness>) {
          Json blocks = Json::array();
          for (const Matrix& b : x.blocks) blocks.push_back(to_json(b));
          return Json{{"level", x.level}, {"blocks", blocks}};
        } else if constexpr (std::is_same_v<T, ClosedFormWitness>) {
          Json images = Json::array();
          for (const Matrix& m : x.images) images.push_back(to_json(m));
          return Json{{"domain_kind", x.domain_kind == HilbertKind::Row ? "row" : "column"}, {"images", images}};
        } else if constexpr (std::is_same_v<T, Decomposition>) {
          return decomposition_json(x);
        } else if constexpr (std::is_same_v<T, Decomposition3>) {
          return Json{{"target", to_json(x.target)},
                      {"first", to_json(x.first)},
                      {"middle", to_json(x.middle)},
                      {"third", to_json(x.third)}};
        } else if constexpr (std::is_same_v<T, MuSplit>) {
          return Json{{"v", to_json(x.v)},
                      {"w", to_json(x.w)},
                      {"v_decomposition", decomposition_json(x.v_decomposition)},
                      {"tw_decomposition", decomposition_json(x.tw_decomposition)}};
        } else if constexpr (std::is_same_v<T, Factorization>) {
          return factorization_json(x);
        } else if constexpr (std::is_same_v<T, SplitFactorization>) {
          return Json{{"row_part", x.row_part ? factorization_json(*x.row_part) : Json(nullptr)},
                      {"column_part", x.column_part ? factorization_json(*x.column_part) : Json(nullptr)}};
        } else if constexpr (std::is_same_v<T, Gamma2Factorization>) {
          return Json{{"left", to_json(x.left)},
                      {"right", to_json(x.right)},
                      {"inf_to_two", x.inf_to_two},
                      {"two_to_inf", x.two_to_inf}};
        } else if constexpr (std::is_same_v<T, PairingWitness>) {
          return Json{{"alpha1", to_json(x.alpha1)},   {"alpha2", to_json(x.alpha2)},
                      {"beta2", to_json(x.beta2)},     {"beta1", to_json(x.beta1)},
                      {"cb_alpha1", x.cb_alpha1},       {"cb_alpha2", x.cb_alpha2},
                      {"cb_beta1", x.cb_beta1},         {"cb_beta2", x.cb_beta2},
                      {"pairing", x.pairing}};
        } else {
          if (!x) return nullptr;
          return Json{{"k", x->k},
                      {"provenance", to_string(x->provenance)},
                      {"sigma1", to_json(x->sigma1)},
                      {"sigma2", to_json(x->sigma2)},
                      {"v", optional_matrix(x->v)},
                      {"w", optional_matrix(x->w)},
                      {"cb1", to_json(x->cb1)},
                      {"cb2", to_json(x->cb2)}};
        }
      },
      c);
}

Json to_json(const NormEstimate& e, bool with_certificate) {
  Json j{{"value", e.value},
         {"bound_kind", to_string(e.bound_kind)},
         {"seed", e.trace.seed},
         {"converged", e.trace.converged},
         {"iterations", e.trace.iterations},
         {"restarts", e.trace.restarts_used},
         {"path", e.trace.path},
         {"certificate_kind", certificate_kind(e.certificate)}};
  if (with_certificate) j["certificate"] = certificate_to_json(e.certificate);
  return j;
}

Json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& ex) {
    throw IoError(path + ": " + ex.what());
  }
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << text;
  if (!out) throw IoError("write failed for " + path);
}

}  // namespace opnorm::io
