// opnorm: command-line front end. Results go to stdout as JSON, diagnostics to stderr.

#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "opnorm/errors.hpp"
#include "opnorm/harness.hpp"
#include "opnorm/io.hpp"
#include "opnorm/munorm.hpp"

using namespace opnorm;
using io::Json;

namespace {

constexpr int kUsage = 2;
constexpr int kGateFailed = 1;

struct Budget {
  int restarts = -1;  // negative: keep the library default
  int iters = -1;
  std::uint64_t seed = 0;
  double tol = -1.0;
  int threads = 1;
  bool cert = false;
};

template <class Opts>
Opts apply(Opts o, const Budget& b) {
  if (b.restarts >= 0) o.restarts = b.restarts;
  if (b.iters > 0) o.iters = b.iters;
  if (b.tol > 0.0) o.tol = b.tol;
  o.seed = b.seed;
  o.threads = b.threads;
  return o;
}

MuOptions mu_options(const Budget& b) {
  MuOptions o = apply(MuOptions{}, b);
  o.oracle_cb.seed = b.seed;
  o.oracle_cb.threads = b.threads;
  return o;
}

FactorOptions factor_opts(const Budget& b) {
  FactorOptions o = apply(FactorOptions{}, b);
  o.first_leg.seed = b.seed;
  o.first_leg.threads = b.threads;
  return o;
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("OPNORM_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      std::cerr << "opnorm: ignoring non-numeric OPNORM_SEED\n";
    }
  }
  return 0;
}

void print(const Json& j) { std::cout << j.dump(2) << "\n"; }

void print_estimate(const NormEstimate& e, const Budget& b) { print(io::to_json(e, b.cert)); }

void add_budget(CLI::App* app, Budget& b) {
  app->add_option("--restarts", b.restarts, "optimizer restarts");
  app->add_option("--iters", b.iters, "iterations per restart");
  app->add_option("--seed", b.seed, "random seed (default: OPNORM_SEED or 0)");
  app->add_option("--tol", b.tol, "relative stopping tolerance");
  app->add_option("--threads", b.threads, "worker threads for restarts")->check(CLI::PositiveNumber);
  app->add_flag("--cert", b.cert, "include the certificate in the output");
}

std::vector<int> parse_dims(const std::string& s) {
  std::vector<int> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      out.push_back(std::stoi(item));
    } catch (const std::exception&) {
      throw InvalidInput("bad --dims entry '" + item + "'");
    }
  }
  return out;
}

Json thm2_json(const CommutingBlocks& b, const SpaceMap& alpha1, const SpaceMap& alpha2) {
  const auto s1 = b.sigma1.images(), s2 = b.sigma2.images();
  const auto a1 = alpha1.images(), a2 = alpha2.images();
  double defect = 0.0, residual = 0.0;
  for (std::size_t i = 0; i < s1.size(); ++i)
    for (std::size_t j = 0; j < s2.size(); ++j) {
      defect = std::max(defect, (s1[i] * s2[j] - s2[j] * s1[i]).norm());
      residual = std::max(residual, (b.w * s1[i] * s2[j] * b.v - a1[i] * a2[j]).norm());
    }
  return {{"sigma1", io::to_json(b.sigma1)},
          {"sigma2", io::to_json(b.sigma2)},
          {"V", io::to_json(b.v)},
          {"W", io::to_json(b.w)},
          {"commutator_defect", defect},
          {"reconstruction_error", residual}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Operator space tensor and factorization norms"};
  app.require_subcommand(1);
  Budget budget;
  budget.seed = default_seed();
  std::string input, kind;
  int level = 0;
  int identity_n = 0;
  std::string dims = "2,3", out_path, format = "json";
  std::function<int()> action;

  auto* norm = app.add_subcommand("norm", "tensor norms and cb norms");
  norm->add_option("kind", kind, "min | h | h3 | cb")->required()->check(CLI::IsMember({"min", "h", "h3", "cb"}));
  norm->add_option("input", input, "tensor, three-fold tensor or map JSON")->required();
  norm->add_option("--level", level, "for cb: evaluate a single amplification level");
  add_budget(norm, budget);
  norm->callback([&] {
    action = [&] {
      const Json j = io::read_file(input);
      if (kind == "min") {
        const auto t = io::tensor_from_json(j);
        print({{"value", min_norm(t)}, {"bound_kind", "exact"}, {"seed", budget.seed}});
      } else if (kind == "h") {
        print_estimate(haagerup_upper(io::tensor_from_json(j), apply(HaagerupOptions{}, budget)), budget);
      } else if (kind == "h3") {
        print_estimate(haagerup3_upper(io::tensor3_from_json(j), apply(HaagerupOptions{}, budget)), budget);
      } else {
        const auto u = io::map_from_json(j);
        const auto o = apply(CbOptions{}, budget);
        print_estimate(level > 0 ? level_norm(u, level, o) : cb_norm(u, o), budget);
      }
      return 0;
    };
  });

  auto* mu = app.add_subcommand("mu", "mu-norm bounds");
  mu->add_option("kind", kind, "upper | lower | window | space")
      ->required()
      ->check(CLI::IsMember({"upper", "lower", "window", "space"}));
  mu->add_option("input", input, "tensor JSON, or a space reference for 'space'")->required();
  add_budget(mu, budget);
  mu->callback([&] {
    action = [&] {
      const auto o = mu_options(budget);
      if (kind == "space") {
        const Json ref = input.find('.') != std::string::npos ? io::read_file(input) : Json(input);
        const auto w = mu_of_space(io::space_from_json(ref), o);
        print({{"lower", io::to_json(w.lower, budget.cert)}, {"upper", io::to_json(w.upper, budget.cert)}});
        return 0;
      }
      const auto t = io::tensor_from_json(io::read_file(input));
      if (kind == "upper") {
        print_estimate(mu_upper(t, o), budget);
      } else if (kind == "lower") {
        print_estimate(mu_lower(t, o), budget);
      } else {
        const auto w = mu_window(t, o);
        print({{"lower", io::to_json(w.lower, budget.cert)}, {"upper", io::to_json(w.upper, budget.cert)}});
      }
      return 0;
    };
  });

  auto* gamma = app.add_subcommand("gamma", "factorization norms of a map");
  gamma->add_option("kind", kind, "row | column | split")->required()->check(CLI::IsMember({"row", "column", "split"}));
  gamma->add_option("input", input, "map JSON")->required();
  add_budget(gamma, budget);
  gamma->callback([&] {
    action = [&] {
      const auto u = io::map_from_json(io::read_file(input));
      const auto o = factor_opts(budget);
      if (kind == "split")
        print_estimate(split_norm(u, o), budget);
      else
        print_estimate(gamma_rc(u, kind == "row" ? HilbertKind::Row : HilbertKind::Column, o), budget);
      return 0;
    };
  });

  auto* g2 = app.add_subcommand("gamma2", "gamma_2 norm of a matrix viewed from l_inf");
  g2->add_option("input", input, "matrix JSON");
  g2->add_option("--identity", identity_n, "use the n x n identity instead of a file");
  add_budget(g2, budget);
  g2->callback([&] {
    action = [&] {
      Matrix m;
      if (identity_n > 0)
        m = Matrix::Identity(identity_n, identity_n);
      else if (!input.empty())
        m = io::matrix_from_json(io::read_file(input));
      else
        throw InvalidInput("gamma2 needs a matrix file or --identity n");
      print_estimate(gamma2_linf(m, apply(OptimizerOptions{}, budget)), budget);
      return 0;
    };
  });

  auto* thm2 = app.add_subcommand("thm2", "commuting block maps from a factorization identity");
  auto* build = thm2->add_subcommand("build", "input: {\"alpha1\", \"alpha2\", \"beta1\", \"beta2\"} maps");
  thm2->require_subcommand(1);
  build->add_option("input", input, "quadruple JSON")->required();
  build->callback([&] {
    action = [&] {
      const Json j = io::read_file(input);
      const auto a1 = io::map_from_json(j.at("alpha1")), a2 = io::map_from_json(j.at("alpha2"));
      const auto b1 = io::map_from_json(j.at("beta1")), b2 = io::map_from_json(j.at("beta2"));
      print(thm2_json(theorem2_blocks(a1, a2, b1, b2), a1, a2));
      return 0;
    };
  });

  auto* verify = app.add_subcommand("verify", "verification suite");
  auto* vrun = verify->add_subcommand("run", "run every check and write a report");
  verify->require_subcommand(1);
  add_budget(vrun, budget);
  vrun->add_option("--dims", dims, "dimension list, e.g. 2,3");
  vrun->add_option("--out", out_path, "report path");
  vrun->add_option("--format", format, "json | markdown")->check(CLI::IsMember({"json", "markdown"}));
  vrun->callback([&] {
    action = [&] {
      harness::SuiteConfig c;
      c.seed = budget.seed;
      if (budget.restarts >= 0) c.restarts = budget.restarts;
      if (budget.iters > 0) c.iters = budget.iters;
      c.threads = budget.threads;
      c.dims = parse_dims(dims);
      c.output_path = out_path;
      c.format = format;
      const auto results = harness::run_suite(c);
      const std::string text = harness::write_report(c, results);
      int failed = 0, passed = 0, reported = 0;
      for (const auto& r : results) {
        if (r.status == harness::Status::Fail) {
          ++failed;
          std::cerr << "FAIL " << r.check_id << (r.note.empty() ? "" : " (" + r.note + ")") << "\n";
        }
        passed += r.status == harness::Status::Pass;
        reported += r.status == harness::Status::ReportedOnly;
      }
      if (out_path.empty())
        std::cout << text;
      else
        print({{"report", out_path}, {"passed", passed}, {"failed", failed}, {"reported_only", reported}});
      return harness::gating_failed(results) ? kGateFailed : 0;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }
  if (!action) {
    std::cerr << app.help();
    return kUsage;
  }
  try {
    return action();
  } catch (const Error& e) {
    // Library errors all stem from the input: bad shapes, files or parameters.
    std::cerr << "opnorm: " << e.kind() << ": " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "opnorm: " << e.what() << "\n";
    return kUsage;
  }
}
