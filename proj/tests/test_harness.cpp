#include <string>

#include "doctest.h"
#include "opnorm/errors.hpp"
#include "opnorm/harness.hpp"

using namespace opnorm;
using namespace opnorm::harness;

namespace {

SuiteConfig small() {
  SuiteConfig c;
  c.restarts = 2;
  c.iters = 200;
  c.commutant_samples = 2;
  c.block_samples = 2;
  c.pairing_samples = 1;
  c.cb_restarts = 1;
  c.cb_iters = 80;
  c.corpus_size = 3;
  c.quadruples = 2;
  c.dims = {2};
  return c;
}

CheckResult row(double x, double lo, double hi, double tol) {
  CheckResult r;
  r.computed = {x};
  r.expected_lower = lo;
  r.expected_upper = hi;
  r.tolerance = tol;
  return r;
}

}  // namespace

TEST_CASE("grading") {
  auto r = row(1.0, 1.0, 1.0, 0.0);
  grade(r);
  CHECK(r.status == Status::Pass);
  r = row(1.05, 1.0, 1.0, 0.1);
  grade(r);
  CHECK(r.status == Status::Pass);
  r = row(1.2, 1.0, 1.0, 0.1);
  grade(r);
  CHECK(r.status == Status::Fail);
  r = row(1.0, 0.0, 2.0, 0.0);
  r.converged = false;
  grade(r);
  CHECK(r.status == Status::Fail);
  CHECK(r.note.find("converged=false") != std::string::npos);
  r = row(5.0, 0.0, 1.0, 0.0);
  r.status = Status::ReportedOnly;
  grade(r);
  CHECK(r.status == Status::ReportedOnly);
  CHECK_FALSE(gating_failed({r}));
}

TEST_CASE("config validation") {
  SuiteConfig c;
  c.iters = 0;
  CHECK_THROWS_AS(c.validate(), InvalidInput);
  c = SuiteConfig{};
  c.format = "xml";
  CHECK_THROWS_AS(c.validate(), InvalidInput);
  c = SuiteConfig{};
  c.dims = {};
  CHECK_THROWS_AS(c.validate(), InvalidInput);
  c = SuiteConfig{};
  c.restarts = 0;
  CHECK_NOTHROW(c.validate());
}

TEST_CASE("small suite: fixed order, reports and determinism") {
  const auto c = small();
  const auto a = run_suite(c);
  REQUIRE(a.size() > 10);
  CHECK(a.front().check_id == "CR-identity/n=2");
  CHECK(a.back().check_id.rfind("ineq9-note", 0) == 0);

  const auto b = run_suite(c);
  auto strip = [&](const std::vector<CheckResult>& rs) {
    auto j = report_json(c, rs);
    for (auto& x : j["checks"]) x.erase("runtime_ms");
    return j.dump();
  };
  CHECK(strip(a) == strip(b));

  const auto md = report_markdown(c, a);
  std::size_t rows = 0;
  for (std::size_t at = md.find("\n| "); at != std::string::npos; at = md.find("\n| ", at + 1)) ++rows;
  CHECK(rows == a.size() + 1);  // header plus one row per check

  const auto j = report_json(c, a);
  CHECK(j["suite_version"] == kSuiteVersion);
  CHECK(j["checks"].size() == a.size());
}

TEST_CASE("zero restarts fail the nonconvex checks") {
  auto c = small();
  c.restarts = 0;
  const auto rs = run_suite(c);
  CHECK(gating_failed(rs));
  bool noted = false;
  for (const auto& r : rs)
    if (r.status == Status::Fail && r.note.find("converged=false") != std::string::npos) noted = true;
  CHECK(noted);
}
