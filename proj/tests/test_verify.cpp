#include <doctest.h>

#include <cmath>
#include <sstream>

#include "santalo/errors.hpp"
#include "santalo/function_spec.hpp"
#include "santalo/functionals.hpp"
#include "santalo/verify.hpp"
#include "test_util.hpp"

using namespace santalo;
using testutil::axis;

namespace {

std::vector<FunctionSpec> parse(const std::string& text) {
  std::istringstream in(text);
  return parse_function_specs(in);
}

GridFunction abs_grid() {
  return GridFunction::sample({axis(-30, 30, 60001)},
                              [](const Vector& x) { return std::abs(x(0)); }, Symmetry::symmetric);
}

GridFunction half_sq_grid() {
  return GridFunction::sample({axis(-12, 12, 4801)},
                              [](const Vector& x) { return 0.5 * x(0) * x(0); },
                              Symmetry::symmetric);
}

}  // namespace

TEST_CASE("function spec files") {
  const auto specs = parse(R"(
# two functions
[wedge]
family = exp_wedge
params = 2, 1
grid.lo = -2
grid.hi = 40
grid.steps = 42001

[l1]   # unconditional gauge
family = gauge_l1
grid.lo = -16, -16
grid.hi = 16, 16
grid.steps = 2001, 2001
symmetry = unconditional
)");
  REQUIRE(specs.size() == 2);
  CHECK(specs[0].name == "wedge");
  CHECK(specs[0].params == std::vector<double>{2, 1});
  CHECK(specs[1].dim() == 2);
  CHECK(specs[1].symmetry == Symmetry::unconditional);
  CHECK(&select_spec(specs, "l1") == &specs[1]);
  CHECK(&select_spec(specs, "") == &specs[0]);
  CHECK_THROWS_AS(select_spec(specs, "nope"), ParseError);

  const GridFunction w = build_grid_function(specs[0]);
  CHECK(santalo_product(w).value == doctest::Approx(M_E).epsilon(1e-4));
  CHECK(w.interpolate(Vector::Constant(1, -0.6)) == kInf);
  CHECK(w.interpolate(Vector::Constant(1, 1.0)) == doctest::Approx(3.0));

  const auto l1 = build_max_affine(specs[1]);
  REQUIRE(l1.has_value());
  CHECK(l1->pieces() == 4);
  Vector x(2);
  x << 0.3, -1.2;
  CHECK((*l1)(x) == doctest::Approx(1.5));
  CHECK(!build_max_affine(specs[0]).has_value());

  CHECK(specs[0].canonical() == parse(specs[0].canonical())[0].canonical());
  CHECK(fnv1a_hex("") == "cbf29ce484222325");
  CHECK(fnv1a_hex(specs[0].canonical()) != fnv1a_hex(specs[1].canonical()));
}

TEST_CASE("function spec families") {
  const auto specs = parse(R"(
[q]
family = quadratic
params = 2
grid.lo = -3
grid.hi = 3
grid.steps = 7
[p]
family = abs_power
params = 3
grid.lo = -3
grid.hi = 3
grid.steps = 7
[box]
family = indicator_box
params = -1, 1
grid.lo = -2
grid.hi = 2
grid.steps = 5
[fm]
family = fm_sequence
params = 4, 2
grid.lo = -3
grid.hi = 3
grid.steps = 7
[un]
family = uncond_sequence
params = 3
grid.lo = -3, -3
grid.hi = 3, 3
grid.steps = 7, 7
[ma]
family = max_affine
params = -1, 0, 2, 1
grid.lo = -3
grid.hi = 3
grid.steps = 7
[linf]
family = gauge_linf
params = 2
grid.lo = -3, -3
grid.hi = 3, 3
grid.steps = 7, 7
)");
  const Vector two = Vector::Constant(1, 2.0);
  CHECK(build_grid_function(specs[0]).interpolate(two) == doctest::Approx(4.0));
  CHECK(build_grid_function(specs[1]).interpolate(two) == doctest::Approx(8.0 / 3));
  CHECK(build_grid_function(specs[2]).at(0) == kInf);
  CHECK(build_grid_function(specs[2]).at(1) == 0.0);
  // reflected fm: max(k(x-1), 1-x)
  CHECK(build_grid_function(specs[3]).interpolate(two) == doctest::Approx(4.0));
  CHECK(build_grid_function(specs[3]).interpolate(-two) == doctest::Approx(3.0));
  Vector x(2);
  x << 2.0, -0.5;
  CHECK(build_grid_function(specs[4]).interpolate(x) == doctest::Approx(3.0));
  CHECK(build_max_affine(specs[4])->pieces() == 9);
  CHECK(build_grid_function(specs[5]).interpolate(two) == doctest::Approx(3.0));
  CHECK(build_grid_function(specs[6]).interpolate(x) == doctest::Approx(1.0));
}

TEST_CASE("function spec errors") {
  const std::string grid = "grid.lo = -1\ngrid.hi = 1\ngrid.steps = 5\n";
  CHECK_THROWS_AS(parse("[a]\nfamily = quadratic\ncolour = red\n" + grid), ParseError);
  CHECK_THROWS_AS(parse("[a]\nfamily = cubic\n" + grid), ParseError);
  CHECK_THROWS_AS(parse("[a]\nfamily = quadratic\n"), ParseError);
  CHECK_THROWS_AS(parse("family = quadratic\n" + grid), ParseError);
  CHECK_THROWS_AS(parse("[a]\nfamily = quadratic\nparams = x\n" + grid), ParseError);
  CHECK_THROWS_AS(parse("[a]\nfamily = quadratic\nparams = -1\n" + grid), InvalidParameter);
  CHECK_THROWS_AS(parse("[a]\nfamily = abs_power\nparams = 0.5\n" + grid), InvalidParameter);
  CHECK_THROWS_AS(parse("[a]\nfamily = fm_sequence\nparams = 2.5\n" + grid), InvalidParameter);
  CHECK_THROWS_AS(parse("[a]\nfamily = max_affine\nparams = 1, 2, 3\n" + grid), ParseError);
  CHECK_THROWS_AS(parse("[a]\nfamily = quadratic\nsymmetry = odd\n" + grid), ParseError);
  CHECK_THROWS_AS(parse("[a]\nfamily = quadratic\ngrid.lo = -1, -1\ngrid.hi = 1\ngrid.steps = 5\n"),
                  ParseError);
  CHECK_THROWS_AS(parse("# nothing\n"), ParseError);
}

TEST_CASE("check_is examples") {
  const CheckReport a = check_is(abs_grid(), 4.0, IsVariant::unconditional, "abs");
  CHECK(a.passed());
  CHECK(std::abs(a.margin) < 1e-4);
  const GridFunction w = GridFunction::sample({axis(-2, 40, 42001)}, [](const Vector& x) {
    return x(0) < -1.0 - 1e-9 ? kInf : x(0);
  });
  const CheckReport b = check_is(w, M_E);
  CHECK(b.passed());
  CHECK(std::abs(b.margin) < 1e-4);
  const CheckReport q = check_is(half_sq_grid(), M_E);
  CHECK(q.detail("product") == doctest::Approx(2 * M_PI).epsilon(1e-5));
  CHECK(q.margin == doctest::Approx(std::log(2 * M_PI) - 1.0).epsilon(1e-5));
  // margins move by exactly n log(c'/c)
  const CheckReport q4 = check_is(half_sq_grid(), 4.0);
  CHECK(std::abs((q.margin - q4.margin) - std::log(4.0 / M_E)) < 1e-12);
  CHECK(check_is(w, M_E, IsVariant::symmetric).status == CheckStatus::not_applicable);
  const GridFunction zero = GridFunction::sample({axis(-1, 1, 5)}, [](const Vector&) { return 0.0; });
  CHECK(check_is(zero, M_E).status == CheckStatus::not_applicable);
}

TEST_CASE("check_mainresult examples") {
  const CheckReport g = check_mainresult(gaussian_density(1), gaussian_density(1), M_E);
  CHECK(g.passed());
  CHECK(g.detail("W2sq") == 0.0);
  CHECK(g.margin == doctest::Approx(std::log(2 * M_PI / M_E)).epsilon(1e-6));
  const CheckReport fm = check_mainresult(fm_density(10, 1), fm_density(10, 2), M_E);
  CHECK(fm.passed());
  CHECK(std::abs(fm.margin - 2 * std::log(1.1)) < 5e-3);
  CHECK(fm.detail("deficit_margin") == doctest::Approx(fm.margin).epsilon(1e-9));
  const CheckReport u = check_mainresult(uncond_density(100), tau_s_density(1), 4.0);
  CHECK(u.passed());
  CHECK(u.margin < 0.02);
  CHECK(check_mainresult(tau_density(), tau_density(true), M_E).status ==
        CheckStatus::not_applicable);
}

TEST_CASE("check_mainresult2 examples") {
  const CheckReport t = check_mainresult2(tau_s_density(1));
  CHECK(t.passed());
  CHECK(t.margin == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(t.detail("W2sq") == 0.0);
  const CheckReport u = check_mainresult2(uncond_density(100));
  CHECK(u.passed());
  CHECK(u.margin < 0.02);
  const CheckReport g = check_mainresult2(gaussian_density(1));
  CHECK(g.passed());
  CHECK(g.margin > 0.0);
  CHECK(check_mainresult2(fm_density(3, 1)).status == CheckStatus::not_applicable);
}

TEST_CASE("check_fm_sequence examples") {
  const CheckReport k1 = check_fm_sequence(1);
  CHECK(k1.passed());
  CHECK(k1.detail("H1") == doctest::Approx(-1 - std::log(2.0)).epsilon(1e-9));
  CHECK(k1.detail("T") == 1.0);
  CHECK(std::abs(k1.detail("W2sq")) < 1e-15);
  CHECK(k1.lhs == doctest::Approx(2 * std::log(2.0)).epsilon(1e-9));
  CHECK(check_fm_sequence(5).lhs == doctest::Approx(0.3646431136).epsilon(1e-9));
  const CheckReport k100 = check_fm_sequence(100);
  CHECK(k100.passed());
  CHECK(k100.detail("W2sq") == doctest::Approx(198.0).epsilon(1e-14));
  CHECK(k100.lhs == doctest::Approx(0.0199006617).epsilon(1e-8));
  CHECK_THROWS_AS(check_fm_sequence(0), InvalidParameter);
}

TEST_CASE("check_epi examples") {
  const LogConcaveDensity g = gaussian_density(1);
  const CheckReport e = check_epi(g, g, 2 * M_PI);
  CHECK(e.passed());
  CHECK(std::abs(e.margin) < 1e-6);
  const CheckReport t = check_epi(tau_s_density(1), 2 * M_PI);
  CHECK(t.detail("N") == doctest::Approx(2 * M_E / M_PI).epsilon(1e-10));
  CHECK(t.detail("I_leb") == doctest::Approx(1.0).epsilon(1e-12));
  const LogConcaveDensity ts = tau_s_density(1);
  const double base = check_epi(ts, g, M_E).detail("product");
  for (double lambda : {0.5, 2.0})
    CHECK(std::abs(check_epi(ts.dilated(lambda), g, M_E).detail("product") - base) < 1e-8 * base);
  CHECK(check_epi(tau_density(), g, M_E).status == CheckStatus::not_applicable);
}

TEST_CASE("check_entropy_transport examples") {
  const LogConcaveDensity g = gaussian_density(1);
  const CheckReport a = check_entropy_transport(g, g, M_E);
  CHECK(a.passed());
  CHECK(a.lhs == doctest::Approx(-std::log(2 * M_PI * M_E)).epsilon(1e-6));
  CHECK(a.rhs == doctest::Approx(-2.0).epsilon(1e-6));
  const CheckReport t = check_entropy_transport(tau_s_density(1), tau_s_density(1), 4.0);
  CHECK(t.margin == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(check_entropy_transport(g, g, 2 * M_PI + 0.1).failed());
  // +inf regions: the virial terms enter and the ghost pair is an equality
  const CheckReport gh = check_entropy_transport(tau_density(), tau_density(true), M_E);
  CHECK(gh.passed());
  CHECK(std::abs(gh.margin) < 1e-5);
}

TEST_CASE("check_polytope_constants") {
  const CheckReport c2 = check_polytope_constants(2);
  CHECK(c2.passed());
  CHECK(c2.detail("vol_b1_vol_binf") == doctest::Approx(8.0).epsilon(1e-15));
  CHECK(std::abs(c2.detail("laplace_l1") - 4.0) < 1e-5);
  const CheckReport c3 = check_polytope_constants(3);
  CHECK(c3.detail("simplex_product") == doctest::Approx(256.0 / 36).epsilon(1e-14));
  CHECK(c3.detail("vol_b1_vol_binf") == doctest::Approx(64.0 / 6).epsilon(1e-14));
  CHECK(check_polytope_constants(1).detail("simplex_product") == doctest::Approx(4.0).epsilon(1e-15));
  CHECK_THROWS_AS(check_polytope_constants(4), InvalidParameter);
}

TEST_CASE("suites") {
  CHECK_THROWS_AS(run_suite("everything"), UsageError);
  const auto seq = run_suite("sequences");
  int fm = 0;
  for (const auto& r : seq) {
    CHECK_MESSAGE(!r.failed(), r.check_id);
    CHECK(!r.provenance.empty());
    if (r.check_id.rfind("fm_sequence/", 0) == 0) ++fm;
  }
  CHECK(fm == 5);
  CHECK(std::is_sorted(seq.begin(), seq.end(), [](const CheckReport& a, const CheckReport& b) {
    return a.check_id < b.check_id;
  }));
  std::ostringstream a, b;
  write_reports_csv(a, seq);
  write_reports_csv(b, run_suite("sequences"));
  CHECK(a.str() == b.str());
  CHECK(a.str().rfind("check_id,lhs,rhs,margin,tol,status,est_error\n", 0) == 0);

  SuiteOptions loose;
  loose.tol_scale = 10.0;
  const auto l = run_suite("sequences", loose);
  CHECK(l.front().tol == doctest::Approx(10 * seq.front().tol));
  for (const auto& r : run_suite("duality")) CHECK_MESSAGE(!r.failed(), r.check_id);
}
