#include "doctest.h"

#include <cmath>

#include "cxkit/ellipticity.hpp"
#include "cxkit/blockops.hpp"

using namespace cxkit;

TEST_CASE("norm power detection") {
  auto v = symbol_vars(2);
  Poly n2 = squared_norm(v);
  auto f = power_of_norm_factor(Poly(-3) * pow(n2, 2));
  REQUIRE(f.has_value());
  CHECK(*f == GaussianRational(-3));
  CHECK_FALSE(power_of_norm_factor(n2 + Poly::var(v, 0) * Poly::var(v, 1)).has_value());
  CHECK_FALSE(power_of_norm_factor(Poly::constant(v, 0)).has_value());
}

TEST_CASE("sphere minimum of a known function") {
  SearchOptions opt;
  opt.budget = 4000;
  // min of x0^2 + 2 x1^2 + 3 x2^2 on S^2 is 1
  auto f = [](std::span<const double> x) { return x[0] * x[0] + 2 * x[1] * x[1] + 3 * x[2] * x[2]; };
  SphereMinimum m = minimize_on_sphere(3, f, opt);
  CHECK(m.value == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(std::abs(m.point[0]) == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("search is deterministic across thread counts") {
  auto f = [](std::span<const double> x) { return std::pow(x[0] * x[1] - 0.3, 2) + x[2] * x[2] * x[0]; };
  SearchOptions a, b;
  a.threads = 1;
  b.threads = 4;
  SphereMinimum ma = minimize_on_sphere(3, f, a), mb = minimize_on_sphere(3, f, b);
  CHECK(ma.value == mb.value);
  CHECK(ma.point == mb.point);
}

TEST_CASE("Laplacian is certified Petrovskii and strongly elliptic") {
  auto v = operator_vars(3);
  OperatorMatrix lap = OperatorMatrix::scalar(v, -laplace_symbol(v));
  EllipticityReport p = petrovskii_check(lap);
  CHECK(p.verdict == Verdict::certified_symbolic);
  EllipticityReport s = strong_ellipticity_check(lap);
  CHECK(s.passed());
}

TEST_CASE("a degenerate symbol fails with a witness") {
  auto v = operator_vars(2);
  OperatorMatrix a = OperatorMatrix::scalar(v, Poly::var(v, 0));
  EllipticityReport r = petrovskii_check(a);
  CHECK(r.verdict == Verdict::fail);
  REQUIRE(r.witness.size() == 2);
  CHECK(std::abs(r.witness[0]) < 1e-6);
}

TEST_CASE("gradient is injective, not invertible") {
  auto v = operator_vars(3);
  OperatorMatrix g = gradient(v);
  EllipticityReport r = injectivity_check(g);
  CHECK(r.passed());
  REQUIRE(r.determinant.has_value());
  CHECK(*r.determinant == squared_norm(r.determinant->vars()));
}

TEST_CASE("de Rham symbol Laplacian is certified") {
  for (int n = 2; n <= 4; ++n) {
    Complex c = build_de_rham(n);
    for (int q = 0; q <= n; ++q) {
      EllipticityReport r = complex_exactness_check(c, q, MuSet::identity(c));
      CHECK(r.verdict == Verdict::certified_symbolic);
      CHECK(r.certified_form == "(1)*(|z|^2)^1*I_" + std::to_string(c.rank(q)));
    }
  }
}

TEST_CASE("chain weights solve their equations") {
  WeightPlan p = solve_chain_weights({2, 1, 1}, {1, 1, 1}, "test");
  CHECK(p.violations().empty());
  for (const auto& e : p.equations)
    CHECK(p.s[static_cast<std::size_t>(e.si)] - p.t[static_cast<std::size_t>(e.ti)] == e.rhs);
}

TEST_CASE("classical Stokes plan") {
  Complex c = lift(build_de_rham(3, FormBasis::hodge_dual), false, {"mu"});
  MuSet mu = MuSet::identity(c);
  mu.set_mu0(0, OperatorMatrix::zero(c.vars(), 3, 3));
  WeightPlan p = dn_weights_stokes(c, 1, mu);
  CHECK(p.s == std::vector<int>{2, 1});
  CHECK(p.t == std::vector<int>{0, 1});
  CHECK(p.violations().empty());
  CHECK(p.nonnegative());
}

TEST_CASE("Maxwell plans") {
  Complex c = build_de_rham(3, FormBasis::hodge_dual);
  auto [p0, p1] = dn_weights_maxwell(c, MuSet::identity(c));
  CHECK(p0.violations().empty());
  CHECK(p1.violations().empty());
}
