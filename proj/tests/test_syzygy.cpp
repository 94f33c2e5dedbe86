#include "doctest.h"

#include "cxkit/syzygy.hpp"

using namespace cxkit;

namespace {

ModuleElement elem(std::vector<Poly> c) { return ModuleElement{std::move(c)}; }

}  // namespace

TEST_CASE("ideal membership") {
  auto v = operator_vars(2);
  Poly x = Poly::var(v, 0), y = Poly::var(v, 1);
  GroebnerBasis g = groebner_module({elem({x * x - y}), elem({x * y - 1})});
  CHECK(g.contains(elem({pow(y, 2) - x})));
  CHECK(g.contains(elem({(x + y) * (x * x - y)})));
  CHECK_FALSE(g.contains(elem({x + 1})));
}

TEST_CASE("syzygies of two coprime scalars") {
  auto v = operator_vars(2);
  Poly x = Poly::var(v, 0), y = Poly::var(v, 1);
  SyzygyBasis s = syzygies({elem({x}), elem({y})});
  REQUIRE(s.generators.size() == 1);
  const auto& g = s.generators[0].comps;
  CHECK((g[0] * x + g[1] * y).is_zero());
  CHECK(module_equivalent(OperatorMatrix(v, (PolyMatrix(1, 2) << g[0], g[1]).finished()),
                          OperatorMatrix(v, (PolyMatrix(1, 2) << y, -x).finished())));
}

TEST_CASE("compatibility of the gradient is curl") {
  auto v = operator_vars(3);
  OperatorMatrix g = gradient(v);
  SyzygyTrace trace;
  OperatorMatrix b = compatibility_operator(g, &trace);
  CHECK(compose(b, g).is_zero());
  Poly d1 = Poly::var(v, 0), d2 = Poly::var(v, 1), d3 = Poly::var(v, 2), z = Poly::constant(v, 0);
  PolyMatrix curl(3, 3);
  curl << z, -d3, d2, d3, z, -d1, -d2, d1, z;
  CHECK(module_equivalent(b, OperatorMatrix(v, curl)));
  CHECK(trace.spairs > 0);
}

TEST_CASE("module equivalence is not containment") {
  auto v = operator_vars(2);
  Poly x = Poly::var(v, 0), y = Poly::var(v, 1);
  OperatorMatrix a(v, (PolyMatrix(1, 2) << x, y).finished());
  OperatorMatrix b(v, (PolyMatrix(2, 2) << x, y, y, x).finished());
  CHECK_FALSE(module_equivalent(a, b));
  CHECK(module_equivalent(a, OperatorMatrix(v, (PolyMatrix(2, 2) << x, y, x * x, x * y).finished())));
}

TEST_CASE("extend the gradient to the de Rham complex") {
  for (int n = 2; n <= 3; ++n) {
    auto v = operator_vars(n);
    Complex c = extend_to_complex(gradient(v), 8);
    std::vector<Index> want = n == 2 ? std::vector<Index>{1, 2, 1} : std::vector<Index>{1, 3, 3, 1};
    CHECK(c.ranks() == want);
  }
}

TEST_CASE("step budget") {
  auto v = operator_vars(3);
  try {
    extend_to_complex(gradient(v), 1);
    FAIL("expected the budget to run out");
  } catch (const StepBudgetExhausted& e) {
    CHECK(e.partial().length() >= 1);
  }
}

TEST_CASE("bad input") {
  CHECK_THROWS_AS(groebner_module({}), std::invalid_argument);
  auto v = operator_vars(1);
  Poly x = Poly::var(v, 0);
  CHECK_THROWS_AS(groebner_module({elem({x}), elem({x, x})}), std::invalid_argument);
}
