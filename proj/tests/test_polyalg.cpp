#include "doctest.h"

#include <random>

#include "cxkit/poly_matrix.hpp"

using namespace cxkit;

namespace {

VarListPtr v3() { return operator_vars(3); }

Poly random_poly(std::mt19937& rng, const VarListPtr& v, int terms, int maxdeg) {
  std::uniform_int_distribution<int> c(-4, 4), e(0, maxdeg), which(0, static_cast<int>(v->size()) - 1);
  Poly p = Poly::constant(v, 0);
  for (int k = 0; k < terms; ++k) {
    Poly m = Poly::constant(v, GaussianRational(mpq_class(c(rng)), mpq_class(c(rng) % 2)));
    for (int j = 0; j < 2; ++j) m *= pow(Poly::var(v, static_cast<std::size_t>(which(rng))), static_cast<unsigned>(e(rng)));
    p += m;
  }
  return p;
}

}  // namespace

TEST_CASE("gaussian rational arithmetic") {
  GaussianRational a(mpq_class(1, 2), mpq_class(3));
  GaussianRational b(mpq_class(-2), mpq_class(1, 3));
  CHECK((a * b) / b == a);
  CHECK(kI * kI == GaussianRational(-1));
  CHECK(a.conj() * a == GaussianRational(a.norm2()));
  CHECK(GaussianRational::rational("6/8") == GaussianRational(3, 4));
  CHECK(GaussianRational(mpq_class(3, 4), mpq_class(-1, 2)).str() == "3/4-1/2*i");
  CHECK_THROWS_AS(a / GaussianRational(0), std::domain_error);
}

TEST_CASE("variable lists are interned") {
  CHECK(operator_vars(3) == operator_vars(3));
  CHECK(operator_vars(3) != operator_vars(2));
  auto s = symbol_vars_for(operator_vars(2, true, {"mu"}));
  CHECK(s->names() == std::vector<std::string>{"z1", "z2", "tau", "mu"});
  auto m = merge_vars(operator_vars(2), operator_vars(1, true, {"c"}));
  CHECK(m->names() == std::vector<std::string>{"d1", "d2", "dt", "c"});
}

TEST_CASE("polynomial ring axioms on random samples") {
  std::mt19937 rng(7);
  auto v = v3();
  for (int trial = 0; trial < 40; ++trial) {
    Poly a = random_poly(rng, v, 4, 3), b = random_poly(rng, v, 4, 3), c = random_poly(rng, v, 3, 2);
    CHECK(a * (b + c) == a * b + a * c);
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * b == b * a);
    CHECK((a - a).is_zero());
    if (!b.is_zero()) CHECK(divide_exact(a * b, b) == a);
  }
}

TEST_CASE("printing follows graded lex order") {
  auto v = v3();
  Poly x = Poly::var(v, 0), y = Poly::var(v, 1);
  Poly p = pow(x + y, 2) - GaussianRational(1, 2) * y + kI;
  CHECK(p.str() == "d1^2 + 2*d1*d2 + d2^2 - 1/2*d2 + i");
  CHECK(p.degree() == 2);
  CHECK(p.homogeneous_part(2) == pow(x + y, 2));
  CHECK_FALSE(p.is_homogeneous());
}

TEST_CASE("substitution and evaluation") {
  auto v = v3();
  Poly x = Poly::var(v, 0), z = Poly::var(v, 2);
  Poly p = x * x * z - Poly(3) * z;
  CHECK(p.substitute(2, GaussianRational(2)) == Poly(2) * x * x - 6);
  std::vector<GaussianRational> pt{GaussianRational(1), GaussianRational(0), kI};
  CHECK(p.evaluate(std::span<const GaussianRational>(pt)) == GaussianRational(mpq_class(0), mpq_class(-2)));
  CHECK(p.substitute(0, z) == pow(z, 3) - Poly(3) * z);
}

TEST_CASE("exact division") {
  auto v = v3();
  Poly x = Poly::var(v, 0), y = Poly::var(v, 1);
  CHECK(exact_divide(x * x - y * y, x - y) == x + y);
  CHECK_FALSE(exact_divide(x * x + y, x).has_value());
  CHECK_THROWS(divide_exact(x, Poly::constant(v, 0)));
}

TEST_CASE("re-ringing by name") {
  auto small = operator_vars(2);
  auto big = operator_vars(3, true);
  Poly p = Poly::var(small, 1) * Poly::var(small, 0);
  Poly q = p.with_vars(big);
  CHECK(q.vars() == big);
  CHECK(q.str() == p.str());
  CHECK_THROWS(Poly::var(big, 2).with_vars(small));
}

TEST_CASE("determinant oracles agree") {
  std::mt19937 rng(11);
  auto v = operator_vars(2);
  for (int trial = 0; trial < 10; ++trial) {
    const Index n = 3 + trial % 3;
    PolyMatrix m(n, n);
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j) m(i, j) = random_poly(rng, v, 2, 1);
    Poly a = determinant_cofactor(m), b = determinant_bareiss(m);
    CHECK(a == b);
    PolyMatrix prod = m * adjugate(m);
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j) CHECK(prod(i, j) == (i == j ? a : Poly::constant(v, 0)));
  }
}

TEST_CASE("sum of squares") {
  auto v = operator_vars(2, true, {"c"});
  Poly x = Poly::var(v, 0), y = Poly::var(v, 1);
  CHECK(squared_norm(v) == x * x + y * y);
}
