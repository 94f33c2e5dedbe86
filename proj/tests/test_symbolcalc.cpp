#include "doctest.h"

#include "cxkit/symbolcalc.hpp"
#include "cxkit/blockops.hpp"

using namespace cxkit;

namespace {

SymbolMatrix diag2(const VarListPtr& v, const Poly& a, const Poly& b) {
  PolyMatrix m = zero_matrix(v, 2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return SymbolMatrix(v, m);
}

}  // namespace

TEST_CASE("rational symbol arithmetic") {
  auto v = symbol_vars(2);
  Poly x = Poly::var(v, 0), y = Poly::var(v, 1);
  SymbolMatrix m = diag2(v, x * x + y * y, x * x + y * y);
  RationalSymbolMatrix inv = invert_symbol(m);
  CHECK(inv.denominator().degree() == 2);
  CHECK((inv * RationalSymbolMatrix::from(m)).is_identity());
  RationalSymbolMatrix half(m, Poly(2) * (x * x + y * y));
  CHECK(half + half == RationalSymbolMatrix::from(SymbolMatrix::identity(v, 2)));
  CHECK((half - half).numerator().is_zero());
}

TEST_CASE("singular symbols do not invert") {
  auto v = symbol_vars(2);
  Poly x = Poly::var(v, 0);
  PolyMatrix m(2, 2);
  m << x, x, x, x;
  CHECK_THROWS_AS(invert_symbol(SymbolMatrix(v, m)), std::domain_error);
}

TEST_CASE("block diagonal inverse has one denominator") {
  auto v = symbol_vars(2);
  Poly x = Poly::var(v, 0), y = Poly::var(v, 1);
  SymbolMatrix a = SymbolMatrix::scalar(v, x * x + 1);
  SymbolMatrix b = diag2(v, y, y);
  RationalSymbolMatrix inv = block_diagonal_inverse({a, b});
  CHECK(inv.rows() == 3);
  PolyMatrix full = zero_matrix(v, 3, 3);
  full(0, 0) = x * x + 1;
  full(1, 1) = y;
  full(2, 2) = y;
  CHECK((inv * RationalSymbolMatrix::from(SymbolMatrix(v, full))).is_identity());
}

TEST_CASE("symbol Laplacian of de Rham is the norm") {
  Complex c = build_de_rham(3, FormBasis::hodge_dual);
  for (int q = 0; q <= 3; ++q) {
    SymbolMatrix dq = delta(c, q);
    Poly n2 = squared_norm(dq.vars());
    CHECK(dq == n2 * SymbolMatrix::identity(dq.vars(), c.rank(q)));
  }
  CHECK(verify_laplace_symbol_relations(c).pass);
}

TEST_CASE("Maxwell parametrices") {
  for (int n = 2; n <= 3; ++n) {
    Complex c = build_de_rham(n, n == 3 ? FormBasis::hodge_dual : FormBasis::lexicographic);
    MuSet mu = MuSet::identity(c);
    CHECK(maxwell_parametrix_symbol(c, mu, Side::right).report.pass);
    CHECK(maxwell_parametrix_symbol(c, mu, Side::left).report.pass);
    CHECK(verify_symbolic_factorization(c, n, mu).pass);
    CHECK(verify_mu_commutation(c, mu).pass);
  }
}

TEST_CASE("Dolbeault parametrix") {
  Complex c = build_dolbeault(2);
  MuSet mu = MuSet::identity(c);
  CHECK(maxwell_parametrix_symbol(c, mu, Side::right).report.pass);
  CHECK(maxwell_parametrix_symbol(c, mu, Side::left).report.pass);
}

TEST_CASE("Oseen fundamental symbol") {
  Complex c = lift(build_de_rham(3, FormBasis::hodge_dual), false, {"mu"});
  auto v = c.vars();
  Poly mu = Poly::var(v, "mu");
  MuSet w = MuSet::identity(c);
  w.set_mu0(0, OperatorMatrix::zero(v, 3, 3));
  w.set_mu0(1, mu * OperatorMatrix::identity(v, 3));
  w.set_mu1(1, OperatorMatrix::scalar(v, mu));
  ParametrixResult r = stokes_fundamental_symbol(c, 1, w);
  CHECK(r.report.pass);
  CHECK(r.parametrix.rows() == 4);
}

TEST_CASE("evolution identity needs b = (0, ..., 1)") {
  Complex c = lift(build_de_rham(2), false, {"mu"});
  auto v = c.vars();
  Poly mu = Poly::var(v, "mu");
  MuSet w = MuSet::identity(c);
  w.set_mu0(0, OperatorMatrix::zero(v, 2, 2));
  w.set_mu0(1, OperatorMatrix::scalar(v, mu));
  w.set_mu1(1, OperatorMatrix::scalar(v, mu));
  CHECK(verify_evolution_identity(c, 1, w, {Poly(0), Poly(1)}).pass);
  CHECK_THROWS_AS(verify_evolution_identity(c, 1, w, {Poly(1), Poly(1)}), std::invalid_argument);
}
