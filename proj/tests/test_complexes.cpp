#include "doctest.h"

#include "cxkit/complexes.hpp"

using namespace cxkit;

namespace {

long binom(int n, int k) {
  long r = 1;
  for (int j = 1; j <= k; ++j) r = r * (n - k + j) / j;
  return r;
}

bool is_scalar_identity(const OperatorMatrix& m, const Poly& s) {
  if (!m.is_square()) return false;
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j)
      if (m(i, j) != (i == j ? s.with_vars(m.vars()) : Poly::constant(m.vars(), 0))) return false;
  return true;
}

}  // namespace

TEST_CASE("de Rham ranks and Laplacians") {
  for (int n = 2; n <= 5; ++n) {
    Complex c = build_de_rham(n);
    CHECK(c.length() == n);
    for (int q = 0; q <= n; ++q) CHECK(c.rank(q) == binom(n, q));
    CHECK(verify_complex(c).pass);
    Poly minus_lap = -laplace_symbol(c.vars());
    for (int q = 0; q <= n; ++q) CHECK(is_scalar_identity(laplacian(c, q), minus_lap));
  }
}

TEST_CASE("hodge basis on R^3 is grad, curl, div") {
  Complex c = build_de_rham(3, FormBasis::hodge_dual);
  auto v = c.vars();
  CHECK(c.op(0) == gradient(v));
  CHECK(c.op(2) == gradient(v).transpose());
  CHECK(is_formally_self_adjoint(c.op(1)));
  CHECK(verify_complex(c).pass);
}

TEST_CASE("powered Koszul Laplacians") {
  for (int p = 1; p <= 3; ++p) {
    Complex c = build_power_de_rham(3, p);
    CHECK(verify_complex(c).pass);
    Poly s = Poly::constant(c.vars(), 0);
    for (std::size_t j = 0; j < 3; ++j) s += pow(Poly::var(c.vars(), j), 2 * p);
    if (p % 2) s = -s;
    for (int q = 0; q <= 3; ++q) CHECK(is_scalar_identity(laplacian(c, q), s));
  }
}

TEST_CASE("Koszul of general commuting operators") {
  auto v = operator_vars(2);
  Poly a = Poly::var(v, 0) * Poly::var(v, 1), b = Poly::var(v, 0) + kI;
  Complex c = build_koszul({a, b}, v);
  CHECK(c.length() == 2);
  CHECK(verify_complex(c).pass);
}

TEST_CASE("Dolbeault complex") {
  Complex c = build_dolbeault(2);
  CHECK(c.spatial_dim() == 4);
  CHECK(verify_complex(c).pass);
  Poly s = GaussianRational(-1, 4) * laplace_symbol(c.vars());
  for (int q = 0; q <= 2; ++q) CHECK(is_scalar_identity(laplacian(c, q), s));
}

TEST_CASE("a broken complex reports residuals") {
  auto v = operator_vars(3);
  OperatorMatrix g = gradient(v);
  Complex c("bad", {g, g.transpose()});
  CheckReport r = verify_complex(c);
  CHECK_FALSE(r.pass);
  CHECK_FALSE(r.residuals.empty());
}

TEST_CASE("weighted Laplacian and its factorized form") {
  Complex c = build_de_rham(3, FormBasis::hodge_dual);
  MuSet mu = MuSet::powered(c, {1, 0, 1, 0}, {0, 1, 0, 1});
  CHECK_FALSE(mu.shape_error(c).has_value());
  CHECK(mu.self_adjoint());
  for (int q = 0; q <= 3; ++q) CHECK(generalized_laplacian(c, q, mu) == factorized_laplacian(c, q, mu));
  CHECK(check_coh(c, mu).pass);
  MuSet id = MuSet::identity(c);
  for (int q = 0; q <= 3; ++q) CHECK(generalized_laplacian(c, q, id) == laplacian(c, q));
}

TEST_CASE("weights of the wrong shape") {
  Complex c = build_de_rham(2);
  MuSet mu = MuSet::identity(c);
  CHECK_THROWS(mu.set_mu0(0, OperatorMatrix::identity(c.vars(), 3)));
  CHECK_FALSE(mu.shape_error(c).has_value());
}

TEST_CASE("signed basis change keeps the complex") {
  Complex c = build_de_rham(3);
  ExactMatrix t0 = ExactMatrix::Identity(1, 1);
  ExactMatrix t1 = ExactMatrix::Zero(3, 3);
  t1(0, 1) = 1;
  t1(1, 0) = -1;
  t1(2, 2) = 1;
  ExactMatrix t2 = ExactMatrix::Identity(3, 3);
  t2(1, 1) = -1;
  ExactMatrix t3 = ExactMatrix::Identity(1, 1);
  Complex d = change_basis(c, {t0, t1, t2, t3});
  CHECK(verify_complex(d).pass);
  CHECK(laplacian(d, 1) == laplacian(c, 1));
}

TEST_CASE("lifting adds time and parameters") {
  Complex c = lift(build_de_rham(2), true, {"mu"});
  CHECK(c.vars()->time_index().has_value());
  CHECK(c.vars()->parameters() == std::vector<std::string>{"mu"});
  CHECK(verify_complex(c).pass);
}
