#include "doctest.h"

#include "cxkit/blockops.hpp"

using namespace cxkit;

TEST_CASE("partition layout puts degree q on top") {
  BlockPartition p({1, 3, 3});
  CHECK(p.size() == 7);
  CHECK(p.offset(2) == 0);
  CHECK(p.offset(1) == 3);
  CHECK(p.offset(0) == 6);
  CHECK(p.degree_of_row(6) == 0);
  CHECK(p.degree_of_row(2) == 2);
}

TEST_CASE("Maxwell operator is block tridiagonal and self-adjoint") {
  Complex c = build_de_rham(3, FormBasis::hodge_dual);
  for (int q = 1; q <= 3; ++q) {
    BlockOperator m = maxwell(c, q);
    CHECK(m.is_block_tridiagonal());
    CHECK(m.block(q, q).is_zero());
    CHECK(m.block(q, q - 1) == c.op(q - 1));
    CHECK(m.block(q - 1, q) == formal_adjoint(c.op(q - 1)));
    CHECK(is_formally_self_adjoint(m.body));
  }
}

TEST_CASE("lower-right minor of a longer operator") {
  Complex c = build_de_rham(3, FormBasis::hodge_dual);
  BlockOperator m3 = maxwell(c, 3), m2 = maxwell(c, 2);
  Index r = m2.partition.size();
  CHECK(m3.body.block(m3.partition.size() - r, m3.partition.size() - r, r, r) == m2.body);
}

TEST_CASE("unweighted Stokes diagonal is the Laplacian") {
  Complex c = build_de_rham(2);
  MuSet mu = MuSet::identity(c);
  BlockOperator s = stokes(c, 2, mu, {}, 1);
  for (int j = 0; j <= 2; ++j) CHECK(s.block(j, j) == laplacian(c, j).with_vars(s.body.vars()));
  CHECK(s.is_block_tridiagonal());
}

TEST_CASE("factorization with identity and powered weights") {
  for (int n = 2; n <= 4; ++n) {
    Complex c = build_de_rham(n);
    std::vector<int> ones(static_cast<std::size_t>(n) + 1, 1);
    MuSet id = MuSet::identity(c), pw = MuSet::powered(c, ones, ones);
    for (int q = 1; q <= n; ++q) {
      CHECK(verify_factorization(c, q, id).pass);
      CHECK(verify_factorization(c, q, pw).pass);
      CHECK(check_commute_mu(c, q, pw).pass);
    }
  }
}

TEST_CASE("wave factorization gives d'Alembertians") {
  Complex c = build_de_rham(3, FormBasis::hodge_dual);
  MuSet mu = MuSet::identity(c);
  std::vector<Poly> b(4, Poly(1));
  CHECK(verify_wave_factorization(c, 3, mu, b).pass);
  std::vector<Poly> uneven{Poly(1), Poly(2), Poly(1), Poly(1)};
  CHECK_FALSE(verify_wave_factorization(c, 3, mu, uneven).pass);
}

TEST_CASE("time diagonal") {
  Complex c = build_de_rham(2);
  BlockOperator m = maxwell_time(c, 2, MuSet::identity(c), {Poly(1), Poly(1), Poly(1)});
  CHECK(m.body.has_time());
  auto t = *m.body.vars()->time_index();
  for (Index i = 0; i < m.body.rows(); ++i) CHECK(m.body(i, i) == Poly::var(m.body.vars(), t));
}

TEST_CASE("monomial similarity") {
  Complex c = build_de_rham(3, FormBasis::hodge_dual);
  OperatorMatrix x = maxwell(c, 2).body;
  ExactMatrix p = ExactMatrix::Zero(x.rows(), x.rows());
  for (Index i = 0; i < x.rows(); ++i) p(i, (i + 2) % x.rows()) = (i % 2) ? GaussianRational(-1) : kI;
  OperatorMatrix y = conjugate_by(p, x);
  auto found = find_monomial_similarity(x, y);
  REQUIRE(found.has_value());
  CHECK(conjugate_by(*found, x) == y);
  OperatorMatrix z = y + OperatorMatrix::identity(y.vars(), y.rows());
  CHECK_FALSE(find_monomial_similarity(x, z).has_value());
}

TEST_CASE("scaling the complex by i") {
  Complex c = build_de_rham(3, FormBasis::hodge_dual);
  Complex d = scale_complex(c, kI);
  CHECK(verify_complex(d).pass);
  CHECK(d.op(0) == kI * c.op(0));
  CHECK(laplacian(d, 1) == laplacian(c, 1));
}
