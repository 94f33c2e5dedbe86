#include "doctest.h"

#include "cxkit/diffop.hpp"

using namespace cxkit;

namespace {

Poly d(const VarListPtr& v, std::size_t j) { return Poly::var(v, j); }

OperatorMatrix curl(const VarListPtr& v) {
  PolyMatrix m = zero_matrix(v, 3, 3);
  m(0, 1) = -d(v, 2);
  m(0, 2) = d(v, 1);
  m(1, 0) = d(v, 2);
  m(1, 2) = -d(v, 0);
  m(2, 0) = -d(v, 1);
  m(2, 1) = d(v, 0);
  return OperatorMatrix(v, m);
}

}  // namespace

TEST_CASE("adjoint of first and second order operators") {
  auto v = operator_vars(3);
  OperatorMatrix g = gradient(v);
  // grad^* = -div
  CHECK(formal_adjoint(g) == -g.transpose());
  CHECK(is_formally_self_adjoint(curl(v)));
  OperatorMatrix lap = OperatorMatrix::scalar(v, laplace_symbol(v));
  CHECK(is_formally_self_adjoint(lap));
  OperatorMatrix ig = kI * g;
  CHECK(formal_adjoint(ig) == ig.transpose());
}

TEST_CASE("adjoint reverses composition") {
  auto v = operator_vars(3);
  OperatorMatrix a = curl(v), b = gradient(v);
  CHECK(formal_adjoint(compose(a, b)) == compose(formal_adjoint(b), formal_adjoint(a)));
  CHECK(compose(a, b).is_zero());
}

TEST_CASE("total and principal symbols") {
  auto v = operator_vars(2, true);
  Poly x = d(v, 0), t = d(v, 2);
  OperatorMatrix heat = OperatorMatrix::scalar(v, t - x * x);
  SymbolMatrix s = total_symbol(heat);
  auto sv = s.vars();
  Poly z = Poly::var(sv, 0), tau = Poly::var(sv, 2);
  CHECK(s(0, 0) == kI * tau + z * z);
  CHECK(principal_symbol(heat, Grading::isotropic)(0, 0) == z * z);
  // dt carries no weight in the spatial grading
  CHECK(principal_symbol(heat, Grading::spatial_only)(0, 0) == z * z);
  CHECK(symbol_of_order(heat, 0, Grading::spatial_only)(0, 0) == kI * tau);
  CHECK(operator_from_symbol(s) == heat);
}

TEST_CASE("order and shape errors") {
  auto v = operator_vars(3);
  CHECK(gradient(v).order() == 1);
  CHECK(OperatorMatrix::zero(v, 2, 2).order() == -1);
  CHECK_THROWS_AS(compose(gradient(v), gradient(v)), std::invalid_argument);
  CHECK_THROWS_AS(gradient(v) + gradient(operator_vars(3, true)), VarListMismatch);
}

TEST_CASE("stacking and tensoring") {
  auto v = operator_vars(3);
  OperatorMatrix g = gradient(v);
  OperatorMatrix h = hstack({g, g});
  CHECK(h.rows() == 3);
  CHECK(h.cols() == 2);
  CHECK(vstack({g, g}).rows() == 6);
  OperatorMatrix b = block_diag({g, curl(v)});
  CHECK(b.rows() == 6);
  CHECK(b.cols() == 4);
  CHECK(b(3, 0).is_zero());
  CHECK(b(3, 2) == -d(v, 2));
  CHECK(tensor_identity(2, g) == block_diag({g, g}));
}

TEST_CASE("parameter binding") {
  auto v = operator_vars(1, false, {"mu"});
  OperatorMatrix a = OperatorMatrix::scalar(v, Poly::var(v, "mu") * d(v, 0) * d(v, 0));
  OperatorMatrix b = bind_parameters(a, {{"mu", GaussianRational(3)}});
  CHECK(b.vars()->size() == 1);
  CHECK(b(0, 0) == Poly(3) * Poly::var(b.vars(), 0) * Poly::var(b.vars(), 0));
}
