#include "doctest.h"

#include "cxkit/dsl.hpp"

using namespace cxkit;

namespace {

std::string error_of(const std::string& text) {
  try {
    parse_spec(text);
  } catch (const ParseError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("operators, complexes, weights and tasks") {
  SpecDocument d = parse_spec(
      "space 2;\n"
      "op A = [d1, 0; d2, d1; 0, d2];\n"
      "op B = [d2^2, -d1*d2, d1^2];  // second order\n"
      "complex X = chain(A, B);\n"
      "mu0 X 0 = -(d1^2 + d2^2)*eye(3);\n"
      "task syzygy A expect=B;\n");
  const OpDef* a = d.find_op("A");
  REQUIRE(a);
  CHECK(a->value.rows() == 3);
  CHECK(a->value.cols() == 2);
  CHECK(a->value(1, 1) == Poly::var(d.vars(), 0));
  REQUIRE(d.find_complex("X"));
  CHECK(d.find_complex("X")->value.ranks() == std::vector<Index>{2, 3, 1});
  CHECK(d.weights("X").mu0(0).rows() == 3);
  REQUIRE(d.tasks.size() == 1);
  CHECK(d.tasks[0].command == "syzygy");
  CHECK(d.tasks[0].get("expect")->name == "B");
}

TEST_CASE("builder text") {
  SpecDocument d = parse_spec("space 3;\ncomplex C = de_rham(3);\n");
  CHECK(d.find_complex("C")->value.ranks() == std::vector<Index>{1, 3, 3, 1});
  ComplexDef c = parse_complex_expr("power_de_rham(2, 3)");
  CHECK(c.value.spatial_dim() == 2);
  CHECK(c.value.order(0) == 3);
  CHECK(parse_complex_expr("dolbeault(2)").value.spatial_dim() == 4);
}

TEST_CASE("time, parameters, decimals and the partial sign") {
  SpecDocument d = parse_spec("space 1;\ntime;\nparam c;\nop H = c*dt - 0.25*\xE2\x88\x82" "1^2;\n");
  auto v = d.vars();
  Poly want = Poly::var(v, "c") * Poly::var(v, "dt") - GaussianRational(1, 4) * pow(Poly::var(v, "d1"), 2);
  CHECK(d.find_op("H")->value(0, 0) == want);
}

TEST_CASE("print round trip") {
  const char* text =
      "space 3;\ntime;\nparam mu;\n"
      "op g = [d1; d2; d3];\n"
      "op m = i*[mu*dt, d1; d1, 0];\n"
      "complex D = de_rham(3, hodge);\n"
      "complex S = de_rham(3, hodge);\n"
      "mu S = scalar(mu);\n"
      "task stokes S q=1 a=1 tb=(0, 1) left=(1, -1);\n"
      "task syzygy g;\n";
  SpecDocument d = parse_spec(text);
  std::string printed = print_spec(d);
  SpecDocument e = parse_spec(printed);
  CHECK(d == e);
  CHECK(print_spec(e) == printed);
}

TEST_CASE("error positions") {
  CHECK(error_of("space 2;\nop A = d1^;\n") == "2:10: syntax error: expected an integer exponent after '^'");
  CHECK(error_of("space 2;\nop A = d5;\n").rfind("2:8: unknown symbol", 0) == 0);
  CHECK(error_of("space 2;\nop A = [d1; d2] + [d1, d2];\n").rfind("2:", 0) == 0);
  CHECK(error_of("space 2;\nop A = foo;\n").rfind("2:8:", 0) == 0);
  CHECK(error_of("space 2;\nop A = [d1, d2; d1];\n").rfind("2:", 0) == 0);
}

TEST_CASE("error kinds") {
  try {
    parse_spec("space 2;\nop A = [d1; d2] * [d1; d2];\n");
    FAIL("expected a dimension error");
  } catch (const ParseError& e) {
    CHECK(e.kind() == ParseErrorKind::dimension);
    CHECK(e.pos().line == 2);
  }
}

TEST_CASE("division only by constants") {
  CHECK_NOTHROW(parse_spec("space 1;\nop A = d1/2;\n"));
  CHECK_FALSE(error_of("space 1;\nparam c;\nop A = d1/c;\n").empty());
  CHECK_FALSE(error_of("space 1;\nop A = d1/0;\n").empty());
}
