// One line per acceptance criterion. Exit status is nonzero if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <sstream>

#include "cxkit/fixtures.hpp"

#ifndef CXKIT_FIXTURE_DIR
#define CXKIT_FIXTURE_DIR "fixtures"
#endif

using namespace cxkit;

namespace {

struct Outcome {
  bool pass = true;
  std::vector<std::string> why;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      why.push_back(what);
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

SpecDocument load(const std::string& stem) {
  return parse_spec(read_text(std::filesystem::path(CXKIT_FIXTURE_DIR) / (stem + ".spec")));
}

Complex complex_of(const SpecDocument& d, const std::string& name) {
  const ComplexDef* c = d.find_complex(name);
  if (!c) throw std::runtime_error("no complex " + name);
  return c->value;
}

OperatorMatrix op_of(const SpecDocument& d, const std::string& name) {
  const OpDef* o = d.find_op(name);
  if (!o) throw std::runtime_error("no operator " + name);
  return o->value;
}

bool scalar_times_identity(const OperatorMatrix& m, const Poly& s) {
  return m == s.with_vars(m.vars()) * OperatorMatrix::identity(m.vars(), m.rows());
}

// consecutive compositions, multiplied out here rather than through verify_complex
bool compositions_vanish(const Complex& c) {
  for (int q = 0; q + 1 < c.length(); ++q)
    if (!(c.op(q + 1) * c.op(q)).is_zero()) return false;
  return true;
}

Poly power_sum(const VarListPtr& v, int n, int p) {
  Poly s = Poly::constant(v, 0);
  for (int j = 0; j < n; ++j) s += pow(Poly::var(v, static_cast<std::size_t>(j)), static_cast<unsigned>(p));
  return s;
}

// tasks of the given commands in a fixture suite
Outcome fixture_tasks(const std::string& stem, const std::vector<std::string>& commands, std::size_t& count) {
  Outcome o;
  SpecDocument d = load(stem);
  SpecDocument run = d;
  run.tasks.clear();
  for (const auto& t : d.tasks)
    if (std::find(commands.begin(), commands.end(), t.command) != commands.end()) run.tasks.push_back(t);
  RunBundle b = run_document(run, stem, RunOptions{});
  for (const auto& t : b.tasks) o.require(t.pass, stem + ": " + t.task);
  count += b.tasks.size();
  return o;
}

void merge(Outcome& a, const Outcome& b) {
  a.pass = a.pass && b.pass;
  a.why.insert(a.why.end(), b.why.begin(), b.why.end());
}

Outcome criterion1() {
  Outcome o;
  auto t0 = std::chrono::steady_clock::now();
  std::vector<Complex> all;
  for (int n = 2; n <= 5; ++n) all.push_back(build_de_rham(n));
  for (int n = 2; n <= 3; ++n) {
    auto v = operator_vars(n);
    std::vector<Poly> d;
    for (int j = 0; j < n; ++j) d.push_back(Poly::var(v, static_cast<std::size_t>(j)));
    all.push_back(build_koszul(d, v));
    for (int p = 2; p <= 3; ++p) all.push_back(build_power_de_rham(n, p));
  }
  all.push_back(build_dolbeault(2));
  all.push_back(complex_of(load("plane-second-order"), "X"));
  all.push_back(complex_of(load("mixed-order"), "X"));
  for (const auto& c : all) {
    o.require(compositions_vanish(c), "composition nonzero in " + c.name());
    o.require(verify_complex(c).pass, "verify_complex fails for " + c.name());
  }
  double s = seconds_since(t0);
  o.require(s < 5.0, "took " + std::to_string(s) + " s");
  return o;
}

Outcome criterion2() {
  Outcome o;
  for (int n = 2; n <= 5; ++n) {
    Complex c = build_de_rham(n);
    for (int q = 0; q <= n; ++q)
      o.require(scalar_times_identity(laplacian(c, q), -laplace_symbol(c.vars())),
                "de Rham n=" + std::to_string(n) + " q=" + std::to_string(q));
  }
  for (int n = 2; n <= 3; ++n)
    for (int p = 1; p <= 3; ++p) {
      Complex c = build_power_de_rham(n, p);
      Poly s = power_sum(c.vars(), n, 2 * p);
      if (p % 2) s = -s;
      for (int q = 0; q <= n; ++q)
        o.require(scalar_times_identity(laplacian(c, q), s),
                  "power Koszul n=" + std::to_string(n) + " p=" + std::to_string(p) + " q=" + std::to_string(q));
    }
  Complex db = build_dolbeault(2);
  for (int q = 0; q <= 2; ++q)
    o.require(scalar_times_identity(laplacian(db, q), GaussianRational(-1, 4) * laplace_symbol(db.vars())),
              "Dolbeault q=" + std::to_string(q));
  SpecDocument mixed = load("mixed-order");
  Complex xm = complex_of(mixed, "X");
  const std::vector<Index> want_ranks{2, 4, 2};
  o.require(xm.ranks() == want_ranks, "mixed example ranks");
  for (int q = 0; q <= 2; ++q)
    o.require(scalar_times_identity(laplacian(xm, q), -laplace_symbol(xm.vars())), "mixed example q=" + std::to_string(q));
  SpecDocument q2 = load("plane-second-order");
  Complex xw = complex_of(q2, "Xw");
  MuSet w = q2.weights("Xw");
  o.require(generalized_laplacian(xw, 0, w) == op_of(q2, "lap0"), "weighted Laplacian q=0 differs from the display");
  o.require(generalized_laplacian(xw, 1, w) == op_of(q2, "lap1"), "weighted Laplacian q=1 differs from the display");
  return o;
}

Outcome criterion3(std::size_t& count) {
  Outcome o;
  merge(o, fixture_tasks("de-rham-3", {"maxwell", "stokes"}, count));
  merge(o, fixture_tasks("hydrodynamics", {"maxwell", "stokes"}, count));
  merge(o, fixture_tasks("quantum-mass", {"stokes"}, count));
  return o;
}

Outcome criterion4(std::size_t& count) {
  Outcome o;
  for (int n = 2; n <= 4; ++n) {
    Complex c = build_de_rham(n);
    std::vector<int> ones(static_cast<std::size_t>(n) + 1, 1);
    MuSet id = MuSet::identity(c), pw = MuSet::powered(c, ones, ones);
    for (int q = 1; q <= n; ++q) {
      o.require(verify_factorization(c, q, id).pass, "identity weights n=" + std::to_string(n) + " q=" + std::to_string(q));
      o.require(verify_factorization(c, q, pw).pass, "powered weights n=" + std::to_string(n) + " q=" + std::to_string(q));
    }
  }
  // the wave product against the d'Alembertian written in the fixture
  merge(o, fixture_tasks("de-rham-3", {"wave"}, count));
  Complex c = build_de_rham(3, FormBasis::hodge_dual);
  o.require(verify_wave_factorization(c, 3, MuSet::identity(c), std::vector<Poly>(4, Poly(1))).pass, "wave lemma");
  return o;
}

MuSet viscous(const Complex& c) {
  auto v = c.vars();
  Poly mu = Poly::var(v, "mu");
  MuSet w = MuSet::identity(c);
  w.set_mu0(0, OperatorMatrix::zero(v, c.rank(1), c.rank(1)));
  w.set_mu0(1, mu * OperatorMatrix::identity(v, c.rank(2)));
  w.set_mu1(1, OperatorMatrix::scalar(v, mu));
  return w;
}

// F * M == I after clearing the common denominator
bool cross_multiplied_identity(const RationalSymbolMatrix& f, const SymbolMatrix& m, bool right) {
  SymbolMatrix num = right ? SymbolMatrix(m.vars(), m.body() * f.numerator().body())
                           : SymbolMatrix(m.vars(), f.numerator().body() * m.body());
  return num == f.denominator() * SymbolMatrix::identity(m.vars(), num.rows());
}

Outcome criterion5() {
  Outcome o;
  std::vector<Complex> cs{build_de_rham(2), build_de_rham(3, FormBasis::hodge_dual), build_dolbeault(2)};
  for (const auto& c : cs) {
    MuSet mu = MuSet::identity(c);
    const int n = c.length();
    BlockOperator m0 = maxwell(c, n, mu, 0), m1 = maxwell(c, n, mu, 1);
    SymbolMatrix s0 = blockwise_symbol(m0), s1 = blockwise_symbol(m1);
    ParametrixResult r = maxwell_parametrix_symbol(c, mu, Side::right);
    ParametrixResult l = maxwell_parametrix_symbol(c, mu, Side::left);
    o.require(r.report.pass && l.report.pass, c.name() + ": parametrix report");
    o.require(cross_multiplied_identity(r.parametrix, s1.with_vars(r.parametrix.vars()), true), c.name() + ": right");
    o.require(cross_multiplied_identity(l.parametrix, s0.with_vars(l.parametrix.vars()), false), c.name() + ": left");
  }
  for (int n = 2; n <= 3; ++n) {
    Complex c = lift(build_de_rham(n, n == 3 ? FormBasis::hodge_dual : FormBasis::lexicographic), false, {"mu"});
    ParametrixResult f = stokes_fundamental_symbol(c, 1, viscous(c));
    o.require(f.report.pass, "fundamental symbol n=" + std::to_string(n));
    SymbolMatrix s = total_symbol(stokes(c, 1, viscous(c), {}, 1).body).with_vars(f.parametrix.vars());
    o.require(cross_multiplied_identity(f.parametrix, s, true), "S F = I cross-multiplied, n=" + std::to_string(n));
  }
  for (int n = 2; n <= 3; ++n) {
    Complex c = lift(build_de_rham(n, n == 3 ? FormBasis::hodge_dual : FormBasis::lexicographic), false, {"mu"});
    CheckReport e = verify_evolution_identity(c, 1, viscous(c), {Poly(0), Poly(1)});
    o.require(e.pass, "evolution identity n=" + std::to_string(n));
    auto sv = symbol_vars(n, true, {"mu"});
    Poly want = kI * Poly::var(sv, "tau") + Poly::var(sv, "mu") * squared_norm(sv);
    o.require(e.notes["denominator"] == want.str(), "evolution denominator " + e.notes["denominator"]);
  }
  return o;
}

Outcome criterion6() {
  Outcome o;
  SpecDocument d = load("plane-second-order");
  OperatorMatrix a = op_of(d, "A");
  EllipticityReport r = injectivity_check(a);
  o.require(r.determinant.has_value(), "no determinant");
  if (r.determinant) {
    auto sv = r.determinant->vars();
    Poly z1 = Poly::var(sv, 0), z2 = Poly::var(sv, 1);
    Poly want = pow(squared_norm(sv), 2) - z1 * z1 * z2 * z2;
    o.require(*r.determinant == want, "det = " + r.determinant->str());
  }
  // independent oracle: det(s^T s) for s(z) = [[z1, 0], [z2, z1], [0, z2]] on a grid of the circle
  const int grid = 1000000;
  double oracle = 1e300;
  for (int k = 0; k < grid; ++k) {
    double th = 2 * M_PI * k / grid, x = std::cos(th), y = std::sin(th);
    double a11 = x * x + y * y, a12 = y * x, a22 = x * x + y * y;
    oracle = std::min(oracle, a11 * a22 - a12 * a12);
  }
  o.require(std::abs(oracle - 0.75) < 1e-6, "grid oracle " + std::to_string(oracle));
  o.require(r.min_value && std::abs(*r.min_value - oracle) < 1e-6,
            "numeric min " + (r.min_value ? std::to_string(*r.min_value) : std::string("none")));
  o.require(r.passed(), "injectivity verdict " + verdict_name(r.verdict));
  for (int n = 2; n <= 5; ++n) {
    Complex c = build_de_rham(n);
    for (int q = 0; q <= n; ++q) {
      EllipticityReport e = complex_exactness_check(c, q, MuSet::identity(c));
      o.require(e.verdict == Verdict::certified_symbolic && e.certified_form == "(1)*(|z|^2)^1*I_" + std::to_string(c.rank(q)),
                "delta n=" + std::to_string(n) + " q=" + std::to_string(q) + ": " + e.certified_form);
    }
  }
  return o;
}

bool plan_exact(const WeightPlan& p) {
  for (const auto& e : p.equations)
    if (p.s.at(static_cast<std::size_t>(e.si)) - p.t.at(static_cast<std::size_t>(e.ti)) != e.rhs) return false;
  return p.violations().empty();
}

Outcome criterion7() {
  Outcome o;
  for (int n = 2; n <= 4; ++n) {
    Complex c = build_de_rham(n);
    MuSet id = MuSet::identity(c);
    auto [p0, p1] = dn_weights_maxwell(c, id);
    o.require(plan_exact(p0) && plan_exact(p1), "Maxwell plans n=" + std::to_string(n));
    for (int q = 1; q <= n; ++q) o.require(plan_exact(dn_weights_stokes(c, q, id)), "Stokes plan n=" + std::to_string(n));
  }
  Complex cs = lift(build_de_rham(3, FormBasis::hodge_dual), false, {"mu"});
  WeightPlan classical = dn_weights_stokes(cs, 1, viscous(cs));
  o.require(classical.s == std::vector<int>{2, 1} && classical.t == std::vector<int>{0, 1}, "classical Stokes plan");

  MuSet mu = MuSet::scalar(cs, Poly::var(cs.vars(), "mu"));
  BlockOperator s11 = stokes(cs, 1, mu, {}, 1);
  WeightPlan plan = dn_weights_stokes(cs, 1, mu);
  SearchOptions opt;
  opt.params = {{"mu", GaussianRational(1)}};
  opt.numeric_always = true;
  EllipticityReport r = dn_check(s11, plan, opt);
  double num_min = r.notes.count("numeric_min") ? std::stod(r.notes.at("numeric_min")) : (r.min_value ? *r.min_value : 0.0);
  o.require(r.passed(), "DN verdict " + verdict_name(r.verdict));
  o.require(num_min > 1e-9, "DN numeric min " + std::to_string(num_min));
  SymbolMatrix sym = bind_parameters(dn_symbol(s11, plan), opt.params);
  Poly oracle = determinant_cofactor(sym.body());
  o.require(r.determinant && *r.determinant == oracle, "DN determinant differs from the cofactor oracle");
  o.require(power_of_norm_factor(oracle).has_value(), "cofactor determinant is not a nonzero multiple of |z|^2k");
  return o;
}

Outcome criterion8() {
  Outcome o;
  auto t0 = std::chrono::steady_clock::now();
  SpecDocument d3 = load("de-rham-3");
  OperatorMatrix g = op_of(d3, "grad");
  o.require(module_equivalent(compatibility_operator(g), op_of(d3, "curl")), "gradient on R^3");
  SpecDocument q2 = load("plane-second-order");
  OperatorMatrix b = compatibility_operator(op_of(q2, "A"));
  o.require(module_equivalent(b, op_of(q2, "B")), "second order example");
  o.require((b * op_of(q2, "A")).is_zero(), "B A != 0");
  SpecDocument mixed = load("mixed-order");
  o.require(module_equivalent(compatibility_operator(op_of(mixed, "A")), op_of(mixed, "B")), "mixed example");
  Complex e = extend_to_complex(g, 8);
  o.require(e.ranks() == std::vector<Index>{1, 3, 3, 1}, "extended ranks");
  double s = seconds_since(t0);
  o.require(s < 60.0, "took " + std::to_string(s) + " s");
  return o;
}

Outcome criterion9() {
  Outcome o;
  std::filesystem::path dir = CXKIT_FIXTURE_DIR;
  std::vector<std::string> suites = list_suites(dir);
  RunOptions opt;
  std::string a = dump(bundle_json(run_suites(dir, suites, opt), opt));
  std::string b = dump(bundle_json(run_suites(dir, suites, opt), opt));
  o.require(a == b, "bundles differ");
  o.require(a.size() > 1000, "bundle unexpectedly small");
  return o;
}

}  // namespace

int main() {
  std::size_t n3 = 0, n4 = 0;
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"complex property", criterion1},
      {"Laplacian identities", criterion2},
      {"block fixtures", [&] { return criterion3(n3); }},
      {"factorization lemmas", [&] { return criterion4(n4); }},
      {"symbol level parametrices", criterion5},
      {"ellipticity", criterion6},
      {"DN weights", criterion7},
      {"syzygy equivalence", criterion8},
      {"determinism", criterion9},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    std::ostringstream line;
    line << (o.pass ? "PASS" : "FAIL") << " " << (k + 1) << " " << criteria[k].first;
    line.precision(3);
    line << " (" << seconds_since(t0) << " s)";
    std::cout << line.str() << "\n";
    for (const auto& w : o.why) std::cout << "     " << w << "\n";
    failed += o.pass ? 0 : 1;
  }
  std::cout << (criteria.size() - static_cast<std::size_t>(failed)) << "/" << criteria.size() << " criteria pass\n";
  return failed ? 1 : 0;
}
