#include "cxkit/fixtures.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "cxkit/parallel.hpp"

namespace cxkit {

namespace fs = std::filesystem;

bool RunBundle::pass() const {
  return std::all_of(tasks.begin(), tasks.end(), [](const TaskOutcome& t) { return t.pass; });
}

std::size_t RunBundle::passed() const {
  return static_cast<std::size_t>(std::count_if(tasks.begin(), tasks.end(), [](const TaskOutcome& t) { return t.pass; }));
}

const std::vector<std::string>& task_commands() {
  static const std::vector<std::string> cmds = {
      "verify",         "laplacian",         "maxwell",          "stokes",           "factorization",
      "wave",           "commute",           "relations",        "mu-commutation",   "selfadjoint",
      "equal",          "ellipticity-petrovskii", "ellipticity-strong", "ellipticity-injective",
      "ellipticity-exactness", "ellipticity-dn", "dn-weights",   "parametrix",       "evolution",
      "syzygy",         "extend"};
  return cmds;
}

namespace {

// ------------------------------------------------------------ arguments

class Args {
 public:
  Args(const SpecDocument& doc, const Task& t) : doc_(doc), t_(t) {}

  [[noreturn]] void error(const std::string& msg) const { throw TaskError(t_.pos, t_.command + ": " + msg); }

  std::string target() const {
    for (const auto& v : t_.positional)
      if (v.kind == TaskValue::Kind::name && !is_flag(v.name)) return v.name;
    error("missing target");
  }
  const Task& task() const { return t_; }
  bool flag(const std::string& f) const { return t_.flag(f); }
  bool has(const std::string& k) const { return t_.get(k) != nullptr; }
  const TaskValue* get(const std::string& k) const { return t_.get(k); }

  const ComplexDef& complex() const {
    const std::string n = target();
    const ComplexDef* c = doc_.find_complex(n);
    if (!c) error("unknown complex '" + n + "'");
    return *c;
  }
  MuSet weights() const { return doc_.weights(complex().name); }

  OperatorMatrix op_named(const std::string& n) const {
    if (const OpDef* o = doc_.find_op(n)) return o->value;
    error("unknown operator '" + n + "'");
  }
  OperatorMatrix op() const { return op_named(target()); }
  bool target_is_complex() const { return doc_.find_complex(target()) != nullptr; }

  long integer(const std::string& k, long dflt) const {
    const TaskValue* v = get(k);
    if (!v) return dflt;
    if (auto i = v->as_int()) return *i;
    error(k + " must be an integer");
  }
  std::optional<long> opt_integer(const std::string& k) const {
    if (!has(k)) return std::nullopt;
    return integer(k, 0);
  }
  std::string name(const std::string& k, const std::string& dflt) const {
    const TaskValue* v = get(k);
    if (!v) return dflt;
    if (v->kind == TaskValue::Kind::name) return v->name;
    if (auto i = v->as_int()) return std::to_string(*i);
    error(k + " must be a name");
  }
  Poly poly(const TaskValue& v, const std::string& k) const {
    if (v.kind == TaskValue::Kind::poly) return v.poly;
    if (v.kind == TaskValue::Kind::tuple && v.items.size() == 1) return poly(v.items[0], k);
    error(k + " must be an expression");
  }
  std::optional<Poly> opt_poly(const std::string& k) const {
    const TaskValue* v = get(k);
    if (!v) return std::nullopt;
    return poly(*v, k);
  }
  /// A tuple, or a single value broadcast to `n` entries when n > 0.
  std::vector<Poly> polys(const std::string& k, std::size_t n = 0) const {
    const TaskValue* v = get(k);
    if (!v) return {};
    if (v->kind != TaskValue::Kind::tuple) return std::vector<Poly>(std::max<std::size_t>(n, 1), poly(*v, k));
    std::vector<Poly> out;
    for (const auto& x : v->items) out.push_back(poly(x, k));
    return out;
  }
  std::vector<int> ints(const std::string& k) const {
    std::vector<int> out;
    for (const auto& p : polys(k)) {
      TaskValue tv;
      tv.kind = TaskValue::Kind::poly;
      tv.poly = p;
      auto i = tv.as_int();
      if (!i) error(k + " must hold integers");
      out.push_back(static_cast<int>(*i));
    }
    return out;
  }
  std::vector<std::string> names(const std::string& k) const {
    const TaskValue* v = get(k);
    if (!v) return {};
    std::vector<std::string> out;
    auto one = [&](const TaskValue& x) {
      if (x.kind != TaskValue::Kind::name) error(k + " must hold names");
      out.push_back(x.name);
    };
    if (v->kind == TaskValue::Kind::tuple)
      for (const auto& x : v->items) one(x);
    else
      one(*v);
    return out;
  }
  std::optional<double> real(const std::string& k) const {
    const TaskValue* v = get(k);
    if (!v) return std::nullopt;
    if (auto d = v->as_double()) return d;
    error(k + " must be a real constant");
  }
  ParameterBinding binding() const {
    ParameterBinding b;
    for (const auto& [k, v] : t_.named)
      if (k.rfind("at_", 0) == 0) {
        Poly p = poly(v, k);
        if (!p.is_constant()) error(k + " must be constant");
        b[k.substr(3)] = p.constant_value();
      }
    return b;
  }

 private:
  const SpecDocument& doc_;
  const Task& t_;
  static bool is_flag(const std::string& n) {
    return n == "stokes" || n == "maxwell" || n == "similar" || n == "symbolic" || n == "reverse" ||
           n == "expect_fail";
  }
};

// ---------------------------------------------------------- comparisons

template <typename M>
std::pair<M, M> common_ring(const M& a, const M& b) {
  VarListPtr v = merge_vars(a.vars(), b.vars());
  return {a.with_vars(v), b.with_vars(v)};
}

std::string shape(Index r, Index c) { return std::to_string(r) + "x" + std::to_string(c); }

CheckReport compare(const OperatorMatrix& computed, const OperatorMatrix& expected, const std::string& name) {
  CheckReport r;
  r.name = name;
  r.identity = "computed == expected";
  if (computed.rows() != expected.rows() || computed.cols() != expected.cols()) {
    r.fail("shape " + shape(computed.rows(), computed.cols()) + " vs expected " + shape(expected.rows(), expected.cols()));
    return r;
  }
  auto [a, b] = common_ring(computed, expected);
  r.add_residuals(name, a.body() - b.body());
  return r;
}

CheckReport compare_poly(const Poly& computed, const Poly& expected, const std::string& name) {
  CheckReport r;
  r.name = name;
  r.identity = "computed == expected";
  VarListPtr v = merge_vars(computed.vars(), expected.vars());
  Poly d = computed.with_vars(v) - expected.with_vars(v);
  if (!d.is_zero()) {
    r.pass = false;
    r.residuals.push_back({name, 0, 0, d});
    r.notes["computed"] = computed.str();
    r.notes["expected"] = expected.str();
  }
  return r;
}

// d_j written in a task stands for zeta_j, dt for tau.
Poly as_symbol(const Poly& p) { return p.vars() ? p.rename(symbol_vars_for(p.vars())) : p; }

OperatorMatrix scaled_rows(const BlockOperator& op, const std::vector<Poly>& left, const Args& a) {
  const auto& part = op.partition;
  if (static_cast<int>(left.size()) != part.degree() + 1) a.error("left needs one factor per block");
  PolyMatrix body = op.body.body();
  for (int p = 0; p <= part.degree(); ++p) {
    int deg = part.degree_at(p);
    Index r0 = part.offset(deg);
    for (Index i = r0; i < r0 + part.rank(deg); ++i)
      for (Index j = 0; j < body.cols(); ++j) body(i, j) = left[static_cast<std::size_t>(p)] * body(i, j);
  }
  return OperatorMatrix(op.body.vars(), body);
}

// ------------------------------------------------------------- outcome

struct Builder {
  Json checks = Json::array();
  Json ellipticity = Json::array();
  Json data = Json::object();
  std::vector<std::string> lines;
  bool pass = true;

  void check(const CheckReport& r) {
    pass = pass && r.pass;
    checks.push_back(to_json(r));
    lines.push_back(std::string(r.pass ? "  ok    " : "  FAIL  ") + r.name + ": " + r.identity);
    if (!r.pass) {
      std::istringstream s(residual_lines(r));
      for (std::string l; std::getline(s, l);) lines.push_back(l);
    }
  }
  void elliptic(const EllipticityReport& r, bool ok) {
    pass = pass && ok;
    ellipticity.push_back(to_json(r));
    std::string l = std::string(ok ? "  ok    " : "  FAIL  ") + r.check + ": " + verdict_name(r.verdict);
    if (!r.certified_form.empty()) l += " " + r.certified_form;
    if (auto it = r.notes.find("numeric_min"); it != r.notes.end()) l += " min=" + it->second;
    lines.push_back(l);
  }
  void info(const std::string& l) { lines.push_back("        " + l); }
};

int default_q(const Args& a, const Complex& c) { return static_cast<int>(a.integer("q", c.length())); }

std::vector<int> degrees(const Args& a, const Complex& c, int lo) {
  if (auto q = a.opt_integer("q")) return {static_cast<int>(*q)};
  std::vector<int> qs;
  for (int q = lo; q <= c.length(); ++q) qs.push_back(q);
  return qs;
}

void check_degree(const Args& a, const Complex& c, int q, int lo = 0) {
  if (q < lo || q > c.length()) a.error("degree " + std::to_string(q) + " out of range");
}

// final comparison of a block operator with an expected matrix
void finish_block(Builder& b, const Args& a, const BlockOperator& op) {
  OperatorMatrix body = op.body;
  if (auto s = a.opt_poly("scale")) body = *s * body;
  if (a.has("left")) {
    BlockOperator tmp = op.with_body(body, op.construction);
    body = scaled_rows(tmp, a.polys("left"), a);
  }
  if (a.flag("reverse")) {
    // blocks listed from degree 0 up instead of from degree q down
    const auto& part = op.partition;
    std::vector<Index> perm;
    for (int deg = 0; deg <= part.degree(); ++deg)
      for (Index k = 0; k < part.rank(deg); ++k) perm.push_back(part.offset(deg) + k);
    PolyMatrix r(body.rows(), body.cols());
    for (Index i = 0; i < body.rows(); ++i)
      for (Index j = 0; j < body.cols(); ++j) r(i, j) = body(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
    body = OperatorMatrix(body.vars(), r);
  }
  b.data["operator"] = to_json(body);
  b.data["partition"] = op.partition.ranks();
  b.data["construction"] = op.construction;
  b.data["block_tridiagonal"] = op.is_block_tridiagonal();
  b.data["self_adjoint"] = is_formally_self_adjoint(body);
  b.info(op.construction + ", " + shape(body.rows(), body.cols()));
  if (!a.has("expect")) return;
  OperatorMatrix want = a.op_named(a.name("expect", ""));
  if (!a.flag("similar")) {
    b.check(compare(body, want, "expected operator " + a.name("expect", "")));
    return;
  }
  CheckReport r;
  r.name = "similar to " + a.name("expect", "");
  r.identity = "P computed P^H == expected, P a signed permutation";
  if (body.rows() != want.rows() || body.cols() != want.cols()) {
    r.fail("shape mismatch");
  } else {
    auto [x, y] = common_ring(body, want);
    auto p = find_monomial_similarity(x, y);
    if (!p) {
      r.fail("no monomial similarity found");
    } else {
      std::vector<std::string> perm;
      for (Index i = 0; i < p->rows(); ++i)
        for (Index j = 0; j < p->cols(); ++j)
          if (!(*p)(i, j).is_zero()) perm.push_back(std::to_string(j) + ":" + (*p)(i, j).str());
      std::string s;
      for (const auto& e : perm) s += (s.empty() ? "" : " ") + e;
      r.notes["permutation"] = s;
      r.add_residuals("similar", conjugate_by(*p, x).body() - y.body());
    }
  }
  b.check(r);
}

// -------------------------------------------------------------- commands

void cmd_verify(Builder& b, const Args& a) {
  const Complex& c = a.complex().value;
  b.check(verify_complex(c));
  b.check(check_coh(c, a.weights()));
  b.data["complex"] = to_json(c);
}

void cmd_laplacian(Builder& b, const Args& a) {
  const Complex& c = a.complex().value;
  MuSet mu = a.weights();
  std::vector<int> qs = degrees(a, c, 0);
  std::vector<std::string> expect = a.names("expect");
  std::vector<Poly> scalars = a.polys("scalar", qs.size());
  if (!expect.empty() && expect.size() != qs.size()) a.error("expect needs one operator per degree");
  if (!scalars.empty() && scalars.size() != qs.size()) a.error("scalar needs one value per degree");
  Json out = Json::array();
  for (std::size_t k = 0; k < qs.size(); ++k) {
    int q = qs[k];
    check_degree(a, c, q);
    OperatorMatrix l = generalized_laplacian(c, q, mu);
    CheckReport f = compare(factorized_laplacian(c, q, mu), l, "factorized Laplacian q=" + std::to_string(q));
    f.identity = "(A_q^*, A_{q-1} mu1) (mu0 A_q; A_{q-1}^*) == A_q^* mu0 A_q + A_{q-1} mu1 A_{q-1}^*";
    b.check(f);
    if (!expect.empty()) b.check(compare(l, a.op_named(expect[k]), "Laplacian q=" + std::to_string(q) + " vs " + expect[k]));
    if (!scalars.empty()) {
      OperatorMatrix want = scalars[k] * OperatorMatrix::identity(l.vars(), l.rows());
      CheckReport r = compare(l, want, "Laplacian q=" + std::to_string(q) + " scalar");
      r.identity = "Delta_q == (" + scalars[k].str() + ") I";
      b.check(r);
    }
    out.push_back({{"q", q}, {"operator", to_json(l)}});
  }
  b.data["laplacians"] = out;
}

void cmd_maxwell(Builder& b, const Args& a) {
  const Complex& c = a.complex().value;
  int q = default_q(a, c);
  check_degree(a, c, q);
  int variant = static_cast<int>(a.integer("variant", 0));
  MuSet mu = a.weights();
  std::vector<Poly> tb = a.polys("b", static_cast<std::size_t>(q + 1));
  BlockOperator op = tb.empty() ? maxwell(c, q, mu, variant) : maxwell_time(c, q, mu, tb, variant);
  finish_block(b, a, op);
}

std::vector<OperatorMatrix> lowers_of(const Args& a, int q) {
  std::vector<OperatorMatrix> lowers(static_cast<std::size_t>(q + 1));
  for (int j = 0; j <= q; ++j)
    if (a.has("lower" + std::to_string(j))) lowers[static_cast<std::size_t>(j)] = a.op_named(a.name("lower" + std::to_string(j), ""));
  return lowers;
}

BlockOperator stokes_operator(const Args& a, const Complex& c, int q, const MuSet& mu) {
  int coef = static_cast<int>(a.integer("a", 1));
  int order = static_cast<int>(a.integer("order", 1));
  std::vector<OperatorMatrix> lowers = lowers_of(a, q);
  BlockOperator op;
  if (a.has("beta"))
    op = stokes_time_weighted(c, q, mu, lowers, coef, a.polys("beta", static_cast<std::size_t>(q + 1)), order);
  else
    op = stokes(c, q, mu, lowers, coef);
  if (a.has("tb")) op = add_time_diagonal(op, a.polys("tb", static_cast<std::size_t>(q + 1)), order);
  return op;
}

void cmd_stokes(Builder& b, const Args& a) {
  const Complex& c = a.complex().value;
  int q = default_q(a, c);
  check_degree(a, c, q);
  finish_block(b, a, stokes_operator(a, c, q, a.weights()));
}

void cmd_factorization(Builder& b, const Args& a) {
  const Complex& c = a.complex().value;
  MuSet mu = a.weights();
  for (int q : degrees(a, c, 1)) {
    check_degree(a, c, q, 1);
    b.check(verify_factorization(c, q, mu));
    if (a.flag("symbolic")) {
      b.check(verify_symbolic_factorization(c, q, mu));
    }
  }
}

void cmd_wave(Builder& b, const Args& a) {
  const Complex& c = a.complex().value;
  int q = default_q(a, c);
  check_degree(a, c, q, 1);
  MuSet mu = a.weights();
  std::vector<Poly> bs = a.polys("b", static_cast<std::size_t>(q + 1));
  if (bs.empty()) a.error("missing b");
  b.check(verify_wave_factorization(c, q, mu, bs));
  std::vector<Poly> plus, minus;
  for (const auto& x : bs) {
    plus.push_back(GaussianRational::i() * x);
    minus.push_back(-GaussianRational::i() * x);
  }
  BlockOperator m0 = maxwell_time(c, q, mu, plus, 0);
  BlockOperator m1 = maxwell_time(c, q, mu, minus, 1);
  auto [x, y] = common_ring(m1.body, m0.body);
  BlockOperator prod = m0.with_body(compose(x, y), "M1(A, -i b dt) M0(A, i b dt)");
  finish_block(b, a, prod);
}

void cmd_commute(Builder& b, const Args& a) {
  const Complex& c = a.complex().value;
  b.check(check_commute_mu(c, default_q(a, c), a.weights()));
}

void cmd_selfadjoint(Builder& b, const Args& a) {
  OperatorMatrix x = a.op();
  CheckReport r;
  r.name = "self-adjoint " + a.target();
  r.identity = "A^* == A";
  if (!x.is_square()) r.fail("not square");
  else r.add_residuals("adjoint", formal_adjoint(x).body() - x.body());
  b.check(r);
}

void cmd_equal(Builder& b, const Args& a) {
  const auto& pos = a.task().positional;
  if (pos.size() < 2 || pos[0].kind != TaskValue::Kind::name || pos[1].kind != TaskValue::Kind::name)
    a.error("needs two operator names");
  OperatorMatrix x = a.op_named(pos[0].name);
  if (auto s = a.opt_poly("scale")) x = *s * x;
  b.check(compare(x, a.op_named(pos[1].name), pos[0].name + " vs " + pos[1].name));
}

SearchOptions search_options(const Args& a, const RunOptions& opt) {
  SearchOptions s;
  s.seed = opt.seed;
  s.budget = opt.budget;
  s.threads = opt.threads;
  s.params = a.binding();
  s.numeric_always = a.has("expect_min");
  return s;
}

void elliptic_expectations(Builder& b, const Args& a, const EllipticityReport& r, const RunOptions& opt) {
  bool ok = r.passed();
  if (a.has("expect_verdict")) ok = verdict_name(r.verdict) == a.name("expect_verdict", "");
  b.elliptic(r, ok);
  if (auto d = a.opt_poly("expect_det")) {
    if (!r.determinant) {
      CheckReport x;
      x.name = "determinant";
      x.fail("no determinant computed");
      b.check(x);
    } else {
      CheckReport x = compare_poly(*r.determinant, as_symbol(*d), "determinant");
      x.identity = "det == " + as_symbol(*d).str();
      b.check(x);
    }
  }
  if (auto m = a.real("expect_min")) {
    CheckReport x;
    x.name = "numeric minimum";
    std::ostringstream id;
    id << "|min - " << *m << "| <= " << opt.tol;
    x.identity = id.str();
    if (!r.min_value) x.fail("no numeric minimum");
    else if (std::abs(*r.min_value - *m) > opt.tol) x.fail("minimum " + r.notes.at("numeric_min"));
    b.check(x);
  }
}

void cmd_ellipticity(Builder& b, const Args& a, const std::string& kind, const RunOptions& opt) {
  SearchOptions s = search_options(a, opt);
  if (kind == "exactness" || kind == "dn" || (a.target_is_complex() && a.has("q"))) {
    const Complex& c = a.complex().value;
    MuSet mu = a.weights();
    if (kind == "exactness") {
      for (int q : degrees(a, c, 0)) {
        check_degree(a, c, q);
        elliptic_expectations(b, a, complex_exactness_check(c, q, mu, s), opt);
      }
      return;
    }
    if (kind == "dn") {
      int q = default_q(a, c);
      if (a.flag("maxwell")) {
        BlockOperator op = maxwell(c, c.length(), mu, 0);
        auto plans = dn_weights_maxwell(c, mu);
        b.data["plan"] = to_json(plans.first);
        elliptic_expectations(b, a, dn_check(op, plans.first, s), opt);
      } else {
        check_degree(a, c, q, 1);
        BlockOperator op = stokes_operator(a, c, q, mu);
        WeightPlan plan = dn_weights_stokes(c, q, mu);
        b.data["plan"] = to_json(plan);
        b.data["operator"] = to_json(op.body);
        elliptic_expectations(b, a, dn_check(op, plan, s), opt);
      }
      return;
    }
    int q = default_q(a, c);
    check_degree(a, c, q);
    OperatorMatrix l = generalized_laplacian(c, q, mu);
    b.data["operator"] = to_json(l);
    EllipticityReport r = kind == "strong" ? strong_ellipticity_check(l, s)
                          : kind == "injective" ? injectivity_check(l, s)
                                                : petrovskii_check(l, s);
    elliptic_expectations(b, a, r, opt);
    return;
  }
  OperatorMatrix x = a.op();
  EllipticityReport r = kind == "strong" ? strong_ellipticity_check(x, s)
                        : kind == "injective" ? injectivity_check(x, s)
                                              : petrovskii_check(x, s);
  elliptic_expectations(b, a, r, opt);
}

void cmd_dn_weights(Builder& b, const Args& a) {
  const Complex& c = a.complex().value;
  MuSet mu = a.weights();
  std::vector<WeightPlan> plans;
  if (a.flag("maxwell")) {
    auto p = dn_weights_maxwell(c, mu);
    plans = {p.first, p.second};
  } else {
    int q = default_q(a, c);
    check_degree(a, c, q, 1);
    plans = {dn_weights_stokes(c, q, mu)};
    BlockOperator op = stokes_operator(a, c, q, mu);
    auto viol = dn_order_violations(op, plans[0]);
    b.data["order_violations"] = viol;
    std::string v;
    for (const auto& x : viol) v += (v.empty() ? "" : " ") + x;
    if (!viol.empty()) b.info("order violations: " + v);
  }
  Json pj = Json::array();
  for (const auto& p : plans) {
    pj.push_back(to_json(p));
    CheckReport r;
    r.name = "weight system " + p.scheme;
    r.identity = "s_p - t_r == rhs for every equation";
    auto viol = p.violations();
    if (!viol.empty()) {
      std::string v;
      for (const auto& x : viol) v += (v.empty() ? "" : " ") + x;
      r.fail("violated: " + v);
    }
    b.check(r);
    std::string s = "s=(", t = "t=(";
    for (std::size_t k = 0; k < p.s.size(); ++k) s += (k ? "," : "") + std::to_string(p.s[k]);
    for (std::size_t k = 0; k < p.t.size(); ++k) t += (k ? "," : "") + std::to_string(p.t[k]);
    b.info(p.scheme + ": " + s + ") " + t + ")");
  }
  b.data["plans"] = pj;
  auto expect = [&](const std::string& key, const std::vector<int>& got) {
    if (!a.has(key)) return;
    CheckReport r;
    r.name = key;
    r.identity = key + " matches";
    if (a.ints(key) != got) r.fail("computed differs");
    b.check(r);
  };
  expect("expect_s", plans[0].s);
  expect("expect_t", plans[0].t);
}

void parametrix_expectations(Builder& b, const Args& a, const ParametrixResult& p) {
  b.check(p.report);
  b.data["parametrix"] = to_json(p.parametrix);
  b.info("denominator " + p.parametrix.denominator().str());
  if (auto d = a.opt_poly("expect_den")) {
    CheckReport r = compare_poly(p.parametrix.denominator(), as_symbol(*d), "denominator");
    b.check(r);
  }
}

void cmd_parametrix(Builder& b, const Args& a) {
  const Complex& c = a.complex().value;
  MuSet mu = a.weights();
  if (a.flag("stokes")) {
    int q = static_cast<int>(a.integer("q", 1));
    parametrix_expectations(b, a, stokes_fundamental_symbol(c, q, mu));
    return;
  }
  std::string side = a.name("side", "right");
  if (side != "left" && side != "right") a.error("side must be left or right");
  parametrix_expectations(b, a, maxwell_parametrix_symbol(c, mu, side == "left" ? Side::left : Side::right));
}

void cmd_evolution(Builder& b, const Args& a) {
  const Complex& c = a.complex().value;
  int q = static_cast<int>(a.integer("q", 1));
  std::vector<Poly> bs = a.polys("b", static_cast<std::size_t>(q + 1));
  if (bs.empty()) {
    for (int j = 0; j < q; ++j) bs.push_back(Poly(GaussianRational(0)));
    bs.push_back(Poly(GaussianRational(1)));
  }
  CheckReport r = verify_evolution_identity(c, q, a.weights(), bs);
  b.check(r);
  if (auto d = a.opt_poly("expect_den")) {
    CheckReport x;
    x.name = "denominator";
    x.identity = "denominator == " + as_symbol(*d).str();
    auto it = r.notes.find("denominator");
    if (it == r.notes.end()) x.fail("no denominator");
    else if (it->second != as_symbol(*d).str()) x.fail("computed " + it->second);
    b.check(x);
  }
}

void cmd_syzygy(Builder& b, const Args& a) {
  OperatorMatrix x = a.op();
  SyzygyTrace tr;
  OperatorMatrix bm = compatibility_operator(x, &tr);
  b.data["operator"] = to_json(bm);
  b.data["trace"] = to_json(tr);
  CheckReport sound;
  sound.name = "compatibility";
  sound.identity = "B A == 0";
  if (bm.rows() > 0) sound.add_residuals("BA", compose(bm, x).body());
  b.check(sound);
  std::string rows;
  for (Index i = 0; i < bm.rows(); ++i) {
    std::string r = "(";
    for (Index j = 0; j < bm.cols(); ++j) r += (j ? ", " : "") + bm(i, j).str();
    b.info("B row " + std::to_string(i) + ": " + r + ")");
  }
  if (a.has("expect")) {
    std::string n = a.name("expect", "");
    CheckReport r;
    r.name = "module equivalence with " + n;
    r.identity = "rows of B and of " + n + " generate the same module";
    OperatorMatrix want = a.op_named(n);
    if (want.cols() != bm.cols()) r.fail("column counts differ");
    else if (!module_equivalent(bm, want.with_vars(bm.vars()))) r.fail("modules differ");
    b.check(r);
  }
}

void cmd_extend(Builder& b, const Args& a) {
  OperatorMatrix x = a.op();
  int steps = static_cast<int>(a.integer("max_steps", 8));
  std::vector<SyzygyTrace> traces;
  Complex c;
  try {
    c = extend_to_complex(x, steps, a.target(), &traces);
  } catch (const StepBudgetExhausted& e) {
    CheckReport r;
    r.name = "extend";
    r.fail(e.what());
    b.check(r);
    b.data["partial"] = to_json(e.partial());
    return;
  }
  b.check(verify_complex(c));
  b.data["complex"] = to_json(c);
  Json tj = Json::array();
  for (const auto& t : traces) tj.push_back(to_json(t));
  b.data["traces"] = tj;
  std::string rs;
  for (auto k : c.ranks()) rs += (rs.empty() ? "" : ",") + std::to_string(k);
  b.info("ranks (" + rs + ")");
  if (a.has("ranks")) {
    CheckReport r;
    r.name = "ranks";
    r.identity = "ranks == expected";
    std::vector<int> want = a.ints("ranks");
    std::vector<int> got;
    for (auto k : c.ranks()) got.push_back(static_cast<int>(k));
    if (want != got) r.fail("computed (" + rs + ")");
    b.check(r);
  }
}

std::string task_text(const Task& t) {
  SpecDocument d;
  d.tasks.push_back(t);
  std::string s = print_spec(d);
  // "task ...;\n" -> "..."
  if (s.rfind("task ", 0) == 0) s = s.substr(5);
  while (!s.empty() && (s.back() == '\n' || s.back() == ';')) s.pop_back();
  return s;
}

}  // namespace

TaskOutcome run_task(const SpecDocument& doc, const Task& task, const RunOptions& opt) {
  TaskOutcome out;
  out.task = task_text(task);
  out.command = task.command;
  Builder b;
  Args a(doc, task);
  const std::string& c = task.command;
  try {
    if (c == "verify") cmd_verify(b, a);
    else if (c == "laplacian") cmd_laplacian(b, a);
    else if (c == "maxwell") cmd_maxwell(b, a);
    else if (c == "stokes") cmd_stokes(b, a);
    else if (c == "factorization") cmd_factorization(b, a);
    else if (c == "wave") cmd_wave(b, a);
    else if (c == "commute") cmd_commute(b, a);
    else if (c == "relations") b.check(verify_laplace_symbol_relations(a.complex().value));
    else if (c == "mu-commutation") b.check(verify_mu_commutation(a.complex().value, a.weights()));
    else if (c == "selfadjoint") cmd_selfadjoint(b, a);
    else if (c == "equal") cmd_equal(b, a);
    else if (c.rfind("ellipticity-", 0) == 0) {
      std::string kind = c.substr(12);
      if (kind != "petrovskii" && kind != "strong" && kind != "injective" && kind != "exactness" && kind != "dn")
        a.error("unknown check '" + kind + "'");
      cmd_ellipticity(b, a, kind, opt);
    } else if (c == "dn-weights") cmd_dn_weights(b, a);
    else if (c == "parametrix") cmd_parametrix(b, a);
    else if (c == "evolution") cmd_evolution(b, a);
    else if (c == "syzygy") cmd_syzygy(b, a);
    else if (c == "extend") cmd_extend(b, a);
    else a.error("unknown command");
  } catch (const TaskError& e) {
    b.pass = false;
    b.data["error"] = {{"kind", "task"}, {"message", e.what()}, {"line", e.pos().line}, {"col", e.pos().col}};
    b.lines.push_back(std::string("  ERROR ") + e.what());
  } catch (const std::exception& e) {
    b.pass = false;
    b.data["error"] = {{"kind", "runtime"}, {"message", e.what()}};
    b.lines.push_back(std::string("  ERROR ") + e.what());
  }
  // a negative fixture: the checks must run and fail
  bool negative = a.flag("expect_fail");
  if (negative && !b.data.contains("error")) {
    b.lines.push_back(std::string(b.pass ? "  FAIL  " : "  ok    ") + "expected to fail");
    b.pass = !b.pass;
    b.data["expected_failure"] = true;
  }
  out.pass = b.pass;
  out.detail = {{"task", out.task}, {"command", c}, {"pass", b.pass}, {"checks", b.checks},
                {"ellipticity", b.ellipticity}, {"data", b.data}};
  out.lines = std::move(b.lines);
  return out;
}

RunBundle run_document(const SpecDocument& doc, const std::string& source, const RunOptions& opt) {
  RunBundle out;
  out.source = source;
  out.tasks.resize(doc.tasks.size());
  // the search inside a task parallelizes too; keep the outer level modest
  unsigned outer = std::min<unsigned>(thread_count(opt.threads), 4);
  RunOptions inner = opt;
  inner.threads = std::max(1u, thread_count(opt.threads) / std::max(1u, outer));
  parallel_for(doc.tasks.size(), outer, [&](std::size_t i) { out.tasks[i] = run_task(doc, doc.tasks[i], inner); });
  return out;
}

std::string read_text(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::string> list_suites(const fs::path& dir) {
  std::vector<std::string> out;
  if (!fs::is_directory(dir)) return out;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".spec") out.push_back(e.path().stem().string());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<RunBundle> run_suites(const fs::path& dir, const std::vector<std::string>& suites, const RunOptions& opt) {
  std::vector<std::string> names = suites;
  std::sort(names.begin(), names.end());
  names.erase(std::unique(names.begin(), names.end()), names.end());
  std::vector<RunBundle> out;
  for (const auto& s : names) {
    fs::path p = dir / (s + ".spec");
    if (!fs::exists(p)) throw std::invalid_argument("unknown suite '" + s + "'");
    out.push_back(run_document(parse_spec(read_text(p)), s, opt));
  }
  return out;
}

Json bundle_json(const std::vector<RunBundle>& bundles, const RunOptions& opt) {
  Json bj = Json::array();
  std::size_t total = 0, passed = 0;
  bool pass = true;
  for (const auto& b : bundles) {
    Json tasks = Json::array();
    for (const auto& t : b.tasks) tasks.push_back(t.detail);
    bj.push_back({{"source", b.source}, {"pass", b.pass()}, {"tasks", tasks}});
    total += b.tasks.size();
    passed += b.passed();
    pass = pass && b.pass();
  }
  return {{"schema", kReportSchema},
          {"options", {{"seed", opt.seed}, {"budget", opt.budget}, {"tol", opt.tol}}},
          {"bundles", bj},
          {"pass", pass},
          {"summary", {{"tasks", total}, {"passed", passed}, {"failed", total - passed}}}};
}

std::string bundle_text(const std::vector<RunBundle>& bundles) {
  std::ostringstream os;
  std::size_t total = 0, passed = 0;
  for (const auto& b : bundles) {
    os << "== " << b.source << "\n";
    for (const auto& t : b.tasks) {
      os << (t.pass ? "PASS  " : "FAIL  ") << t.task << "\n";
      for (const auto& l : t.lines) os << l << "\n";
    }
    total += b.tasks.size();
    passed += b.passed();
  }
  os << passed << "/" << total << " tasks passed\n";
  return os.str();
}

}  // namespace cxkit
