#include "cxkit/poly.hpp"

#include <algorithm>
#include <cstring>
#include <mutex>
#include <sstream>

namespace cxkit {

// ---------------------------------------------------------------- VarList

VarList::VarList(std::vector<std::string> names, std::vector<VarKind> kinds)
    : names_(std::move(names)), kinds_(std::move(kinds)) {
  if (names_.size() != kinds_.size()) throw std::invalid_argument("VarList: names/kinds size mismatch");
  if (names_.size() > kMaxVars) throw std::invalid_argument("VarList: too many variables");
  for (std::size_t i = 0; i < names_.size(); ++i)
    for (std::size_t j = i + 1; j < names_.size(); ++j)
      if (names_[i] == names_[j]) throw std::invalid_argument("VarList: duplicate variable " + names_[i]);
}

std::optional<std::size_t> VarList::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return i;
  return std::nullopt;
}

int VarList::spatial_count() const {
  return static_cast<int>(std::count(kinds_.begin(), kinds_.end(), VarKind::spatial));
}

std::optional<std::size_t> VarList::time_index() const {
  for (std::size_t i = 0; i < kinds_.size(); ++i)
    if (kinds_[i] == VarKind::time) return i;
  return std::nullopt;
}

std::vector<std::string> VarList::parameters() const {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < kinds_.size(); ++i)
    if (kinds_[i] == VarKind::parameter) out.push_back(names_[i]);
  return out;
}

VarListPtr make_vars(std::vector<std::string> names, std::vector<VarKind> kinds) {
  static std::mutex mu;
  static std::vector<VarListPtr> registry;
  VarList probe(std::move(names), std::move(kinds));
  std::lock_guard<std::mutex> lock(mu);
  for (const auto& v : registry)
    if (*v == probe) return v;
  registry.push_back(std::make_shared<const VarList>(std::move(probe)));
  return registry.back();
}

namespace {

VarListPtr build_vars(const std::string& prefix, const std::string& time_name, int n, bool time,
                      const std::vector<std::string>& params) {
  std::vector<std::string> names;
  std::vector<VarKind> kinds;
  for (int j = 1; j <= n; ++j) {
    names.push_back(prefix + std::to_string(j));
    kinds.push_back(VarKind::spatial);
  }
  if (time) {
    names.push_back(time_name);
    kinds.push_back(VarKind::time);
  }
  for (const auto& p : params) {
    names.push_back(p);
    kinds.push_back(VarKind::parameter);
  }
  return make_vars(std::move(names), std::move(kinds));
}

}  // namespace

VarListPtr operator_vars(int n, bool time, const std::vector<std::string>& params) {
  return build_vars("d", "dt", n, time, params);
}

VarListPtr symbol_vars(int n, bool time, const std::vector<std::string>& params) {
  return build_vars("z", "tau", n, time, params);
}

namespace {

// Renames variables kind by kind: spatial d<j> <-> z<j>, time dt <-> tau, parameters unchanged.
VarListPtr rename_vars(const VarListPtr& vars, const std::string& from, const std::string& to,
                       const std::string& time_to) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < vars->size(); ++i) {
    const std::string& nm = vars->name(i);
    switch (vars->kind(i)) {
      case VarKind::spatial:
        names.push_back(nm.rfind(from, 0) == 0 ? to + nm.substr(from.size()) : nm);
        break;
      case VarKind::time:
        names.push_back(time_to);
        break;
      case VarKind::parameter:
        names.push_back(nm);
        break;
    }
  }
  return make_vars(std::move(names), vars->kinds());
}

}  // namespace

VarListPtr symbol_vars_for(const VarListPtr& op_vars) { return rename_vars(op_vars, "d", "z", "tau"); }

VarListPtr operator_vars_for(const VarListPtr& sym_vars) { return rename_vars(sym_vars, "z", "d", "dt"); }

VarListPtr merge_vars(const VarListPtr& a, const VarListPtr& b) {
  if (!a) return b;
  if (!b || a == b) return a;
  std::vector<std::string> names;
  std::vector<VarKind> kinds;
  auto add = [&](VarKind kind) {
    for (const auto* v : {a.get(), b.get()})
      for (std::size_t i = 0; i < v->size(); ++i) {
        if (v->kind(i) != kind) continue;
        if (std::find(names.begin(), names.end(), v->name(i)) != names.end()) continue;
        names.push_back(v->name(i));
        kinds.push_back(kind);
      }
  };
  add(VarKind::spatial);
  add(VarKind::time);
  add(VarKind::parameter);
  for (const auto* v : {a.get(), b.get()})
    for (std::size_t i = 0; i < v->size(); ++i) {
      auto pos = std::find(names.begin(), names.end(), v->name(i));
      if (kinds[pos - names.begin()] != v->kind(i))
        throw VarListMismatch("variable " + v->name(i) + " has conflicting kinds");
    }
  return make_vars(std::move(names), std::move(kinds));
}

// --------------------------------------------------------------- Monomial

Monomial Monomial::unit(std::size_t var, unsigned power) {
  if (var >= kMaxVars) throw std::out_of_range("Monomial::unit: variable index");
  if (power > 255) throw std::overflow_error("Monomial exponent overflow");
  Monomial m;
  m.exp[var] = static_cast<std::uint8_t>(power);
  m.deg = static_cast<std::uint16_t>(power);
  return m;
}

bool Monomial::divides(const Monomial& o) const {
  if (deg > o.deg) return false;
  for (std::size_t i = 0; i < kMaxVars; ++i)
    if (exp[i] > o.exp[i]) return false;
  return true;
}

Monomial Monomial::operator*(const Monomial& o) const {
  Monomial r;
  for (std::size_t i = 0; i < kMaxVars; ++i) {
    unsigned e = unsigned(exp[i]) + unsigned(o.exp[i]);
    if (e > 255) throw std::overflow_error("Monomial exponent overflow");
    r.exp[i] = static_cast<std::uint8_t>(e);
  }
  r.deg = static_cast<std::uint16_t>(deg + o.deg);
  return r;
}

Monomial Monomial::quotient_of(const Monomial& o) const {
  Monomial r;
  for (std::size_t i = 0; i < kMaxVars; ++i) r.exp[i] = static_cast<std::uint8_t>(o.exp[i] - exp[i]);
  r.deg = static_cast<std::uint16_t>(o.deg - deg);
  return r;
}

Monomial Monomial::lcm(const Monomial& o) const {
  Monomial r;
  unsigned d = 0;
  for (std::size_t i = 0; i < kMaxVars; ++i) {
    r.exp[i] = std::max(exp[i], o.exp[i]);
    d += r.exp[i];
  }
  r.deg = static_cast<std::uint16_t>(d);
  return r;
}

int Monomial::weighted_degree(std::span<const int> w) const {
  int d = 0;
  for (std::size_t i = 0; i < w.size() && i < kMaxVars; ++i) d += w[i] * exp[i];
  return d;
}

int grlex_compare(const Monomial& a, const Monomial& b) {
  if (a.deg != b.deg) return a.deg < b.deg ? -1 : 1;
  int c = std::memcmp(a.exp.data(), b.exp.data(), kMaxVars);
  return c < 0 ? -1 : (c > 0 ? 1 : 0);
}

// ------------------------------------------------------------------- Poly

namespace {

bool term_greater(const Term& a, const Term& b) { return grlex_compare(a.mono, b.mono) > 0; }

void check_index(const VarListPtr& vars, const Monomial& m) {
  std::size_t n = vars ? vars->size() : 0;
  for (std::size_t i = n; i < kMaxVars; ++i)
    if (m.exp[i] != 0) throw std::invalid_argument("monomial uses a variable outside the ring");
}

}  // namespace

Poly::Poly(const GaussianRational& c) {
  if (!c.is_zero()) terms_.push_back({Monomial{}, c});
}

Poly Poly::constant(VarListPtr vars, const GaussianRational& c) {
  Poly p(c);
  p.vars_ = std::move(vars);
  return p;
}

Poly Poly::var(VarListPtr vars, std::size_t index) {
  if (!vars || index >= vars->size()) throw std::out_of_range("Poly::var: index out of range");
  return Poly(std::move(vars), {{Monomial::unit(index), GaussianRational(1)}});
}

Poly Poly::var(VarListPtr vars, const std::string& name) {
  auto idx = vars ? vars->index_of(name) : std::nullopt;
  if (!idx) throw std::invalid_argument("unknown variable " + name);
  return var(std::move(vars), *idx);
}

Poly Poly::term(VarListPtr vars, const Monomial& m, const GaussianRational& c) {
  check_index(vars, m);
  if (c.is_zero()) return Poly(std::move(vars), {});
  return Poly(std::move(vars), {{m, c}});
}

Poly Poly::from_terms(VarListPtr vars, std::vector<Term> terms) {
  for (const auto& t : terms) check_index(vars, t.mono);
  std::sort(terms.begin(), terms.end(), term_greater);
  std::vector<Term> out;
  out.reserve(terms.size());
  for (auto& t : terms) {
    if (!out.empty() && out.back().mono == t.mono) {
      out.back().coeff += t.coeff;
    } else {
      if (!out.empty() && out.back().coeff.is_zero()) out.pop_back();
      out.push_back(std::move(t));
    }
  }
  if (!out.empty() && out.back().coeff.is_zero()) out.pop_back();
  return Poly(std::move(vars), std::move(out));
}

GaussianRational Poly::constant_value() const {
  if (!is_constant()) throw std::logic_error("Poly::constant_value: not a constant");
  return terms_.empty() ? GaussianRational() : terms_[0].coeff;
}

GaussianRational Poly::coefficient(const Monomial& m) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), m,
                             [](const Term& t, const Monomial& x) { return grlex_compare(t.mono, x) > 0; });
  if (it != terms_.end() && it->mono == m) return it->coeff;
  return {};
}

const Term& Poly::leading_term() const {
  if (terms_.empty()) throw std::logic_error("leading term of zero polynomial");
  return terms_.front();
}

int Poly::degree() const { return terms_.empty() ? -1 : terms_.front().mono.deg; }

int Poly::weighted_degree(std::span<const int> w) const {
  int d = -1;
  for (const auto& t : terms_) d = std::max(d, t.mono.weighted_degree(w));
  return d;
}

Poly Poly::weighted_part(std::span<const int> w, int d) const {
  std::vector<Term> out;
  for (const auto& t : terms_)
    if (t.mono.weighted_degree(w) == d) out.push_back(t);
  return Poly(vars_, std::move(out));
}

bool Poly::is_weighted_homogeneous(std::span<const int> w) const {
  if (terms_.empty()) return true;
  int d = terms_.front().mono.weighted_degree(w);
  return std::all_of(terms_.begin(), terms_.end(), [&](const Term& t) { return t.mono.weighted_degree(w) == d; });
}

bool Poly::is_homogeneous() const {
  return terms_.empty() || terms_.front().mono.deg == terms_.back().mono.deg;
}

Poly Poly::homogeneous_part(int d) const {
  if (d < 0) throw std::invalid_argument("homogeneous_part: negative degree");
  std::vector<Term> out;
  for (const auto& t : terms_)
    if (t.mono.deg == d) out.push_back(t);
  return Poly(vars_, std::move(out));
}

bool Poly::depends_on(std::size_t var) const {
  return std::any_of(terms_.begin(), terms_.end(), [&](const Term& t) { return t.mono.exp[var] != 0; });
}

Poly Poly::conj() const {
  std::vector<Term> out = terms_;
  for (auto& t : out) t.coeff = t.coeff.conj();
  return Poly(vars_, std::move(out));
}

Poly Poly::map_terms(const std::function<GaussianRational(const Term&)>& f) const {
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (const auto& t : terms_) {
    GaussianRational c = f(t);
    if (!c.is_zero()) out.push_back({t.mono, std::move(c)});
  }
  return Poly(vars_, std::move(out));
}

Poly Poly::with_vars(const VarListPtr& target) const {
  if (vars_ == target) return *this;
  if (!vars_) return Poly(target, terms_);
  std::vector<std::size_t> map(vars_->size());
  std::vector<bool> present(vars_->size(), false);
  for (std::size_t i = 0; i < vars_->size(); ++i) {
    auto idx = target ? target->index_of(vars_->name(i)) : std::nullopt;
    if (idx) {
      map[i] = *idx;
      present[i] = true;
    }
  }
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (const auto& t : terms_) {
    Monomial m;
    m.deg = t.mono.deg;
    for (std::size_t i = 0; i < vars_->size(); ++i) {
      if (t.mono.exp[i] == 0) continue;
      if (!present[i]) throw VarListMismatch("variable " + vars_->name(i) + " missing from target ring");
      m.exp[map[i]] = t.mono.exp[i];
    }
    out.push_back({m, t.coeff});
  }
  return from_terms(target, std::move(out));
}

Poly Poly::rename(const VarListPtr& target) const {
  if (vars_ && target && vars_->size() != target->size())
    throw VarListMismatch("rename: variable count differs");
  return Poly(target, terms_);
}

Poly Poly::substitute(std::size_t var, const GaussianRational& value) const {
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (const auto& t : terms_) {
    Term r = t;
    unsigned e = t.mono.exp[var];
    for (unsigned k = 0; k < e; ++k) r.coeff *= value;
    r.mono.exp[var] = 0;
    r.mono.deg = static_cast<std::uint16_t>(r.mono.deg - e);
    out.push_back(std::move(r));
  }
  return from_terms(vars_, std::move(out));
}

Poly Poly::substitute(std::size_t var, const Poly& value) const {
  Poly out = Poly::constant(vars_, 0);
  for (const auto& t : terms_) {
    Monomial rest = t.mono;
    unsigned e = rest.exp[var];
    rest.exp[var] = 0;
    rest.deg = static_cast<std::uint16_t>(rest.deg - e);
    out += Poly::term(vars_, rest, t.coeff) * pow(value, e);
  }
  return out;
}

std::complex<double> Poly::evaluate(std::span<const std::complex<double>> x) const {
  std::size_t n = vars_ ? vars_->size() : 0;
  if (x.size() != n) throw std::invalid_argument("evaluate: point dimension mismatch");
  // Power tables per variable, then one product per term.
  std::vector<std::vector<std::complex<double>>> powers(n);
  for (const auto& t : terms_)
    for (std::size_t i = 0; i < n; ++i) {
      auto& p = powers[i];
      if (p.empty()) p.push_back(1.0);
      while (p.size() <= t.mono.exp[i]) p.push_back(p.back() * x[i]);
    }
  std::complex<double> acc = 0;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    std::complex<double> v = it->coeff.to_complex();
    for (std::size_t i = 0; i < n; ++i)
      if (it->mono.exp[i]) v *= powers[i][it->mono.exp[i]];
    acc += v;
  }
  return acc;
}

std::complex<double> Poly::evaluate(std::span<const double> x) const {
  std::vector<std::complex<double>> z(x.begin(), x.end());
  return evaluate(std::span<const std::complex<double>>(z));
}

GaussianRational Poly::evaluate(std::span<const GaussianRational> x) const {
  std::size_t n = vars_ ? vars_->size() : 0;
  if (x.size() != n) throw std::invalid_argument("evaluate: point dimension mismatch");
  GaussianRational acc;
  for (const auto& t : terms_) {
    GaussianRational v = t.coeff;
    for (std::size_t i = 0; i < n; ++i)
      for (unsigned k = 0; k < t.mono.exp[i]; ++k) v *= x[i];
    acc += v;
  }
  return acc;
}

namespace {

std::string monomial_str(const VarListPtr& vars, const Monomial& m) {
  std::string out;
  for (std::size_t i = 0; vars && i < vars->size(); ++i) {
    if (m.exp[i] == 0) continue;
    if (!out.empty()) out += "*";
    out += vars->name(i);
    if (m.exp[i] > 1) out += "^" + std::to_string(m.exp[i]);
  }
  return out;
}

}  // namespace

std::string Poly::str() const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& t : terms_) {
    std::string mono = monomial_str(vars_, t.mono);
    const auto& c = t.coeff;
    bool negative = false;
    GaussianRational mag = c;
    if (c.is_real() && sgn(c.real()) < 0) {
      negative = true;
      mag = -c;
    } else if (c.is_imaginary() && sgn(c.imag()) < 0) {
      negative = true;
      mag = -c;
    }
    std::string coeff;
    if (mag.is_real() || mag.is_imaginary()) {
      coeff = mag.str();
    } else {
      coeff = "(" + mag.str() + ")";
    }
    std::string body;
    if (mono.empty()) {
      body = coeff;
    } else if (mag.is_one()) {
      body = mono;
    } else {
      body = coeff + "*" + mono;
    }
    if (first) {
      out = negative ? "-" + body : body;
    } else {
      out += negative ? " - " : " + ";
      out += body;
    }
    first = false;
  }
  return out;
}

std::size_t Poly::hash() const { return std::hash<std::string>()(str()); }

VarListPtr Poly::unify(const Poly& a, const Poly& b) {
  if (a.vars_ == b.vars_) return a.vars_;
  if (!a.vars_) return b.vars_;
  if (!b.vars_) return a.vars_;
  throw VarListMismatch("polynomials over different variable lists");
}

Poly Poly::operator-() const {
  std::vector<Term> out = terms_;
  for (auto& t : out) t.coeff = -t.coeff;
  return Poly(vars_, std::move(out));
}

Poly add_scaled(const Poly& a, const Poly& b, const GaussianRational& c, const Monomial* shift) {
  VarListPtr vars = Poly::unify(a, b);
  if (c.is_zero() || b.terms_.empty()) {
    Poly r = a;
    r.vars_ = vars;
    return r;
  }
  std::vector<Term> out;
  out.reserve(a.terms_.size() + b.terms_.size());
  auto ia = a.terms_.begin();
  auto ib = b.terms_.begin();
  auto b_mono = [&](const Term& t) { return shift ? t.mono * *shift : t.mono; };
  while (ia != a.terms_.end() || ib != b.terms_.end()) {
    if (ib == b.terms_.end()) {
      out.push_back(*ia++);
      continue;
    }
    Monomial mb = b_mono(*ib);
    int cmp = ia == a.terms_.end() ? -1 : grlex_compare(ia->mono, mb);
    if (cmp > 0) {
      out.push_back(*ia++);
    } else if (cmp < 0) {
      out.push_back({mb, ib->coeff * c});
      ++ib;
    } else {
      GaussianRational s = ia->coeff + ib->coeff * c;
      if (!s.is_zero()) out.push_back({mb, std::move(s)});
      ++ia;
      ++ib;
    }
  }
  return Poly(vars, std::move(out));
}

Poly& Poly::operator+=(const Poly& o) { return *this = add_scaled(*this, o, GaussianRational(1)); }
Poly& Poly::operator-=(const Poly& o) { return *this = add_scaled(*this, o, GaussianRational(-1)); }

Poly operator+(const Poly& a, const Poly& b) { return add_scaled(a, b, GaussianRational(1)); }
Poly operator-(const Poly& a, const Poly& b) { return add_scaled(a, b, GaussianRational(-1)); }

Poly operator*(const Poly& a, const Poly& b) {
  VarListPtr vars = Poly::unify(a, b);
  if (a.terms_.empty() || b.terms_.empty()) return Poly(vars, {});
  if (b.terms_.size() == 1 && b.terms_[0].mono.deg == 0) {
    Poly r = a * b.terms_[0].coeff;
    r.vars_ = vars;
    return r;
  }
  std::vector<Term> prod;
  prod.reserve(a.terms_.size() * b.terms_.size());
  for (const auto& s : a.terms_)
    for (const auto& t : b.terms_) prod.push_back({s.mono * t.mono, s.coeff * t.coeff});
  return Poly::from_terms(vars, std::move(prod));
}

Poly operator*(const Poly& a, const GaussianRational& c) {
  if (c.is_zero()) return Poly(a.vars_, {});
  std::vector<Term> out = a.terms_;
  for (auto& t : out) t.coeff *= c;
  return Poly(a.vars_, std::move(out));
}

Poly& Poly::operator*=(const Poly& o) { return *this = *this * o; }
Poly& Poly::operator*=(const GaussianRational& c) { return *this = *this * c; }

bool operator==(const Poly& a, const Poly& b) {
  if (a.vars_ && b.vars_ && a.vars_ != b.vars_) return false;
  if (a.terms_.size() != b.terms_.size()) return false;
  for (std::size_t i = 0; i < a.terms_.size(); ++i)
    if (a.terms_[i].mono != b.terms_[i].mono || a.terms_[i].coeff != b.terms_[i].coeff) return false;
  return true;
}

Poly pow(const Poly& p, unsigned k) {
  Poly result = Poly::constant(p.vars(), 1);
  Poly base = p;
  while (k) {
    if (k & 1u) result *= base;
    k >>= 1u;
    if (k) base *= base;
  }
  return result;
}

std::optional<Poly> exact_divide(const Poly& p, const Poly& q) {
  if (q.is_zero()) throw std::domain_error("division by the zero polynomial");
  const Term& lq = q.leading_term();
  GaussianRational inv_lc = GaussianRational(1) / lq.coeff;
  VarListPtr vars = p.vars() ? p.vars() : q.vars();
  Poly rem = p;
  std::vector<Term> quot;
  while (!rem.is_zero()) {
    const Term& lr = rem.leading_term();
    if (!lq.mono.divides(lr.mono)) return std::nullopt;
    Monomial m = lq.mono.quotient_of(lr.mono);
    GaussianRational c = lr.coeff * inv_lc;
    quot.push_back({m, c});
    rem = add_scaled(rem, q, -c, &m);
  }
  return Poly::from_terms(vars, std::move(quot));
}

Poly divide_exact(const Poly& p, const Poly& q) {
  auto r = exact_divide(p, q);
  if (!r) throw std::domain_error("polynomial division is not exact");
  return *r;
}

Poly squared_norm(const VarListPtr& vars) {
  Poly s = Poly::constant(vars, 0);
  for (std::size_t i = 0; i < vars->size(); ++i)
    if (vars->kind(i) == VarKind::spatial) s += pow(Poly::var(vars, i), 2);
  return s;
}

std::ostream& operator<<(std::ostream& os, const Poly& p) { return os << p.str(); }

}  // namespace cxkit
