#include "cxkit/ellipticity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include <Eigen/Dense>
#include <boost/math/special_functions/erf.hpp>

#include "cxkit/parallel.hpp"

namespace cxkit {

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::certified_symbolic:
      return "certified-symbolic";
    case Verdict::numeric_pass:
      return "numeric-pass";
    case Verdict::inconclusive:
      return "inconclusive";
    case Verdict::fail:
      return "fail";
  }
  return "fail";
}

// ------------------------------------------------------------ sphere search

namespace {

constexpr int kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};

double radical_inverse(std::size_t i, int base) {
  double f = 1.0, r = 0.0;
  while (i > 0) {
    f /= base;
    r += f * static_cast<double>(i % base);
    i /= base;
  }
  return r;
}

void normalize(std::vector<double>& x) {
  double s = 0;
  for (double v : x) s += v * v;
  s = std::sqrt(s);
  if (s == 0) {
    x.assign(x.size(), 0.0);
    x[0] = 1.0;
    return;
  }
  for (double& v : x) v /= s;
}

double sanitize(double v) { return std::isnan(v) ? std::numeric_limits<double>::infinity() : v; }

bool better(double va, const std::vector<double>& a, double vb, const std::vector<double>& b) {
  if (va != vb) return va < vb;
  return a < b;
}

std::vector<double> polish(int n, const std::function<double(std::span<const double>)>& f, std::vector<double> x,
                           double& fx) {
  double h = 0.1;
  for (int iter = 0; iter < 2000 && h > 1e-12; ++iter) {
    bool improved = false;
    for (int k = 0; k < n; ++k)
      for (double sign : {1.0, -1.0}) {
        std::vector<double> y = x;
        y[k] += sign * h;
        normalize(y);
        double fy = sanitize(f(y));
        if (fy < fx) {
          x = std::move(y);
          fx = fy;
          improved = true;
        }
      }
    if (!improved) h *= 0.5;
  }
  return x;
}

}  // namespace

SphereMinimum minimize_on_sphere(int n, const std::function<double(std::span<const double>)>& f,
                                 const SearchOptions& opt) {
  if (n < 1) throw std::invalid_argument("minimize_on_sphere: dimension must be positive");
  if (n > static_cast<int>(std::size(kPrimes))) throw std::invalid_argument("minimize_on_sphere: dimension too large");
  const unsigned threads = thread_count(opt.threads);
  std::vector<std::vector<double>> pts;
  if (n == 1) {
    pts = {{-1.0}, {1.0}};
  } else {
    std::mt19937_64 rng(opt.seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    std::vector<double> shift(n);
    for (double& s : shift) s = uni(rng);
    const std::size_t budget = std::max<std::size_t>(opt.budget, 1);
    pts.resize(budget);
    for (std::size_t i = 0; i < budget; ++i) {
      std::vector<double> x(n);
      for (int k = 0; k < n; ++k) {
        double u = radical_inverse(i + 1, kPrimes[k]) + shift[k];
        u -= std::floor(u);
        u = std::clamp(u, 1e-12, 1.0 - 1e-12);
        x[k] = std::sqrt(2.0) * boost::math::erf_inv(2.0 * u - 1.0);
      }
      normalize(x);
      pts[i] = std::move(x);
    }
  }
  std::vector<double> vals(pts.size());
  parallel_for(pts.size(), threads, [&](std::size_t i) { vals[i] = sanitize(f(pts[i])); });

  std::vector<std::size_t> order(pts.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return better(vals[a], pts[a], vals[b], pts[b]); });
  const std::size_t starts = std::min<std::size_t>(order.size(), static_cast<std::size_t>(std::max(opt.polish_starts, 1)));
  std::vector<SphereMinimum> polished(starts);
  parallel_for(starts, threads, [&](std::size_t s) {
    double v = vals[order[s]];
    std::vector<double> x = polish(n, f, pts[order[s]], v);
    polished[s] = {v, std::move(x)};
  });
  SphereMinimum best = polished[0];
  for (const auto& p : polished)
    if (better(p.value, p.point, best.value, best.point)) best = p;
  return best;
}

// --------------------------------------------------------- numeric symbols

namespace {

struct NumTerm {
  std::complex<double> coeff;
  std::vector<std::uint8_t> exp;
};

// Symbol matrix with parameters bound and tau set to zero, ready for fast evaluation.
class NumericSymbol {
 public:
  NumericSymbol(const SymbolMatrix& s, const ParameterBinding& params) {
    SymbolMatrix b = bind_parameters(s, params);
    const VarList& v = *b.vars();
    // parameters of the ring that the symbol never uses need no value
    for (std::size_t i = 0; i < v.size(); ++i)
      if (v.kind(i) == VarKind::parameter)
        for (Index r = 0; r < b.rows(); ++r)
          for (Index c = 0; c < b.cols(); ++c)
            if (b(r, c).depends_on(i)) throw std::invalid_argument("unbound parameter '" + v.name(i) + "'");
    for (std::size_t i = 0; i < v.size(); ++i)
      if (v.kind(i) == VarKind::spatial) spatial_.push_back(i);
    rows_ = b.rows();
    cols_ = b.cols();
    entries_.resize(static_cast<std::size_t>(rows_ * cols_));
    for (Index r = 0; r < rows_; ++r)
      for (Index c = 0; c < cols_; ++c)
        entries_[static_cast<std::size_t>(r * cols_ + c)] = compile(b(r, c), v);
  }

  int dim() const { return static_cast<int>(spatial_.size()); }

  Eigen::MatrixXcd eval(std::span<const double> x) const {
    Eigen::MatrixXcd m(rows_, cols_);
    for (Index r = 0; r < rows_; ++r)
      for (Index c = 0; c < cols_; ++c) {
        std::complex<double> acc = 0;
        for (const auto& t : entries_[static_cast<std::size_t>(r * cols_ + c)]) {
          double p = 1;
          for (std::size_t k = 0; k < t.exp.size(); ++k)
            for (int e = 0; e < t.exp[k]; ++e) p *= x[k];
          acc += t.coeff * p;
        }
        m(r, c) = acc;
      }
    return m;
  }

 private:
  std::vector<NumTerm> compile(const Poly& p, const VarList& v) const {
    std::vector<NumTerm> out;
    for (const auto& t : p.terms()) {
      bool has_time = false;
      for (std::size_t i = 0; i < v.size(); ++i)
        if (v.kind(i) == VarKind::time && t.mono.exp[i]) has_time = true;
      if (has_time) continue;
      NumTerm n{t.coeff.to_complex(), {}};
      for (std::size_t k : spatial_) n.exp.push_back(t.mono.exp[k]);
      out.push_back(std::move(n));
    }
    return out;
  }

  std::vector<std::size_t> spatial_;
  Index rows_ = 0, cols_ = 0;
  std::vector<std::vector<NumTerm>> entries_;
};

std::vector<double> unit_vector(int n) {
  std::vector<double> e(static_cast<std::size_t>(std::max(n, 1)), 0.0);
  e[0] = 1.0;
  return e;
}

void stamp(EllipticityReport& r, const SearchOptions& opt) {
  r.seed = opt.seed;
  r.budget = opt.budget;
  r.pass_threshold = opt.pass_threshold;
  r.fail_threshold = opt.fail_threshold;
}

void numeric_verdict(EllipticityReport& r, const SphereMinimum& m, const SearchOptions& opt) {
  r.min_value = m.value;
  r.argmin = m.point;
  if (m.value > opt.pass_threshold) {
    r.verdict = Verdict::numeric_pass;
  } else if (m.value < opt.fail_threshold) {
    r.verdict = Verdict::fail;
    r.witness = m.point;
  } else {
    r.verdict = Verdict::inconclusive;
  }
}

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

constexpr Index kSymbolicDetLimit = 12;

SymbolMatrix hermitian_part(const SymbolMatrix& s) {
  SymbolMatrix h = s + s.conjugate_transpose();
  return GaussianRational(1, 2) * h;
}

bool is_square_symbol(const SymbolMatrix& s) { return s.rows() == s.cols(); }

}  // namespace

std::optional<GaussianRational> power_of_norm_factor(const Poly& det) {
  if (det.is_zero() || !det.vars()) {
    if (!det.is_zero()) return det.constant_value();
    return std::nullopt;
  }
  const int d = det.degree();
  if (d % 2) return std::nullopt;
  const VarList& v = *det.vars();
  std::optional<std::size_t> first;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v.kind(i) == VarKind::spatial) {
      first = i;
      break;
    }
  if (!first) return std::nullopt;
  GaussianRational gamma = det.coefficient(Monomial::unit(*first, static_cast<unsigned>(d)));
  if (gamma.is_zero()) return std::nullopt;
  Poly model = gamma * pow(squared_norm(det.vars()), static_cast<unsigned>(d / 2));
  if (model != det) return std::nullopt;
  return gamma;
}

std::optional<std::pair<GaussianRational, int>> scalar_norm_power(const SymbolMatrix& m) {
  if (!is_square_symbol(m) || m.rows() == 0) return std::nullopt;
  auto g = power_of_norm_factor(m(0, 0));
  if (!g) return std::nullopt;
  const int k = m(0, 0).degree() / 2;
  PolyMatrix model = zero_matrix(m.vars(), m.rows(), m.cols());
  for (Index i = 0; i < m.rows(); ++i) model(i, i) = m(0, 0);
  if (!equal(model, m.body())) return std::nullopt;
  return std::make_pair(*g, k);
}

EllipticityReport symbol_invertibility_check(const SymbolMatrix& s, const SearchOptions& opt, std::string name) {
  if (!is_square_symbol(s)) throw std::invalid_argument(name + ": symbol is not square");
  EllipticityReport r;
  r.check = std::move(name);
  stamp(r, opt);
  SymbolMatrix b = bind_parameters(s, opt.params);
  NumericSymbol num(s, opt.params);
  const int n = num.dim();
  std::optional<Poly> det;
  if (s.rows() <= kSymbolicDetLimit) {
    det = determinant(b.body());
    r.determinant = det;
    if (det->is_zero()) {
      r.verdict = Verdict::fail;
      r.min_value = 0.0;
      r.witness = r.argmin = unit_vector(n);
      r.notes["reason"] = "determinant vanishes identically";
      return r;
    }
    if (auto g = power_of_norm_factor(*det)) {
      r.verdict = Verdict::certified_symbolic;
      r.certified_form = "(" + g->str() + ")*(|z|^2)^" + std::to_string(std::max(det->degree(), 0) / 2);
      r.min_value = std::abs(g->to_complex());
      r.argmin = unit_vector(n);
      if (!opt.numeric_always) return r;
    }
  }
  std::function<double(std::span<const double>)> f;
  if (det) {
    Poly p = *det;
    NumericSymbol dn(SymbolMatrix::scalar(b.vars(), p), {});
    f = [dn](std::span<const double> x) { return std::abs(dn.eval(x)(0, 0)); };
  } else {
    f = [num](std::span<const double> x) { return std::abs(num.eval(x).partialPivLu().determinant()); };
  }
  SphereMinimum m = minimize_on_sphere(n, f, opt);
  if (r.verdict == Verdict::certified_symbolic) {
    r.notes["numeric_min"] = format_double(m.value);
    return r;
  }
  numeric_verdict(r, m, opt);
  return r;
}

EllipticityReport petrovskii_check(const OperatorMatrix& a, const SearchOptions& opt) {
  if (!a.is_square()) throw std::invalid_argument("petrovskii_check: operator is not square");
  return symbol_invertibility_check(principal_symbol(a, Grading::spatial_only), opt, "petrovskii");
}

EllipticityReport injectivity_check(const OperatorMatrix& a, const SearchOptions& opt) {
  if (a.rows() < a.cols()) throw std::invalid_argument("injectivity_check: fewer rows than columns");
  SymbolMatrix s = principal_symbol(a, Grading::spatial_only);
  SymbolMatrix g = s.conjugate_transpose() * s;
  EllipticityReport r = symbol_invertibility_check(g, opt, "injectivity");
  if (auto cert = scalar_norm_power(bind_parameters(g, opt.params)))
    r.notes["gram"] = "(" + cert->first.str() + ")*(|z|^2)^" + std::to_string(cert->second) + "*I_" +
                      std::to_string(g.rows());
  return r;
}

EllipticityReport strong_ellipticity_check(const OperatorMatrix& a, const SearchOptions& opt) {
  if (!a.is_square()) throw std::invalid_argument("strong_ellipticity_check: operator is not square");
  const int ord = a.order(Grading::spatial_only);
  if (ord < 0 || ord % 2) throw std::invalid_argument("strong_ellipticity_check: order must be even");
  EllipticityReport r;
  r.check = "strong";
  stamp(r, opt);
  SymbolMatrix h = hermitian_part(bind_parameters(principal_symbol(a, Grading::spatial_only), opt.params));
  NumericSymbol num(h, {});
  const int n = num.dim();
  if (auto cert = scalar_norm_power(h); cert && cert->first.is_real()) {
    const double g = cert->first.real().get_d();
    r.certified_form = "(" + cert->first.str() + ")*(|z|^2)^" + std::to_string(cert->second) + "*I_" +
                       std::to_string(h.rows());
    r.min_value = g;
    r.argmin = unit_vector(n);
    if (g > 0) {
      r.verdict = Verdict::certified_symbolic;
    } else {
      r.verdict = Verdict::fail;
      r.witness = r.argmin;
    }
    if (!opt.numeric_always) return r;
  }
  auto f = [num](std::span<const double> x) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(num.eval(x), Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
  };
  SphereMinimum m = minimize_on_sphere(n, f, opt);
  if (!r.certified_form.empty()) {
    r.notes["numeric_min"] = format_double(m.value);
    return r;
  }
  numeric_verdict(r, m, opt);
  return r;
}

SymbolMatrix symbol_laplacian(const Complex& c, int q, const MuSet& mu) {
  if (q < 0 || q > c.length()) throw std::out_of_range("symbol_laplacian: degree out of range");
  VarListPtr v = block_ring(c, &mu, {}, false);
  Complex cc = c.with_vars(v);
  MuSet mm = mu.with_vars(v);
  SymbolMatrix sq = principal_symbol(cc.op(q)), sp = principal_symbol(cc.op(q - 1));
  SymbolMatrix m0 = principal_symbol(mm.mu0(q), Grading::spatial_only);
  SymbolMatrix m1 = principal_symbol(mm.mu1(q), Grading::spatial_only);
  return sq.conjugate_transpose() * m0 * sq + sp * m1 * sp.conjugate_transpose();
}

EllipticityReport complex_exactness_check(const Complex& c, int q, const MuSet& mu, const SearchOptions& opt) {
  SymbolMatrix d = bind_parameters(symbol_laplacian(c, q, mu), opt.params);
  EllipticityReport r;
  r.check = "exactness:q=" + std::to_string(q);
  stamp(r, opt);
  NumericSymbol num(d, {});
  if (auto cert = scalar_norm_power(d); cert && cert->first.is_real() && cert->first.real() > 0) {
    r.verdict = Verdict::certified_symbolic;
    r.certified_form = "(" + cert->first.str() + ")*(|z|^2)^" + std::to_string(cert->second) + "*I_" +
                       std::to_string(d.rows());
    r.min_value = cert->first.real().get_d();
    r.argmin = unit_vector(num.dim());
    return r;
  }
  auto f = [num](std::span<const double> x) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(num.eval(x), Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
  };
  numeric_verdict(r, minimize_on_sphere(num.dim(), f, opt), opt);
  return r;
}

// -------------------------------------------------------------- DN weights

std::vector<std::string> WeightPlan::violations() const {
  std::vector<std::string> bad;
  for (const auto& e : equations) {
    if (e.si < 0 || e.ti < 0 || e.si >= static_cast<int>(s.size()) || e.ti >= static_cast<int>(t.size())) {
      bad.push_back(e.label + " (index)");
      continue;
    }
    if (s[e.si] - t[e.ti] != e.rhs) bad.push_back(e.label);
  }
  return bad;
}

bool WeightPlan::nonnegative() const {
  return std::all_of(s.begin(), s.end(), [](int v) { return v >= 0; }) &&
         std::all_of(t.begin(), t.end(), [](int v) { return v >= 0; });
}

namespace {

std::string eq_label(int si, int ti, const std::string& rhs) {
  return "s" + std::to_string(si + 1) + "-t" + std::to_string(ti + 1) + "=" + rhs;
}

void apply_shift(WeightPlan& p) {
  int lo = 0;
  for (int v : p.s) lo = std::min(lo, v);
  for (int v : p.t) lo = std::min(lo, v);
  p.shift = -lo;
  for (int& v : p.s) v += p.shift;
  for (int& v : p.t) v += p.shift;
}

}  // namespace

WeightPlan solve_chain_weights(const std::vector<int>& upper, const std::vector<int>& lower, std::string scheme) {
  if (upper.size() != lower.size() || upper.empty())
    throw std::invalid_argument("solve_chain_weights: need matching nonempty order lists");
  const int n = static_cast<int>(upper.size());
  WeightPlan p;
  p.scheme = std::move(scheme);
  p.s.assign(n + 1, 0);
  p.t.assign(n + 1, 0);
  p.s[0] = upper[0] + p.t[1];
  p.s[1] = lower[0] + p.t[0];
  for (int k = 1; k < n; ++k) {
    p.t[k + 1] = p.s[k] - upper[k];
    p.s[k + 1] = lower[k] + p.t[k];
  }
  for (int k = 0; k < n; ++k) {
    p.equations.push_back({k, k + 1, upper[k], eq_label(k, k + 1, std::to_string(upper[k]))});
    p.equations.push_back({k + 1, k, lower[k], eq_label(k + 1, k, std::to_string(lower[k]))});
  }
  apply_shift(p);
  return p;
}

std::pair<WeightPlan, WeightPlan> dn_weights_maxwell(const Complex& c, const MuSet& mu) {
  const int n = c.length();
  if (n < 1) throw std::invalid_argument("dn_weights_maxwell: complex has no operators");
  if (auto e = mu.shape_error(c)) throw std::invalid_argument("weights: " + *e);
  std::vector<int> up0, up1, low;
  for (int p = 1; p <= n; ++p) {
    const int j = n - p;
    up0.push_back(c.order(j) + 2 * mu.tilde_order(j));
    up1.push_back(c.order(j) + 2 * mu.hat_order(j + 1));
    low.push_back(c.order(j));
  }
  return {solve_chain_weights(up0, low, "maxwell-chain-0"), solve_chain_weights(up1, low, "maxwell-chain-1")};
}

WeightPlan dn_weights_stokes(const Complex& c, int q, const MuSet& mu) {
  if (q < 0 || q > c.length()) throw std::out_of_range("dn_weights_stokes: degree out of range");
  if (auto e = mu.shape_error(c)) throw std::invalid_argument("weights: " + *e);
  WeightPlan p;
  p.scheme = "stokes-chain";
  int half = c.order(q) + mu.tilde_order(q);
  if (q >= 1) {
    const int other = c.order(q - 1) + mu.hat_order(q);
    if (q == c.length()) {
      half = other;
    } else if (half != other) {
      throw std::invalid_argument("dn_weights_stokes: m_q + m~_q = " + std::to_string(half) + " differs from m_{q-1} + m^_q = " +
                                  std::to_string(other));
    }
  }
  p.s.assign(q + 1, 0);
  p.t.assign(q + 1, 0);
  p.s[0] = 2 * half;
  p.equations.push_back({0, 0, 2 * half, eq_label(0, 0, std::to_string(2 * half))});
  for (int j = 1; j <= q; ++j) {
    const int m = c.order(q - j);
    p.t[j] = p.s[j - 1] - m;
    p.s[j] = m + p.t[j - 1];
    p.equations.push_back({j - 1, j, m, eq_label(j - 1, j, std::to_string(m))});
    p.equations.push_back({j, j - 1, m, eq_label(j, j - 1, std::to_string(m))});
  }
  apply_shift(p);
  return p;
}

namespace {

void check_plan_shape(const BlockOperator& a, const WeightPlan& plan) {
  const std::size_t blocks = static_cast<std::size_t>(a.degree() + 1);
  if (plan.s.size() != blocks || plan.t.size() != blocks)
    throw std::invalid_argument("dn: plan has " + std::to_string(plan.s.size()) + " weights, operator has " +
                                std::to_string(blocks) + " blocks");
}

}  // namespace

SymbolMatrix dn_symbol(const BlockOperator& a, const WeightPlan& plan) {
  check_plan_shape(a, plan);
  const BlockPartition& part = a.partition;
  VarListPtr sym = symbol_vars_for(a.body.vars());
  PolyMatrix out = zero_matrix(sym, part.size(), part.size());
  for (int p = 0; p <= a.degree(); ++p)
    for (int r = 0; r <= a.degree(); ++r) {
      const int rd = part.degree_at(p), cd = part.degree_at(r);
      const int ord = plan.s[p] - plan.t[r];
      if (ord < 0) continue;
      SymbolMatrix blk = symbol_of_order(a.block(rd, cd), ord, Grading::spatial_only);
      out.block(part.offset(rd), part.offset(cd), blk.rows(), blk.cols()) = blk.body();
    }
  return SymbolMatrix(sym, out);
}

std::vector<std::string> dn_order_violations(const BlockOperator& a, const WeightPlan& plan) {
  check_plan_shape(a, plan);
  const BlockPartition& part = a.partition;
  std::vector<std::string> bad;
  for (int p = 0; p <= a.degree(); ++p)
    for (int r = 0; r <= a.degree(); ++r) {
      const int rd = part.degree_at(p), cd = part.degree_at(r);
      const int bound = plan.s[p] - plan.t[r];
      OperatorMatrix blk = a.block(rd, cd);
      const int ord = blk.order(Grading::spatial_only);
      if (ord > bound)
        bad.push_back("block(" + std::to_string(p + 1) + "," + std::to_string(r + 1) + "):" + std::to_string(ord) +
                      ">" + std::to_string(bound));
    }
  return bad;
}

EllipticityReport dn_check(const BlockOperator& a, const WeightPlan& plan, const SearchOptions& opt) {
  EllipticityReport r = symbol_invertibility_check(dn_symbol(a, plan), opt, "douglis-nirenberg");
  std::string sv, tv;
  for (std::size_t i = 0; i < plan.s.size(); ++i) {
    sv += (i ? "," : "") + std::to_string(plan.s[i]);
    tv += (i ? "," : "") + std::to_string(plan.t[i]);
  }
  r.notes["s"] = sv;
  r.notes["t"] = tv;
  r.notes["scheme"] = plan.scheme;
  std::string viol;
  for (const auto& v : dn_order_violations(a, plan)) viol += (viol.empty() ? "" : ";") + v;
  r.notes["order_violations"] = viol.empty() ? "none" : viol;
  return r;
}

}  // namespace cxkit
