#include "cxkit/complexes.hpp"

#include <algorithm>

namespace cxkit {

// ---------------------------------------------------------------- Complex

Complex::Complex(std::string name, std::vector<OperatorMatrix> ops, Index k0)
    : name_(std::move(name)), ops_(std::move(ops)) {
  if (ops_.empty()) {
    if (k0 < 0) throw std::invalid_argument("Complex: empty operator list needs k0");
    ranks_ = {k0};
    return;
  }
  vars_ = ops_[0].vars();
  ranks_.push_back(ops_[0].cols());
  for (std::size_t q = 0; q < ops_.size(); ++q) {
    if (ops_[q].vars() != vars_) throw VarListMismatch("Complex: operators over different variable lists");
    if (ops_[q].cols() != ranks_.back())
      throw std::invalid_argument("Complex: A_" + std::to_string(q) + " has " + std::to_string(ops_[q].cols()) +
                                  " columns, expected " + std::to_string(ranks_.back()));
    ranks_.push_back(ops_[q].rows());
  }
}

OperatorMatrix Complex::op(int q) const {
  if (q >= 0 && q < length()) return ops_[static_cast<std::size_t>(q)];
  if (q < 0) return OperatorMatrix::zero(vars_, rank(q + 1), 0);
  return OperatorMatrix::zero(vars_, 0, rank(q));
}

Index Complex::rank(int q) const {
  if (q < 0 || q > length()) return 0;
  return ranks_[static_cast<std::size_t>(q)];
}

int Complex::order(int q) const {
  if (q < 0 || q >= length()) return 0;
  return std::max(0, ops_[static_cast<std::size_t>(q)].order());
}

int Complex::max_order() const {
  int m = 0;
  for (int q = 0; q < length(); ++q) m = std::max(m, order(q));
  return m;
}

Complex Complex::with_vars(const VarListPtr& vars) const {
  std::vector<OperatorMatrix> ops;
  for (const auto& a : ops_) ops.push_back(a.with_vars(vars));
  Complex c(name_, std::move(ops), ranks_.front());
  if (ops_.empty()) c.vars_ = vars;
  return c;
}

Complex Complex::renamed(std::string name) const {
  Complex c = *this;
  c.name_ = std::move(name);
  return c;
}

Complex lift(const Complex& c, bool time, const std::vector<std::string>& params) {
  const VarListPtr& v = c.vars();
  std::vector<std::string> all = v ? v->parameters() : std::vector<std::string>{};
  for (const auto& p : params)
    if (std::find(all.begin(), all.end(), p) == all.end()) all.push_back(p);
  bool t = time || (v && v->time_index().has_value());
  return c.with_vars(operator_vars(c.spatial_dim(), t, all));
}

// ------------------------------------------------------------------ MuSet

MuSet MuSet::identity(const Complex& c) { return powered(c, {}, {}); }

MuSet MuSet::powered(const Complex& c, const std::vector<int>& tilde, const std::vector<int>& hat) {
  MuSet mu;
  const int n = c.length();
  const Poly neg_lap = -laplace_symbol(c.vars());
  for (int q = 0; q <= n; ++q) {
    int t = q < static_cast<int>(tilde.size()) ? tilde[q] : 0;
    int h = q < static_cast<int>(hat.size()) ? hat[q] : 0;
    mu.mu0_.push_back(pow(neg_lap, t) * OperatorMatrix::identity(c.vars(), c.rank(q + 1)));
    mu.mu1_.push_back(pow(neg_lap, h) * OperatorMatrix::identity(c.vars(), c.rank(q - 1)));
  }
  return mu;
}

MuSet MuSet::scalar(const Complex& c, const Poly& s) {
  MuSet mu = identity(c);
  for (int q = 0; q <= c.length(); ++q) {
    mu.mu0_[q] = s * mu.mu0_[q];
    mu.mu1_[q] = s * mu.mu1_[q];
  }
  return mu;
}

const OperatorMatrix& MuSet::mu0(int q) const {
  if (q < 0 || q > length()) throw std::out_of_range("MuSet::mu0: degree out of range");
  return mu0_[static_cast<std::size_t>(q)];
}

const OperatorMatrix& MuSet::mu1(int q) const {
  if (q < 0 || q > length()) throw std::out_of_range("MuSet::mu1: degree out of range");
  return mu1_[static_cast<std::size_t>(q)];
}

MuSet& MuSet::set_mu0(int q, OperatorMatrix m) {
  if (q < 0 || q > length()) throw std::out_of_range("MuSet::set_mu0: degree out of range");
  if (m.rows() != mu0_[q].rows() || m.cols() != mu0_[q].cols())
    throw std::invalid_argument("MuSet::set_mu0: shape mismatch at degree " + std::to_string(q));
  mu0_[static_cast<std::size_t>(q)] = std::move(m);
  strongly_elliptic.reset();
  return *this;
}

MuSet& MuSet::set_mu1(int q, OperatorMatrix m) {
  if (q < 0 || q > length()) throw std::out_of_range("MuSet::set_mu1: degree out of range");
  if (m.rows() != mu1_[q].rows() || m.cols() != mu1_[q].cols())
    throw std::invalid_argument("MuSet::set_mu1: shape mismatch at degree " + std::to_string(q));
  mu1_[static_cast<std::size_t>(q)] = std::move(m);
  strongly_elliptic.reset();
  return *this;
}

int MuSet::tilde_order(int q) const { return std::max(0, mu0(q).order(Grading::spatial_only)) / 2; }
int MuSet::hat_order(int q) const { return std::max(0, mu1(q).order(Grading::spatial_only)) / 2; }

std::optional<std::string> MuSet::shape_error(const Complex& c) const {
  if (length() != c.length()) return "weights cover " + std::to_string(length()) + " degrees, complex has " +
                                     std::to_string(c.length());
  for (int q = 0; q <= c.length(); ++q) {
    if (mu0(q).rows() != c.rank(q + 1) || mu0(q).cols() != c.rank(q + 1))
      return "mu0 at degree " + std::to_string(q) + " must be square of size " + std::to_string(c.rank(q + 1));
    if (mu1(q).rows() != c.rank(q - 1) || mu1(q).cols() != c.rank(q - 1))
      return "mu1 at degree " + std::to_string(q) + " must be square of size " + std::to_string(c.rank(q - 1));
  }
  return std::nullopt;
}

bool MuSet::self_adjoint() const {
  for (int q = 0; q <= length(); ++q)
    if (!is_formally_self_adjoint(mu0(q)) || !is_formally_self_adjoint(mu1(q))) return false;
  return true;
}

bool MuSet::order_bounds_hold(const Complex& c) const {
  const int m = c.max_order();
  for (int q = 0; q <= c.length(); ++q) {
    if (tilde_order(q) > m - c.order(q)) return false;
    if (q >= 1 && hat_order(q) > m - c.order(q - 1)) return false;
  }
  return true;
}

MuSet MuSet::with_vars(const VarListPtr& vars) const {
  MuSet out = *this;
  for (auto& m : out.mu0_) m = m.with_vars(vars);
  for (auto& m : out.mu1_) m = m.with_vars(vars);
  return out;
}

// --------------------------------------------------------------- builders

namespace {

using Subset = std::vector<int>;

std::vector<Subset> subsets(int n, int k) {
  std::vector<Subset> out;
  Subset cur;
  std::function<void(int)> rec = [&](int start) {
    if (static_cast<int>(cur.size()) == k) {
      out.push_back(cur);
      return;
    }
    for (int i = start; i < n; ++i) {
      cur.push_back(i);
      rec(i + 1);
      cur.pop_back();
    }
  };
  rec(0);
  return out;
}

Index subset_index(const std::vector<Subset>& basis, const Subset& s) {
  return std::find(basis.begin(), basis.end(), s) - basis.begin();
}

// Sign of the permutation that sorts the concatenation a ++ b.
int shuffle_sign(const Subset& a, const Subset& b) {
  int inv = 0;
  for (int x : a)
    for (int y : b)
      if (x > y) ++inv;
  return inv % 2 ? -1 : 1;
}

}  // namespace

Complex build_koszul(const std::vector<Poly>& q, const VarListPtr& vars, std::string name) {
  const int n = static_cast<int>(q.size());
  if (n < 1) throw std::invalid_argument("build_koszul: need at least one operator");
  std::vector<OperatorMatrix> ops;
  for (int deg = 0; deg < n; ++deg) {
    auto src = subsets(n, deg);
    auto dst = subsets(n, deg + 1);
    PolyMatrix m = zero_matrix(vars, static_cast<Index>(dst.size()), static_cast<Index>(src.size()));
    for (std::size_t c = 0; c < src.size(); ++c)
      for (int i = 0; i < n; ++i) {
        if (std::find(src[c].begin(), src[c].end(), i) != src[c].end()) continue;
        // dx_i ^ dx_I = (-1)^{#{j in I : j < i}} dx_J.
        int before = static_cast<int>(std::count_if(src[c].begin(), src[c].end(), [&](int j) { return j < i; }));
        Subset j = src[c];
        j.insert(std::upper_bound(j.begin(), j.end(), i), i);
        Poly entry = q[static_cast<std::size_t>(i)].with_vars(vars);
        m(subset_index(dst, j), static_cast<Index>(c)) = before % 2 ? -entry : entry;
      }
    ops.emplace_back(vars, m);
  }
  return Complex(std::move(name), std::move(ops));
}

Complex build_de_rham(int n, FormBasis basis, VarListPtr vars) {
  if (n < 1) throw std::invalid_argument("build_de_rham: n must be positive");
  if (!vars) vars = operator_vars(n);
  if (vars->spatial_count() != n) throw std::invalid_argument("build_de_rham: ring dimension mismatch");
  std::vector<Poly> d;
  for (std::size_t i = 0; i < vars->size(); ++i)
    if (vars->kind(i) == VarKind::spatial) d.push_back(Poly::var(vars, i));
  Complex c = build_koszul(d, vars, "de_rham(" + std::to_string(n) + ")");
  if (basis == FormBasis::lexicographic) return c;
  // Columns of T_q are the new basis vectors *e_K in lexicographic coordinates.
  std::vector<ExactMatrix> t;
  for (int q = 0; q <= n; ++q) {
    auto lex = subsets(n, q);
    ExactMatrix m = ExactMatrix::Constant(static_cast<Index>(lex.size()), static_cast<Index>(lex.size()),
                                          GaussianRational(0));
    if (2 * q > n) {
      auto dual = subsets(n, n - q);
      for (std::size_t k = 0; k < dual.size(); ++k) {
        Subset comp;
        for (int i = 0; i < n; ++i)
          if (std::find(dual[k].begin(), dual[k].end(), i) == dual[k].end()) comp.push_back(i);
        m(subset_index(lex, comp), static_cast<Index>(k)) = GaussianRational(shuffle_sign(dual[k], comp));
      }
    } else {
      for (Index k = 0; k < m.rows(); ++k) m(k, k) = GaussianRational(1);
    }
    t.push_back(m);
  }
  return change_basis(c, t).renamed("de_rham_hodge(" + std::to_string(n) + ")");
}

Complex build_power_de_rham(int n, int p, VarListPtr vars) {
  if (!vars) vars = operator_vars(n);
  std::vector<Poly> d;
  for (std::size_t i = 0; i < vars->size(); ++i)
    if (vars->kind(i) == VarKind::spatial) d.push_back(pow(Poly::var(vars, i), static_cast<unsigned>(p)));
  return build_koszul(d, vars, "power_de_rham(" + std::to_string(n) + "," + std::to_string(p) + ")");
}

Complex build_dolbeault(int n, VarListPtr vars) {
  if (!vars) vars = operator_vars(2 * n);
  if (vars->spatial_count() != 2 * n) throw std::invalid_argument("build_dolbeault: ring must have 2n variables");
  std::vector<Poly> q;
  const GaussianRational half(1, 2);
  for (int j = 0; j < n; ++j) {
    Poly x = Poly::var(vars, "d" + std::to_string(2 * j + 1));
    Poly y = Poly::var(vars, "d" + std::to_string(2 * j + 2));
    q.push_back(half * (x + kI * y));
  }
  return build_koszul(q, vars, "dolbeault(" + std::to_string(n) + ")");
}

Complex change_basis(const Complex& c, const std::vector<ExactMatrix>& t) {
  if (static_cast<int>(t.size()) != c.length() + 1) throw std::invalid_argument("change_basis: need N+1 matrices");
  std::vector<OperatorMatrix> ops;
  for (int q = 0; q < c.length(); ++q) {
    OperatorMatrix tin = OperatorMatrix::constant(c.vars(), t[q]);
    OperatorMatrix tout = OperatorMatrix::constant(c.vars(), t[q + 1]);
    ops.push_back(formal_adjoint(tout) * c.op(q) * tin);
  }
  return Complex(c.name(), std::move(ops), c.rank(0));
}

CheckReport verify_complex(const Complex& c) {
  CheckReport r;
  r.name = "complex:" + c.name();
  r.identity = "A_{q+1} A_q = 0";
  for (int q = 0; q + 1 < c.length(); ++q)
    r.add_residuals("q=" + std::to_string(q), compose(c.op(q + 1), c.op(q)).body());
  return r;
}

// ------------------------------------------------------------- Laplacians

namespace {

void check_degree(const Complex& c, int q) {
  if (q < 0 || q > c.length()) throw std::out_of_range("degree " + std::to_string(q) + " out of range");
}

void check_mu(const Complex& c, const MuSet& mu) {
  if (auto e = mu.shape_error(c)) throw std::invalid_argument("weights: " + *e);
}

}  // namespace

OperatorMatrix laplacian(const Complex& c, int q) {
  check_degree(c, q);
  OperatorMatrix a = c.op(q), b = c.op(q - 1);
  return formal_adjoint(a) * a + b * formal_adjoint(b);
}

OperatorMatrix generalized_laplacian(const Complex& c, int q, const MuSet& mu) {
  check_degree(c, q);
  check_mu(c, mu);
  OperatorMatrix a = c.op(q), b = c.op(q - 1);
  return formal_adjoint(a) * mu.mu0(q) * a + b * mu.mu1(q) * formal_adjoint(b);
}

OperatorMatrix factorized_laplacian(const Complex& c, int q, const MuSet& mu) {
  check_degree(c, q);
  check_mu(c, mu);
  OperatorMatrix a = c.op(q), b = c.op(q - 1);
  OperatorMatrix left = hstack({formal_adjoint(a), b * mu.mu1(q)});
  OperatorMatrix right = vstack({mu.mu0(q) * a, formal_adjoint(b)});
  return left * right;
}

namespace {

OperatorMatrix mu1_or_identity(const Complex& c, const MuSet& mu, int q) {
  if (q <= mu.length()) return mu.mu1(q);
  return OperatorMatrix::identity(c.vars(), c.rank(q - 1));
}

}  // namespace

CheckReport check_coh(const Complex& c, const MuSet& mu) {
  check_mu(c, mu);
  CheckReport r;
  r.name = "weighted-composition:" + c.name();
  r.identity = "A_{q+1} mu_{q+2}^(1) mu_q^(0) A_q = 0";
  for (int q = 0; q + 1 <= c.length(); ++q) {
    OperatorMatrix prod = c.op(q + 1) * mu1_or_identity(c, mu, q + 2) * mu.mu0(q) * c.op(q);
    r.add_residuals("q=" + std::to_string(q), prod.body());
  }
  return r;
}

CheckReport check_coh_symbolic(const Complex& c, const MuSet& mu) {
  check_mu(c, mu);
  CheckReport r;
  r.name = "weighted-composition-symbol:" + c.name();
  r.identity = "s_{q+1} s(mu_{q+2}^(1)) s(mu_q^(0)) s_q = 0";
  for (int q = 0; q + 1 <= c.length(); ++q) {
    SymbolMatrix prod = principal_symbol(c.op(q + 1)) * principal_symbol(mu1_or_identity(c, mu, q + 2)) *
                        principal_symbol(mu.mu0(q)) * principal_symbol(c.op(q));
    r.add_residuals("q=" + std::to_string(q), prod.body());
  }
  return r;
}

OperatorMatrix canonical_lower(const Complex& c, int q, const OperatorMatrix& cq, const OperatorMatrix& ctilde,
                               const OperatorMatrix& mq) {
  check_degree(c, q);
  const Index k = c.rank(q);
  if (cq.rows() != k || cq.cols() != c.rank(q + 1)) throw std::invalid_argument("canonical_lower: C_q shape");
  if (ctilde.rows() != k || ctilde.cols() != c.rank(q - 1))
    throw std::invalid_argument("canonical_lower: C~_q shape");
  if (mq.rows() != k || mq.cols() != k) throw std::invalid_argument("canonical_lower: M_q shape");
  if (mq.order(Grading::spatial_only) > 0) throw std::invalid_argument("canonical_lower: M_q must have order 0");
  return cq * c.op(q) + ctilde * formal_adjoint(c.op(q - 1)) + mq;
}

OperatorMatrix helmholtz_lame(const Complex& c, int q, const MuSet& mu, const OperatorMatrix& lower) {
  OperatorMatrix lap = generalized_laplacian(c, q, mu);
  if (lower.rows() != lap.rows() || lower.cols() != lap.cols())
    throw std::invalid_argument("helmholtz_lame: lower part must be square of size " + std::to_string(lap.rows()));
  int half = q < c.length() ? c.order(q) + mu.tilde_order(q) : 0;
  if (q >= 1) half = std::max(half, c.order(q - 1) + mu.hat_order(q));
  const int bound = 2 * half - 1;
  if (lower.order(Grading::spatial_only) > bound)
    throw std::invalid_argument("helmholtz_lame: lower part has order " +
                                std::to_string(lower.order(Grading::spatial_only)) + " > " + std::to_string(bound));
  return lap + lower.with_vars(lap.vars());
}

}  // namespace cxkit
