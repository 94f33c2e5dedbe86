#include "cxkit/symbolcalc.hpp"

#include <stdexcept>
#include <string>

namespace cxkit {

// ------------------------------------------------------- RationalSymbolMatrix

RationalSymbolMatrix::RationalSymbolMatrix(SymbolMatrix num, Poly den) : num_(std::move(num)), den_(std::move(den)) {
  if (den_.is_zero()) throw std::domain_error("rational symbol: zero denominator");
  if (num_.vars()) den_ = den_.with_vars(num_.vars());
}

RationalSymbolMatrix RationalSymbolMatrix::from(const SymbolMatrix& m) {
  return RationalSymbolMatrix(m, Poly::constant(m.vars(), GaussianRational(1)));
}

namespace {

bool divides_all(const PolyMatrix& m, const Poly& g) {
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j)
      if (!m(i, j).is_zero() && !exact_divide(m(i, j), g)) return false;
  return true;
}

PolyMatrix divide_all(const PolyMatrix& m, const Poly& g) {
  PolyMatrix out = m;
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j)
      if (!m(i, j).is_zero()) out(i, j) = divide_exact(m(i, j), g);
  return out;
}

}  // namespace

RationalSymbolMatrix RationalSymbolMatrix::simplified(const std::vector<Poly>& hints) const {
  const VarListPtr& v = num_.vars();
  PolyMatrix num = num_.body();
  Poly den = den_;
  if (is_zero(num)) return RationalSymbolMatrix(num_, Poly::constant(v, GaussianRational(1)));

  std::vector<Poly> cands;
  cands.push_back(den);
  // hints before |z|^2, so (1/4)|z|^2 I inverts to I / ((1/4)|z|^2)
  for (const auto& h : hints) cands.push_back(h.with_vars(v));
  if (v && v->spatial_count() > 0) cands.push_back(squared_norm(v));

  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& g : cands) {
      if (g.is_constant() || den.is_constant()) continue;
      auto q = exact_divide(den, g);
      if (!q || !divides_all(num, g)) continue;
      num = divide_all(num, g);
      den = *q;
      changed = true;
    }
  }
  if (den.is_constant()) {
    GaussianRational inv = GaussianRational(1) / den.constant_value();
    for (Index i = 0; i < num.rows(); ++i)
      for (Index j = 0; j < num.cols(); ++j) num(i, j) *= inv;
    den = Poly::constant(v, GaussianRational(1));
  }
  return RationalSymbolMatrix(SymbolMatrix(v, num), den);
}

bool RationalSymbolMatrix::is_identity() const {
  if (rows() != cols()) return false;
  return num_ == den_ * SymbolMatrix::identity(num_.vars(), rows());
}

RationalSymbolMatrix operator*(const RationalSymbolMatrix& a, const RationalSymbolMatrix& b) {
  return RationalSymbolMatrix(a.num_ * b.num_, a.den_ * b.den_).simplified({a.den_, b.den_});
}

RationalSymbolMatrix operator+(const RationalSymbolMatrix& a, const RationalSymbolMatrix& b) {
  if (a.den_ == b.den_) return RationalSymbolMatrix(a.num_ + b.num_, a.den_).simplified();
  return RationalSymbolMatrix(b.den_ * a.num_ + a.den_ * b.num_, a.den_ * b.den_).simplified({a.den_, b.den_});
}

RationalSymbolMatrix operator-(const RationalSymbolMatrix& a, const RationalSymbolMatrix& b) {
  return a + RationalSymbolMatrix(-b.num_, b.den_);
}

bool operator==(const RationalSymbolMatrix& a, const RationalSymbolMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  return b.den_ * a.num_ == a.den_ * b.num_;
}

// ------------------------------------------------------------------ helpers

SymbolMatrix delta(const Complex& c, int q, const MuSet* mu) {
  if (mu) return symbol_laplacian(c, q, *mu);
  return symbol_laplacian(c, q, MuSet::identity(c));
}

RationalSymbolMatrix invert_symbol(const SymbolMatrix& m) {
  if (!m.is_square()) throw std::invalid_argument("invert_symbol: matrix is not square");
  Poly det = determinant(m.body());
  if (det.is_zero()) throw std::domain_error("invert_symbol: determinant vanishes identically");
  std::vector<Poly> hints;
  for (Index i = 0; i < m.rows(); ++i)
    if (!m(i, i).is_constant()) hints.push_back(m(i, i));
  return RationalSymbolMatrix(SymbolMatrix(m.vars(), adjugate(m.body())), det).simplified(hints);
}

RationalSymbolMatrix block_diagonal_inverse(const std::vector<SymbolMatrix>& blocks) {
  if (blocks.empty()) throw std::invalid_argument("block_diagonal_inverse: no blocks");
  const VarListPtr& v = blocks.front().vars();
  std::vector<RationalSymbolMatrix> inv;
  Poly den = Poly::constant(v, GaussianRational(1));
  for (const auto& b : blocks) {
    if (b.rows() == 0) {
      inv.emplace_back(b, Poly::constant(v, GaussianRational(1)));
      continue;
    }
    inv.push_back(invert_symbol(b));
    const Poly& d = inv.back().denominator();
    if (exact_divide(den, d)) continue;
    if (exact_divide(d, den)) den = d;
    else den = den * d;
  }
  std::vector<PolyMatrix> nums;
  for (const auto& r : inv) {
    Poly f = divide_exact(den, r.denominator());
    nums.push_back((f * r.numerator()).body());
  }
  return RationalSymbolMatrix(SymbolMatrix(v, block_diagonal(nums, v)), den);
}

SymbolMatrix blockwise_symbol(const BlockOperator& a) {
  const BlockPartition& p = a.partition;
  VarListPtr sv = symbol_vars_for(a.body.vars());
  PolyMatrix out = zero_matrix(sv, p.size(), p.size());
  for (int r = p.degree(); r >= 0; --r)
    for (int c = p.degree(); c >= 0; --c) {
      OperatorMatrix b = a.block(r, c);
      if (b.rows() == 0 || b.cols() == 0) continue;
      out.block(p.offset(r), p.offset(c), b.rows(), b.cols()) =
          principal_symbol(b, Grading::spatial_only).with_vars(sv).body();
    }
  return SymbolMatrix(sv, out);
}

namespace {

void put(PolyMatrix& m, const BlockPartition& p, int rd, int cd, const PolyMatrix& b) {
  if (b.rows() != p.rank(rd) || b.cols() != p.rank(cd))
    throw std::logic_error("symbol block (" + std::to_string(rd) + "," + std::to_string(cd) + ") has the wrong shape");
  if (b.rows() == 0 || b.cols() == 0) return;
  m.block(p.offset(rd), p.offset(cd), b.rows(), b.cols()) = b;
}

/// Complex, weights and symbols of A_j and mu_j in one symbol ring.
struct SymbolSetup {
  Complex c;
  MuSet mu;
  VarListPtr ov;
  VarListPtr sv;
  SymbolMatrix sigma(int j) const { return total_symbol(c.op(j)).with_vars(sv); }
  SymbolMatrix sig_mu0(int j) const { return total_symbol(mu.mu0(j)).with_vars(sv); }
  SymbolMatrix sig_mu1(int j) const { return total_symbol(mu.mu1(j)).with_vars(sv); }
  SymbolMatrix delta(int j, bool weighted) const {
    SymbolMatrix s = sigma(j), p = sigma(j - 1);
    if (!weighted) return s.conjugate_transpose() * s + p * p.conjugate_transpose();
    return s.conjugate_transpose() * sig_mu0(j) * s + p * sig_mu1(j) * p.conjugate_transpose();
  }
};

SymbolSetup symbol_setup(const Complex& c, const MuSet& mu, bool time) {
  if (auto e = mu.shape_error(c)) throw std::invalid_argument("weights: " + *e);
  VarListPtr v = block_ring(c, &mu, {}, time);
  return {c.with_vars(v), mu.with_vars(v), v, symbol_vars_for(v)};
}

std::string shape(Index r, Index c) { return std::to_string(r) + "x" + std::to_string(c); }

}  // namespace

// ---------------------------------------------------------- factorization

CheckReport verify_symbolic_factorization(const Complex& c, int q, const MuSet& mu) {
  CheckReport r;
  r.name = "symbolic_factorization";
  r.identity = "s(M1) s(M0) = B_q s_{q-1} s(mu1_q) s_{q-1}^* B_q + sum_{j<q} B_j delta_{j,mu} B_j";
  CheckReport coh = check_coh_symbolic(c, mu);
  r.notes["weighted_composition_symbol"] = coh.pass ? "holds" : "fails";
  SymbolSetup s = symbol_setup(c, mu, false);
  BlockPartition p = partition_of(s.c, q);
  SymbolMatrix lhs = blockwise_symbol(maxwell(s.c, q, s.mu, 1)) * blockwise_symbol(maxwell(s.c, q, s.mu, 0));
  PolyMatrix rhs = zero_matrix(lhs.vars(), p.size(), p.size());
  SymbolMatrix sp = s.sigma(q - 1);
  put(rhs, p, q, q, (sp * s.sig_mu1(q) * sp.conjugate_transpose()).with_vars(lhs.vars()).body());
  for (int j = 0; j < q; ++j) put(rhs, p, j, j, s.delta(j, true).with_vars(lhs.vars()).body());
  r.add_residuals("M1*M0", lhs.body() - rhs);
  if (!coh.pass && !r.pass) r.notes["failure"] = "weighted composition condition fails on symbols";
  return r;
}

CheckReport verify_laplace_symbol_relations(const Complex& c) {
  CheckReport r;
  r.name = "laplace_symbol_relations";
  r.identity = "s_q^* s_{q+1}^* = 0, delta_{q+1} s_q = s_q delta_q, s_q^* delta_{q+1} = delta_q s_q^*";
  SymbolSetup s = symbol_setup(c, MuSet::identity(c), false);
  for (int q = 0; q < c.length(); ++q) {
    SymbolMatrix sq = s.sigma(q), sn = s.sigma(q + 1);
    SymbolMatrix dq = s.delta(q, false), dn = s.delta(q + 1, false);
    const std::string at = "q=" + std::to_string(q);
    if (sn.rows() > 0) r.add_residuals(at + ":adjoint_chain", (sq.conjugate_transpose() * sn.conjugate_transpose()).body());
    r.add_residuals(at + ":delta_intertwines", (dn * sq - sq * dq).body());
    r.add_residuals(at + ":delta_intertwines_adjoint", (sq.conjugate_transpose() * dn - dq * sq.conjugate_transpose()).body());
  }
  return r;
}

CheckReport verify_mu_commutation(const Complex& c, const MuSet& mu) {
  CheckReport r;
  r.name = "mu_commutation";
  r.identity = "s_j^* s(mu0_j) s_j delta_{j,mu}^{-1} = delta_{j,mu}^{-1} s_j^* s(mu0_j) s_j";
  SymbolSetup s = symbol_setup(c, mu, false);
  std::string skipped;
  for (int j = 0; j <= c.length(); ++j) {
    SymbolMatrix d = s.delta(j, true);
    if (d.rows() == 0) continue;
    if (determinant(d.body()).is_zero()) {
      skipped += (skipped.empty() ? "" : ",") + std::to_string(j);
      continue;
    }
    SymbolMatrix x = s.sigma(j).conjugate_transpose() * s.sig_mu0(j) * s.sigma(j);
    // for invertible delta, commuting with delta^{-1} is commuting with delta
    r.add_residuals("j=" + std::to_string(j), (x * d - d * x).body());
  }
  if (!skipped.empty()) r.notes["singular_degrees"] = skipped;
  return r;
}

// ---------------------------------------------------------------- Maxwell

ParametrixResult maxwell_parametrix_symbol(const Complex& c, const MuSet& mu, Side side) {
  SymbolSetup s = symbol_setup(c, mu, false);
  const int n = c.length();
  SymbolMatrix m0 = blockwise_symbol(maxwell(s.c, n, s.mu, 0));
  SymbolMatrix m1 = blockwise_symbol(maxwell(s.c, n, s.mu, 1));
  std::vector<SymbolMatrix> deltas;
  for (int j = n; j >= 0; --j) {
    SymbolMatrix d = s.delta(j, true).with_vars(m0.vars());
    if (d.rows() > 0 && determinant(d.body()).is_zero())
      throw std::domain_error("maxwell_parametrix_symbol: delta_" + std::to_string(j) + " is singular");
    deltas.push_back(d);
  }
  RationalSymbolMatrix dinv = block_diagonal_inverse(deltas);
  ParametrixResult out;
  CheckReport& r = out.report;
  r.name = side == Side::right ? "maxwell_parametrix_right" : "maxwell_parametrix_left";
  if (side == Side::right) {
    r.identity = "s(M1) F1 = I, F1 = s(M0) sum_j B_j delta_{j,mu}^{-1} B_j";
    out.parametrix = RationalSymbolMatrix::from(m0) * dinv;
    RationalSymbolMatrix prod = RationalSymbolMatrix::from(m1) * out.parametrix;
    if (!prod.is_identity()) r.add_residuals("M1*F1-I", (prod.numerator() - prod.denominator() * SymbolMatrix::identity(m0.vars(), m0.rows())).body());
  } else {
    r.identity = "F0 s(M0) = I, F0 = (sum_j B_j delta_{j,mu}^{-1} B_j) s(M1)";
    out.parametrix = dinv * RationalSymbolMatrix::from(m1);
    RationalSymbolMatrix prod = out.parametrix * RationalSymbolMatrix::from(m0);
    if (!prod.is_identity()) r.add_residuals("F0*M0-I", (prod.numerator() - prod.denominator() * SymbolMatrix::identity(m0.vars(), m0.rows())).body());
  }
  r.notes["denominator"] = out.parametrix.denominator().str();
  return out;
}

// ----------------------------------------------------------------- Stokes

namespace {

/// First violated hypothesis of the Stokes fundamental-solution theorems.
std::string stokes_hypothesis_failure(const SymbolSetup& s, int q) {
  const int n = s.c.length();
  if (n < 2 || q < 1 || q > n - 1) return "1 <= q <= N-1 with N >= 2 (q=" + std::to_string(q) + ", N=" + std::to_string(n) + ")";
  if (!check_coh(s.c, s.mu).pass) return "weighted composition condition";
  const int m = s.c.order(0);
  for (int j = 0; j < q; ++j)
    if (s.c.order(j) != m) return "m_j = m for j < q (m_" + std::to_string(j) + "=" + std::to_string(s.c.order(j)) + ")";
  for (int j = 0; j < q; ++j) {
    if (!s.mu.mu0(j).is_zero()) return "mu0_" + std::to_string(j) + " = 0";
    if (!s.mu.mu1(j).is_zero()) return "mu1_" + std::to_string(j) + " = 0";
  }
  if (s.c.order(q) + s.mu.tilde_order(q) != m) return "m_q + m~_q = m";
  if (!is_formally_self_adjoint(s.mu.mu0(q)) || !is_formally_self_adjoint(s.mu.mu1(q)))
    return "mu_q self-adjoint";
  if (q >= 2) {
    OperatorMatrix x = compose(formal_adjoint(s.c.op(q - 2)), compose(s.mu.mu1(q), formal_adjoint(s.c.op(q - 1))));
    if (!x.is_zero()) return "mu.mu: A_{q-2}^* mu1_q A_{q-1}^* = 0";
  }
  return "";
}

void record_shapes(CheckReport& r, const SymbolSetup& s, int q) {
  r.notes["shape.mu1_q"] = shape(s.mu.mu1(q).rows(), s.mu.mu1(q).cols()) + " on E_{q-1}";
  r.notes["shape.N(q,q-1)"] = shape(s.c.rank(q), s.c.rank(q - 1));
  r.notes["shape.N(q-1,q)"] = shape(s.c.rank(q - 1), s.c.rank(q));
}

/// Numerator pieces of N^(q) + M_{q-1} over the denominator of the degree-q block.
/// phi_q is the inverse used in block (q, q); tail is -s(mu1_q) s_{q-1}^* s_{q-1} plus `extra`.
RationalSymbolMatrix assemble_n(const SymbolSetup& s, int q, const BlockPartition& p, const RationalSymbolMatrix& phi_q,
                                const SymbolMatrix& extra_tail, const VarListPtr& sv) {
  const Poly& den = phi_q.denominator();
  PolyMatrix num = zero_matrix(sv, p.size(), p.size());
  SymbolMatrix sq = s.sigma(q), sp = s.sigma(q - 1), m1 = s.sig_mu1(q);
  SymbolMatrix x = sq.conjugate_transpose() * s.sig_mu0(q) * sq;
  put(num, p, q, q, (phi_q.numerator() * x).body());
  put(num, p, q, q - 1, (den * sp).body());
  put(num, p, q - 1, q, (den * (m1 * sp.conjugate_transpose())).body());
  put(num, p, q - 1, q - 1, (den * (extra_tail - m1 * sp.conjugate_transpose() * sp)).body());
  // M_{q-1}: unweighted off-diagonal blocks below degree q-1
  for (int j = 0; j + 1 < q; ++j) {
    SymbolMatrix a = s.sigma(j);
    put(num, p, j + 1, j, (den * a).body());
    put(num, p, j, j + 1, (den * a.conjugate_transpose()).body());
  }
  return RationalSymbolMatrix(SymbolMatrix(sv, num), den).simplified();
}

PolyMatrix stokes_rhs(const SymbolSetup& s, int q, const BlockPartition& p, const VarListPtr& sv) {
  PolyMatrix rhs = zero_matrix(sv, p.size(), p.size());
  put(rhs, p, q, q, s.delta(q, true).body());
  for (int j = 0; j < q; ++j) put(rhs, p, j, j, s.delta(j, false).body());
  return rhs;
}

}  // namespace

ParametrixResult stokes_fundamental_symbol(const Complex& c, int q, const MuSet& mu) {
  ParametrixResult out;
  CheckReport& r = out.report;
  r.name = "stokes_fundamental_symbol";
  r.identity = "s(S_{q,1}) (N + M_{q-1}) = B_q delta_{q,mu} B_q + sum_{j<q} B_j delta_j B_j; s(S_{q,1}) F = I";
  SymbolSetup s = symbol_setup(c, mu, false);
  if (std::string h = stokes_hypothesis_failure(s, q); !h.empty()) {
    r.fail("hypothesis violated: " + h);
    r.notes["hypothesis"] = h;
    return out;
  }
  record_shapes(r, s, q);
  BlockPartition p = partition_of(s.c, q);
  const VarListPtr& sv = s.sv;

  SymbolMatrix dq = s.delta(q, true);
  if (determinant(dq.body()).is_zero()) {
    r.fail("delta_{q,mu} is singular");
    return out;
  }
  RationalSymbolMatrix phi_q = invert_symbol(dq);
  RationalSymbolMatrix nm = assemble_n(s, q, p, phi_q, SymbolMatrix::zero(sv, s.c.rank(q - 1), s.c.rank(q - 1)), sv);

  SymbolMatrix sym_s = blockwise_symbol(stokes(s.c, q, s.mu, {}, 1)).with_vars(sv);
  RationalSymbolMatrix lhs = RationalSymbolMatrix::from(sym_s) * nm;
  RationalSymbolMatrix rhs = RationalSymbolMatrix::from(SymbolMatrix(sv, stokes_rhs(s, q, p, sv)));
  if (!(lhs == rhs)) r.add_residuals("S*(N+M)", (lhs.numerator() - lhs.denominator() * rhs.numerator()).body());

  std::vector<SymbolMatrix> diag;
  diag.push_back(dq);
  for (int j = q - 1; j >= 0; --j) diag.push_back(s.delta(j, false));
  out.parametrix = nm * block_diagonal_inverse(diag);
  RationalSymbolMatrix check = RationalSymbolMatrix::from(sym_s) * out.parametrix;
  if (!check.is_identity())
    r.add_residuals("S*F-I", (check.numerator() - check.denominator() * SymbolMatrix::identity(sv, p.size())).body());
  r.notes["denominator"] = out.parametrix.denominator().str();
  return out;
}

CheckReport verify_evolution_identity(const Complex& c, int q, const MuSet& mu, const std::vector<Poly>& b) {
  if (static_cast<int>(b.size()) != q + 1) throw std::invalid_argument("evolution identity: b needs q+1 entries");
  for (int j = 0; j <= q; ++j) {
    bool ok = b[j].is_constant() && b[j].constant_value() == GaussianRational(j == q ? 1 : 0);
    if (!ok) throw std::invalid_argument("evolution identity: b must be (0, ..., 0, 1)");
  }
  CheckReport r;
  r.name = "stokes_evolution_identity";
  r.identity = "s(S_{q,1}(A, b(dt + Delta_mu))) (N(t) + M_{q-1}) = B_q delta_{q,mu} B_q + sum_{j<q} B_j delta_j B_j";
  SymbolSetup s = symbol_setup(c, mu, true);
  if (std::string h = stokes_hypothesis_failure(s, q); !h.empty()) {
    r.fail("hypothesis violated: " + h);
    r.notes["hypothesis"] = h;
    return r;
  }
  record_shapes(r, s, q);
  const VarListPtr& sv = s.sv;
  BlockPartition p = partition_of(s.c, q);
  SymbolMatrix dq = s.delta(q, true);
  // delta_{q,mu} must be a scalar polynomial times the identity
  Poly scal = dq.rows() ? dq(0, 0) : Poly::constant(sv, GaussianRational(0));
  if (dq != scal * SymbolMatrix::identity(sv, dq.rows()))
    throw std::invalid_argument("evolution identity: delta_{q,mu} is not scalar");

  Poly itau = Poly::var(sv, *sv->time_index()) * GaussianRational::i();
  Poly den = itau + scal;
  RationalSymbolMatrix psi(SymbolMatrix::identity(sv, dq.rows()), den);
  SymbolMatrix dt = itau * SymbolMatrix::identity(sv, s.c.rank(q - 1));
  RationalSymbolMatrix nm = assemble_n(s, q, p, psi, -dt, sv);

  std::vector<Poly> bb;
  for (const auto& x : b) bb.push_back(Poly::constant(s.ov, x.constant_value()));
  SymbolMatrix sym_s = total_symbol(stokes_time_weighted(s.c, q, s.mu, {}, 1, bb, 1).body).with_vars(sv);
  RationalSymbolMatrix lhs = RationalSymbolMatrix::from(sym_s) * nm;
  RationalSymbolMatrix rhs = RationalSymbolMatrix::from(SymbolMatrix(sv, stokes_rhs(s, q, p, sv)));
  if (!(lhs == rhs)) r.add_residuals("S*(N+M)", (lhs.numerator() - lhs.denominator() * rhs.numerator()).body());
  r.notes["denominator"] = den.str();
  return r;
}

}  // namespace cxkit
