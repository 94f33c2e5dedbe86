#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cxkit/check.hpp"
#include "cxkit/diffop.hpp"

namespace cxkit {

/// Graded sequence A_0, ..., A_{N-1} with A_q : E_q -> E_{q+1}, rank E_q = k_q.
class Complex {
 public:
  Complex() = default;
  /// Ranks are read off the operator shapes. For N = 0 pass `k0`.
  Complex(std::string name, std::vector<OperatorMatrix> ops, Index k0 = -1);

  const std::string& name() const { return name_; }
  int length() const { return static_cast<int>(ops_.size()); }
  /// A_q, or the zero operator of the right shape for q < 0 and q >= N.
  OperatorMatrix op(int q) const;
  Index rank(int q) const;
  std::vector<Index> ranks() const { return ranks_; }
  /// m_q = ord(A_q); zero operators count as order 0.
  int order(int q) const;
  /// m = max_q m_q.
  int max_order() const;
  const VarListPtr& vars() const { return vars_; }
  int spatial_dim() const { return vars_ ? vars_->spatial_count() : 0; }

  /// Same operators over a larger ring (e.g. with dt or parameters added).
  Complex with_vars(const VarListPtr& vars) const;
  Complex renamed(std::string name) const;

 private:
  std::string name_;
  std::vector<OperatorMatrix> ops_;
  std::vector<Index> ranks_;
  VarListPtr vars_;
};

/// Complex with the operators time-lifted and parameters added.
Complex lift(const Complex& c, bool time, const std::vector<std::string>& params = {});

/// Weights mu_q = (mu_q^(0) on E_{q+1}, mu_q^(1) on E_{q-1}) for q = 0..N.
class MuSet {
 public:
  MuSet() = default;
  static MuSet identity(const Complex& c);
  /// mu_q^(0) = (-Delta)^{tilde[q]} I, mu_q^(1) = (-Delta)^{hat[q]} I.
  static MuSet powered(const Complex& c, const std::vector<int>& tilde, const std::vector<int>& hat);
  /// Both weights at every degree equal s * I for a scalar polynomial s.
  static MuSet scalar(const Complex& c, const Poly& s);

  int length() const { return static_cast<int>(mu0_.size()) - 1; }
  const OperatorMatrix& mu0(int q) const;
  const OperatorMatrix& mu1(int q) const;
  MuSet& set_mu0(int q, OperatorMatrix m);
  MuSet& set_mu1(int q, OperatorMatrix m);

  /// m~_q = ord(mu_q^(0)) / 2 and m^_q = ord(mu_q^(1)) / 2 (0 for zero weights).
  int tilde_order(int q) const;
  int hat_order(int q) const;

  /// Empty when every weight has the shape the complex requires.
  std::optional<std::string> shape_error(const Complex& c) const;
  /// Every weight formally self-adjoint.
  bool self_adjoint() const;
  /// 0 <= m~_q <= m - m_q and 0 <= m^_q <= m - m_{q-1}.
  bool order_bounds_hold(const Complex& c) const;
  /// Set by the ellipticity module when it has checked the weights.
  std::optional<bool> strongly_elliptic;

  MuSet with_vars(const VarListPtr& vars) const;

 private:
  std::vector<OperatorMatrix> mu0_;
  std::vector<OperatorMatrix> mu1_;
};

enum class FormBasis { lexicographic, hodge_dual };

/// Koszul complex of commuting scalar operators Q_1..Q_N, exterior-algebra wedge pattern.
Complex build_koszul(const std::vector<Poly>& q, const VarListPtr& vars, std::string name = "koszul");
/// de Rham complex on R^n. `hodge_dual` spans Lambda^q for 2q > n by Hodge duals of the
/// lexicographic (n-q)-basis, so for n = 3 degree 1 is curl and degree 2 is div.
Complex build_de_rham(int n, FormBasis basis = FormBasis::lexicographic, VarListPtr vars = nullptr);
/// Koszul complex of (d_1^p, ..., d_n^p).
Complex build_power_de_rham(int n, int p, VarListPtr vars = nullptr);
/// Koszul complex of the conjugate Cauchy-Riemann operators (d_{2j-1} + i d_{2j}) / 2 on C^n = R^{2n}.
Complex build_dolbeault(int n, VarListPtr vars = nullptr);
/// Signed basis change A'_q = T_{q+1}^T A_q T_q for signed permutation matrices T_q.
Complex change_basis(const Complex& c, const std::vector<ExactMatrix>& t);

CheckReport verify_complex(const Complex& c);

/// Delta_q = A_q^* A_q + A_{q-1} A_{q-1}^*.
OperatorMatrix laplacian(const Complex& c, int q);
/// Delta_{q,mu} = A_q^* mu_q^(0) A_q + A_{q-1} mu_q^(1) A_{q-1}^*.
OperatorMatrix generalized_laplacian(const Complex& c, int q, const MuSet& mu);
/// (A_q^*, A_{q-1} mu_q^(1)) o (mu_q^(0) A_q ; A_{q-1}^*) as a product of two block operators.
OperatorMatrix factorized_laplacian(const Complex& c, int q, const MuSet& mu);

/// A_{q+1} mu_{q+2}^(1) mu_q^(0) A_q = 0 for 0 <= q <= N-1.
CheckReport check_coh(const Complex& c, const MuSet& mu);
/// The same condition on principal symbols.
CheckReport check_coh_symbolic(const Complex& c, const MuSet& mu);

/// C_q A_q + C~_q A_{q-1}^* + M_q.
OperatorMatrix canonical_lower(const Complex& c, int q, const OperatorMatrix& cq, const OperatorMatrix& ctilde,
                               const OperatorMatrix& mq);
/// Delta_{q,mu} + lower, with ord(lower) < 2(m_q + m~_q).
OperatorMatrix helmholtz_lame(const Complex& c, int q, const MuSet& mu, const OperatorMatrix& lower);

}  // namespace cxkit
