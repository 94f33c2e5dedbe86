#pragma once

#include <string>
#include <utility>
#include <vector>

#include "cxkit/blockops.hpp"
#include "cxkit/ellipticity.hpp"

namespace cxkit {

/// numerator / denominator with a scalar, nonzero polynomial denominator.
class RationalSymbolMatrix {
 public:
  RationalSymbolMatrix() = default;
  RationalSymbolMatrix(SymbolMatrix num, Poly den);
  static RationalSymbolMatrix from(const SymbolMatrix& m);

  const SymbolMatrix& numerator() const { return num_; }
  const Poly& denominator() const { return den_; }
  Index rows() const { return num_.rows(); }
  Index cols() const { return num_.cols(); }
  const VarListPtr& vars() const { return num_.vars(); }

  /// Cancels every trial factor (denominator, hints, |z|^2) that divides the
  /// denominator and all entries. A constant denominator is folded into the numerator.
  RationalSymbolMatrix simplified(const std::vector<Poly>& hints = {}) const;
  bool is_identity() const;

  friend RationalSymbolMatrix operator*(const RationalSymbolMatrix& a, const RationalSymbolMatrix& b);
  friend RationalSymbolMatrix operator+(const RationalSymbolMatrix& a, const RationalSymbolMatrix& b);
  friend RationalSymbolMatrix operator-(const RationalSymbolMatrix& a, const RationalSymbolMatrix& b);
  /// Cross-multiplied comparison.
  friend bool operator==(const RationalSymbolMatrix& a, const RationalSymbolMatrix& b);

 private:
  SymbolMatrix num_;
  Poly den_;
};

/// delta_q, or delta_{q,mu} when weights are given.
SymbolMatrix delta(const Complex& c, int q, const MuSet* mu = nullptr);

/// Adjugate over determinant, simplified. Throws std::domain_error when det == 0.
RationalSymbolMatrix invert_symbol(const SymbolMatrix& m);
/// Inverse of a block-diagonal matrix given by its blocks, with one common denominator.
RationalSymbolMatrix block_diagonal_inverse(const std::vector<SymbolMatrix>& blocks);

/// Block-wise principal symbol: block (i, j) of the result is sigma(block (i, j)).
SymbolMatrix blockwise_symbol(const BlockOperator& a);

/// sigma~(M1) sigma~(M0) = B_q s_{q-1} s(mu_q^(1)) s_{q-1}^* B_q + sum_{j<q} B_j delta_{j,mu} B_j.
CheckReport verify_symbolic_factorization(const Complex& c, int q, const MuSet& mu);

/// s_q^* s_{q+1}^* = 0, delta_{q+1} s_q = s_q delta_q and s_q^* delta_{q+1} = delta_q s_q^*.
CheckReport verify_laplace_symbol_relations(const Complex& c);
/// s_j^* s(mu_j^(0)) s_j commutes with delta_{j,mu}^{-1} wherever delta_{j,mu} is invertible.
CheckReport verify_mu_commutation(const Complex& c, const MuSet& mu);

enum class Side { left, right };

struct ParametrixResult {
  RationalSymbolMatrix parametrix;
  CheckReport report;
};

/// Right: F1 = sigma~(M0) sum_j B_j delta_{j,mu}^{-1} B_j with sigma~(M1) F1 = I.
/// Left:  F0 = (sum_j B_j delta_{j,mu}^{-1} B_j) sigma~(M1) with F0 sigma~(M0) = I.
/// Both at q = N.
ParametrixResult maxwell_parametrix_symbol(const Complex& c, const MuSet& mu, Side side);

/// Symbol of (N^(q) + M_{q-1}) (B_q Phi_{q,mu} B_q + sum_{j<q} B_j Phi_j B_j) and the checks
/// sigma(S_{q,1}) (N + M_{q-1}) = B_q delta_{q,mu} B_q + sum_{j<q} B_j delta_j B_j and sigma(S) F = I.
/// Hypothesis violations make the report fail with note "hypothesis".
ParametrixResult stokes_fundamental_symbol(const Complex& c, int q, const MuSet& mu);

/// Evolution version with b = (0, ..., 0, 1): the block of degree q of S carries
/// dt + Delta_{q,mu}, and Psi_{q,mu} becomes I / (i tau + s) for delta_{q,mu} = s I.
/// Throws std::invalid_argument for other b or a non-scalar delta_{q,mu}.
CheckReport verify_evolution_identity(const Complex& c, int q, const MuSet& mu, const std::vector<Poly>& b);

}  // namespace cxkit
