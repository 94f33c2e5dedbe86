#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "cxkit/poly_matrix.hpp"

namespace cxkit {

/// How the time symbol counts toward orders. Parameters never count.
enum class Grading { isotropic, spatial_only };

std::vector<int> degree_weights(const VarList& vars, Grading g);

/// Matrix over a fixed variable list. Shared by OperatorMatrix (derivative
/// symbols d.., dt) and SymbolMatrix (z.., tau).
template <typename Derived>
class RingMatrix {
 public:
  RingMatrix() = default;
  RingMatrix(VarListPtr vars, PolyMatrix body) : vars_(std::move(vars)), body_(cxkit::with_vars(body, vars_)) {}

  static Derived zero(const VarListPtr& vars, Index rows, Index cols) {
    return Derived(vars, zero_matrix(vars, rows, cols));
  }
  static Derived identity(const VarListPtr& vars, Index n) { return Derived(vars, identity_matrix(vars, n)); }
  static Derived scalar(const VarListPtr& vars, const Poly& p) {
    PolyMatrix m(1, 1);
    m(0, 0) = p;
    return Derived(vars, m);
  }
  static Derived constant(const VarListPtr& vars, const ExactMatrix& m) { return Derived(vars, from_exact(vars, m)); }

  Index rows() const { return body_.rows(); }
  Index cols() const { return body_.cols(); }
  bool is_square() const { return rows() == cols(); }
  const VarListPtr& vars() const { return vars_; }
  const PolyMatrix& body() const { return body_; }
  const Poly& operator()(Index i, Index j) const { return body_(i, j); }
  int spatial_dim() const { return vars_ ? vars_->spatial_count() : 0; }
  bool has_time() const { return vars_ && vars_->time_index().has_value(); }
  bool is_zero() const { return cxkit::is_zero(body_); }

  /// Maximum weighted degree of the entries, -1 for the zero matrix.
  int order(Grading g = Grading::isotropic) const {
    if (!vars_) return is_zero() ? -1 : 0;
    auto w = degree_weights(*vars_, g);
    int d = -1;
    for (Index i = 0; i < rows(); ++i)
      for (Index j = 0; j < cols(); ++j) d = std::max(d, body_(i, j).weighted_degree(w));
    return d;
  }

  Derived with_vars(const VarListPtr& vars) const { return Derived(vars, body_); }
  Derived block(Index i, Index j, Index r, Index c) const { return Derived(vars_, body_.block(i, j, r, c)); }
  Derived transpose() const { return Derived(vars_, body_.transpose()); }
  Derived conj() const { return Derived(vars_, cxkit::conj(body_)); }
  Derived entrywise(const std::function<Poly(const Poly&)>& f) const {
    PolyMatrix out(rows(), cols());
    for (Index i = 0; i < rows(); ++i)
      for (Index j = 0; j < cols(); ++j) out(i, j) = f(body_(i, j));
    return Derived(vars_, out);
  }

  Derived operator-() const { return Derived(vars_, -body_); }
  friend Derived operator+(const Derived& a, const Derived& b) {
    check_same(a, b, "add");
    return Derived(a.vars_, a.body_ + b.body_);
  }
  friend Derived operator-(const Derived& a, const Derived& b) {
    check_same(a, b, "subtract");
    return Derived(a.vars_, a.body_ - b.body_);
  }
  friend Derived operator*(const Derived& a, const Derived& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("compose: dimension mismatch");
    check_ring(a, b);
    if (a.cols() == 0) return zero(a.vars_, a.rows(), b.cols());
    return Derived(a.vars_, a.body_ * b.body_);
  }
  friend Derived operator*(const Poly& s, const Derived& a) {
    PolyMatrix out = a.body_;
    for (Index i = 0; i < out.rows(); ++i)
      for (Index j = 0; j < out.cols(); ++j) out(i, j) = s * out(i, j);
    return Derived(a.vars_, out);
  }
  friend Derived operator*(const GaussianRational& s, const Derived& a) { return Poly(s) * a; }
  friend bool operator==(const Derived& a, const Derived& b) {
    return a.vars_ == b.vars_ && cxkit::equal(a.body_, b.body_);
  }
  friend bool operator!=(const Derived& a, const Derived& b) { return !(a == b); }

 protected:
  static void check_ring(const Derived& a, const Derived& b) {
    if (a.vars_ != b.vars_) throw VarListMismatch("matrices over different variable lists");
  }
  static void check_same(const Derived& a, const Derived& b, const char* what) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
      throw std::invalid_argument(std::string(what) + ": dimension mismatch");
    check_ring(a, b);
  }

  VarListPtr vars_;
  PolyMatrix body_;
};

/// Constant-coefficient matrix differential operator sum a_alpha d^alpha.
class OperatorMatrix : public RingMatrix<OperatorMatrix> {
 public:
  using RingMatrix::RingMatrix;
};

/// Polynomial matrix in the symbol variables z.. (and tau).
class SymbolMatrix : public RingMatrix<SymbolMatrix> {
 public:
  using RingMatrix::RingMatrix;
  SymbolMatrix conjugate_transpose() const { return SymbolMatrix(vars_, cxkit::conjugate_transpose(body_)); }
};

/// A o B as the polynomial matrix product A.body * B.body.
OperatorMatrix compose(const OperatorMatrix& a, const OperatorMatrix& b);
/// (sum a_alpha d^alpha)* = sum (-1)^|alpha| a_alpha^H d^alpha. Parameters are real.
OperatorMatrix formal_adjoint(const OperatorMatrix& a);
bool is_formally_self_adjoint(const OperatorMatrix& a);
/// Substitutes d_j -> i z_j and dt -> i tau.
SymbolMatrix total_symbol(const OperatorMatrix& a);
/// Top weighted-degree part of the total symbol (zero matrix for the zero operator).
SymbolMatrix principal_symbol(const OperatorMatrix& a, Grading g = Grading::isotropic);
/// Symbol of the part of `a` of weighted order exactly `order`.
SymbolMatrix symbol_of_order(const OperatorMatrix& a, int order, Grading g = Grading::isotropic);
/// Inverse substitution z_j -> -i d_j.
OperatorMatrix operator_from_symbol(const SymbolMatrix& s);
/// Block-diagonal operator with k copies of `a`.
OperatorMatrix tensor_identity(Index k, const OperatorMatrix& a);

OperatorMatrix hstack(const std::vector<OperatorMatrix>& parts);
OperatorMatrix vstack(const std::vector<OperatorMatrix>& parts);
OperatorMatrix block_diag(const std::vector<OperatorMatrix>& parts);

/// Laplacian sum d_j^2 over the spatial variables.
Poly laplace_symbol(const VarListPtr& op_vars);
/// The n x 1 gradient (d_1, ..., d_n)^T.
OperatorMatrix gradient(const VarListPtr& op_vars);

using ParameterBinding = std::map<std::string, GaussianRational>;
/// Substitutes the bound parameters and drops them from the ring.
VarListPtr unbind_vars(const VarListPtr& vars, const ParameterBinding& b);
Poly bind_parameters(const Poly& p, const VarListPtr& target, const ParameterBinding& b);
OperatorMatrix bind_parameters(const OperatorMatrix& a, const ParameterBinding& b);
SymbolMatrix bind_parameters(const SymbolMatrix& a, const ParameterBinding& b);

}  // namespace cxkit
