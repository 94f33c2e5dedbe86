#pragma once

#include <stdexcept>
#include <vector>

#include <Eigen/Core>

#include "cxkit/poly.hpp"

namespace Eigen {

template <>
struct NumTraits<cxkit::Poly> : GenericNumTraits<cxkit::Poly> {
  using Real = cxkit::Poly;
  using NonInteger = cxkit::Poly;
  using Nested = cxkit::Poly;
  using Literal = cxkit::Poly;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 1,
    AddCost = 10,
    MulCost = 40
  };
  static inline int digits10() { return 0; }
  static inline Real epsilon() { return Real(); }
  static inline Real dummy_precision() { return Real(); }
};

template <>
struct NumTraits<cxkit::GaussianRational> : GenericNumTraits<cxkit::GaussianRational> {
  using Real = cxkit::GaussianRational;
  using NonInteger = cxkit::GaussianRational;
  using Nested = cxkit::GaussianRational;
  using Literal = cxkit::GaussianRational;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 1,
    AddCost = 4,
    MulCost = 8
  };
  static inline int digits10() { return 0; }
  static inline Real epsilon() { return Real(); }
  static inline Real dummy_precision() { return Real(); }
};

}  // namespace Eigen

namespace cxkit {

using PolyMatrix = Eigen::Matrix<Poly, Eigen::Dynamic, Eigen::Dynamic>;
using ExactMatrix = Eigen::Matrix<GaussianRational, Eigen::Dynamic, Eigen::Dynamic>;
using Index = Eigen::Index;

PolyMatrix zero_matrix(const VarListPtr& vars, Index rows, Index cols);
PolyMatrix identity_matrix(const VarListPtr& vars, Index n);
/// Entries without a ring are given `vars`; others are re-indexed by name.
PolyMatrix with_vars(const PolyMatrix& m, const VarListPtr& vars);
PolyMatrix conj(const PolyMatrix& m);
/// Entrywise conjugate of the transpose. Eigen's adjoint() does not conjugate Poly.
PolyMatrix conjugate_transpose(const PolyMatrix& m);
bool is_zero(const PolyMatrix& m);
bool equal(const PolyMatrix& a, const PolyMatrix& b);
/// Ring shared by the entries (null if every entry is ringless); throws on mixed rings.
VarListPtr common_vars(const PolyMatrix& m);
PolyMatrix from_exact(const VarListPtr& vars, const ExactMatrix& m);
PolyMatrix block_diagonal(const std::vector<PolyMatrix>& blocks, const VarListPtr& vars);
/// Kronecker product I_k (x) m.
PolyMatrix kron_identity(Index k, const PolyMatrix& m);

// Exact quotient used by fraction-free elimination.
inline Poly exact_quotient(const Poly& a, const Poly& b) { return divide_exact(a, b); }
inline GaussianRational exact_quotient(const GaussianRational& a, const GaussianRational& b) { return a / b; }
inline bool scalar_is_zero(const Poly& a) { return a.is_zero(); }
inline bool scalar_is_zero(const GaussianRational& a) { return a.is_zero(); }

/// Fraction-free Gaussian elimination with exact division and row pivoting.
template <typename Derived>
typename Derived::Scalar determinant_bareiss(const Eigen::MatrixBase<Derived>& in) {
  using Scalar = typename Derived::Scalar;
  if (in.rows() != in.cols()) throw std::invalid_argument("determinant: matrix is not square");
  const Index n = in.rows();
  if (n == 0) return Scalar(1);
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> a = in;
  Scalar prev(1);
  bool negate = false;
  for (Index k = 0; k + 1 < n; ++k) {
    if (scalar_is_zero(a(k, k))) {
      Index p = k + 1;
      while (p < n && scalar_is_zero(a(p, k))) ++p;
      if (p == n) return Scalar(0) * a(0, 0);
      a.row(k).swap(a.row(p));
      negate = !negate;
    }
    for (Index i = k + 1; i < n; ++i) {
      for (Index j = k + 1; j < n; ++j) a(i, j) = exact_quotient(a(i, j) * a(k, k) - a(i, k) * a(k, j), prev);
      a(i, k) = Scalar(0);
    }
    prev = a(k, k);
  }
  Scalar d = a(n - 1, n - 1);
  return negate ? Scalar(-d) : d;
}

/// Laplace expansion along the first row.
template <typename Derived>
typename Derived::Scalar determinant_cofactor(const Eigen::MatrixBase<Derived>& in) {
  using Scalar = typename Derived::Scalar;
  if (in.rows() != in.cols()) throw std::invalid_argument("determinant: matrix is not square");
  const Index n = in.rows();
  if (n == 0) return Scalar(1);
  if (n == 1) return in(0, 0);
  if (n == 2) return in(0, 0) * in(1, 1) - in(0, 1) * in(1, 0);
  Scalar acc(0);
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> minor(n - 1, n - 1);
  for (Index c = 0; c < n; ++c) {
    if (scalar_is_zero(in(0, c))) continue;
    for (Index i = 1; i < n; ++i)
      for (Index j = 0, jj = 0; j < n; ++j)
        if (j != c) minor(i - 1, jj++) = in(i, j);
    Scalar term = in(0, c) * determinant_cofactor(minor);
    if (c % 2) {
      acc -= term;
    } else {
      acc += term;
    }
  }
  return acc;
}

/// Cofactor expansion up to size 4, fraction-free elimination beyond.
template <typename Derived>
typename Derived::Scalar determinant(const Eigen::MatrixBase<Derived>& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("determinant: matrix is not square");
  return m.rows() <= 4 ? determinant_cofactor(m) : determinant_bareiss(m);
}

/// Classical adjoint: m * adjugate(m) = det(m) * I.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> adjugate(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  if (m.rows() != m.cols()) throw std::invalid_argument("adjugate: matrix is not square");
  const Index n = m.rows();
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> adj(n, n);
  if (n == 1) {
    adj(0, 0) = Scalar(1);
    return adj;
  }
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> minor(n - 1, n - 1);
  for (Index r = 0; r < n; ++r)
    for (Index c = 0; c < n; ++c) {
      for (Index i = 0, ii = 0; i < n; ++i) {
        if (i == r) continue;
        for (Index j = 0, jj = 0; j < n; ++j)
          if (j != c) minor(ii, jj++) = m(i, j);
        ++ii;
      }
      Scalar d = determinant(minor);
      adj(c, r) = ((r + c) % 2) ? Scalar(-d) : d;
    }
  return adj;
}

}  // namespace cxkit
