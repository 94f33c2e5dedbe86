#include "cxkit/poly_matrix.hpp"

namespace cxkit {

PolyMatrix zero_matrix(const VarListPtr& vars, Index rows, Index cols) {
  PolyMatrix m(rows, cols);
  const Poly z = Poly::constant(vars, 0);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) m(i, j) = z;
  return m;
}

PolyMatrix identity_matrix(const VarListPtr& vars, Index n) {
  PolyMatrix m = zero_matrix(vars, n, n);
  for (Index i = 0; i < n; ++i) m(i, i) = Poly::constant(vars, 1);
  return m;
}

PolyMatrix with_vars(const PolyMatrix& m, const VarListPtr& vars) {
  PolyMatrix out(m.rows(), m.cols());
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) out(i, j) = m(i, j).with_vars(vars);
  return out;
}

PolyMatrix conj(const PolyMatrix& m) {
  PolyMatrix out(m.rows(), m.cols());
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) out(i, j) = m(i, j).conj();
  return out;
}

PolyMatrix conjugate_transpose(const PolyMatrix& m) {
  PolyMatrix out(m.cols(), m.rows());
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) out(j, i) = m(i, j).conj();
  return out;
}

bool is_zero(const PolyMatrix& m) {
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j)
      if (!m(i, j).is_zero()) return false;
  return true;
}

bool equal(const PolyMatrix& a, const PolyMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      if (a(i, j) != b(i, j)) return false;
  return true;
}

VarListPtr common_vars(const PolyMatrix& m) {
  VarListPtr vars;
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) {
      const auto& v = m(i, j).vars();
      if (!v) continue;
      if (!vars) {
        vars = v;
      } else if (vars != v) {
        throw VarListMismatch("matrix entries over different variable lists");
      }
    }
  return vars;
}

PolyMatrix from_exact(const VarListPtr& vars, const ExactMatrix& m) {
  PolyMatrix out(m.rows(), m.cols());
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) out(i, j) = Poly::constant(vars, m(i, j));
  return out;
}

PolyMatrix block_diagonal(const std::vector<PolyMatrix>& blocks, const VarListPtr& vars) {
  Index r = 0, c = 0;
  for (const auto& b : blocks) {
    r += b.rows();
    c += b.cols();
  }
  PolyMatrix out = zero_matrix(vars, r, c);
  Index i = 0, j = 0;
  for (const auto& b : blocks) {
    out.block(i, j, b.rows(), b.cols()) = with_vars(b, vars);
    i += b.rows();
    j += b.cols();
  }
  return out;
}

PolyMatrix kron_identity(Index k, const PolyMatrix& m) {
  std::vector<PolyMatrix> blocks(static_cast<std::size_t>(k), m);
  return block_diagonal(blocks, common_vars(m));
}

}  // namespace cxkit
