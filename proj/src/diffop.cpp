#include "cxkit/diffop.hpp"

namespace cxkit {

std::vector<int> degree_weights(const VarList& vars, Grading g) {
  std::vector<int> w(vars.size(), 0);
  for (std::size_t i = 0; i < vars.size(); ++i) {
    switch (vars.kind(i)) {
      case VarKind::spatial:
        w[i] = 1;
        break;
      case VarKind::time:
        w[i] = g == Grading::isotropic ? 1 : 0;
        break;
      case VarKind::parameter:
        w[i] = 0;
        break;
    }
  }
  return w;
}

namespace {

int derivative_degree(const VarList& vars, const Monomial& m) {
  int d = 0;
  for (std::size_t i = 0; i < vars.size(); ++i)
    if (vars.kind(i) != VarKind::parameter) d += m.exp[i];
  return d;
}

// i^k for k >= 0.
GaussianRational i_power(int k) {
  switch (((k % 4) + 4) % 4) {
    case 0:
      return 1;
    case 1:
      return kI;
    case 2:
      return -1;
    default:
      return -kI;
  }
}

Poly to_symbol(const Poly& p, const VarList& vars, const VarListPtr& sym) {
  return p.map_terms([&](const Term& t) { return t.coeff * i_power(derivative_degree(vars, t.mono)); }).rename(sym);
}

}  // namespace

OperatorMatrix compose(const OperatorMatrix& a, const OperatorMatrix& b) { return a * b; }

OperatorMatrix formal_adjoint(const OperatorMatrix& a) {
  const VarList& vars = *a.vars();
  PolyMatrix out(a.cols(), a.rows());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out(j, i) = a(i, j).map_terms([&](const Term& t) {
        GaussianRational c = t.coeff.conj();
        return derivative_degree(vars, t.mono) % 2 ? -c : c;
      });
  return OperatorMatrix(a.vars(), out);
}

bool is_formally_self_adjoint(const OperatorMatrix& a) { return a.is_square() && formal_adjoint(a) == a; }

SymbolMatrix total_symbol(const OperatorMatrix& a) {
  VarListPtr sym = symbol_vars_for(a.vars());
  PolyMatrix out(a.rows(), a.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j) out(i, j) = to_symbol(a(i, j), *a.vars(), sym);
  return SymbolMatrix(sym, out);
}

SymbolMatrix symbol_of_order(const OperatorMatrix& a, int order, Grading g) {
  auto w = degree_weights(*a.vars(), g);
  VarListPtr sym = symbol_vars_for(a.vars());
  PolyMatrix out(a.rows(), a.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j) out(i, j) = to_symbol(a(i, j).weighted_part(w, order), *a.vars(), sym);
  return SymbolMatrix(sym, out);
}

SymbolMatrix principal_symbol(const OperatorMatrix& a, Grading g) {
  int m = a.order(g);
  if (m < 0) return SymbolMatrix::zero(symbol_vars_for(a.vars()), a.rows(), a.cols());
  return symbol_of_order(a, m, g);
}

OperatorMatrix operator_from_symbol(const SymbolMatrix& s) {
  VarListPtr ops = operator_vars_for(s.vars());
  const VarList& vars = *s.vars();
  PolyMatrix out(s.rows(), s.cols());
  for (Index i = 0; i < s.rows(); ++i)
    for (Index j = 0; j < s.cols(); ++j)
      out(i, j) = s(i, j)
                      .map_terms([&](const Term& t) { return t.coeff * i_power(-derivative_degree(vars, t.mono)); })
                      .rename(ops);
  return OperatorMatrix(ops, out);
}

OperatorMatrix tensor_identity(Index k, const OperatorMatrix& a) {
  if (k < 1) throw std::invalid_argument("tensor_identity: k must be positive");
  return block_diag(std::vector<OperatorMatrix>(static_cast<std::size_t>(k), a));
}

OperatorMatrix hstack(const std::vector<OperatorMatrix>& parts) {
  if (parts.empty()) throw std::invalid_argument("hstack: no parts");
  Index c = 0;
  for (const auto& p : parts) {
    if (p.rows() != parts[0].rows()) throw std::invalid_argument("hstack: row mismatch");
    c += p.cols();
  }
  PolyMatrix out(parts[0].rows(), c);
  Index j = 0;
  for (const auto& p : parts) {
    out.middleCols(j, p.cols()) = p.body();
    j += p.cols();
  }
  return OperatorMatrix(parts[0].vars(), out);
}

OperatorMatrix vstack(const std::vector<OperatorMatrix>& parts) {
  if (parts.empty()) throw std::invalid_argument("vstack: no parts");
  Index r = 0;
  for (const auto& p : parts) {
    if (p.cols() != parts[0].cols()) throw std::invalid_argument("vstack: column mismatch");
    r += p.rows();
  }
  PolyMatrix out(r, parts[0].cols());
  Index i = 0;
  for (const auto& p : parts) {
    out.middleRows(i, p.rows()) = p.body();
    i += p.rows();
  }
  return OperatorMatrix(parts[0].vars(), out);
}

OperatorMatrix block_diag(const std::vector<OperatorMatrix>& parts) {
  if (parts.empty()) throw std::invalid_argument("block_diag: no parts");
  std::vector<PolyMatrix> bodies;
  for (const auto& p : parts) bodies.push_back(p.body());
  return OperatorMatrix(parts[0].vars(), block_diagonal(bodies, parts[0].vars()));
}

Poly laplace_symbol(const VarListPtr& op_vars) { return squared_norm(op_vars); }

OperatorMatrix gradient(const VarListPtr& op_vars) {
  const int n = op_vars->spatial_count();
  PolyMatrix g(n, 1);
  int k = 0;
  for (std::size_t i = 0; i < op_vars->size(); ++i)
    if (op_vars->kind(i) == VarKind::spatial) g(k++, 0) = Poly::var(op_vars, i);
  return OperatorMatrix(op_vars, g);
}

VarListPtr unbind_vars(const VarListPtr& vars, const ParameterBinding& b) {
  std::vector<std::string> names;
  std::vector<VarKind> kinds;
  for (std::size_t i = 0; i < vars->size(); ++i) {
    if (vars->kind(i) == VarKind::parameter && b.count(vars->name(i))) continue;
    names.push_back(vars->name(i));
    kinds.push_back(vars->kind(i));
  }
  return make_vars(std::move(names), std::move(kinds));
}

Poly bind_parameters(const Poly& p, const VarListPtr& target, const ParameterBinding& b) {
  Poly out = p;
  if (!p.vars()) return out.with_vars(target);
  for (const auto& [name, value] : b) {
    auto idx = p.vars()->index_of(name);
    if (idx) out = out.substitute(*idx, value);
  }
  return out.with_vars(target);
}

OperatorMatrix bind_parameters(const OperatorMatrix& a, const ParameterBinding& b) {
  VarListPtr target = unbind_vars(a.vars(), b);
  PolyMatrix out(a.rows(), a.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j) out(i, j) = bind_parameters(a(i, j), target, b);
  return OperatorMatrix(target, out);
}

SymbolMatrix bind_parameters(const SymbolMatrix& a, const ParameterBinding& b) {
  VarListPtr target = unbind_vars(a.vars(), b);
  PolyMatrix out(a.rows(), a.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j) out(i, j) = bind_parameters(a(i, j), target, b);
  return SymbolMatrix(target, out);
}

}  // namespace cxkit
