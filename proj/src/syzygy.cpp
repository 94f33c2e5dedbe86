#include "cxkit/syzygy.hpp"

#include <algorithm>
#include <deque>

namespace cxkit {

bool ModuleElement::is_zero() const {
  return std::all_of(comps.begin(), comps.end(), [](const Poly& p) { return p.is_zero(); });
}

std::optional<std::size_t> ModuleElement::lead_position() const {
  for (std::size_t i = 0; i < comps.size(); ++i)
    if (!comps[i].is_zero()) return i;
  return std::nullopt;
}

const Term& ModuleElement::lead_term() const {
  auto p = lead_position();
  if (!p) throw std::logic_error("leading term of zero module element");
  return comps[*p].leading_term();
}

namespace {

// f + c * m * g, componentwise
void add_multiple(ModuleElement& f, const ModuleElement& g, const GaussianRational& c, const Monomial& m) {
  for (std::size_t i = 0; i < f.comps.size(); ++i)
    if (!g.comps[i].is_zero()) f.comps[i] = add_scaled(f.comps[i], g.comps[i], c, &m);
}

const ModuleElement* find_reducer(const std::vector<ModuleElement>& basis, std::size_t pos, const Monomial& m,
                                  const ModuleElement* skip = nullptr) {
  for (const auto& g : basis) {
    if (&g == skip) continue;
    if (g.lead_position() == pos && g.lead_term().mono.divides(m)) return &g;
  }
  return nullptr;
}

ModuleElement full_reduce(ModuleElement f, const std::vector<ModuleElement>& basis, std::size_t* count,
                          const ModuleElement* skip = nullptr) {
  ModuleElement rem{std::vector<Poly>(f.comps.size())};
  for (std::size_t i = 0; i < f.comps.size(); ++i) rem.comps[i] = Poly::constant(f.comps[i].vars(), GaussianRational(0));
  while (auto pos = f.lead_position()) {
    Term t = f.comps[*pos].leading_term();
    if (const ModuleElement* g = find_reducer(basis, *pos, t.mono, skip)) {
      const Term& lg = g->lead_term();
      add_multiple(f, *g, -(t.coeff / lg.coeff), lg.mono.quotient_of(t.mono));
      if (count) ++*count;
    } else {
      Poly lt = Poly::term(f.comps[*pos].vars(), t.mono, t.coeff);
      rem.comps[*pos] += lt;
      f.comps[*pos] -= lt;
    }
  }
  return rem;
}

void make_monic(ModuleElement& f) {
  if (f.is_zero()) return;
  GaussianRational inv = GaussianRational(1) / f.lead_term().coeff;
  for (auto& p : f.comps) p *= inv;
}

std::size_t check_rank(const std::vector<ModuleElement>& gens) {
  if (gens.empty()) throw std::invalid_argument("groebner_module: no generators");
  const std::size_t r = gens.front().rank();
  for (const auto& g : gens)
    if (g.rank() != r) throw std::invalid_argument("groebner_module: generators of different rank");
  return r;
}

// Drops elements whose leading term another one divides, then reduces tails.
std::vector<ModuleElement> reduce_basis(std::vector<ModuleElement> g, std::size_t* count) {
  g.erase(std::remove_if(g.begin(), g.end(), [](const ModuleElement& e) { return e.is_zero(); }), g.end());
  std::vector<ModuleElement> minimal;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto pos = *g[i].lead_position();
    const Monomial& m = g[i].lead_term().mono;
    bool redundant = false;
    for (std::size_t j = 0; j < g.size() && !redundant; ++j) {
      if (i == j || g[j].lead_position() != pos) continue;
      const Monomial& mj = g[j].lead_term().mono;
      // equal leading monomials: keep the first
      if (mj.divides(m) && (mj != m || j < i)) redundant = true;
    }
    if (!redundant) minimal.push_back(g[i]);
  }
  for (std::size_t i = 0; i < minimal.size(); ++i) {
    // leading term stays: reduce with the others only
    minimal[i] = full_reduce(minimal[i], minimal, count, &minimal[i]);
    make_monic(minimal[i]);
  }
  std::sort(minimal.begin(), minimal.end(), [](const ModuleElement& a, const ModuleElement& b) {
    auto pa = *a.lead_position(), pb = *b.lead_position();
    if (pa != pb) return pa < pb;
    return grlex_compare(a.lead_term().mono, b.lead_term().mono) < 0;
  });
  return minimal;
}

}  // namespace

ModuleElement GroebnerBasis::reduce(const ModuleElement& f) const { return full_reduce(f, elements, nullptr); }

GroebnerBasis groebner_module(const std::vector<ModuleElement>& gens) {
  check_rank(gens);
  GroebnerBasis out;
  SyzygyTrace& tr = out.trace;
  std::vector<ModuleElement> g;
  for (const auto& x : gens)
    if (!x.is_zero()) {
      g.push_back(x);
      make_monic(g.back());
    }
  struct Pair {
    std::size_t i, j;
  };
  std::deque<Pair> pairs;
  auto add_pairs = [&](std::size_t k) {
    for (std::size_t i = 0; i < k; ++i)
      if (g[i].lead_position() == g[k].lead_position()) pairs.push_back({i, k});
  };
  for (std::size_t k = 0; k < g.size(); ++k) add_pairs(k);
  tr.basis_sizes.push_back(g.size());

  while (!pairs.empty()) {
    // smallest lcm degree first
    auto best = std::min_element(pairs.begin(), pairs.end(), [&](const Pair& a, const Pair& b) {
      auto la = g[a.i].lead_term().mono.lcm(g[a.j].lead_term().mono);
      auto lb = g[b.i].lead_term().mono.lcm(g[b.j].lead_term().mono);
      return grlex_compare(la, lb) < 0;
    });
    Pair p = *best;
    pairs.erase(best);
    ++tr.spairs;
    const Term& ti = g[p.i].lead_term();
    const Term& tj = g[p.j].lead_term();
    Monomial l = ti.mono.lcm(tj.mono);
    ModuleElement s{std::vector<Poly>(g[p.i].rank())};
    for (std::size_t c = 0; c < s.comps.size(); ++c) s.comps[c] = Poly::constant(g[p.i].comps[c].vars(), GaussianRational(0));
    add_multiple(s, g[p.i], GaussianRational(1) / ti.coeff, ti.mono.quotient_of(l));
    add_multiple(s, g[p.j], -(GaussianRational(1) / tj.coeff), tj.mono.quotient_of(l));
    ModuleElement r = full_reduce(s, g, &tr.reductions);
    if (r.is_zero()) continue;
    make_monic(r);
    g.push_back(r);
    add_pairs(g.size() - 1);
    tr.basis_sizes.push_back(g.size());
  }
  out.elements = reduce_basis(g, &tr.reductions);
  tr.basis_sizes.push_back(out.elements.size());
  return out;
}

SyzygyBasis syzygies(const std::vector<ModuleElement>& elems) {
  const std::size_t l = check_rank(elems), m = elems.size();
  VarListPtr v;
  for (const auto& e : elems)
    for (const auto& p : e.comps)
      if (p.vars()) v = v ? merge_vars(v, p.vars()) : p.vars();
  std::vector<ModuleElement> aug;
  for (std::size_t i = 0; i < m; ++i) {
    ModuleElement x{std::vector<Poly>(l + m)};
    for (std::size_t c = 0; c < l; ++c) x.comps[c] = elems[i].comps[c].with_vars(v);
    for (std::size_t c = 0; c < m; ++c) x.comps[l + c] = Poly::constant(v, GaussianRational(c == i ? 1 : 0));
    aug.push_back(std::move(x));
  }
  SyzygyBasis out;
  out.groebner = groebner_module(aug);
  // under POT with the a-block first, elements led in the e-block have zero a-part
  std::vector<ModuleElement> syz;
  for (const auto& g : out.groebner.elements)
    if (*g.lead_position() >= l) syz.push_back(ModuleElement{std::vector<Poly>(g.comps.begin() + l, g.comps.end())});
  out.generators = reduce_basis(syz, &out.groebner.trace.reductions);
  return out;
}

std::vector<ModuleElement> rows_of(const OperatorMatrix& a) {
  std::vector<ModuleElement> rows;
  for (Index i = 0; i < a.rows(); ++i) {
    ModuleElement r;
    for (Index j = 0; j < a.cols(); ++j) r.comps.push_back(a(i, j));
    rows.push_back(std::move(r));
  }
  return rows;
}

OperatorMatrix from_rows(const VarListPtr& vars, const std::vector<ModuleElement>& rows, Index cols) {
  PolyMatrix m = zero_matrix(vars, static_cast<Index>(rows.size()), cols);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (Index j = 0; j < cols; ++j) m(static_cast<Index>(i), j) = rows[i].comps.at(static_cast<std::size_t>(j)).with_vars(vars);
  return OperatorMatrix(vars, m);
}

OperatorMatrix compatibility_operator(const OperatorMatrix& a, SyzygyTrace* trace) {
  if (a.vars()) {
    for (Index i = 0; i < a.rows(); ++i)
      for (Index j = 0; j < a.cols(); ++j)
        for (const auto& t : a(i, j).terms())
          for (std::size_t k = 0; k < a.vars()->size(); ++k)
            if (t.mono.exp[k] && a.vars()->kind(k) == VarKind::parameter)
              throw std::invalid_argument("compatibility_operator: coefficients must be constant");
  }
  if (a.rows() == 0) return OperatorMatrix::zero(a.vars(), 0, 0);
  if (a.cols() == 0) return OperatorMatrix::identity(a.vars(), a.rows());
  SyzygyBasis s = syzygies(rows_of(a));
  // drop generators that lie in the module of the remaining ones
  std::vector<ModuleElement> gens = s.generators;
  for (std::size_t i = gens.size(); i-- > 0 && gens.size() > 1;) {
    std::vector<ModuleElement> rest;
    for (std::size_t j = 0; j < gens.size(); ++j)
      if (j != i) rest.push_back(gens[j]);
    GroebnerBasis g = groebner_module(rest);
    s.groebner.trace.spairs += g.trace.spairs;
    s.groebner.trace.reductions += g.trace.reductions;
    if (g.contains(gens[i])) gens = std::move(rest);
  }
  if (trace) *trace = s.groebner.trace;
  return from_rows(a.vars(), gens, a.rows());
}

bool module_equivalent(const OperatorMatrix& b1, const OperatorMatrix& b2) {
  if (b1.cols() != b2.cols()) throw std::invalid_argument("module_equivalent: column counts differ");
  auto r1 = rows_of(b1), r2 = rows_of(b2);
  auto nonzero = [](const std::vector<ModuleElement>& r) {
    return std::any_of(r.begin(), r.end(), [](const ModuleElement& e) { return !e.is_zero(); });
  };
  if (!nonzero(r1) || !nonzero(r2)) return nonzero(r1) == nonzero(r2);
  auto inside = [](const std::vector<ModuleElement>& rows, const std::vector<ModuleElement>& gens) {
    GroebnerBasis g = groebner_module(gens);
    return std::all_of(rows.begin(), rows.end(), [&](const ModuleElement& e) { return g.contains(e); });
  };
  return inside(r1, r2) && inside(r2, r1);
}

Complex extend_to_complex(const OperatorMatrix& a, int max_steps, std::string name, std::vector<SyzygyTrace>* traces) {
  std::vector<OperatorMatrix> ops{a};
  for (int step = 0;; ++step) {
    SyzygyTrace tr;
    OperatorMatrix b = compatibility_operator(ops.back(), &tr);
    if (traces) traces->push_back(tr);
    if (b.rows() == 0) break;
    if (step + 1 >= max_steps)
      throw StepBudgetExhausted("extend_to_complex: step budget " + std::to_string(max_steps) + " exhausted",
                                Complex(name, ops, a.cols()));
    ops.push_back(b);
  }
  return Complex(std::move(name), ops, a.cols());
}

}  // namespace cxkit
