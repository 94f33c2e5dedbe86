#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cxkit/complexes.hpp"

namespace cxkit {

/// Element of P^k, one polynomial per position.
struct ModuleElement {
  std::vector<Poly> comps;

  std::size_t rank() const { return comps.size(); }
  bool is_zero() const;
  /// Position of the leading term: the smallest nonzero position (position over term).
  std::optional<std::size_t> lead_position() const;
  /// Leading term of comps[lead_position()]. Requires a nonzero element.
  const Term& lead_term() const;
  friend bool operator==(const ModuleElement& a, const ModuleElement& b) { return a.comps == b.comps; }
};

/// Counters of one Buchberger run.
struct SyzygyTrace {
  std::size_t spairs = 0;
  std::size_t reductions = 0;
  std::vector<std::size_t> basis_sizes;
};

struct GroebnerBasis {
  std::vector<ModuleElement> elements;
  SyzygyTrace trace;

  /// Remainder of f under full reduction.
  ModuleElement reduce(const ModuleElement& f) const;
  bool contains(const ModuleElement& f) const { return reduce(f).is_zero(); }
};

/// Reduced Groebner basis of the submodule spanned by gens (POT order, grlex on terms).
/// Throws std::invalid_argument on an empty list or mixed ranks.
GroebnerBasis groebner_module(const std::vector<ModuleElement>& gens);

struct SyzygyBasis {
  /// Relations g with sum_i g_i * input_i = 0.
  std::vector<ModuleElement> generators;
  GroebnerBasis groebner;
};

/// Syzygies of the given elements, read off a Groebner basis of [a_i | e_i].
SyzygyBasis syzygies(const std::vector<ModuleElement>& elems);

std::vector<ModuleElement> rows_of(const OperatorMatrix& a);
OperatorMatrix from_rows(const VarListPtr& vars, const std::vector<ModuleElement>& rows, Index cols);

/// B with B A = 0 whose rows generate every left relation among the rows of A.
/// Rows that lie in the module of the other rows are dropped.
/// Works in the d-variables directly; A must have constant coefficients.
OperatorMatrix compatibility_operator(const OperatorMatrix& a, SyzygyTrace* trace = nullptr);

/// Same row module over P: each row of one reduces to zero against the other.
bool module_equivalent(const OperatorMatrix& b1, const OperatorMatrix& b2);

class StepBudgetExhausted : public std::runtime_error {
 public:
  StepBudgetExhausted(const std::string& what, Complex partial) : std::runtime_error(what), partial_(std::move(partial)) {}
  const Complex& partial() const { return partial_; }

 private:
  Complex partial_;
};

/// A_0 = A, A_{j+1} = compatibility_operator(A_j) until the syzygies vanish.
Complex extend_to_complex(const OperatorMatrix& a, int max_steps, std::string name = "compatibility",
                          std::vector<SyzygyTrace>* traces = nullptr);

}  // namespace cxkit
