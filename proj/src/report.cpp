#include "cxkit/report.hpp"

#include <cmath>
#include <sstream>

namespace cxkit {

namespace {

Json names_of(const VarListPtr& v) {
  Json out = Json::array();
  if (v)
    for (const auto& n : v->names()) out.push_back(n);
  return out;
}

// NaN and infinities are not JSON numbers
Json number(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

}  // namespace

Json to_json(const Poly& p) { return p.str(); }

Json to_json(const PolyMatrix& m, const VarListPtr& vars) {
  Json rows = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    Json r = Json::array();
    for (Index j = 0; j < m.cols(); ++j) r.push_back(m(i, j).str());
    rows.push_back(std::move(r));
  }
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"vars", names_of(vars)}, {"entries", std::move(rows)}};
}

Json to_json(const OperatorMatrix& m) { return to_json(m.body(), m.vars()); }
Json to_json(const SymbolMatrix& m) { return to_json(m.body(), m.vars()); }

Json to_json(const RationalSymbolMatrix& m) {
  return {{"numerator", to_json(m.numerator())}, {"denominator", m.denominator().str()}};
}

Json to_json(const CheckReport& r) {
  Json res = Json::array();
  for (const auto& x : r.residuals)
    res.push_back({{"where", x.where}, {"row", x.row}, {"col", x.col}, {"value", x.value.str()}});
  return {{"name", r.name}, {"identity", r.identity}, {"pass", r.pass}, {"residuals", std::move(res)}, {"notes", r.notes}};
}

Json to_json(const EllipticityReport& r) {
  Json j = {{"check", r.check},
            {"verdict", verdict_name(r.verdict)},
            {"pass", r.passed()},
            {"certified_form", r.certified_form},
            {"seed", r.seed},
            {"budget", r.budget},
            {"pass_threshold", r.pass_threshold},
            {"fail_threshold", r.fail_threshold},
            {"notes", r.notes}};
  j["determinant"] = r.determinant ? Json(r.determinant->str()) : Json(nullptr);
  j["min_value"] = r.min_value ? number(*r.min_value) : Json(nullptr);
  Json a = Json::array(), w = Json::array();
  for (double x : r.argmin) a.push_back(number(x));
  for (double x : r.witness) w.push_back(number(x));
  j["argmin"] = std::move(a);
  j["witness"] = std::move(w);
  return j;
}

Json to_json(const WeightPlan& p) {
  Json eqs = Json::array();
  for (const auto& e : p.equations) eqs.push_back({{"label", e.label}, {"s", e.si}, {"t", e.ti}, {"rhs", e.rhs}});
  return {{"scheme", p.scheme},   {"s", p.s},
          {"t", p.t},             {"shift", p.shift},
          {"equations", eqs},     {"violations", p.violations()},
          {"nonnegative", p.nonnegative()}};
}

Json to_json(const SyzygyTrace& t) {
  return {{"spairs", t.spairs}, {"reductions", t.reductions}, {"basis_sizes", t.basis_sizes}};
}

Json to_json(const Complex& c) {
  Json ops = Json::array();
  for (int q = 0; q < c.length(); ++q) ops.push_back(to_json(c.op(q)));
  Json orders = Json::array();
  for (int q = 0; q < c.length(); ++q) orders.push_back(c.order(q));
  return {{"name", c.name()}, {"length", c.length()}, {"ranks", c.ranks()}, {"orders", orders}, {"operators", ops}};
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

std::string residual_lines(const CheckReport& r, std::size_t limit) {
  std::ostringstream os;
  for (std::size_t k = 0; k < r.residuals.size() && k < limit; ++k) {
    const auto& x = r.residuals[k];
    os << "    residual " << x.where << "(" << x.row << "," << x.col << ") = " << x.value.str() << "\n";
  }
  if (auto it = r.notes.find("failure"); it != r.notes.end()) os << "    " << it->second << "\n";
  return os.str();
}

}  // namespace cxkit
