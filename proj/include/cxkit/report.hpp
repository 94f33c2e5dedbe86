#pragma once

#include <string>

#include "json.hpp"

#include "cxkit/symbolcalc.hpp"
#include "cxkit/syzygy.hpp"

namespace cxkit {

/// Keys sort lexicographically, so dump() is byte-stable for equal content.
using Json = nlohmann::json;

inline constexpr const char* kReportSchema = "cxkit-report/1";

Json to_json(const Poly& p);
/// {"rows", "cols", "vars", "entries": [[...]]}; entries are Poly::str() text.
Json to_json(const PolyMatrix& m, const VarListPtr& vars);
Json to_json(const OperatorMatrix& m);
Json to_json(const SymbolMatrix& m);
Json to_json(const RationalSymbolMatrix& m);
Json to_json(const CheckReport& r);
Json to_json(const EllipticityReport& r);
Json to_json(const WeightPlan& p);
Json to_json(const SyzygyTrace& t);
Json to_json(const Complex& c);

/// Indented dump with a trailing newline.
std::string dump(const Json& j);

/// "  residual where(row,col) = value" lines, at most `limit`.
std::string residual_lines(const CheckReport& r, std::size_t limit = 4);

}  // namespace cxkit
