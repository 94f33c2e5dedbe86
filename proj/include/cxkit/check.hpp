#pragma once

#include <map>
#include <string>
#include <vector>

#include "cxkit/poly_matrix.hpp"

namespace cxkit {

/// One nonzero entry left over by an identity that should vanish.
struct Residual {
  std::string where;
  Index row = 0;
  Index col = 0;
  Poly value;
};

/// Outcome of an exact identity check. Failure is a value, not an exception.
struct CheckReport {
  std::string name;
  std::string identity;
  bool pass = true;
  std::vector<Residual> residuals;
  std::map<std::string, std::string> notes;

  void add_residuals(const std::string& where, const PolyMatrix& diff, std::size_t limit = 16) {
    for (Index i = 0; i < diff.rows(); ++i)
      for (Index j = 0; j < diff.cols(); ++j)
        if (!diff(i, j).is_zero()) {
          pass = false;
          if (residuals.size() < limit) residuals.push_back({where, i, j, diff(i, j)});
        }
  }
  void merge(const CheckReport& o) {
    pass = pass && o.pass;
    residuals.insert(residuals.end(), o.residuals.begin(), o.residuals.end());
    for (const auto& [k, v] : o.notes) notes[k] = v;
  }
  void fail(const std::string& why) {
    pass = false;
    notes["failure"] = why;
  }
};

}  // namespace cxkit
