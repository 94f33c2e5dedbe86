#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "cxkit/gaussian_rational.hpp"

namespace cxkit {

inline constexpr std::size_t kMaxVars = 16;

enum class VarKind : std::uint8_t { spatial, time, parameter };

/// Ordered list of named variables. Lists are interned, so two lists with
/// the same names and kinds are the same object.
class VarList {
 public:
  VarList(std::vector<std::string> names, std::vector<VarKind> kinds);

  std::size_t size() const { return names_.size(); }
  const std::string& name(std::size_t i) const { return names_[i]; }
  VarKind kind(std::size_t i) const { return kinds_[i]; }
  const std::vector<std::string>& names() const { return names_; }
  const std::vector<VarKind>& kinds() const { return kinds_; }
  std::optional<std::size_t> index_of(const std::string& name) const;

  int spatial_count() const;
  std::optional<std::size_t> time_index() const;
  std::vector<std::string> parameters() const;

  bool operator==(const VarList& o) const { return names_ == o.names_ && kinds_ == o.kinds_; }

 private:
  std::vector<std::string> names_;
  std::vector<VarKind> kinds_;
};

using VarListPtr = std::shared_ptr<const VarList>;

VarListPtr make_vars(std::vector<std::string> names, std::vector<VarKind> kinds);
/// d1..dn, then dt if `time`, then the named parameters.
VarListPtr operator_vars(int n, bool time = false, const std::vector<std::string>& params = {});
/// z1..zn, then tau if `time`, then the named parameters.
VarListPtr symbol_vars(int n, bool time = false, const std::vector<std::string>& params = {});
/// Symbol ring matching an operator ring (d_j -> z_j, dt -> tau, parameters kept).
VarListPtr symbol_vars_for(const VarListPtr& op_vars);
/// Operator ring matching a symbol ring.
VarListPtr operator_vars_for(const VarListPtr& sym_vars);
/// Smallest ring containing both, spatial first, then time, then parameters in order of appearance.
VarListPtr merge_vars(const VarListPtr& a, const VarListPtr& b);

class VarListMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Monomial {
  std::array<std::uint8_t, kMaxVars> exp{};
  std::uint16_t deg = 0;

  static Monomial unit(std::size_t var, unsigned power = 1);

  bool divides(const Monomial& o) const;
  Monomial operator*(const Monomial& o) const;
  /// Requires divides(o) to hold in the sense `*this | o`; returns o / *this.
  Monomial quotient_of(const Monomial& o) const;
  Monomial lcm(const Monomial& o) const;
  int weighted_degree(std::span<const int> w) const;

  friend bool operator==(const Monomial& a, const Monomial& b) { return a.exp == b.exp; }
  friend bool operator!=(const Monomial& a, const Monomial& b) { return !(a == b); }
};

/// Graded lexicographic comparison: negative, zero or positive.
int grlex_compare(const Monomial& a, const Monomial& b);

struct Term {
  Monomial mono;
  GaussianRational coeff;
};

/// Sparse multivariate polynomial over Q(i). Terms are stored in strictly
/// decreasing graded lexicographic order with nonzero coefficients.
/// A polynomial without a ring is a constant; it combines with any ring.
class Poly {
 public:
  Poly() = default;
  Poly(int c) : Poly(GaussianRational(c)) {}  // NOLINT(implicit)
  Poly(long c) : Poly(GaussianRational(c)) {}  // NOLINT(implicit)
  Poly(const GaussianRational& c);            // NOLINT(implicit)

  static Poly constant(VarListPtr vars, const GaussianRational& c);
  static Poly var(VarListPtr vars, std::size_t index);
  static Poly var(VarListPtr vars, const std::string& name);
  static Poly term(VarListPtr vars, const Monomial& m, const GaussianRational& c);
  static Poly from_terms(VarListPtr vars, std::vector<Term> terms);

  const VarListPtr& vars() const { return vars_; }
  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].mono.deg == 0); }
  GaussianRational constant_value() const;
  GaussianRational coefficient(const Monomial& m) const;
  const Term& leading_term() const;

  /// Total degree, -1 for zero.
  int degree() const;
  /// Maximum weighted degree, -1 for zero.
  int weighted_degree(std::span<const int> w) const;
  Poly weighted_part(std::span<const int> w, int d) const;
  bool is_weighted_homogeneous(std::span<const int> w) const;
  bool is_homogeneous() const;
  /// Part of total degree d.
  Poly homogeneous_part(int d) const;
  bool depends_on(std::size_t var) const;

  Poly conj() const;
  Poly map_terms(const std::function<GaussianRational(const Term&)>& f) const;
  /// Re-indexes into `target` by variable name; throws if a used variable is absent.
  Poly with_vars(const VarListPtr& target) const;
  /// Positional re-ringing into a list of the same size.
  Poly rename(const VarListPtr& target) const;
  Poly substitute(std::size_t var, const GaussianRational& value) const;
  Poly substitute(std::size_t var, const Poly& value) const;

  std::complex<double> evaluate(std::span<const std::complex<double>> x) const;
  std::complex<double> evaluate(std::span<const double> x) const;
  GaussianRational evaluate(std::span<const GaussianRational> x) const;

  std::string str() const;
  std::size_t hash() const;

  Poly operator-() const;
  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  Poly& operator*=(const Poly& o);
  Poly& operator*=(const GaussianRational& c);

  friend Poly operator+(const Poly& a, const Poly& b);
  friend Poly operator-(const Poly& a, const Poly& b);
  friend Poly operator*(const Poly& a, const Poly& b);
  friend Poly operator*(const Poly& a, const GaussianRational& c);
  friend Poly operator*(const GaussianRational& c, const Poly& a) { return a * c; }
  friend bool operator==(const Poly& a, const Poly& b);
  friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

 private:
  Poly(VarListPtr vars, std::vector<Term> sorted_terms) : vars_(std::move(vars)), terms_(std::move(sorted_terms)) {}
  static VarListPtr unify(const Poly& a, const Poly& b);
  friend Poly add_scaled(const Poly& a, const Poly& b, const GaussianRational& c, const Monomial* shift);

  VarListPtr vars_;
  std::vector<Term> terms_;
};

/// a + c * m * b, where m is an optional monomial shift.
Poly add_scaled(const Poly& a, const Poly& b, const GaussianRational& c, const Monomial* shift = nullptr);

Poly pow(const Poly& p, unsigned k);
/// Quotient if q divides p exactly, otherwise nullopt. Throws on q == 0.
std::optional<Poly> exact_divide(const Poly& p, const Poly& q);
/// Quotient; throws std::domain_error when q does not divide p.
Poly divide_exact(const Poly& p, const Poly& q);
/// Sum of squares of the spatial variables of `vars`.
Poly squared_norm(const VarListPtr& vars);

std::ostream& operator<<(std::ostream& os, const Poly& p);

}  // namespace cxkit
