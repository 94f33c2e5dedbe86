#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cxkit/blockops.hpp"

namespace cxkit {

enum class Verdict { certified_symbolic, numeric_pass, inconclusive, fail };
std::string verdict_name(Verdict v);

/// Sample budget, seed and thresholds of the unit-sphere search.
struct SearchOptions {
  std::uint64_t seed = 20240611;
  std::size_t budget = 20000;
  int polish_starts = 16;
  double pass_threshold = 1e-9;
  double fail_threshold = 1e-12;
  /// 0 means std::thread::hardware_concurrency, capped by CXKIT_THREADS.
  unsigned threads = 0;
  /// Run the numeric search even when a symbolic certificate exists.
  bool numeric_always = false;
  /// Values of the parameters occurring in the symbol.
  ParameterBinding params;
};

struct EllipticityReport {
  std::string check;
  Verdict verdict = Verdict::fail;
  std::optional<Poly> determinant;
  /// e.g. "-1*(|z|^2)^3" or "(|z|^2)^1*I_3".
  std::string certified_form;
  std::optional<double> min_value;
  std::vector<double> argmin;
  std::vector<double> witness;
  std::uint64_t seed = 0;
  std::size_t budget = 0;
  double pass_threshold = 0;
  double fail_threshold = 0;
  std::map<std::string, std::string> notes;

  bool passed() const { return verdict == Verdict::certified_symbolic || verdict == Verdict::numeric_pass; }
};

/// Result of minimizing a nonnegative function over the unit sphere in R^n.
struct SphereMinimum {
  double value = 0;
  std::vector<double> point;
};
/// Quasi-random seeding (Halton, normal-mapped, seeded shift), then coordinate
/// descent from the best starts. Deterministic for a fixed seed and budget
/// whatever the thread count.
SphereMinimum minimize_on_sphere(int n, const std::function<double(std::span<const double>)>& f,
                                 const SearchOptions& opt);

/// Determinant equal to gamma * (z_1^2 + ... + z_n^2)^k for a nonzero constant gamma.
std::optional<GaussianRational> power_of_norm_factor(const Poly& det);
/// Matrix equal to gamma * (|z|^2)^k * I.
std::optional<std::pair<GaussianRational, int>> scalar_norm_power(const SymbolMatrix& m);

/// Invertibility of sigma(A) on the unit sphere.
EllipticityReport petrovskii_check(const OperatorMatrix& a, const SearchOptions& opt = {});
/// The same test for a symbol matrix (already principal).
EllipticityReport symbol_invertibility_check(const SymbolMatrix& s, const SearchOptions& opt = {},
                                             std::string name = "petrovskii");
/// Injectivity of sigma(A) through det(sigma^H sigma).
EllipticityReport injectivity_check(const OperatorMatrix& a, const SearchOptions& opt = {});
/// Smallest eigenvalue of (sigma + sigma^H) / 2 on the unit sphere.
EllipticityReport strong_ellipticity_check(const OperatorMatrix& a, const SearchOptions& opt = {});

/// delta_{q,mu} = sigma_q^* sigma(mu_q^(0)) sigma_q + sigma_{q-1} sigma(mu_q^(1)) sigma_{q-1}^*.
SymbolMatrix symbol_laplacian(const Complex& c, int q, const MuSet& mu);
/// Certifies delta_q = gamma |z|^{2k} I symbolically, numeric search otherwise.
EllipticityReport complex_exactness_check(const Complex& c, int q, const MuSet& mu, const SearchOptions& opt = {});

/// One equation s[si] - t[ti] = rhs (0-based display positions).
struct WeightEquation {
  int si = 0;
  int ti = 0;
  int rhs = 0;
  std::string label;
};

struct WeightPlan {
  std::string scheme;
  std::vector<int> s;
  std::vector<int> t;
  int shift = 0;
  std::vector<WeightEquation> equations;

  /// Equations that fail, as labels; empty means the plan is exact.
  std::vector<std::string> violations() const;
  bool nonnegative() const;
};

/// Chain system s_p - t_{p+1} = upper[p], s_{p+1} - t_p = lower[p], seeded t_1 = t_2 = 0.
WeightPlan solve_chain_weights(const std::vector<int>& upper, const std::vector<int>& lower, std::string scheme);

/// Plans for M^(0) (first) and M^(1) (second) at q = N. Block (p, p+1) of
/// M^(i) holds mu_j^(0) A_j or A_j mu_{j+1}^(1) with j = N - p (1-based p).
std::pair<WeightPlan, WeightPlan> dn_weights_maxwell(const Complex& c, const MuSet& mu);
/// Plan for S_{q,1}: s_1 - t_1 = 2(m_q + m~_q), s_j - t_{j+1} = s_{j+1} - t_j = m_{q-j}.
WeightPlan dn_weights_stokes(const Complex& c, int q, const MuSet& mu);

/// Block (p, r) keeps the symbol terms of degree exactly s_p - t_r.
SymbolMatrix dn_symbol(const BlockOperator& a, const WeightPlan& plan);
/// Entries whose order exceeds s_p - t_r, as "row,col:order>bound" strings.
std::vector<std::string> dn_order_violations(const BlockOperator& a, const WeightPlan& plan);
EllipticityReport dn_check(const BlockOperator& a, const WeightPlan& plan, const SearchOptions& opt = {});

}  // namespace cxkit
