#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cxkit/check.hpp"
#include "cxkit/complexes.hpp"

namespace cxkit {

/// Ranks k_0..k_q of a truncated complex. Blocks are laid out in display
/// order: degree q occupies the top-left block and degree 0 the bottom-right,
/// so the degree-q operator is the lower-right r_q x r_q minor of any longer one.
class BlockPartition {
 public:
  BlockPartition() = default;
  explicit BlockPartition(std::vector<Index> ranks);

  int degree() const { return static_cast<int>(ranks_.size()) - 1; }
  const std::vector<Index>& ranks() const { return ranks_; }
  Index rank(int deg) const { return ranks_.at(static_cast<std::size_t>(deg)); }
  /// r_q = sum of all ranks.
  Index size() const { return size_; }
  /// First row of the block of degree `deg`.
  Index offset(int deg) const;
  /// Display position (0 = top) of degree `deg`.
  int position(int deg) const { return degree() - deg; }
  int degree_at(int position) const { return degree() - position; }
  /// Degree owning a given row.
  int degree_of_row(Index row) const;

  /// B_deg as a 0/1 diagonal projection.
  OperatorMatrix projection(const VarListPtr& vars, int deg) const;

  friend bool operator==(const BlockPartition& a, const BlockPartition& b) { return a.ranks_ == b.ranks_; }

 private:
  std::vector<Index> ranks_;
  Index size_ = 0;
};

struct BlockOperator {
  BlockPartition partition;
  OperatorMatrix body;
  std::string construction;
  std::map<std::string, std::string> meta;

  int degree() const { return partition.degree(); }
  /// Block with rows of degree `row_deg` and columns of degree `col_deg`.
  OperatorMatrix block(int row_deg, int col_deg) const;
  /// All blocks with |position difference| >= 2 vanish.
  bool is_block_tridiagonal() const;
  BlockOperator with_body(OperatorMatrix b, std::string construction) const;
};

/// Partition k_0..k_q of the complex.
BlockPartition partition_of(const Complex& c, int q);

/// B_i P B_j with i, j given as degrees.
BlockOperator block_inject(const BlockPartition& part, int row_deg, int col_deg, const OperatorMatrix& p);

/// Multiplies every operator of the complex by the constant s (e.g. s = i).
Complex scale_complex(const Complex& c, const GaussianRational& s, std::string name = "");

/// Ring that holds the complex, the weights, the given polynomials and (if asked) dt.
VarListPtr block_ring(const Complex& c, const MuSet* mu, const std::vector<Poly>& extra, bool time);

/// Variant 0: sum_j B_{j+1} mu_j^(0) A_j B_j + B_j A_j^* B_{j+1}.
/// Variant 1: sum_j B_{j+1} A_j mu_{j+1}^(1) B_j + B_j A_j^* B_{j+1}.
BlockOperator maxwell(const Complex& c, int q, const MuSet& mu, int variant = 0);
/// Unweighted M_q(A) = sum_j B_{j+1} A_j B_j + B_j A_j^* B_{j+1}.
BlockOperator maxwell(const Complex& c, int q);
/// maxwell(...) + sum_j B_j b_j dt B_j, with b = (b_0, ..., b_q).
BlockOperator maxwell_time(const Complex& c, int q, const MuSet& mu, const std::vector<Poly>& b, int variant = 0);

/// sum_j B_j D_{j,mu} B_j + a M_q(A), where D_{j,mu} = Delta_{j,mu} + lowers[j]
/// (missing or empty lower parts count as zero).
BlockOperator stokes(const Complex& c, int q, const MuSet& mu, const std::vector<OperatorMatrix>& lowers, int a);

enum class TimeKind { parabolic, hyperbolic };

/// Diagonal blocks beta_j (dt^order + D_{j,mu}) plus a M_q(A).
BlockOperator stokes_time_weighted(const Complex& c, int q, const MuSet& mu, const std::vector<OperatorMatrix>& lowers,
                                   int a, const std::vector<Poly>& beta, int time_order);
/// Parabolic: beta_j = b_j^2 and dt. Hyperbolic: beta_j = b_j and dt^2.
BlockOperator stokes_time(const Complex& c, int q, const MuSet& mu, const std::vector<OperatorMatrix>& lowers, int a,
                          const std::vector<Poly>& b, TimeKind kind);

/// Adds sum_j B_j b_j dt^order B_j to an existing block operator.
BlockOperator add_time_diagonal(const BlockOperator& op, const std::vector<Poly>& b, int order = 1);

/// A_j mu_{j+1}^(1) = mu_j^(0) A_j for 0 <= j < q.
CheckReport check_commute_mu(const Complex& c, int q, const MuSet& mu);

/// M^(1) M^(0) = B_q A_{q-1} mu_q^(1) A_{q-1}^* B_q + sum_{j<q} B_j Delta_{j,mu} B_j and
/// S_{q,1}(A, Delta_mu) = M^(1) M^(0) + B_q A_q^* mu_q^(0) A_q B_q + M_q(A).
CheckReport verify_factorization(const Complex& c, int q, const MuSet& mu);

/// M^(1)(A, -i b dt) M^(0)(A, i b dt)
///   = B_q (b_q^2 dt^2 + A_{q-1} mu_q^(1) A_{q-1}^*) B_q + sum_{j<q} B_j (b_j^2 dt^2 + Delta_{j,mu}) B_j.
/// The identity needs b constant across degrees; otherwise the off-diagonal
/// cross terms are reported as residuals. The note "scaled_laplacian_form"
/// records whether the variant with b_j^2 also multiplying Delta_{j,mu} holds.
CheckReport verify_wave_factorization(const Complex& c, int q, const MuSet& mu, const std::vector<Poly>& b);

/// Monomial matrix P (one unit per row and column) with P X P^H = Y, found by backtracking.
std::optional<ExactMatrix> find_monomial_similarity(const OperatorMatrix& x, const OperatorMatrix& y,
                                                    const std::vector<GaussianRational>& units = {});

/// P X P^H for an exact P.
OperatorMatrix conjugate_by(const ExactMatrix& p, const OperatorMatrix& x);

}  // namespace cxkit
