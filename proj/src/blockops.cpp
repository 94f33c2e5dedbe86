#include "cxkit/blockops.hpp"

#include <functional>

namespace cxkit {

// --------------------------------------------------------- BlockPartition

BlockPartition::BlockPartition(std::vector<Index> ranks) : ranks_(std::move(ranks)) {
  if (ranks_.empty()) throw std::invalid_argument("BlockPartition: no blocks");
  for (Index k : ranks_) {
    if (k < 0) throw std::invalid_argument("BlockPartition: negative rank");
    size_ += k;
  }
}

Index BlockPartition::offset(int deg) const {
  if (deg < 0 || deg > degree()) throw std::out_of_range("BlockPartition: degree out of range");
  Index off = 0;
  for (int i = degree(); i > deg; --i) off += rank(i);
  return off;
}

int BlockPartition::degree_of_row(Index row) const {
  for (int d = degree(); d >= 0; --d)
    if (row < offset(d) + rank(d)) return d;
  throw std::out_of_range("BlockPartition: row out of range");
}

OperatorMatrix BlockPartition::projection(const VarListPtr& vars, int deg) const {
  OperatorMatrix id = OperatorMatrix::identity(vars, rank(deg));
  PolyMatrix m = zero_matrix(vars, size_, size_);
  m.block(offset(deg), offset(deg), rank(deg), rank(deg)) = id.body();
  return OperatorMatrix(vars, m);
}

OperatorMatrix BlockOperator::block(int row_deg, int col_deg) const {
  return body.block(partition.offset(row_deg), partition.offset(col_deg), partition.rank(row_deg),
                    partition.rank(col_deg));
}

bool BlockOperator::is_block_tridiagonal() const {
  for (int i = 0; i <= degree(); ++i)
    for (int j = 0; j <= degree(); ++j)
      if (std::abs(i - j) >= 2 && !block(i, j).is_zero()) return false;
  return true;
}

BlockOperator BlockOperator::with_body(OperatorMatrix b, std::string name) const {
  BlockOperator r = *this;
  r.body = std::move(b);
  r.construction = std::move(name);
  return r;
}

BlockPartition partition_of(const Complex& c, int q) {
  if (q < 0 || q > c.length()) throw std::out_of_range("partition: degree " + std::to_string(q) + " out of range");
  std::vector<Index> k;
  for (int j = 0; j <= q; ++j) k.push_back(c.rank(j));
  return BlockPartition(std::move(k));
}

namespace {

void put(PolyMatrix& body, const BlockPartition& p, int rd, int cd, const OperatorMatrix& blk) {
  if (blk.rows() != p.rank(rd) || blk.cols() != p.rank(cd))
    throw std::invalid_argument("block (" + std::to_string(rd) + "," + std::to_string(cd) + "): expected " +
                                std::to_string(p.rank(rd)) + "x" + std::to_string(p.rank(cd)) + ", got " +
                                std::to_string(blk.rows()) + "x" + std::to_string(blk.cols()));
  if (blk.rows() == 0 || blk.cols() == 0) return;
  auto dst = body.block(p.offset(rd), p.offset(cd), blk.rows(), blk.cols());
  dst = dst + blk.body();
}

VarListPtr merge_matrix_vars(VarListPtr v, const OperatorMatrix& m) {
  if (m.vars()) v = v ? merge_vars(v, m.vars()) : m.vars();
  return v;
}

// Complex, weights and lower parts moved into one ring.
struct Setup {
  Complex c;
  MuSet mu;
  std::vector<OperatorMatrix> lowers;
  VarListPtr vars;
  BlockPartition part;
};

Setup prepare(const Complex& c, int q, const MuSet* mu, const std::vector<OperatorMatrix>& lowers,
              const std::vector<Poly>& extra, bool time) {
  if (q < 0 || q > c.length()) throw std::out_of_range("degree " + std::to_string(q) + " out of range");
  if (mu) {
    if (auto e = mu->shape_error(c)) throw std::invalid_argument("weights: " + *e);
  }
  VarListPtr v = block_ring(c, mu, extra, time);
  for (const auto& l : lowers) v = merge_matrix_vars(v, l);
  Setup s{c.with_vars(v), mu ? mu->with_vars(v) : MuSet::identity(c.with_vars(v)), {}, v, partition_of(c, q)};
  for (const auto& l : lowers) s.lowers.push_back(l.rows() == 0 && l.cols() == 0 ? l : l.with_vars(v));
  return s;
}

OperatorMatrix lower_or_zero(const Setup& s, int j) {
  const Index k = s.c.rank(j);
  if (j < static_cast<int>(s.lowers.size()) && (s.lowers[j].rows() != 0 || s.lowers[j].cols() != 0))
    return s.lowers[j];
  return OperatorMatrix::zero(s.vars, k, k);
}

Poly in_ring(const Poly& p, const VarListPtr& v) { return p.vars() ? p.with_vars(v) : p; }

PolyMatrix unweighted_off_diagonal(const Setup& s, int q) {
  PolyMatrix body = zero_matrix(s.vars, s.part.size(), s.part.size());
  for (int j = 0; j < q; ++j) {
    OperatorMatrix a = s.c.op(j);
    put(body, s.part, j + 1, j, a);
    put(body, s.part, j, j + 1, formal_adjoint(a));
  }
  return body;
}

PolyMatrix maxwell_body(const Setup& s, int q, int variant) {
  if (variant != 0 && variant != 1) throw std::invalid_argument("maxwell: variant must be 0 or 1");
  PolyMatrix body = zero_matrix(s.vars, s.part.size(), s.part.size());
  for (int j = 0; j < q; ++j) {
    OperatorMatrix a = s.c.op(j);
    put(body, s.part, j + 1, j, variant == 0 ? s.mu.mu0(j) * a : a * s.mu.mu1(j + 1));
    put(body, s.part, j, j + 1, formal_adjoint(a));
  }
  return body;
}

Poly time_power(const VarListPtr& v, int order) { return pow(Poly::var(v, "dt"), static_cast<unsigned>(order)); }

void check_length(const std::vector<Poly>& b, int q, const char* what) {
  if (static_cast<int>(b.size()) != q + 1)
    throw std::invalid_argument(std::string(what) + ": expected " + std::to_string(q + 1) + " coefficients, got " +
                                std::to_string(b.size()));
}

std::string join(const std::vector<Poly>& b) {
  std::string s = "(";
  for (std::size_t i = 0; i < b.size(); ++i) s += (i ? ", " : "") + b[i].str();
  return s + ")";
}

}  // namespace

BlockOperator block_inject(const BlockPartition& part, int row_deg, int col_deg, const OperatorMatrix& p) {
  if (row_deg < 0 || row_deg > part.degree() || col_deg < 0 || col_deg > part.degree())
    throw std::out_of_range("block_inject: block out of range");
  PolyMatrix body = zero_matrix(p.vars(), part.size(), part.size());
  put(body, part, row_deg, col_deg, p);
  BlockOperator r{part, OperatorMatrix(p.vars(), body), "inject", {}};
  r.meta["block"] = std::to_string(row_deg) + "," + std::to_string(col_deg);
  return r;
}

Complex scale_complex(const Complex& c, const GaussianRational& s, std::string name) {
  std::vector<OperatorMatrix> ops;
  for (int j = 0; j < c.length(); ++j) ops.push_back(s * c.op(j));
  return Complex(name.empty() ? c.name() : std::move(name), std::move(ops), c.rank(0));
}

VarListPtr block_ring(const Complex& c, const MuSet* mu, const std::vector<Poly>& extra, bool time) {
  VarListPtr v = c.vars();
  if (time) v = merge_vars(v, operator_vars(c.spatial_dim(), true));
  if (mu)
    for (int q = 0; q <= mu->length(); ++q) {
      v = merge_matrix_vars(v, mu->mu0(q));
      v = merge_matrix_vars(v, mu->mu1(q));
    }
  for (const auto& p : extra)
    if (p.vars()) v = merge_vars(v, p.vars());
  return v;
}

BlockOperator maxwell(const Complex& c, int q, const MuSet& mu, int variant) {
  Setup s = prepare(c, q, &mu, {}, {}, false);
  BlockOperator r{s.part, OperatorMatrix(s.vars, maxwell_body(s, q, variant)), "maxwell", {}};
  r.meta["variant"] = std::to_string(variant);
  r.meta["q"] = std::to_string(q);
  return r;
}

BlockOperator maxwell(const Complex& c, int q) {
  Setup s = prepare(c, q, nullptr, {}, {}, false);
  BlockOperator r{s.part, OperatorMatrix(s.vars, unweighted_off_diagonal(s, q)), "maxwell.plain", {}};
  r.meta["q"] = std::to_string(q);
  return r;
}

BlockOperator maxwell_time(const Complex& c, int q, const MuSet& mu, const std::vector<Poly>& b, int variant) {
  check_length(b, q, "maxwell_time");
  BlockOperator r = add_time_diagonal(maxwell(c, q, mu, variant), b, 1);
  r.construction = "maxwell.time";
  return r;
}

BlockOperator add_time_diagonal(const BlockOperator& op, const std::vector<Poly>& b, int order) {
  check_length(b, op.degree(), "time diagonal");
  VarListPtr v = merge_vars(op.body.vars(), operator_vars(op.body.spatial_dim(), true));
  for (const auto& p : b)
    if (p.vars()) v = merge_vars(v, p.vars());
  PolyMatrix body = op.body.with_vars(v).body();
  const Poly t = time_power(v, order);
  for (int j = 0; j <= op.degree(); ++j)
    put(body, op.partition, j, j, (in_ring(b[j], v) * t) * OperatorMatrix::identity(v, op.partition.rank(j)));
  BlockOperator r = op.with_body(OperatorMatrix(v, body), op.construction + ".time");
  r.meta["b"] = join(b);
  r.meta["time_order"] = std::to_string(order);
  return r;
}

BlockOperator stokes(const Complex& c, int q, const MuSet& mu, const std::vector<OperatorMatrix>& lowers, int a) {
  return stokes_time_weighted(c, q, mu, lowers, a, {}, 0);
}

BlockOperator stokes_time_weighted(const Complex& c, int q, const MuSet& mu, const std::vector<OperatorMatrix>& lowers,
                                   int a, const std::vector<Poly>& beta, int time_order) {
  if (a != 0 && a != 1) throw std::invalid_argument("stokes: a must be 0 or 1");
  const bool timed = time_order > 0;
  if (timed) check_length(beta, q, "stokes_time");
  Setup s = prepare(c, q, &mu, lowers, beta, timed);
  PolyMatrix body = a ? unweighted_off_diagonal(s, q) : zero_matrix(s.vars, s.part.size(), s.part.size());
  for (int j = 0; j <= q; ++j) {
    OperatorMatrix d = helmholtz_lame(s.c, j, s.mu, lower_or_zero(s, j));
    if (timed) {
      Poly bj = in_ring(beta[j], s.vars);
      d = bj * (time_power(s.vars, time_order) * OperatorMatrix::identity(s.vars, d.rows()) + d);
    }
    put(body, s.part, j, j, d);
  }
  BlockOperator r{s.part, OperatorMatrix(s.vars, body), timed ? "stokes.time" : "stokes", {}};
  r.meta["q"] = std::to_string(q);
  r.meta["a"] = std::to_string(a);
  if (timed) {
    r.meta["beta"] = join(beta);
    r.meta["time_order"] = std::to_string(time_order);
  }
  return r;
}

BlockOperator stokes_time(const Complex& c, int q, const MuSet& mu, const std::vector<OperatorMatrix>& lowers, int a,
                          const std::vector<Poly>& b, TimeKind kind) {
  check_length(b, q, "stokes_time");
  if (kind == TimeKind::hyperbolic) {
    BlockOperator r = stokes_time_weighted(c, q, mu, lowers, a, b, 2);
    r.meta["kind"] = "hyperbolic";
    return r;
  }
  std::vector<Poly> sq;
  for (const auto& x : b) sq.push_back(x * x);
  BlockOperator r = stokes_time_weighted(c, q, mu, lowers, a, sq, 1);
  r.meta["kind"] = "parabolic";
  r.meta["b"] = join(b);
  return r;
}

CheckReport check_commute_mu(const Complex& c, int q, const MuSet& mu) {
  Setup s = prepare(c, q, &mu, {}, {}, false);
  CheckReport r;
  r.name = "commute.mu:" + c.name();
  r.identity = "A_j mu_{j+1}^(1) = mu_j^(0) A_j";
  for (int j = 0; j < q; ++j) {
    OperatorMatrix a = s.c.op(j);
    r.add_residuals("j=" + std::to_string(j), (a * s.mu.mu1(j + 1) - s.mu.mu0(j) * a).body());
  }
  return r;
}

CheckReport verify_factorization(const Complex& c, int q, const MuSet& mu) {
  Setup s = prepare(c, q, &mu, {}, {}, false);
  CheckReport r;
  r.name = "factor:" + c.name() + ":q=" + std::to_string(q);
  r.identity = "M1 M0 = B_q A_{q-1} mu_q^(1) A_{q-1}^* B_q + sum_{j<q} B_j Delta_{j,mu} B_j";
  CheckReport coh = check_coh(s.c, s.mu);
  r.notes["weighted_composition"] = coh.pass ? "pass" : "fail";

  PolyMatrix m0 = maxwell_body(s, q, 0), m1 = maxwell_body(s, q, 1);
  PolyMatrix prod = m1 * m0;
  PolyMatrix rhs = zero_matrix(s.vars, s.part.size(), s.part.size());
  OperatorMatrix prev = s.c.op(q - 1);
  put(rhs, s.part, q, q, prev * s.mu.mu1(q) * formal_adjoint(prev));
  for (int j = 0; j < q; ++j) put(rhs, s.part, j, j, generalized_laplacian(s.c, j, s.mu));
  r.add_residuals("M1*M0", prod - rhs);

  PolyMatrix st = stokes(s.c, q, s.mu, {}, 1).body.with_vars(s.vars).body();
  PolyMatrix rhs2 = prod + unweighted_off_diagonal(s, q);
  OperatorMatrix aq = s.c.op(q);
  put(rhs2, s.part, q, q, formal_adjoint(aq) * s.mu.mu0(q) * aq);
  r.add_residuals("S=M1*M0+corr", st - rhs2);
  return r;
}

CheckReport verify_wave_factorization(const Complex& c, int q, const MuSet& mu, const std::vector<Poly>& b) {
  check_length(b, q, "verify_wave_factorization");
  Setup s = prepare(c, q, &mu, {}, b, true);
  CheckReport r;
  r.name = "wave:" + c.name() + ":q=" + std::to_string(q);
  r.identity = "M1(A,-i b dt) M0(A,i b dt) = sum_j B_j (b_j^2 dt^2 + Delta'_j) B_j";
  const Poly dt = Poly::var(s.vars, "dt");
  const GaussianRational i = GaussianRational::i();
  PolyMatrix m0 = maxwell_body(s, q, 0), m1 = maxwell_body(s, q, 1);
  for (int j = 0; j <= q; ++j) {
    Poly bj = in_ring(b[j], s.vars) * dt;
    OperatorMatrix id = OperatorMatrix::identity(s.vars, s.part.rank(j));
    put(m0, s.part, j, j, (i * bj) * id);
    put(m1, s.part, j, j, (-i * bj) * id);
  }
  PolyMatrix prod = m1 * m0;
  PolyMatrix rhs = zero_matrix(s.vars, s.part.size(), s.part.size());
  PolyMatrix scaled = rhs;
  bool uniform = true;
  for (int j = 0; j <= q; ++j) {
    Poly bj = in_ring(b[j], s.vars);
    if (bj != in_ring(b[0], s.vars)) uniform = false;
    OperatorMatrix id = OperatorMatrix::identity(s.vars, s.part.rank(j));
    OperatorMatrix lap = j < q ? generalized_laplacian(s.c, j, s.mu)
                               : s.c.op(q - 1) * s.mu.mu1(q) * formal_adjoint(s.c.op(q - 1));
    put(rhs, s.part, j, j, (bj * bj * dt * dt) * id + lap);
    put(scaled, s.part, j, j, (bj * bj) * ((dt * dt) * id + lap));
  }
  r.add_residuals("product", prod - rhs);
  r.notes["uniform_b"] = uniform ? "yes" : "no";
  r.notes["scaled_laplacian_form"] = is_zero(prod - scaled) ? "pass" : "fail";
  return r;
}

OperatorMatrix conjugate_by(const ExactMatrix& p, const OperatorMatrix& x) {
  OperatorMatrix pm = OperatorMatrix::constant(x.vars(), p);
  ExactMatrix h(p.cols(), p.rows());
  for (Index i = 0; i < p.rows(); ++i)
    for (Index j = 0; j < p.cols(); ++j) h(j, i) = p(i, j).conj();
  OperatorMatrix ph = OperatorMatrix::constant(x.vars(), h);
  return pm * x * ph;
}

std::optional<ExactMatrix> find_monomial_similarity(const OperatorMatrix& x, const OperatorMatrix& yin,
                                                    const std::vector<GaussianRational>& units_in) {
  if (!x.is_square() || !yin.is_square() || x.rows() != yin.rows()) return std::nullopt;
  const OperatorMatrix y = yin.vars() == x.vars() ? yin : yin.with_vars(x.vars());
  std::vector<GaussianRational> units = units_in;
  if (units.empty()) units = {GaussianRational(1), GaussianRational(-1), GaussianRational::i(), -GaussianRational::i()};
  const Index n = x.rows();
  std::vector<Index> sigma(n, -1);
  std::vector<GaussianRational> u(n);
  std::vector<bool> used(n, false);

  // Y(i,j) = u_i X(s_i, s_j) conj(u_j)
  auto consistent = [&](Index i) {
    for (Index j = 0; j <= i; ++j) {
      if (y(i, j) != u[i] * x(sigma[i], sigma[j]) * u[j].conj()) return false;
      if (y(j, i) != u[j] * x(sigma[j], sigma[i]) * u[i].conj()) return false;
    }
    return true;
  };
  std::function<bool(Index)> go = [&](Index i) {
    if (i == n) return true;
    for (Index s = 0; s < n; ++s) {
      if (used[s]) continue;
      sigma[i] = s;
      used[s] = true;
      for (const auto& unit : units) {
        u[i] = unit;
        if (consistent(i) && go(i + 1)) return true;
      }
      used[s] = false;
    }
    sigma[i] = -1;
    return false;
  };
  if (!go(0)) return std::nullopt;
  ExactMatrix p = ExactMatrix::Constant(n, n, GaussianRational(0));
  for (Index i = 0; i < n; ++i) p(i, sigma[i]) = u[i];
  return p;
}

}  // namespace cxkit
