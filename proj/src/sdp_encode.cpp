#include <cmath>

#include "incompat/sdp.hpp"

namespace incompat::sdp {

using linalg::ComplexMatrix;
using linalg::cplx;
using linalg::hermitian_unchecked;

std::vector<HermitianMatrix> hermitian_basis(int d) {
  if (d < 1) throw InvalidInputError("basis dimension must be positive");
  std::vector<HermitianMatrix> g;
  g.reserve(static_cast<std::size_t>(d) * d);

  ComplexMatrix id(d, d);
  for (int i = 0; i < d; ++i) id(i, i) = 1.0 / std::sqrt(static_cast<double>(d));
  g.push_back(hermitian_unchecked(std::move(id)));

  for (int k = 1; k < d; ++k) {
    ComplexMatrix m(d, d);
    const double norm = 1.0 / std::sqrt(static_cast<double>(k) * (k + 1));
    for (int i = 0; i < k; ++i) m(i, i) = norm;
    m(k, k) = -static_cast<double>(k) * norm;
    g.push_back(hermitian_unchecked(std::move(m)));
  }

  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (int j = 0; j < d; ++j)
    for (int k = j + 1; k < d; ++k) {
      ComplexMatrix m(d, d);
      m(j, k) = inv_sqrt2;
      m(k, j) = inv_sqrt2;
      g.push_back(hermitian_unchecked(std::move(m)));
    }
  for (int j = 0; j < d; ++j)
    for (int k = j + 1; k < d; ++k) {
      ComplexMatrix m(d, d);
      m(j, k) = cplx(0.0, -inv_sqrt2);
      m(k, j) = cplx(0.0, inv_sqrt2);
      g.push_back(hermitian_unchecked(std::move(m)));
    }
  return g;
}

namespace {

HermitianMatrix neg(const HermitianMatrix& h) { return -1.0 * h; }

}  // namespace

SdpProblem encode_pair_primal(const Effect& q, const Effect& p) {
  const int d = q.dim();
  if (p.dim() != d) throw DimensionError("effect dimensions differ");
  const std::vector<HermitianMatrix> g = hermitian_basis(d);

  SdpProblem prob;
  prob.kind = EncodingKind::pair_primal;
  prob.operators = {q.op(), p.op()};
  prob.c.assign(1 + g.size(), 0.0);
  prob.c[0] = 1.0;

  prob.c_blocks = {q.op() + p.op(), HermitianMatrix::zero(d), neg(q.op()), neg(p.op())};

  prob.f.resize(1 + g.size());
  prob.f[0] = {{0, HermitianMatrix::identity(d)}};
  for (std::size_t i = 0; i < g.size(); ++i)
    prob.f[1 + i] = {{0, g[i]}, {1, g[i]}, {2, neg(g[i])}, {3, neg(g[i])}};
  return prob;
}

SdpProblem encode_pair_lambda_star(const Effect& q, const Effect& p) {
  const int d = q.dim();
  if (p.dim() != d) throw DimensionError("effect dimensions differ");
  const std::vector<HermitianMatrix> g = hermitian_basis(d);
  const HermitianMatrix one = HermitianMatrix::identity(d);

  SdpProblem prob;
  prob.kind = EncodingKind::pair_lambda_star;
  prob.operators = {q.op(), p.op()};
  prob.c.assign(1 + g.size(), 0.0);
  prob.c[0] = 1.0;

  prob.c_blocks = {HermitianMatrix::zero(d), q.op() + p.op() - one, neg(q.op()),
                   neg(p.op())};

  prob.f.resize(1 + g.size());
  prob.f[0] = {{2, one}, {3, one}};
  for (std::size_t i = 0; i < g.size(); ++i)
    prob.f[1 + i] = {{0, g[i]}, {1, g[i]}, {2, neg(g[i])}, {3, neg(g[i])}};
  return prob;
}

SdpProblem encode_two_nvalued(const NOutcomePOVM& qa, const NOutcomePOVM& pb) {
  const int n_out = qa.outcomes();
  const int d = qa.dim();
  if (pb.outcomes() != n_out) throw InvalidInputError("outcome counts differ");
  if (pb.dim() != d) throw DimensionError("measurement dimensions differ");

  const std::vector<HermitianMatrix> g = hermitian_basis(d);
  const int dd = static_cast<int>(g.size());
  const int m = n_out - 1;  // independent effects per measurement

  // Blocks: [0] main; [1..m] per-i constraint Q_i >= sum_j R_ij;
  // [m+1..2m] per-j constraint P_j >= sum_i R_ij; [2m+1..] one per R_ij.
  SdpProblem prob;
  prob.kind = EncodingKind::two_nvalued;
  prob.c.assign(1 + static_cast<std::size_t>(m) * m * dd, 0.0);
  prob.c[0] = 1.0;

  HermitianMatrix total = HermitianMatrix::zero(d);
  for (int i = 0; i < m; ++i) total += qa.effect(i).op() + pb.effect(i).op();
  prob.c_blocks.push_back(total);
  for (int i = 0; i < m; ++i) prob.c_blocks.push_back(neg(qa.effect(i).op()));
  for (int j = 0; j < m; ++j) prob.c_blocks.push_back(neg(pb.effect(j).op()));
  for (int r = 0; r < m * m; ++r) prob.c_blocks.push_back(HermitianMatrix::zero(d));

  prob.f.resize(prob.c.size());
  prob.f[0] = {{0, HermitianMatrix::identity(d)}};
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      const int r = i * m + j;
      for (int k = 0; k < dd; ++k) {
        prob.f[1 + static_cast<std::size_t>(r) * dd + k] = {
            {0, g[k]}, {1 + i, neg(g[k])}, {1 + m + j, neg(g[k])}, {1 + 2 * m + r, g[k]}};
      }
    }
  return prob;
}

SdpProblem encode_multi_dichotomic(const std::vector<Effect>& t) {
  const int m_set = static_cast<int>(t.size());
  if (m_set < 2) throw InvalidInputError("need at least two measurements");
  const int d = t.front().dim();
  for (const Effect& e : t)
    if (e.dim() != d) throw DimensionError("effect dimensions differ");

  const std::vector<HermitianMatrix> g = hermitian_basis(d);
  const int dd = static_cast<int>(g.size());

  std::vector<int> masks;  // outcome multi-indices with >= 2 bits set
  for (int mask = 1; mask < (1 << m_set); ++mask)
    if (__builtin_popcount(static_cast<unsigned>(mask)) >= 2) masks.push_back(mask);
  const int n_masks = static_cast<int>(masks.size());

  // Blocks: [0] main; [1..m_set] per-setting T_alpha - sum R; then one per R_m.
  SdpProblem prob;
  prob.kind = EncodingKind::multi_dichotomic;
  prob.c.assign(1 + static_cast<std::size_t>(n_masks) * dd, 0.0);
  prob.c[0] = 1.0;

  HermitianMatrix total = HermitianMatrix::zero(d);
  for (const Effect& e : t) total += e.op();
  prob.c_blocks.push_back(total);
  for (const Effect& e : t) prob.c_blocks.push_back(neg(e.op()));
  for (int r = 0; r < n_masks; ++r) prob.c_blocks.push_back(HermitianMatrix::zero(d));

  prob.f.resize(prob.c.size());
  prob.f[0] = {{0, HermitianMatrix::identity(d)}};
  for (int r = 0; r < n_masks; ++r) {
    const int mask = masks[r];
    const int weight = __builtin_popcount(static_cast<unsigned>(mask));
    for (int k = 0; k < dd; ++k) {
      auto& entries = prob.f[1 + static_cast<std::size_t>(r) * dd + k];
      entries.push_back({0, static_cast<double>(weight - 1) * g[k]});
      for (int alpha = 0; alpha < m_set; ++alpha)
        if (mask & (1 << alpha)) entries.push_back({1 + alpha, neg(g[k])});
      entries.push_back({1 + m_set + r, g[k]});
    }
  }
  return prob;
}

DualCertificate extract_dual_certificate(const SdpProblem& prob, const SdpSolution& sol) {
  if (prob.kind != EncodingKind::pair_primal &&
      prob.kind != EncodingKind::pair_lambda_star)
    throw InvalidInputError("dual certificate extraction requires a pair encoding");
  if (sol.dual_blocks.size() != 4)
    throw InvalidInputError("solution does not match the pair block structure");

  const bool star = prob.kind == EncodingKind::pair_lambda_star;
  DualCertificate cert;
  cert.x = sol.dual_blocks[star ? 1 : 0];
  cert.y = sol.dual_blocks[2];
  cert.z = sol.dual_blocks[3];
  cert.rho = cert.y + cert.z;

  const HermitianMatrix& q = prob.operators.at(0);
  const HermitianMatrix& p = prob.operators.at(1);
  const double tol = 1e-7;

  for (const HermitianMatrix* h : {&cert.x, &cert.y, &cert.z})
    if (!linalg::is_psd(*h, tol))
      throw InconsistentSolutionError("dual certificate block is not positive");
  if (!linalg::is_psd(cert.rho - cert.x, tol))
    throw InconsistentSolutionError("dual certificate violates X <= Y + Z");

  const double norm_trace =
      star ? cert.rho.mat().trace().real() : cert.x.mat().trace().real();
  if (std::abs(norm_trace - 1.0) > tol)
    throw InconsistentSolutionError("dual certificate trace normalization failed");

  const HermitianMatrix qp_part =
      star ? q + p - HermitianMatrix::identity(q.dim()) : q + p;
  cert.objective = linalg::trace_product(cert.x, qp_part) -
                   linalg::trace_product(q, cert.y) - linalg::trace_product(p, cert.z);
  if (std::abs(cert.objective - sol.dual_value) > tol)
    throw InconsistentSolutionError("dual certificate objective mismatch");
  return cert;
}

}  // namespace incompat::sdp
