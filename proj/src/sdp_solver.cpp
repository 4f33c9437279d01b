#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "incompat/kernels.hpp"
#include "incompat/sdp.hpp"

namespace incompat::sdp {

namespace {

using linalg::ComplexMatrix;
using linalg::cplx;
using linalg::RealMatrix;

std::size_t elems(const RealMatrix& m) {
  return static_cast<std::size_t>(m.rows()) * m.cols();
}

void axpy(double a, const RealMatrix& x, RealMatrix& y) {
  kernels::active().daxpy(elems(x), a, x.data(), y.data());
}

// Frobenius inner product; equals tr[a b] when either factor is symmetric.
double dot(const RealMatrix& a, const RealMatrix& b) {
  return kernels::active().ddot(elems(a), a.data(), b.data());
}

void symmetrize(RealMatrix& m) {
  for (int i = 0; i < m.rows(); ++i)
    for (int j = i + 1; j < m.cols(); ++j) {
      const double v = 0.5 * (m(i, j) + m(j, i));
      m(i, j) = v;
      m(j, i) = v;
    }
}

void solve_with_factor(const RealMatrix& l, std::vector<double>& b) {
  const int n = l.rows();
  for (int i = 0; i < n; ++i) {
    double s = b[i];
    for (int k = 0; k < i; ++k) s -= l(i, k) * b[k];
    b[i] = s / l(i, i);
  }
  for (int i = n - 1; i >= 0; --i) {
    double s = b[i];
    for (int k = i + 1; k < n; ++k) s -= l(k, i) * b[k];
    b[i] = s / l(i, i);
  }
}

struct BlockEntry {
  int var;
  RealMatrix f;
};

// Largest step t keeping base + t * dir positive definite, given linv with
// linv^T linv = base^{-1}; 1e30 when the direction never hits the boundary.
double boundary_step(const std::vector<RealMatrix>& linv,
                     const std::vector<RealMatrix>& dir) {
  double alpha = 1e30;
  for (std::size_t b = 0; b < linv.size(); ++b) {
    RealMatrix k = linalg::matmul(linalg::matmul(linv[b], dir[b]),
                                  linalg::transpose(linv[b]));
    symmetrize(k);
    const double lmin = linalg::sym_eig(k).eigenvalues.back();
    if (lmin < 0.0) alpha = std::min(alpha, -1.0 / lmin);
  }
  return alpha;
}

HermitianMatrix unembed(const RealMatrix& x) {
  const int d = x.rows() / 2;
  ComplexMatrix m(d, d);
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k)
      m(j, k) = cplx(x(j, k) + x(d + j, d + k), x(d + j, k) - x(j, d + k));
  return linalg::hermitian_part(m);
}

}  // namespace

SdpSolution solve_sdp(const SdpProblem& prob, const SdpOptions& opts) {
  const int n = prob.variables();
  const int nb = prob.blocks();
  if (n < 1 || nb < 1) throw InvalidInputError("empty problem");
  if (prob.f.size() != prob.c.size())
    throw InvalidInputError("objective and constraint counts differ");

  // Embed every Hermitian block as a real symmetric one and group constraint
  // matrices by block.
  std::vector<int> dims(nb);
  std::vector<RealMatrix> cmat(nb);
  for (int b = 0; b < nb; ++b) {
    cmat[b] = linalg::real_embedding(prob.c_blocks[b]);
    dims[b] = cmat[b].rows();
  }
  std::vector<std::vector<BlockEntry>> bf(nb);
  for (int i = 0; i < n; ++i) {
    if (prob.f[i].empty())
      throw InvalidInputError("a variable appears in no constraint block");
    for (const auto& [blk, mat] : prob.f[i]) {
      if (blk < 0 || blk >= nb) throw InvalidInputError("constraint block out of range");
      if (2 * mat.dim() != dims[blk])
        throw DimensionError("constraint matrix does not match its block");
      bf[blk].push_back({i, linalg::real_embedding(mat)});
    }
  }

  double scale = 1.0;
  for (const RealMatrix& m : cmat) scale = std::max(scale, m.max_abs());
  for (const auto& entries : bf)
    for (const BlockEntry& e : entries) scale = std::max(scale, e.f.max_abs());
  for (double ci : prob.c) scale = std::max(scale, std::abs(ci));
  const double diverged = 1e8 * scale;

  int m_total = 0;
  for (int d : dims) m_total += d;

  // Infeasible start: x = 0, both matrix variables at a comfortably interior
  // multiple of the identity.
  const double init = 10.0 * scale;
  std::vector<double> x(n, 0.0);
  std::vector<RealMatrix> xm, sm;
  for (int b = 0; b < nb; ++b) {
    xm.push_back(init * RealMatrix::identity(dims[b]));
    sm.push_back(init * RealMatrix::identity(dims[b]));
  }

  struct Snapshot {
    std::vector<double> x;
    std::vector<RealMatrix> xm;
    double p = 0.0, d = 0.0, pres = 0.0, dres = 0.0;
    double score = 1e300;
    int iter = 0;
  } best;

  SdpStatus status = SdpStatus::max_iterations;
  int iterations = 0;
  int stalls = 0;

  std::vector<RealMatrix> rp(nb), sinv(nb), slinv(nb), xlinv(nb);
  std::vector<double> rd(n);

  for (int iter = 0;; ++iter) {
    iterations = iter;

    // Residuals and objectives at the current iterate.
    double pres = 0.0;
    for (int b = 0; b < nb; ++b) {
      RealMatrix r = cmat[b];
      r *= -1.0;
      r -= sm[b];
      for (const BlockEntry& e : bf[b]) axpy(x[e.var], e.f, r);
      rp[b] = std::move(r);
      pres = std::max(pres, rp[b].max_abs());
    }
    double dres = 0.0;
    for (int i = 0; i < n; ++i) rd[i] = prob.c[i];
    for (int b = 0; b < nb; ++b)
      for (const BlockEntry& e : bf[b]) rd[e.var] -= dot(xm[b], e.f);
    for (int i = 0; i < n; ++i) dres = std::max(dres, std::abs(rd[i]));

    double p_obj = 0.0;
    for (int i = 0; i < n; ++i) p_obj += prob.c[i] * x[i];
    double d_obj = 0.0;
    for (int b = 0; b < nb; ++b) d_obj += dot(cmat[b], xm[b]);

    double mu = 0.0;
    for (int b = 0; b < nb; ++b) mu += dot(xm[b], sm[b]);
    mu = std::max(mu / m_total, 1e-300);

    const double pres_rel = pres / (1.0 + scale);
    const double dres_rel = dres / (1.0 + scale);
    const double gap_rel = std::abs(p_obj - d_obj) / (1.0 + std::abs(p_obj) + std::abs(d_obj));
    const double score = std::max({pres_rel, dres_rel, gap_rel});
    if (score < best.score) {
      best = {x, xm, p_obj, d_obj, pres, dres, score, iter};
    }

    if (pres_rel <= opts.feas_tol && dres_rel <= opts.feas_tol &&
        gap_rel <= opts.gap_tol) {
      status = SdpStatus::optimal;
      best = {x, xm, p_obj, d_obj, pres, dres, score, iter};
      break;
    }
    if (p_obj < -diverged && pres_rel <= 1e-6) {
      status = SdpStatus::unbounded;
      break;
    }
    if (d_obj > diverged && dres_rel <= 1e-6) {
      status = SdpStatus::infeasible;
      break;
    }
    if (iter >= opts.max_iter) break;

    // Factor both matrix iterates.
    bool factored = true;
    for (int b = 0; b < nb && factored; ++b) {
      RealMatrix l;
      if (!linalg::cholesky(sm[b], l)) {
        factored = false;
        break;
      }
      slinv[b] = linalg::invert_lower(l);
      sinv[b] = linalg::matmul(linalg::transpose(slinv[b]), slinv[b]);
      symmetrize(sinv[b]);
      if (!linalg::cholesky(xm[b], l)) {
        factored = false;
        break;
      }
      xlinv[b] = linalg::invert_lower(l);
    }
    if (!factored) break;  // numerical breakdown: report best iterate

    // Normal matrix B_ij = tr[F_i X F_j S^-1] plus the vectors entering the
    // reduced Newton system.
    RealMatrix bmat(n, n);
    std::vector<double> avec(n, 0.0), gvec(n, 0.0);
    std::vector<std::vector<RealMatrix>> us(nb);
    for (int b = 0; b < nb; ++b) {
      const RealMatrix v =
          linalg::matmul(linalg::matmul(xm[b], rp[b]), sinv[b]);
      us[b].reserve(bf[b].size());
      for (const BlockEntry& ej : bf[b])
        us[b].push_back(linalg::matmul(linalg::matmul(xm[b], ej.f), sinv[b]));
      for (std::size_t ii = 0; ii < bf[b].size(); ++ii) {
        const BlockEntry& ei = bf[b][ii];
        avec[ei.var] += dot(ei.f, sinv[b]);
        gvec[ei.var] += dot(ei.f, v);
        for (std::size_t jj = 0; jj < bf[b].size(); ++jj)
          bmat(ei.var, bf[b][jj].var) += dot(ei.f, us[b][jj]);
      }
    }
    symmetrize(bmat);

    RealMatrix bl;
    double ridge = 0.0;
    for (int attempt = 0; attempt < 6; ++attempt) {
      RealMatrix breg = bmat;
      if (ridge > 0.0)
        for (int i = 0; i < n; ++i) breg(i, i) += ridge;
      if (linalg::cholesky(breg, bl)) {
        ridge = -1.0;
        break;
      }
      double diag_max = 0.0;
      for (int i = 0; i < n; ++i) diag_max = std::max(diag_max, bmat(i, i));
      ridge = (ridge == 0.0) ? 1e-14 * (1.0 + diag_max) : ridge * 100.0;
    }
    if (ridge >= 0.0) break;  // normal matrix not factorable: stop honestly

    auto newton = [&](double nu, const std::vector<RealMatrix>* corr_xs,
                      std::vector<double>& dx, std::vector<RealMatrix>& ds,
                      std::vector<RealMatrix>& dxm) {
      dx.assign(n, 0.0);
      for (int i = 0; i < n; ++i) dx[i] = nu * avec[i] - gvec[i] - prob.c[i];
      if (corr_xs != nullptr)
        for (int b = 0; b < nb; ++b)
          for (std::size_t ii = 0; ii < bf[b].size(); ++ii)
            dx[bf[b][ii].var] -= dot(bf[b][ii].f, (*corr_xs)[b]);
      solve_with_factor(bl, dx);

      ds.assign(nb, RealMatrix());
      dxm.assign(nb, RealMatrix());
      for (int b = 0; b < nb; ++b) {
        RealMatrix d = rp[b];
        for (const BlockEntry& e : bf[b]) axpy(dx[e.var], e.f, d);
        RealMatrix dxb = linalg::matmul(linalg::matmul(xm[b], d), sinv[b]);
        dxb *= -1.0;
        dxb -= xm[b];
        if (nu != 0.0) axpy(nu, sinv[b], dxb);
        if (corr_xs != nullptr) axpy(-1.0, (*corr_xs)[b], dxb);
        symmetrize(dxb);
        ds[b] = std::move(d);
        dxm[b] = std::move(dxb);
      }
    };

    // Predictor (affine-scaling) direction.
    std::vector<double> dx_aff;
    std::vector<RealMatrix> ds_aff, dxm_aff;
    newton(0.0, nullptr, dx_aff, ds_aff, dxm_aff);

    const double ap_aff = std::min(1.0, boundary_step(slinv, ds_aff));
    const double ad_aff = std::min(1.0, boundary_step(xlinv, dxm_aff));
    double mu_aff = 0.0;
    for (int b = 0; b < nb; ++b)
      mu_aff += dot(xm[b], sm[b]) + ap_aff * dot(xm[b], ds_aff[b]) +
                ad_aff * dot(dxm_aff[b], sm[b]) +
                ap_aff * ad_aff * dot(dxm_aff[b], ds_aff[b]);
    mu_aff = std::max(mu_aff / m_total, 0.0);
    const double sigma =
        std::clamp((mu_aff / mu) * (mu_aff / mu) * (mu_aff / mu), 1e-8, 1.0);

    // Corrector: recenter toward sigma*mu and compensate the second-order
    // term dX_aff dS_aff S^-1.
    std::vector<RealMatrix> corr(nb);
    for (int b = 0; b < nb; ++b)
      corr[b] = linalg::matmul(linalg::matmul(dxm_aff[b], ds_aff[b]), sinv[b]);

    std::vector<double> dx;
    std::vector<RealMatrix> ds, dxm_step;
    newton(sigma * mu, &corr, dx, ds, dxm_step);

    const double tau =
        (gap_rel < 1e-4 && pres_rel < 1e-6 && dres_rel < 1e-6) ? 0.98 : 0.95;
    const double ap = std::min(1.0, tau * boundary_step(slinv, ds));
    const double ad = std::min(1.0, tau * boundary_step(xlinv, dxm_step));

    if (ap < 1e-10 && ad < 1e-10) {
      if (++stalls >= 2) break;
    } else {
      stalls = 0;
    }

    for (int i = 0; i < n; ++i) x[i] += ap * dx[i];
    for (int b = 0; b < nb; ++b) {
      axpy(ap, ds[b], sm[b]);
      axpy(ad, dxm_step[b], xm[b]);
    }
  }

  SdpSolution sol;
  sol.status = status;
  sol.iterations = iterations;
  const Snapshot& pick = best;
  sol.x = pick.x;
  sol.primal_value = pick.p;
  sol.dual_value = pick.d;
  sol.gap = pick.p - pick.d;
  sol.primal_residual = pick.pres;
  sol.dual_residual = pick.dres;
  sol.dual_blocks.reserve(nb);
  for (int b = 0; b < nb; ++b) sol.dual_blocks.push_back(unembed(pick.xm[b]));
  return sol;
}

}  // namespace incompat::sdp
