#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "incompat/jm.hpp"

namespace incompat::jm {

namespace {

using linalg::ComplexMatrix;
using linalg::cplx;
using linalg::HermitianMatrix;
using sdp::SdpSolution;
using sdp::SdpStatus;

constexpr double kVerdictBand = 1e-7;

const char* status_name(SdpStatus s) {
  switch (s) {
    case SdpStatus::optimal:
      return "optimal";
    case SdpStatus::infeasible:
      return "infeasible";
    case SdpStatus::unbounded:
      return "unbounded";
    default:
      return "max_iterations";
  }
}

// Accepts the solve when the solver certifies optimality or the returned
// iterate is accurate enough for the 1e-6 contracts built on top of it.
SdpSolution solve_checked(const sdp::SdpProblem& prob,
                          const sdp::SdpOptions& opts) {
  SdpSolution sol = sdp::solve_sdp(prob, opts);
  const double scale = 1.0 + std::abs(sol.primal_value) + std::abs(sol.dual_value);
  const bool usable = sol.primal_residual <= 1e-6 && sol.dual_residual <= 1e-6 &&
                      std::abs(sol.gap) <= 1e-6 * scale;
  if (sol.status != SdpStatus::optimal && !usable)
    throw Error(std::string("semidefinite solve did not converge (status: ") +
                status_name(sol.status) + ")");
  return sol;
}

// Least mixing weight that restores compatibility.  Pairs inside the verdict
// band report exactly zero so that the noise figure agrees with the verdict.
double mu_of_lambda0(double lambda0) {
  return lambda0 > 1.0 + kVerdictBand ? 1.0 - 1.0 / lambda0 : 0.0;
}

void fill_verdict(JmReport& r, double lambda0) {
  r.lambda0 = lambda0;
  r.jointly_measurable = lambda0 <= 1.0 + kVerdictBand;
  r.marginal = std::abs(lambda0 - 1.0) <= kVerdictBand;
  r.mu_robustness = mu_of_lambda0(lambda0);
}

// Random effect for the robustness spot-check: a complex Wishart matrix,
// rescaled so its top eigenvalue equals `cap`.
Effect sample_effect(std::mt19937_64& rng, int d, double cap) {
  std::normal_distribution<double> gauss;
  ComplexMatrix a(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) a(i, j) = cplx(gauss(rng), gauss(rng));
  HermitianMatrix w = linalg::hermitian_part(a.adjoint() * a);
  const double top = linalg::operator_norm(w);
  if (top > 0.0) w *= cap / top;
  return Effect(w);
}

}  // namespace

JmReport analyze_pair(const Effect& q, const Effect& p,
                      const sdp::SdpOptions& opts) {
  const sdp::SdpProblem primal = sdp::encode_pair_primal(q, p);
  const SdpSolution psol = solve_checked(primal, opts);
  const sdp::SdpProblem star = sdp::encode_pair_lambda_star(q, p);
  const SdpSolution ssol = solve_checked(star, opts);

  JmReport r;
  fill_verdict(r, psol.primal_value);
  r.lambda_star = ssol.primal_value;
  r.gap = std::max(std::abs(psol.gap), std::abs(ssol.gap));

  if (r.jointly_measurable) {
    // The optimal interpolating operator already witnesses compatibility:
    // Q + P - 1 <= Q + P - lambda0 <= S when lambda0 <= 1.
    const auto g = sdp::hermitian_basis(q.dim());
    HermitianMatrix s = HermitianMatrix::zero(q.dim());
    for (std::size_t i = 0; i < g.size(); ++i) s += psol.x[1 + i] * g[i];
    r.joint = measurement::joint_from_S(q, p, s, 1e-6);
  } else {
    r.certificate = sdp::extract_dual_certificate(star, ssol);
  }
  return r;
}

double robustness_mu(const Effect& q, const Effect& p, std::uint64_t seed,
                     const sdp::SdpOptions& opts) {
  const SdpSolution sol = solve_checked(sdp::encode_pair_primal(q, p), opts);
  const double mu = mu_of_lambda0(sol.primal_value);

  // Spot-check the meaning of mu on reproducible samples: mixing both
  // measurements with the same effect E at weight w = mu + 1e-3 must land in
  // the compatible region.  That is guaranteed whenever w*E <= (1-(1-w)*l0)*1:
  // with S0 the optimal interpolating operator, {(1-w)S0 + wE, (1-w)(Q-S0),
  // (1-w)(P-S0), 1 - sum} is then a valid joint observable for the mixed
  // pair.  Samples are drawn inside that envelope (0.9 safety factor); it
  // admits every effect when the pair is compatible and narrows toward the
  // tight rescaling direction E -> 0 as the incompatibility grows, so a
  // failure here can only come from a misreported optimum.
  std::mt19937_64 rng(seed);
  const double weight = std::min(1.0, mu + 1e-3);
  const double lambda0 = sol.primal_value;
  const double cap =
      lambda0 <= 1.0 + kVerdictBand
          ? 1.0
          : std::min(1.0, 0.9 * (1.0 - (1.0 - weight) * lambda0) / weight);
  for (int k = 0; k < 20; ++k) {
    const Effect e = sample_effect(rng, q.dim(), cap);
    const Effect qm = measurement::mix_noise(q, e, weight);
    const Effect pm = measurement::mix_noise(p, e, weight);
    const SdpSolution mixed =
        solve_checked(sdp::encode_pair_primal(qm, pm), opts);
    if (mixed.primal_value > 1.0 + 1e-6)
      throw InconsistentSolutionError(
          "noise-robustness spot-check failed: mixed pair stayed incompatible");
  }
  return mu;
}

JmReport analyze_two_nvalued(const NOutcomePOVM& qa, const NOutcomePOVM& pb,
                             const sdp::SdpOptions& opts) {
  const sdp::SdpProblem prob = sdp::encode_two_nvalued(qa, pb);
  const SdpSolution sol = solve_checked(prob, opts);
  const int m = qa.outcomes() - 1;

  JmReport r;
  fill_verdict(r, sol.primal_value);
  r.lambda_star = r.lambda0 - 1.0;
  r.gap = std::abs(sol.gap);

  // Validate the dual certificate (rho, {Y_i}, {Z_j}).
  const HermitianMatrix& rho = sol.dual_blocks.at(0);
  if (std::abs(rho.mat().trace().real() - 1.0) > 1e-6)
    throw InconsistentSolutionError("dual state is not trace-normalized");
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      const HermitianMatrix& y = sol.dual_blocks.at(1 + i);
      const HermitianMatrix& z = sol.dual_blocks.at(1 + m + j);
      if (!linalg::is_psd(y + z - rho, 1e-7))
        throw InconsistentSolutionError("dual certificate violates rho <= Y_i + Z_j");
    }
  double objective = 0.0;
  for (int i = 0; i < m; ++i) {
    const HermitianMatrix& qi = qa.effect(i).op();
    objective += linalg::trace_product(qi, rho) -
                 linalg::trace_product(qi, sol.dual_blocks.at(1 + i));
  }
  for (int j = 0; j < m; ++j) {
    const HermitianMatrix& pj = pb.effect(j).op();
    objective += linalg::trace_product(pj, rho) -
                 linalg::trace_product(pj, sol.dual_blocks.at(1 + m + j));
  }
  if (std::abs(objective - r.lambda0) > 1e-6)
    throw InconsistentSolutionError("dual objective does not reproduce the optimum");
  return r;
}

JmReport analyze_multi_dichotomic(const std::vector<Effect>& t,
                                  const sdp::SdpOptions& opts) {
  const int m_set = static_cast<int>(t.size());
  if (m_set > 12)
    throw SizeLimitError("more than 12 dichotomic measurements (the program grows as 2^M)");
  const sdp::SdpProblem prob = sdp::encode_multi_dichotomic(t);
  const SdpSolution sol = solve_checked(prob, opts);

  JmReport r;
  fill_verdict(r, sol.primal_value);
  r.lambda_star = r.lambda0 - 1.0;
  r.gap = std::abs(sol.gap);

  // Validate the dual certificate (rho, {X_alpha}).
  const HermitianMatrix& rho = sol.dual_blocks.at(0);
  if (std::abs(rho.mat().trace().real() - 1.0) > 1e-6)
    throw InconsistentSolutionError("dual state is not trace-normalized");
  for (int mask = 1; mask < (1 << m_set); ++mask) {
    const int weight = __builtin_popcount(static_cast<unsigned>(mask));
    HermitianMatrix lhs = (1.0 - weight) * rho;
    for (int alpha = 0; alpha < m_set; ++alpha)
      if (mask & (1 << alpha)) lhs += sol.dual_blocks.at(1 + alpha);
    if (!linalg::is_psd(lhs, 1e-7))
      throw InconsistentSolutionError(
          "dual certificate violates (|m|-1) rho <= sum of X_alpha");
  }
  double objective = 0.0;
  for (int alpha = 0; alpha < m_set; ++alpha)
    objective += linalg::trace_product(t[alpha].op(), rho) -
                 linalg::trace_product(t[alpha].op(), sol.dual_blocks.at(1 + alpha));
  if (std::abs(objective - r.lambda0) > 1e-6)
    throw InconsistentSolutionError("dual objective does not reproduce the optimum");
  return r;
}

}  // namespace incompat::jm
