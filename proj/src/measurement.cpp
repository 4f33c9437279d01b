#include "incompat/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace incompat::measurement {

using linalg::ComplexMatrix;
using linalg::cplx;
using linalg::hermitian_part;
using linalg::HermitianMatrix;
using linalg::Spectrum;

Effect::Effect(HermitianMatrix op, double tol) : op_(std::move(op)) {
  if (op_.dim() == 0) throw InvalidInputError("effect operator must be non-empty");
  if (!linalg::is_psd(op_, tol))
    throw InvalidInputError("effect operator has an eigenvalue below 0");
  if (!linalg::is_psd(HermitianMatrix::identity(op_.dim()) - op_, tol))
    throw InvalidInputError("effect operator has an eigenvalue above 1");
}

Effect DichotomicPOVM::complement() const {
  return Effect(HermitianMatrix::identity(plus_.dim()) - plus_.op());
}

NOutcomePOVM::NOutcomePOVM(std::vector<Effect> effects, double tol)
    : effects_(std::move(effects)) {
  if (effects_.size() < 2)
    throw InvalidInputError("a measurement needs at least two outcomes");
  const int d = effects_.front().dim();
  HermitianMatrix sum = HermitianMatrix::zero(d);
  for (const Effect& e : effects_) {
    if (e.dim() != d) throw DimensionError("measurement effects have mixed dimensions");
    sum += e.op();
  }
  if ((sum - HermitianMatrix::identity(d)).mat().max_abs() > tol)
    throw InvalidInputError("measurement effects do not sum to the identity");
}

JointObservable::JointObservable(HermitianMatrix r_pp, HermitianMatrix r_pm,
                                 HermitianMatrix r_mp, HermitianMatrix r_mm, double tol)
    : r_pp_(std::move(r_pp)),
      r_pm_(std::move(r_pm)),
      r_mp_(std::move(r_mp)),
      r_mm_(std::move(r_mm)) {
  const int d = r_pp_.dim();
  if (r_pm_.dim() != d || r_mp_.dim() != d || r_mm_.dim() != d)
    throw DimensionError("joint observable elements have mixed dimensions");
  for (const HermitianMatrix* r : {&r_pp_, &r_pm_, &r_mp_, &r_mm_})
    if (!linalg::is_psd(*r, tol))
      throw InvalidInputError("joint observable element is not positive semidefinite");
  const HermitianMatrix sum = r_pp_ + r_pm_ + r_mp_ + r_mm_;
  if ((sum - HermitianMatrix::identity(d)).mat().max_abs() > tol)
    throw InvalidInputError("joint observable elements do not sum to the identity");
}

SharpObservable::SharpObservable(HermitianMatrix op, double tol) : op_(std::move(op)) {
  if (op_.dim() == 0) throw InvalidInputError("observable must be non-empty");
  const ComplexMatrix sq = op_.mat() * op_.mat();
  if ((sq - ComplexMatrix::identity(op_.dim())).max_abs() > tol)
    throw InvalidInputError("observable does not square to the identity");
}

HermitianMatrix effect_to_observable(const Effect& p, SignConvention sc) {
  const HermitianMatrix two_p = 2.0 * p.op();
  const HermitianMatrix one = HermitianMatrix::identity(p.dim());
  return sc == SignConvention::minus_is_one ? one - two_p : two_p - one;
}

namespace {

double psd_violation(const HermitianMatrix& h) {
  const linalg::Spectrum s = linalg::hermitian_eig(h);
  return std::max(0.0, -s.eigenvalues.back());
}

}  // namespace

JointObservable joint_from_S(const Effect& q, const Effect& p, const HermitianMatrix& s,
                             double tol) {
  const int d = q.dim();
  if (p.dim() != d || s.dim() != d)
    throw DimensionError("joint_from_S inputs have mixed dimensions");

  const HermitianMatrix one = HermitianMatrix::identity(d);
  const HermitianMatrix r_pp = s;
  const HermitianMatrix r_pm = q.op() - s;
  const HermitianMatrix r_mp = p.op() - s;
  const HermitianMatrix r_mm = one - q.op() - p.op() + s;

  using C = InfeasibleSError::Constraint;
  const struct {
    const HermitianMatrix* r;
    C which;
    const char* msg;
  } checks[] = {
      {&r_pp, C::s_psd, "S is not positive semidefinite"},
      {&r_pm, C::s_le_q, "S is not below Q"},
      {&r_mp, C::s_le_p, "S is not below P"},
      {&r_mm, C::s_ge_q_plus_p_minus_one, "S is not above Q + P - 1"},
  };
  for (const auto& chk : checks) {
    const double v = psd_violation(*chk.r);
    if (v > tol) throw InfeasibleSError(chk.which, v, chk.msg);
  }
  return JointObservable(r_pp, r_pm, r_mp, r_mm, std::max(tol, 1e-9));
}

std::pair<Effect, Effect> marginals_of_joint(const JointObservable& j) {
  return {Effect(j.r_pp() + j.r_pm()), Effect(j.r_pp() + j.r_mp())};
}

Effect mix_noise(const Effect& q, const Effect& e, double mu) {
  if (q.dim() != e.dim()) throw DimensionError("mix_noise inputs have mixed dimensions");
  if (!(mu >= 0.0 && mu <= 1.0))
    throw InvalidInputError("noise weight must lie in [0, 1]");
  return Effect((1.0 - mu) * q.op() + mu * e.op());
}

namespace {

// Spectral projectors, one per cluster of eigenvalues closer than
// 1e-8 * ||A||; clusters ordered by descending eigenvalue.
std::vector<HermitianMatrix> spectral_projectors(const HermitianMatrix& a) {
  const Spectrum s = linalg::hermitian_eig(a);
  const int d = a.dim();
  const double scale = std::max(std::abs(s.eigenvalues.front()),
                                std::abs(s.eigenvalues.back()));
  const double gap = 1e-8 * scale;

  std::vector<HermitianMatrix> out;
  int start = 0;
  while (start < d) {
    int stop = start + 1;
    while (stop < d && s.eigenvalues[stop - 1] - s.eigenvalues[stop] <= gap) ++stop;
    ComplexMatrix proj(d, d);
    for (int k = start; k < stop; ++k)
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
          proj(i, j) += s.eigenvectors(i, k) * std::conj(s.eigenvectors(j, k));
    out.push_back(hermitian_part(proj));
    start = stop;
  }
  return out;
}

}  // namespace

std::pair<SharpObservable, SharpObservable> dichotomize_vn(const HermitianMatrix& a1,
                                                           const HermitianMatrix& a2,
                                                           double tol) {
  if (a1.dim() != a2.dim())
    throw DimensionError("dichotomize_vn inputs have mixed dimensions");

  const std::vector<HermitianMatrix> pis = spectral_projectors(a1);
  const std::vector<HermitianMatrix> sigmas = spectral_projectors(a2);

  double best = 0.0;
  const HermitianMatrix* best_pi = nullptr;
  const HermitianMatrix* best_sigma = nullptr;
  for (const HermitianMatrix& pi : pis)
    for (const HermitianMatrix& sigma : sigmas) {
      const double norm = linalg::commutator_norm(pi, sigma);
      if (norm > best) {
        best = norm;
        best_pi = &pi;
        best_sigma = &sigma;
      }
    }

  if (best <= tol || best_pi == nullptr)
    throw ObservablesCompatibleError(
        "every pair of spectral projectors commutes; the observables admit a "
        "joint measurement");

  const HermitianMatrix one = HermitianMatrix::identity(a1.dim());
  return {SharpObservable(2.0 * (*best_pi) - one),
          SharpObservable(2.0 * (*best_sigma) - one)};
}

}  // namespace incompat::measurement
