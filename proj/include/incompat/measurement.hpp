#pragma once

#include <utility>
#include <vector>

#include "incompat/errors.hpp"
#include "incompat/linalg.hpp"

namespace incompat::measurement {

using linalg::HermitianMatrix;

// Operator Q with 0 <= Q <= 1 (within `tol`), i.e. one outcome of a
// generalized measurement.
class Effect {
 public:
  explicit Effect(HermitianMatrix op, double tol = 1e-9);

  int dim() const { return op_.dim(); }
  const HermitianMatrix& op() const { return op_; }

 private:
  HermitianMatrix op_;
};

// Two-outcome measurement {Q, 1 - Q}; the stored effect is the "+" outcome.
class DichotomicPOVM {
 public:
  explicit DichotomicPOVM(Effect plus) : plus_(std::move(plus)) {}

  int dim() const { return plus_.dim(); }
  const Effect& effect() const { return plus_; }
  Effect complement() const;

 private:
  Effect plus_;
};

// Measurement with N >= 2 outcomes; effects must sum to the identity.
class NOutcomePOVM {
 public:
  explicit NOutcomePOVM(std::vector<Effect> effects, double tol = 1e-9);

  int outcomes() const { return static_cast<int>(effects_.size()); }
  int dim() const { return effects_.front().dim(); }
  const Effect& effect(int i) const { return effects_.at(i); }
  const std::vector<Effect>& effects() const { return effects_; }

 private:
  std::vector<Effect> effects_;
};

// Four-outcome parent measurement {R_pp, R_pm, R_mp, R_mm} whose first/second
// marginals reproduce a pair of dichotomic measurements.
class JointObservable {
 public:
  JointObservable(HermitianMatrix r_pp, HermitianMatrix r_pm, HermitianMatrix r_mp,
                  HermitianMatrix r_mm, double tol = 1e-9);

  int dim() const { return r_pp_.dim(); }
  const HermitianMatrix& r_pp() const { return r_pp_; }
  const HermitianMatrix& r_pm() const { return r_pm_; }
  const HermitianMatrix& r_mp() const { return r_mp_; }
  const HermitianMatrix& r_mm() const { return r_mm_; }

 private:
  HermitianMatrix r_pp_, r_pm_, r_mp_, r_mm_;
};

// +/-1-valued observable: Hermitian A with A^2 = 1 (within `tol`).
class SharpObservable {
 public:
  explicit SharpObservable(HermitianMatrix op, double tol = 1e-9);

  int dim() const { return op_.dim(); }
  const HermitianMatrix& op() const { return op_; }

 private:
  HermitianMatrix op_;
};

enum class SignConvention {
  plus_is_one,   // observable 2P - 1: outcome "+" has value +1
  minus_is_one,  // observable 1 - 2P: outcome "+" has value -1
};

// Dichotomic observable attached to an effect; spectrum lies in [-1, 1].
HermitianMatrix effect_to_observable(const Effect& p, SignConvention sc);

// Builds the parent measurement {S, Q-S, P-S, 1-Q-P+S} and verifies that S
// satisfies all four operator inequalities making it valid; the thrown
// InfeasibleSError names the first inequality that fails.
JointObservable joint_from_S(const Effect& q, const Effect& p, const HermitianMatrix& s,
                             double tol = 1e-9);

// (R_pp + R_pm, R_pp + R_mp)
std::pair<Effect, Effect> marginals_of_joint(const JointObservable& j);

// (1 - mu) Q + mu E
Effect mix_noise(const Effect& q, const Effect& e, double mu);

// Reduces two non-commuting Hermitian observables to a pair of +/-1-valued
// observables: enumerates spectral projectors of each (eigenvalues closer than
// 1e-8 * ||A|| share a projector), picks the pair (Pi, Sigma) maximizing
// ||[Pi, Sigma]||, and returns (2 Pi - 1, 2 Sigma - 1). Throws
// ObservablesCompatibleError when every projector pair commutes within `tol`.
std::pair<SharpObservable, SharpObservable> dichotomize_vn(const HermitianMatrix& a1,
                                                           const HermitianMatrix& a2,
                                                           double tol = 1e-9);

}  // namespace incompat::measurement
