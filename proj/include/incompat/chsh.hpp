#pragma once

#include <utility>
#include <vector>

#include "incompat/errors.hpp"
#include "incompat/linalg.hpp"
#include "incompat/measurement.hpp"

namespace incompat::chsh {

using linalg::HermitianMatrix;
using measurement::Effect;
using measurement::SharpObservable;

// (1/2)[A1 (x) (B1 + B2) + A2 (x) (B1 - B2)] together with its factors.
struct BellOperator {
  HermitianMatrix matrix;
  HermitianMatrix a1, a2, b1, b2;
};

// Result of maximizing mu over the angle phi in [0, pi].
struct ScanResult {
  double lambda_star = 0.0;
  double phi_star = 0.0;
  std::vector<std::pair<double, double>> profile;  // sampled (phi, mu(phi))
};

struct ScanOptions {
  int grid = 2048;
  double refine_tol = 1e-10;  // bracket width in phi
};

// Violating configuration on C^d (x) C^2: a unit state, Bob's two reflections
// (embedded as 1_d (x) 2x2), the maximizing angle, and the achieved value.
struct ChshWitness {
  std::vector<linalg::cplx> psi;
  HermitianMatrix b1, b2;
  double phi_star = 0.0;
  double value = 0.0;
};

// Assembles the correlation operator; A factors share one dimension, B
// factors another.
BellOperator bell_operator(const HermitianMatrix& a1, const HermitianMatrix& a2,
                           const HermitianMatrix& b1, const HermitianMatrix& b2);

// || B^2 - 1 - (1/4)[A2,A1] (x) [B1,B2] ||, which vanishes identically when
// all four factors square to the identity; factors failing that precondition
// (within 1e-9) are rejected.
double bell_square_residual(const BellOperator& bo);

// sqrt(1 + ||[A1,A2]||^2 / 4): the best expectation when Bob copies Alice's
// observables. Cross-checked against the assembled operator norm on small
// dimensions.
double max_violation_fixed_b(const SharpObservable& a1, const SharpObservable& a2);

// sqrt(1 + ||[A1,A2]|| / 2): the best expectation over all unit-square
// choices for Bob.
double max_violation_vn(const SharpObservable& a1, const SharpObservable& a2);

// Largest eigenvalue of
//   (Q+P-1) (x) [[c^2, cs], [cs, s^2]] - Q (x) diag(1,0) - P (x) diag(0,1)
// with c = cos(phi), s = sin(phi); phi must lie in [0, pi].
double mu_of_phi(const Effect& q, const Effect& p, double phi);

// Maximizes mu over [0, pi]: uniform grid, then golden-section refinement of
// every local-maximum bracket. Deterministic.
ScanResult lambda_star_scan(const Effect& q, const Effect& p,
                            const ScanOptions& opts = {});

// 1 + 2 * lambda_star: the supremum of |<B>| over states and unit-square
// partner observables; exceeds 1 exactly when the pair is incompatible. The
// value is reported even when no violation is possible (< 1).
double max_chsh(const Effect& q, const Effect& p,
                const ScanOptions& opts = {});

// Constructive maximizer: Bob's reflections are fixed by phi_star, Alice's
// are 1-2P and 2Q-1, and psi is the top eigenvector of the scan matrix; the
// achieved value equals max_chsh.
ChshWitness extract_witness(const Effect& q, const Effect& p,
                            const ScanOptions& opts = {});

}  // namespace incompat::chsh
