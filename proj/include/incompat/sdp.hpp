#pragma once

#include <utility>
#include <vector>

#include "incompat/errors.hpp"
#include "incompat/linalg.hpp"
#include "incompat/measurement.hpp"

namespace incompat::sdp {

using linalg::HermitianMatrix;
using measurement::Effect;
using measurement::NOutcomePOVM;

// Orthonormal Hermitian basis {G_i} of d x d matrices with tr[G_i G_j] =
// delta_ij: identity/sqrt(d), the d-1 traceless diagonal matrices, then the
// real and imaginary off-diagonal pairs. The order is part of the encoding
// contract (solutions are expansion coefficients in this basis).
std::vector<HermitianMatrix> hermitian_basis(int d);

enum class EncodingKind {
  generic,
  pair_primal,       // lambda_0 of a dichotomic pair
  pair_lambda_star,  // lambda* of a dichotomic pair
  two_nvalued,       // lambda_0 of two N-outcome measurements
  multi_dichotomic,  // lambda_0 of M dichotomic measurements
};

// minimize c.x  subject to  sum_i x_i F_i - C >= 0,
// with C and every F_i block-diagonal over a shared block structure. F_i
// entries are stored sparsely as (block index, matrix) pairs.
struct SdpProblem {
  std::vector<double> c;
  std::vector<HermitianMatrix> c_blocks;
  std::vector<std::vector<std::pair<int, HermitianMatrix>>> f;

  EncodingKind kind = EncodingKind::generic;
  // Encoder inputs retained for certificate extraction (pair encodings: Q, P).
  std::vector<HermitianMatrix> operators;

  int variables() const { return static_cast<int>(c.size()); }
  int blocks() const { return static_cast<int>(c_blocks.size()); }
};

enum class SdpStatus { optimal, infeasible, unbounded, max_iterations };

struct SdpOptions {
  double gap_tol = 1e-8;
  double feas_tol = 1e-9;
  int max_iter = 200;
};

struct SdpSolution {
  SdpStatus status = SdpStatus::max_iterations;
  std::vector<double> x;
  std::vector<HermitianMatrix> dual_blocks;  // dual variable X, one per block
  double primal_value = 0.0;
  double dual_value = 0.0;
  double gap = 0.0;              // primal_value - dual_value
  double primal_residual = 0.0;  // worst entry of sum_i x_i F_i - C - slack
  double dual_residual = 0.0;    // worst violation of tr[X F_i] = c_i
  int iterations = 0;
};

// Primal-dual interior-point solver (predictor-corrector on the real
// symmetric embedding of every Hermitian block). Deterministic.
SdpSolution solve_sdp(const SdpProblem& prob, const SdpOptions& opts = {});

// lambda_0 program: minimize lambda s.t. Q+P <= lambda 1 + S, 0 <= S <= Q, P.
// Blocks: [lambda 1 + S - Q - P, S, Q - S, P - S]; variables (lambda, S).
SdpProblem encode_pair_primal(const Effect& q, const Effect& p);

// lambda* program: minimize lambda s.t. S >= 0, Q+P <= 1+S, S - lambda 1 <= Q,
// S - lambda 1 <= P. Blocks: [S, 1+S-Q-P, lambda 1+Q-S, lambda 1+P-S].
SdpProblem encode_pair_lambda_star(const Effect& q, const Effect& p);

// lambda_0 for two N-outcome measurements {Q_i}, {P_j}: variables lambda and
// R_ij (i, j <= N-1); constraints sum Q_i + sum P_j <= lambda 1 + sum R_ij,
// Q_i >= sum_j R_ij, P_j >= sum_i R_ij, R_ij >= 0.
SdpProblem encode_two_nvalued(const NOutcomePOVM& qa, const NOutcomePOVM& pb);

// lambda_0 for M dichotomic measurements T_alpha: variables lambda and R_m for
// every outcome multi-index m with at least two 1-bits (indices with a single
// 1-bit decouple: their positivity is already imposed by the per-setting
// constraint, so including them as variables would only pad the program);
// constraints sum_alpha T_alpha <= lambda 1 + sum_m (|m|-1) R_m and, per
// setting alpha, sum_{m: bit alpha set} R_m <= T_alpha, R_m >= 0.
SdpProblem encode_multi_dichotomic(const std::vector<Effect>& t);

// Dual certificate of a pair encoding, split into named blocks.
//  - pair_lambda_star: objective tr[X(Q+P-1)] - tr[QY] - tr[PZ], tr[Y+Z] = 1,
//    0 <= X <= rho = Y + Z; positive objective witnesses incompatibility.
//  - pair_primal: objective tr[X(Q+P)] - tr[QY] - tr[PZ], tr[X] = 1,
//    0 <= X <= Y + Z; objective > 1 witnesses incompatibility.
struct DualCertificate {
  HermitianMatrix x, y, z;
  HermitianMatrix rho;  // Y + Z
  double objective = 0.0;
};

// Validates and splits sol.dual_blocks for the two pair encodings; throws
// InconsistentSolutionError when the certificate fails its defining checks
// (positivity, X <= Y+Z, trace normalization, objective = dual value).
DualCertificate extract_dual_certificate(const SdpProblem& prob, const SdpSolution& sol);

}  // namespace incompat::sdp
