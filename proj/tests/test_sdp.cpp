#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "incompat/sdp.hpp"

using namespace incompat;
using namespace incompat::linalg;
using namespace incompat::measurement;
using namespace incompat::sdp;

namespace {

HermitianMatrix pauli_x() {
  ComplexMatrix m(2, 2);
  m(0, 1) = 1.0;
  m(1, 0) = 1.0;
  return HermitianMatrix(m);
}

HermitianMatrix pauli_y() {
  ComplexMatrix m(2, 2);
  m(0, 1) = cplx(0.0, -1.0);
  m(1, 0) = cplx(0.0, 1.0);
  return HermitianMatrix(m);
}

HermitianMatrix pauli_z() { return HermitianMatrix::diag({1.0, -1.0}); }

// (1 + s) / 2 for a +/-1-valued observable s, optionally shrunk toward 1/2.
Effect half_plus(const HermitianMatrix& s, double eta = 1.0) {
  const int d = s.dim();
  return Effect(0.5 * HermitianMatrix::identity(d) + (0.5 * eta) * s);
}

HermitianMatrix random_hermitian(std::mt19937_64& rng, int d) {
  std::normal_distribution<double> gauss;
  ComplexMatrix m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = cplx(gauss(rng), gauss(rng));
  return hermitian_part(m);
}

// Random effect with spectrum rescaled into [lo, hi], so it is strictly
// between 0 and 1.
Effect random_effect(std::mt19937_64& rng, int d, double lo = 0.1, double hi = 0.9) {
  const HermitianMatrix h = random_hermitian(rng, d);
  const Spectrum s = hermitian_eig(h);
  const double lmax = s.eigenvalues.front();
  const double lmin = s.eigenvalues.back();
  if (lmax - lmin < 1e-9) return Effect(0.5 * HermitianMatrix::identity(d));
  const double a = (hi - lo) / (lmax - lmin);
  return Effect(a * h + (lo - a * lmin) * HermitianMatrix::identity(d));
}

SdpSolution solve_clean(const SdpProblem& prob) {
  SdpSolution sol = solve_sdp(prob);
  REQUIRE(sol.status == SdpStatus::optimal);
  CHECK(sol.primal_residual < 1e-7);
  CHECK(sol.dual_residual < 1e-7);
  CHECK(std::abs(sol.gap) <
        1e-6 * (1.0 + std::abs(sol.primal_value) + std::abs(sol.dual_value)));
  return sol;
}

double lambda0_pair(const Effect& q, const Effect& p) {
  return solve_clean(encode_pair_primal(q, p)).primal_value;
}

double lambda_star_pair(const Effect& q, const Effect& p) {
  return solve_clean(encode_pair_lambda_star(q, p)).primal_value;
}

}  // namespace

TEST_CASE("hermitian basis is orthonormal and complete") {
  for (int d : {1, 2, 3, 4}) {
    const auto g = hermitian_basis(d);
    REQUIRE(static_cast<int>(g.size()) == d * d);
    for (std::size_t i = 0; i < g.size(); ++i)
      for (std::size_t j = 0; j < g.size(); ++j) {
        const double expected = (i == j) ? 1.0 : 0.0;
        CHECK(trace_product(g[i], g[j]) == doctest::Approx(expected).epsilon(1e-12));
      }
  }

  // Expansion in the basis reconstructs an arbitrary Hermitian matrix.
  std::mt19937_64 rng(7);
  const HermitianMatrix h = random_hermitian(rng, 3);
  const auto g = hermitian_basis(3);
  HermitianMatrix rebuilt = HermitianMatrix::zero(3);
  for (const HermitianMatrix& gi : g) rebuilt += trace_product(h, gi) * gi;
  CHECK((rebuilt - h).mat().max_abs() < 1e-10);

  CHECK_THROWS_AS(hermitian_basis(0), InvalidInputError);
}

TEST_CASE("scalar problem: smallest multiple of the identity above diag(1,2)") {
  SdpProblem prob;
  prob.c = {1.0};
  prob.c_blocks = {HermitianMatrix::diag({1.0, 2.0})};
  prob.f = {{{0, HermitianMatrix::identity(2)}}};

  const SdpSolution sol = solve_clean(prob);
  CHECK(sol.x[0] == doctest::Approx(2.0).epsilon(1e-8));
  CHECK(sol.primal_value == doctest::Approx(2.0).epsilon(1e-8));
  CHECK(sol.dual_value == doctest::Approx(2.0).epsilon(1e-8));

  // Dual optimum is the projector onto the top eigenvector of C.
  REQUIRE(sol.dual_blocks.size() == 1);
  const HermitianMatrix& x = sol.dual_blocks[0];
  CHECK(std::abs(x(0, 0)) < 1e-6);
  CHECK(std::abs(x(1, 1) - 1.0) < 1e-6);
  CHECK(trace_product(x, HermitianMatrix::identity(2)) == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("scalar problem: smallest multiple of the identity above a reflection") {
  SdpProblem prob;
  prob.c = {1.0};
  prob.c_blocks = {pauli_x()};
  prob.f = {{{0, HermitianMatrix::identity(2)}}};
  const SdpSolution sol = solve_clean(prob);
  CHECK(sol.x[0] == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("unbounded problem is detected") {
  // minimize x subject to x <= 10 (as -x 1 >= -10 1): no lower bound.
  SdpProblem prob;
  prob.c = {1.0};
  prob.c_blocks = {-10.0 * HermitianMatrix::identity(2)};
  prob.f = {{{0, -1.0 * HermitianMatrix::identity(2)}}};
  const SdpSolution sol = solve_sdp(prob);
  CHECK(sol.status == SdpStatus::unbounded);
}

TEST_CASE("infeasible problem is detected") {
  // x diag(1,0) >= diag(0,1) forces the (1,1) entry -1 >= 0: impossible.
  SdpProblem prob;
  prob.c = {1.0};
  prob.c_blocks = {HermitianMatrix::diag({0.0, 1.0})};
  prob.f = {{{0, HermitianMatrix::diag({1.0, 0.0})}}};
  const SdpSolution sol = solve_sdp(prob);
  CHECK(sol.status == SdpStatus::infeasible);
}

TEST_CASE("problem validation") {
  SdpProblem empty;
  CHECK_THROWS_AS(solve_sdp(empty), InvalidInputError);

  SdpProblem dangling;
  dangling.c = {1.0, 2.0};
  dangling.c_blocks = {HermitianMatrix::identity(2)};
  dangling.f = {{{0, HermitianMatrix::identity(2)}}, {}};
  CHECK_THROWS_AS(solve_sdp(dangling), InvalidInputError);

  SdpProblem out_of_range;
  out_of_range.c = {1.0};
  out_of_range.c_blocks = {HermitianMatrix::identity(2)};
  out_of_range.f = {{{1, HermitianMatrix::identity(2)}}};
  CHECK_THROWS_AS(solve_sdp(out_of_range), InvalidInputError);

  SdpProblem bad_dim;
  bad_dim.c = {1.0};
  bad_dim.c_blocks = {HermitianMatrix::identity(2)};
  bad_dim.f = {{{0, HermitianMatrix::identity(3)}}};
  CHECK_THROWS_AS(solve_sdp(bad_dim), DimensionError);
}

TEST_CASE("pair encodings have the documented shape") {
  const Effect q = half_plus(pauli_x());
  const Effect p = half_plus(pauli_z());

  const SdpProblem primal = encode_pair_primal(q, p);
  CHECK(primal.kind == EncodingKind::pair_primal);
  CHECK(primal.variables() == 5);  // lambda + 4 basis coefficients
  CHECK(primal.blocks() == 4);
  CHECK(primal.c[0] == 1.0);

  const SdpProblem star = encode_pair_lambda_star(q, p);
  CHECK(star.kind == EncodingKind::pair_lambda_star);
  CHECK(star.variables() == 5);
  CHECK(star.blocks() == 4);

  const Effect q3(HermitianMatrix::identity(3) * 0.5);
  CHECK_THROWS_AS(encode_pair_primal(q, q3), DimensionError);
  CHECK_THROWS_AS(encode_pair_lambda_star(q, q3), DimensionError);
}

TEST_CASE("orthogonal-axis sharp pair: known optimal values") {
  const Effect q = half_plus(pauli_x());
  const Effect p = half_plus(pauli_z());

  const double l0 = lambda0_pair(q, p);
  CHECK(l0 == doctest::Approx(1.0 + 1.0 / std::sqrt(2.0)).epsilon(1e-6));

  const double ls = lambda_star_pair(q, p);
  CHECK(ls == doctest::Approx((std::sqrt(2.0) - 1.0) / 2.0).epsilon(1e-6));
}

TEST_CASE("trivial coin pair Q = P = 1/2") {
  const Effect q(0.5 * HermitianMatrix::identity(2));
  CHECK(lambda0_pair(q, q) == doctest::Approx(0.5).epsilon(1e-7));
  CHECK(lambda_star_pair(q, q) == doctest::Approx(-0.5).epsilon(1e-7));
}

TEST_CASE("identical projective pair sits exactly at the boundary") {
  const Effect q(HermitianMatrix::diag({1.0, 0.0}));
  const SdpSolution sol = solve_sdp(encode_pair_primal(q, q));
  CHECK(sol.primal_value == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(sol.primal_residual < 1e-6);
  CHECK(sol.dual_residual < 1e-6);

  CHECK(lambda_star_pair(q, q) == doctest::Approx(0.0).epsilon(1e-6));
}

TEST_CASE("partially noisy sharp pair") {
  const double eta = 0.8;
  const Effect q = half_plus(pauli_x(), eta);
  const Effect p = half_plus(pauli_z(), eta);
  CHECK(lambda_star_pair(q, p) ==
        doctest::Approx((eta * std::sqrt(2.0) - 1.0) / 2.0).epsilon(1e-6));
}

TEST_CASE("uniform rescaling scales the pair optimum linearly") {
  const Effect q = half_plus(pauli_x());
  const Effect p = half_plus(pauli_z());
  const double full = lambda0_pair(q, p);

  const double eta = 0.5;
  const Effect qs(eta * q.op());
  const Effect ps(eta * p.op());
  CHECK(lambda0_pair(qs, ps) == doctest::Approx(eta * full).epsilon(1e-6));
}

TEST_CASE("optimal coefficients reconstruct a feasible interpolating operator") {
  const Effect q = half_plus(pauli_x());
  const Effect p = half_plus(pauli_z());
  const SdpProblem prob = encode_pair_primal(q, p);
  const SdpSolution sol = solve_clean(prob);

  const auto g = hermitian_basis(2);
  HermitianMatrix s = HermitianMatrix::zero(2);
  for (std::size_t i = 0; i < g.size(); ++i) s += sol.x[1 + i] * g[i];

  const double lambda = sol.x[0];
  CHECK(is_psd(s, 1e-6));
  CHECK(is_psd(q.op() - s, 1e-6));
  CHECK(is_psd(p.op() - s, 1e-6));
  CHECK(is_psd(lambda * HermitianMatrix::identity(2) + s - q.op() - p.op(), 1e-6));
}

TEST_CASE("two-outcome N-valued encoding agrees with the pair encoding") {
  std::mt19937_64 rng(20250815);
  for (int trial = 0; trial < 30; ++trial) {
    const int d = (trial % 2 == 0) ? 2 : 3;
    const Effect q = random_effect(rng, d);
    const Effect p = random_effect(rng, d);

    const double pair = lambda0_pair(q, p);

    const NOutcomePOVM qa({q, Effect(HermitianMatrix::identity(d) - q.op())});
    const NOutcomePOVM pb({p, Effect(HermitianMatrix::identity(d) - p.op())});
    const SdpProblem prob = encode_two_nvalued(qa, pb);
    CHECK(prob.kind == EncodingKind::two_nvalued);
    const double two = solve_clean(prob).primal_value;

    CHECK(std::abs(pair - two) < 1e-7);
  }
}

TEST_CASE("two-setting multi encoding agrees with the pair encoding") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = (trial % 2 == 0) ? 2 : 3;
    const Effect q = random_effect(rng, d);
    const Effect p = random_effect(rng, d);

    const double pair = lambda0_pair(q, p);

    const SdpProblem prob = encode_multi_dichotomic({q, p});
    CHECK(prob.kind == EncodingKind::multi_dichotomic);
    const double multi = solve_clean(prob).primal_value;

    CHECK(std::abs(pair - multi) < 1e-7);
  }
}

TEST_CASE("identical commuting three-outcome measurements are compatible") {
  std::vector<Effect> basis_effects;
  basis_effects.emplace_back(HermitianMatrix::diag({1.0, 0.0, 0.0}));
  basis_effects.emplace_back(HermitianMatrix::diag({0.0, 1.0, 0.0}));
  basis_effects.emplace_back(HermitianMatrix::diag({0.0, 0.0, 1.0}));
  const NOutcomePOVM qa(basis_effects);

  const SdpSolution sol = solve_sdp(encode_two_nvalued(qa, qa));
  CHECK(sol.primal_value == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(sol.primal_residual < 1e-6);
}

TEST_CASE("three trivial measurements stay compatible, three sharp axes do not") {
  const Effect coin(0.5 * HermitianMatrix::identity(2));
  const SdpSolution trivial = solve_clean(encode_multi_dichotomic({coin, coin, coin}));
  CHECK(trivial.primal_value <= 1.0 + 1e-7);

  const SdpSolution axes = solve_clean(encode_multi_dichotomic(
      {half_plus(pauli_x()), half_plus(pauli_y()), half_plus(pauli_z())}));
  CHECK(axes.primal_value > 1.05);
  // Incompatibility grows with the number of pairwise incompatible settings:
  // three mutually unbiased axes exceed the two-axis optimum.
  CHECK(axes.primal_value > 1.0 + 1.0 / std::sqrt(2.0) - 1e-6);

  CHECK_THROWS_AS(encode_multi_dichotomic({coin}), InvalidInputError);
}

TEST_CASE("dual certificate of the incompatibility optimum") {
  const Effect q = half_plus(pauli_x());
  const Effect p = half_plus(pauli_z());

  SUBCASE("shifted program") {
    const SdpProblem prob = encode_pair_lambda_star(q, p);
    const SdpSolution sol = solve_clean(prob);
    const DualCertificate cert = extract_dual_certificate(prob, sol);
    CHECK(cert.objective == doctest::Approx((std::sqrt(2.0) - 1.0) / 2.0).epsilon(1e-6));
    CHECK(cert.rho.mat().trace().real() == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(is_psd(cert.rho - cert.x, 1e-7));
  }

  SUBCASE("direct program") {
    const SdpProblem prob = encode_pair_primal(q, p);
    const SdpSolution sol = solve_clean(prob);
    const DualCertificate cert = extract_dual_certificate(prob, sol);
    CHECK(cert.objective == doctest::Approx(1.0 + 1.0 / std::sqrt(2.0)).epsilon(1e-6));
    CHECK(cert.x.mat().trace().real() == doctest::Approx(1.0).epsilon(1e-6));
  }

  SUBCASE("compatible pair yields a non-positive witness") {
    const Effect proj(HermitianMatrix::diag({1.0, 0.0}));
    const SdpProblem prob = encode_pair_lambda_star(proj, proj);
    const SdpSolution sol = solve_clean(prob);
    const DualCertificate cert = extract_dual_certificate(prob, sol);
    CHECK(cert.objective < 1e-6);
  }

  SUBCASE("rejects non-pair problems and tampered solutions") {
    SdpProblem scalar;
    scalar.c = {1.0};
    scalar.c_blocks = {HermitianMatrix::identity(2)};
    scalar.f = {{{0, HermitianMatrix::identity(2)}}};
    const SdpSolution ssol = solve_sdp(scalar);
    CHECK_THROWS_AS(extract_dual_certificate(scalar, ssol), InvalidInputError);

    const SdpProblem prob = encode_pair_lambda_star(q, p);
    const SdpSolution sol = solve_clean(prob);

    SdpSolution wrong_value = sol;
    wrong_value.dual_value += 1.0;
    CHECK_THROWS_AS(extract_dual_certificate(prob, wrong_value), InconsistentSolutionError);

    SdpSolution wrong_block = sol;
    wrong_block.dual_blocks[2] = -1.0 * HermitianMatrix::identity(2);
    CHECK_THROWS_AS(extract_dual_certificate(prob, wrong_block), InconsistentSolutionError);

    SdpSolution truncated = sol;
    truncated.dual_blocks.pop_back();
    CHECK_THROWS_AS(extract_dual_certificate(prob, truncated), InvalidInputError);
  }
}

TEST_CASE("solver is deterministic") {
  const Effect q = half_plus(pauli_x());
  const Effect p = half_plus(pauli_z());
  const SdpProblem prob = encode_pair_lambda_star(q, p);

  const SdpSolution a = solve_sdp(prob);
  const SdpSolution b = solve_sdp(prob);
  REQUIRE(a.x.size() == b.x.size());
  for (std::size_t i = 0; i < a.x.size(); ++i) CHECK(a.x[i] == b.x[i]);
  CHECK(a.primal_value == b.primal_value);
  CHECK(a.dual_value == b.dual_value);
  for (std::size_t blk = 0; blk < a.dual_blocks.size(); ++blk) {
    const ComplexMatrix& ma = a.dual_blocks[blk].mat();
    const ComplexMatrix& mb = b.dual_blocks[blk].mat();
    for (int i = 0; i < ma.rows(); ++i)
      for (int j = 0; j < ma.cols(); ++j) CHECK(ma(i, j) == mb(i, j));
  }
}
