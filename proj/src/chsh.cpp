#include <algorithm>
#include <cmath>
#include <numbers>

#include "incompat/chsh.hpp"

namespace incompat::chsh {

namespace {

using linalg::ComplexMatrix;
using linalg::cplx;

constexpr double kPi = std::numbers::pi;

void require_unit_square(const HermitianMatrix& f, double tol) {
  const ComplexMatrix sq = f.mat() * f.mat();
  if ((sq - ComplexMatrix::identity(f.dim())).max_abs() > tol)
    throw InvalidInputError("factor does not square to the identity");
}

// The 2d x 2d matrix whose largest eigenvalue is mu(phi).
HermitianMatrix scan_matrix(const Effect& q, const Effect& p, double phi) {
  const int d = q.dim();
  const double c = std::cos(phi);
  const double s = std::sin(phi);

  ComplexMatrix k(2, 2);
  k(0, 0) = c * c;
  k(0, 1) = c * s;
  k(1, 0) = c * s;
  k(1, 1) = s * s;

  const HermitianMatrix deficit =
      q.op() + p.op() - HermitianMatrix::identity(d);
  HermitianMatrix m = linalg::kron_herm(deficit, linalg::hermitian_unchecked(std::move(k)));
  m -= linalg::kron_herm(q.op(), HermitianMatrix::diag({1.0, 0.0}));
  m -= linalg::kron_herm(p.op(), HermitianMatrix::diag({0.0, 1.0}));
  return m;
}

double mu_eval(const Effect& q, const Effect& p, double phi) {
  return linalg::hermitian_eig(scan_matrix(q, p, phi)).eigenvalues.front();
}

// Golden-section maximization; returns the best (phi, value) observed.
template <typename F>
std::pair<double, double> golden_max(const F& f, double lo, double hi, double tol) {
  const double inv_gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_gr * (b - a);
  double d = a + inv_gr * (b - a);
  double fc = f(c), fd = f(d);
  double best_x = (fc >= fd) ? c : d;
  double best_v = std::max(fc, fd);
  while (b - a > tol) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_gr * (b - a);
      fc = f(c);
      if (fc > best_v) {
        best_v = fc;
        best_x = c;
      }
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_gr * (b - a);
      fd = f(d);
      if (fd > best_v) {
        best_v = fd;
        best_x = d;
      }
    }
  }
  return {best_x, best_v};
}

}  // namespace

BellOperator bell_operator(const HermitianMatrix& a1, const HermitianMatrix& a2,
                           const HermitianMatrix& b1, const HermitianMatrix& b2) {
  if (a1.dim() != a2.dim()) throw DimensionError("A factors differ in dimension");
  if (b1.dim() != b2.dim()) throw DimensionError("B factors differ in dimension");

  BellOperator bo;
  bo.a1 = a1;
  bo.a2 = a2;
  bo.b1 = b1;
  bo.b2 = b2;
  bo.matrix =
      0.5 * (linalg::kron_herm(a1, b1 + b2) + linalg::kron_herm(a2, b1 - b2));
  return bo;
}

double bell_square_residual(const BellOperator& bo) {
  for (const HermitianMatrix* f : {&bo.a1, &bo.a2, &bo.b1, &bo.b2})
    require_unit_square(*f, 1e-9);

  // Expanding the square and using F^2 = 1 on every factor leaves only the
  // cross terms: B^2 = 1 + (1/4)(A2 A1 - A1 A2) (x) (B1 B2 - B2 B1).
  const ComplexMatrix bsq = bo.matrix.mat() * bo.matrix.mat();
  const ComplexMatrix cross =
      linalg::kron(linalg::commutator(bo.a2, bo.a1), linalg::commutator(bo.b1, bo.b2));
  const ComplexMatrix residual =
      bsq - ComplexMatrix::identity(bo.matrix.dim()) - cplx(0.25) * cross;
  return linalg::spectral_norm(residual);
}

double max_violation_fixed_b(const SharpObservable& a1, const SharpObservable& a2) {
  const double cn = linalg::commutator_norm(a1.op(), a2.op());
  const double value = std::sqrt(1.0 + cn * cn / 4.0);

  // On small dimensions, confirm against the assembled operator with Bob
  // copying Alice (the tensor square grows as d^2, so cap the check).
  const int d = a1.dim();
  if (d * d <= 256) {
    const BellOperator bo = bell_operator(a1.op(), a2.op(), a1.op(), a2.op());
    if (std::abs(linalg::operator_norm(bo.matrix) - value) > 1e-8)
      throw InconsistentSolutionError(
          "copied-observable expectation disagrees with the commutator formula");
  }
  return value;
}

double max_violation_vn(const SharpObservable& a1, const SharpObservable& a2) {
  return std::sqrt(1.0 + linalg::commutator_norm(a1.op(), a2.op()) / 2.0);
}

double mu_of_phi(const Effect& q, const Effect& p, double phi) {
  if (q.dim() != p.dim()) throw DimensionError("effect dimensions differ");
  if (!(phi >= 0.0 && phi <= kPi))
    throw InvalidInputError("angle must lie in [0, pi]");
  return mu_eval(q, p, phi);
}

ScanResult lambda_star_scan(const Effect& q, const Effect& p, const ScanOptions& opts) {
  if (q.dim() != p.dim()) throw DimensionError("effect dimensions differ");
  if (opts.grid < 2) throw InvalidInputError("grid must have at least 2 cells");
  if (!(opts.refine_tol > 0.0)) throw InvalidInputError("refine_tol must be positive");

  const int n = opts.grid;
  ScanResult result;
  result.profile.reserve(n + 1);
  std::vector<double> val(n + 1);
  for (int k = 0; k <= n; ++k) {
    const double phi = std::min(kPi, kPi * static_cast<double>(k) / n);
    val[k] = mu_eval(q, p, phi);
    result.profile.emplace_back(phi, val[k]);
  }

  const auto f = [&](double phi) { return mu_eval(q, p, phi); };

  result.lambda_star = val[0];
  result.phi_star = 0.0;
  for (int k = 0; k <= n; ++k) {
    const bool left_ok = (k == 0) || (val[k] >= val[k - 1]);
    const bool right_ok = (k == n) || (val[k] >= val[k + 1]);
    if (!left_ok || !right_ok) continue;

    const double lo = result.profile[std::max(0, k - 1)].first;
    const double hi = result.profile[std::min(n, k + 1)].first;
    auto [phi_best, mu_best] = golden_max(f, lo, hi, opts.refine_tol);
    if (val[k] >= mu_best) {
      mu_best = val[k];
      phi_best = result.profile[k].first;
    }
    if (mu_best > result.lambda_star) {
      result.lambda_star = mu_best;
      result.phi_star = phi_best;
    }
  }
  return result;
}

double max_chsh(const Effect& q, const Effect& p, const ScanOptions& opts) {
  return 1.0 + 2.0 * lambda_star_scan(q, p, opts).lambda_star;
}

ChshWitness extract_witness(const Effect& q, const Effect& p,
                            const ScanOptions& opts) {
  const ScanResult scan = lambda_star_scan(q, p, opts);
  const int d = q.dim();
  const double c = std::cos(scan.phi_star);
  const double s = std::sin(scan.phi_star);

  // Bob's reflections: 1 - 2*diag(1,0) and 1 - 2*[[c^2,cs],[cs,s^2]].
  ComplexMatrix b2_small(2, 2);
  b2_small(0, 0) = 1.0 - 2.0 * c * c;
  b2_small(0, 1) = -2.0 * c * s;
  b2_small(1, 0) = -2.0 * c * s;
  b2_small(1, 1) = 1.0 - 2.0 * s * s;
  const HermitianMatrix bob1 = HermitianMatrix::diag({-1.0, 1.0});
  const HermitianMatrix bob2 = linalg::hermitian_unchecked(std::move(b2_small));

  const HermitianMatrix alice1 =
      HermitianMatrix::identity(d) - 2.0 * p.op();  // 1 - 2P
  const HermitianMatrix alice2 =
      2.0 * q.op() - HermitianMatrix::identity(d);  // 2Q - 1

  const linalg::Spectrum top = linalg::hermitian_eig(scan_matrix(q, p, scan.phi_star));
  ComplexMatrix psi(2 * d, 1);
  double norm = 0.0;
  for (int i = 0; i < 2 * d; ++i) {
    psi(i, 0) = top.eigenvectors(i, 0);
    norm += std::norm(psi(i, 0));
  }
  psi *= cplx(1.0 / std::sqrt(norm));

  const BellOperator bo = bell_operator(alice1, alice2, bob1, bob2);
  const ComplexMatrix expectation = psi.adjoint() * (bo.matrix.mat() * psi);

  ChshWitness w;
  w.psi.resize(2 * d);
  for (int i = 0; i < 2 * d; ++i) w.psi[i] = psi(i, 0);
  w.b1 = linalg::kron_herm(HermitianMatrix::identity(d), bob1);
  w.b2 = linalg::kron_herm(HermitianMatrix::identity(d), bob2);
  w.phi_star = scan.phi_star;
  w.value = expectation(0, 0).real();
  return w;
}

}  // namespace incompat::chsh
