#include "incompat/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "incompat/kernels.hpp"

namespace incompat::linalg {

namespace {

void require(bool ok, const char* msg) {
  if (!ok) throw InvalidInputError(msg);
}

void require_dims(bool ok, const char* msg) {
  if (!ok) throw DimensionError(msg);
}

}  // namespace

ComplexMatrix::ComplexMatrix(int rows, int cols) : rows_(rows), cols_(cols) {
  require(rows >= 1 && cols >= 1, "matrix dimensions must be positive");
  a_.assign(static_cast<std::size_t>(rows) * cols, cplx(0.0, 0.0));
}

ComplexMatrix::ComplexMatrix(int rows, int cols, std::initializer_list<cplx> entries)
    : ComplexMatrix(rows, cols) {
  require(entries.size() == a_.size(), "initializer size does not match matrix shape");
  std::copy(entries.begin(), entries.end(), a_.begin());
}

ComplexMatrix ComplexMatrix::identity(int d) {
  ComplexMatrix m(d, d);
  for (int i = 0; i < d; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::zero(int rows, int cols) { return ComplexMatrix(rows, cols); }

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix out(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) out(j, i) = std::conj((*this)(i, j));
  return out;
}

cplx ComplexMatrix::trace() const {
  require_dims(rows_ == cols_, "trace requires a square matrix");
  cplx t = 0.0;
  for (int i = 0; i < rows_; ++i) t += (*this)(i, i);
  return t;
}

double ComplexMatrix::max_abs() const {
  double m = 0.0;
  for (const cplx& v : a_) m = std::max(m, std::abs(v));
  return m;
}

double ComplexMatrix::frobenius_norm() const {
  double s = 0.0;
  for (const cplx& v : a_) s += std::norm(v);
  return std::sqrt(s);
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& o) {
  require_dims(same_shape(o), "matrix addition shape mismatch");
  for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& o) {
  require_dims(same_shape(o), "matrix subtraction shape mismatch");
  for (std::size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cplx s) {
  for (cplx& v : a_) v *= s;
  return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_dims(a.cols() == b.rows(), "matrix product shape mismatch");
  ComplexMatrix c(a.rows(), b.cols());
  const auto& k = kernels::active();
  for (int i = 0; i < a.rows(); ++i) {
    for (int l = 0; l < a.cols(); ++l) {
      const cplx ail = a(i, l);
      if (ail == cplx(0.0, 0.0)) continue;
      k.zaxpy(static_cast<std::size_t>(b.cols()), ail, b.row(l), c.row(i));
    }
  }
  return c;
}

HermitianMatrix::HermitianMatrix(const ComplexMatrix& m, double tol) {
  require_dims(m.rows() == m.cols(), "Hermitian matrix must be square");
  double asym = 0.0;
  for (int i = 0; i < m.rows(); ++i)
    for (int j = i; j < m.cols(); ++j)
      asym = std::max(asym, std::abs(m(i, j) - std::conj(m(j, i))));
  if (!(asym <= tol))
    throw InvalidInputError("matrix is not Hermitian within tolerance");
  ComplexMatrix s(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i) {
    s(i, i) = m(i, i).real();
    for (int j = i + 1; j < m.cols(); ++j) {
      const cplx v = 0.5 * (m(i, j) + std::conj(m(j, i)));
      s(i, j) = v;
      s(j, i) = std::conj(v);
    }
  }
  mat_ = std::move(s);
}

HermitianMatrix hermitian_unchecked(ComplexMatrix m) {
  return HermitianMatrix(std::move(m), HermitianMatrix::unchecked_tag{});
}

HermitianMatrix hermitian_part(const ComplexMatrix& m) {
  require_dims(m.rows() == m.cols(), "hermitian_part requires a square matrix");
  ComplexMatrix s(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i) {
    s(i, i) = m(i, i).real();
    for (int j = i + 1; j < m.cols(); ++j) {
      const cplx v = 0.5 * (m(i, j) + std::conj(m(j, i)));
      s(i, j) = v;
      s(j, i) = std::conj(v);
    }
  }
  return hermitian_unchecked(std::move(s));
}

HermitianMatrix HermitianMatrix::identity(int d) {
  return hermitian_unchecked(ComplexMatrix::identity(d));
}

HermitianMatrix HermitianMatrix::zero(int d) {
  return hermitian_unchecked(ComplexMatrix(d, d));
}

HermitianMatrix HermitianMatrix::diag(const std::vector<double>& entries) {
  require(!entries.empty(), "diagonal must be non-empty");
  ComplexMatrix m(static_cast<int>(entries.size()), static_cast<int>(entries.size()));
  for (std::size_t i = 0; i < entries.size(); ++i)
    m(static_cast<int>(i), static_cast<int>(i)) = entries[i];
  return hermitian_unchecked(std::move(m));
}

HermitianMatrix& HermitianMatrix::operator+=(const HermitianMatrix& o) {
  mat_ += o.mat_;
  return *this;
}

HermitianMatrix& HermitianMatrix::operator-=(const HermitianMatrix& o) {
  mat_ -= o.mat_;
  return *this;
}

HermitianMatrix& HermitianMatrix::operator*=(double s) {
  mat_ *= cplx(s, 0.0);
  return *this;
}

namespace {

double offdiag_frobenius(const ComplexMatrix& a) {
  double s = 0.0;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      if (i != j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

}  // namespace

Spectrum hermitian_eig(const HermitianMatrix& h) {
  const int d = h.dim();
  require(d >= 1, "eigendecomposition requires dimension >= 1");
  ComplexMatrix a = h.mat();
  // U accumulates the adjoint of the eigenvector matrix: rows of U are the
  // conjugated eigenvectors, so every update is a contiguous row rotation.
  ComplexMatrix u = ComplexMatrix::identity(d);

  const double scale = a.frobenius_norm();
  const double stop = 1e-13 * scale;
  const auto& k = kernels::active();
  const int max_sweeps = 64;

  for (int sweep = 0; sweep < max_sweeps && offdiag_frobenius(a) > stop; ++sweep) {
    for (int p = 0; p < d - 1; ++p) {
      for (int q = p + 1; q < d; ++q) {
        const cplx hpq = a(p, q);
        const double ah = std::abs(hpq);
        if (ah == 0.0) continue;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const cplx phase = hpq / ah;
        const double tau = (aqq - app) / (2.0 * ah);
        const double t = (tau >= 0.0)
                             ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                             : -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;

        // J = diag(1, conj(phase)) * [[c, s], [-s, c]]; apply A <- J^H A J.
        const cplx u01 = -s * phase;
        const cplx u11 = c * phase;
        k.zrot2(static_cast<std::size_t>(d), c, u01, s, u11, a.row(p), a.row(q));
        for (int r = 0; r < d; ++r) {
          const cplx arp = a(r, p);
          const cplx arq = a(r, q);
          a(r, p) = c * arp - (s * std::conj(phase)) * arq;
          a(r, q) = s * arp + (c * std::conj(phase)) * arq;
        }
        k.zrot2(static_cast<std::size_t>(d), c, u01, s, u11, u.row(p), u.row(q));

        a(p, p) = app - t * ah;
        a(q, q) = aqq + t * ah;
        a(p, q) = 0.0;
        a(q, p) = 0.0;
      }
    }
  }

  std::vector<int> order(d);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&a](int lhs, int rhs) {
    return a(lhs, lhs).real() > a(rhs, rhs).real();
  });

  Spectrum out;
  out.eigenvalues.resize(d);
  out.eigenvectors = ComplexMatrix(d, d);
  for (int col = 0; col < d; ++col) {
    const int src = order[col];
    out.eigenvalues[col] = a(src, src).real();
    for (int r = 0; r < d; ++r) out.eigenvectors(r, col) = std::conj(u(src, r));
  }
  return out;
}

double operator_norm(const HermitianMatrix& h) {
  const Spectrum s = hermitian_eig(h);
  return std::max(std::abs(s.eigenvalues.front()), std::abs(s.eigenvalues.back()));
}

double spectral_norm(const ComplexMatrix& m) {
  const ComplexMatrix g = m.adjoint() * m;
  const Spectrum s = hermitian_eig(hermitian_part(g));
  return std::sqrt(std::max(0.0, s.eigenvalues.front()));
}

bool is_psd(const HermitianMatrix& h, double tol) {
  const Spectrum s = hermitian_eig(h);
  return s.eigenvalues.back() >= -tol;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) {
      const cplx aij = a(i, j);
      if (aij == cplx(0.0, 0.0)) continue;
      for (int k = 0; k < b.rows(); ++k)
        for (int l = 0; l < b.cols(); ++l)
          out(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
    }
  return out;
}

HermitianMatrix kron_herm(const HermitianMatrix& a, const HermitianMatrix& b) {
  return hermitian_part(kron(a.mat(), b.mat()));
}

ComplexMatrix commutator(const HermitianMatrix& a, const HermitianMatrix& b) {
  require_dims(a.dim() == b.dim(), "commutator dimension mismatch");
  return a.mat() * b.mat() - b.mat() * a.mat();
}

double commutator_norm(const HermitianMatrix& a, const HermitianMatrix& b) {
  // -i[A,B] is Hermitian, with the same singular values as [A,B].
  const ComplexMatrix k = commutator(a, b) * cplx(0.0, -1.0);
  return operator_norm(hermitian_part(k));
}

namespace {

HermitianMatrix apply_spectral(const HermitianMatrix& h,
                               const std::vector<double>& mapped,
                               const Spectrum& s) {
  const int d = h.dim();
  ComplexMatrix scaled(d, d);
  for (int c = 0; c < d; ++c)
    for (int r = 0; r < d; ++r) scaled(r, c) = s.eigenvectors(r, c) * mapped[c];
  return hermitian_part(scaled * s.eigenvectors.adjoint());
}

}  // namespace

HermitianMatrix psd_sqrt(const HermitianMatrix& h) {
  const Spectrum s = hermitian_eig(h);
  if (s.eigenvalues.back() < -1e-9)
    throw InvalidInputError("psd_sqrt input is not positive semidefinite within tolerance");
  std::vector<double> mapped(s.eigenvalues.size());
  for (std::size_t i = 0; i < mapped.size(); ++i)
    mapped[i] = std::sqrt(std::max(0.0, s.eigenvalues[i]));
  return apply_spectral(h, mapped, s);
}

HermitianMatrix pinv_sqrt(const HermitianMatrix& h) {
  const Spectrum s = hermitian_eig(h);
  if (s.eigenvalues.back() < -1e-9)
    throw InvalidInputError("pinv_sqrt input is not positive semidefinite within tolerance");
  const double cutoff = 1e-10 * std::max(0.0, s.eigenvalues.front());
  std::vector<double> mapped(s.eigenvalues.size());
  for (std::size_t i = 0; i < mapped.size(); ++i)
    mapped[i] = (s.eigenvalues[i] > cutoff && s.eigenvalues[i] > 0.0)
                    ? 1.0 / std::sqrt(s.eigenvalues[i])
                    : 0.0;
  return apply_spectral(h, mapped, s);
}

double trace_product(const HermitianMatrix& a, const HermitianMatrix& b) {
  require_dims(a.dim() == b.dim(), "trace_product dimension mismatch");
  // tr(AB) = sum_ij A_ij conj(B_ij) for Hermitian A, B.
  const auto& k = kernels::active();
  const std::size_t n = static_cast<std::size_t>(a.dim()) * a.dim();
  return k.zdotc(n, b.mat().data(), a.mat().data()).real();
}

}  // namespace incompat::linalg
