#pragma once

#include <complex>
#include <initializer_list>
#include <vector>

#include "incompat/errors.hpp"

namespace incompat::linalg {

using cplx = std::complex<double>;

// Dense row-major complex matrix. Small sizes (dimension <= a few hundred);
// everything is value-semantic.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(int rows, int cols);
  ComplexMatrix(int rows, int cols, std::initializer_list<cplx> entries);

  static ComplexMatrix identity(int d);
  static ComplexMatrix zero(int rows, int cols);

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  cplx& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * cols_ + j]; }
  const cplx& operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * cols_ + j]; }

  cplx* row(int i) { return a_.data() + static_cast<std::size_t>(i) * cols_; }
  const cplx* row(int i) const { return a_.data() + static_cast<std::size_t>(i) * cols_; }
  cplx* data() { return a_.data(); }
  const cplx* data() const { return a_.data(); }

  ComplexMatrix adjoint() const;
  cplx trace() const;
  double max_abs() const;
  double frobenius_norm() const;

  ComplexMatrix& operator+=(const ComplexMatrix& o);
  ComplexMatrix& operator-=(const ComplexMatrix& o);
  ComplexMatrix& operator*=(cplx s);

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }
  friend ComplexMatrix operator*(ComplexMatrix a, cplx s) { return a *= s; }
  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

  bool same_shape(const ComplexMatrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<cplx> a_;
};

// Square matrix validated (and then exactly symmetrized) to be Hermitian at
// construction. Asymmetry beyond `tol` is rejected.
class HermitianMatrix {
 public:
  HermitianMatrix() = default;
  explicit HermitianMatrix(const ComplexMatrix& m, double tol = 1e-12);

  static HermitianMatrix identity(int d);
  static HermitianMatrix zero(int d);
  static HermitianMatrix diag(const std::vector<double>& entries);

  int dim() const { return mat_.rows(); }
  const ComplexMatrix& mat() const { return mat_; }
  const cplx& operator()(int i, int j) const { return mat_(i, j); }

  HermitianMatrix& operator+=(const HermitianMatrix& o);
  HermitianMatrix& operator-=(const HermitianMatrix& o);
  HermitianMatrix& operator*=(double s);

  friend HermitianMatrix operator+(HermitianMatrix a, const HermitianMatrix& b) { return a += b; }
  friend HermitianMatrix operator-(HermitianMatrix a, const HermitianMatrix& b) { return a -= b; }
  friend HermitianMatrix operator*(double s, HermitianMatrix a) { return a *= s; }
  friend HermitianMatrix operator*(HermitianMatrix a, double s) { return a *= s; }

 private:
  struct unchecked_tag {};
  HermitianMatrix(ComplexMatrix m, unchecked_tag) : mat_(std::move(m)) {}
  friend HermitianMatrix hermitian_unchecked(ComplexMatrix m);

  ComplexMatrix mat_;
};

// Internal fast path for matrices Hermitian by construction (e.g. exact
// symmetrization already applied). Still symmetrizes nothing; caller owns it.
HermitianMatrix hermitian_unchecked(ComplexMatrix m);

// Symmetrizes (m + m^dagger)/2 and wraps it; for products whose asymmetry is
// pure roundoff.
HermitianMatrix hermitian_part(const ComplexMatrix& m);

struct Spectrum {
  std::vector<double> eigenvalues;  // descending
  ComplexMatrix eigenvectors;       // orthonormal columns, same order
};

// Cyclic Jacobi diagonalization. Deterministic (fixed rotation order), stops
// when the off-diagonal Frobenius mass falls below 1e-13 * ||H||_F.
Spectrum hermitian_eig(const HermitianMatrix& h);

double operator_norm(const HermitianMatrix& h);  // max |eigenvalue|
double spectral_norm(const ComplexMatrix& m);    // largest singular value
bool is_psd(const HermitianMatrix& h, double tol);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
HermitianMatrix kron_herm(const HermitianMatrix& a, const HermitianMatrix& b);

// A*B - B*A; anti-Hermitian for Hermitian inputs.
ComplexMatrix commutator(const HermitianMatrix& a, const HermitianMatrix& b);
// Operator norm of the commutator (largest singular value).
double commutator_norm(const HermitianMatrix& a, const HermitianMatrix& b);

// Spectral square root; eigenvalues in [-tol, 0) are clamped to zero,
// eigenvalues below -1e-9 reject the input.
HermitianMatrix psd_sqrt(const HermitianMatrix& h);
// lambda -> lambda^{-1/2} on eigenvalues above the cutoff
// 1e-10 * lambda_max, zero elsewhere.
HermitianMatrix pinv_sqrt(const HermitianMatrix& h);

// tr(a * b); real for Hermitian a, b.
double trace_product(const HermitianMatrix& a, const HermitianMatrix& b);

// Dense row-major real matrix, used for the symmetric real embedding of
// Hermitian matrices and inside the SDP backend.
class RealMatrix {
 public:
  RealMatrix() = default;
  RealMatrix(int rows, int cols);

  static RealMatrix identity(int d);

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  double& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * cols_ + j]; }
  const double& operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * cols_ + j]; }

  double* row(int i) { return a_.data() + static_cast<std::size_t>(i) * cols_; }
  const double* row(int i) const { return a_.data() + static_cast<std::size_t>(i) * cols_; }
  double* data() { return a_.data(); }
  const double* data() const { return a_.data(); }

  double max_abs() const;

  RealMatrix& operator+=(const RealMatrix& o);
  RealMatrix& operator-=(const RealMatrix& o);
  RealMatrix& operator*=(double s);
  friend RealMatrix operator+(RealMatrix a, const RealMatrix& b) { return a += b; }
  friend RealMatrix operator-(RealMatrix a, const RealMatrix& b) { return a -= b; }
  friend RealMatrix operator*(double s, RealMatrix a) { return a *= s; }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> a_;
};

RealMatrix matmul(const RealMatrix& a, const RealMatrix& b);
RealMatrix transpose(const RealMatrix& a);
// tr(a * b) for symmetric b (or symmetric a).
double trace_product_sym(const RealMatrix& a, const RealMatrix& b);

// H = X + iY maps to [[X, -Y], [Y, X]], a real symmetric matrix of twice the
// dimension with each eigenvalue of H doubled in multiplicity.
RealMatrix real_embedding(const HermitianMatrix& h);

struct RealSpectrum {
  std::vector<double> eigenvalues;  // descending
  RealMatrix eigenvectors;          // orthonormal columns
};

// Real symmetric cyclic Jacobi, same contract as hermitian_eig.
RealSpectrum sym_eig(const RealMatrix& a);

// In-place-free lower Cholesky of a symmetric positive definite matrix.
// Returns false (and leaves `lower` unspecified) when a pivot is not
// strictly positive.
bool cholesky(const RealMatrix& a, RealMatrix& lower);

// Inverse of a lower-triangular matrix.
RealMatrix invert_lower(const RealMatrix& lower);

}  // namespace incompat::linalg
