#pragma once

#include <complex>
#include <cstddef>

namespace incompat::kernels {

using cplx = std::complex<double>;

// Contiguous-vector primitives behind every dense matrix loop in the library
// (matrix products, trace inner products, Jacobi plane rotations). Two
// implementations exist: a portable scalar reference and an AVX2+FMA variant.
// The active one is picked at runtime from cpuid; tests can pin either table
// to compare them on identical data.
struct Ops {
  const char* name;

  // y[i] += a * x[i]
  void (*daxpy)(std::size_t n, double a, const double* x, double* y);
  // sum_i x[i] * y[i]
  double (*ddot)(std::size_t n, const double* x, const double* y);
  // (x, y) <- (c*x - s*y, s*x + c*y)
  void (*drot2)(std::size_t n, double c, double s, double* x, double* y);

  // y[i] += a * x[i]
  void (*zaxpy)(std::size_t n, cplx a, const cplx* x, cplx* y);
  // sum_i conj(x[i]) * y[i]
  cplx (*zdotc)(std::size_t n, const cplx* x, const cplx* y);
  // (x, y) <- (u00*x + u01*y, u10*x + u11*y)
  void (*zrot2)(std::size_t n, cplx u00, cplx u01, cplx u10, cplx u11,
                cplx* x, cplx* y);
};

const Ops& scalar_ops();

// nullptr when the binary was built without AVX2 support or the CPU lacks
// AVX2/FMA.
const Ops* avx2_ops();

const Ops& active();

// Overrides the runtime selection (used by the equivalence tests).
void set_active(const Ops& ops);

}  // namespace incompat::kernels
