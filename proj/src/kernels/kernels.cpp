#include "incompat/kernels.hpp"

namespace incompat::kernels {
namespace {

// The complex kernels spell out the real/imaginary arithmetic instead of
// using std::complex operator* so the scalar path performs exactly the same
// operations as the vector path (modulo FMA contraction).

void daxpy_scalar(std::size_t n, double a, const double* x, double* y) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

double ddot_scalar(std::size_t n, const double* x, const double* y) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

void drot2_scalar(std::size_t n, double c, double s, double* x, double* y) {
  for (std::size_t i = 0; i < n; ++i) {
    const double xi = x[i], yi = y[i];
    x[i] = c * xi - s * yi;
    y[i] = s * xi + c * yi;
  }
}

void zaxpy_scalar(std::size_t n, cplx a, const cplx* x, cplx* y) {
  const double ar = a.real(), ai = a.imag();
  for (std::size_t i = 0; i < n; ++i) {
    const double xr = x[i].real(), xi = x[i].imag();
    y[i] = cplx(y[i].real() + (ar * xr - ai * xi),
                y[i].imag() + (ar * xi + ai * xr));
  }
}

cplx zdotc_scalar(std::size_t n, const cplx* x, const cplx* y) {
  double re = 0.0, im = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    re += x[i].real() * y[i].real() + x[i].imag() * y[i].imag();
    im += x[i].real() * y[i].imag() - x[i].imag() * y[i].real();
  }
  return {re, im};
}

void zrot2_scalar(std::size_t n, cplx u00, cplx u01, cplx u10, cplx u11,
                  cplx* x, cplx* y) {
  for (std::size_t i = 0; i < n; ++i) {
    const double xr = x[i].real(), xi = x[i].imag();
    const double yr = y[i].real(), yi = y[i].imag();
    x[i] = cplx(u00.real() * xr - u00.imag() * xi + u01.real() * yr - u01.imag() * yi,
                u00.real() * xi + u00.imag() * xr + u01.real() * yi + u01.imag() * yr);
    y[i] = cplx(u10.real() * xr - u10.imag() * xi + u11.real() * yr - u11.imag() * yi,
                u10.real() * xi + u10.imag() * xr + u11.real() * yi + u11.imag() * yr);
  }
}

const Ops kScalar = {
    "scalar",      daxpy_scalar, ddot_scalar, drot2_scalar,
    zaxpy_scalar, zdotc_scalar, zrot2_scalar,
};

const Ops* g_active = nullptr;

}  // namespace

const Ops& scalar_ops() { return kScalar; }

const Ops& active() {
  if (g_active == nullptr) {
    const Ops* v = avx2_ops();
    g_active = (v != nullptr) ? v : &kScalar;
  }
  return *g_active;
}

void set_active(const Ops& ops) { g_active = &ops; }

}  // namespace incompat::kernels
