#include "incompat/kernels.hpp"

#if defined(INCOMPAT_HAVE_AVX2_BUILD) && (defined(__x86_64__) || defined(_M_X64))

#include <immintrin.h>

namespace incompat::kernels {
namespace {

// Complex doubles are processed two at a time per 256-bit lane in the
// interleaved layout [re0, im0, re1, im1]. All loads/stores are unaligned.

void daxpy_avx2(std::size_t n, double a, const double* x, double* y) {
  const __m256d av = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d yv = _mm256_fmadd_pd(av, _mm256_loadu_pd(x + i),
                                       _mm256_loadu_pd(y + i));
    _mm256_storeu_pd(y + i, yv);
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

double ddot_avx2(std::size_t n, const double* x, const double* y) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc);
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double out = (lanes[0] + lanes[2]) + (lanes[1] + lanes[3]);
  for (; i < n; ++i) out += x[i] * y[i];
  return out;
}

void drot2_avx2(std::size_t n, double c, double s, double* x, double* y) {
  const __m256d cv = _mm256_set1_pd(c);
  const __m256d sv = _mm256_set1_pd(s);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d xv = _mm256_loadu_pd(x + i);
    const __m256d yv = _mm256_loadu_pd(y + i);
    _mm256_storeu_pd(x + i, _mm256_fnmadd_pd(sv, yv, _mm256_mul_pd(cv, xv)));
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(sv, xv, _mm256_mul_pd(cv, yv)));
  }
  for (; i < n; ++i) {
    const double xi = x[i], yi = y[i];
    x[i] = c * xi - s * yi;
    y[i] = s * xi + c * yi;
  }
}

// (ar + i*ai) * v for v holding two interleaved complex doubles.
inline __m256d cmul(__m256d ar, __m256d ai, __m256d v) {
  const __m256d vs = _mm256_permute_pd(v, 0b0101);  // [im0 re0 im1 re1]
  return _mm256_fmaddsub_pd(ar, v, _mm256_mul_pd(ai, vs));
}

void zaxpy_avx2(std::size_t n, cplx a, const cplx* x, cplx* y) {
  const __m256d ar = _mm256_set1_pd(a.real());
  const __m256d ai = _mm256_set1_pd(a.imag());
  auto* yd = reinterpret_cast<double*>(y);
  const auto* xd = reinterpret_cast<const double*>(x);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d xv = _mm256_loadu_pd(xd + 2 * i);
    const __m256d yv = _mm256_loadu_pd(yd + 2 * i);
    _mm256_storeu_pd(yd + 2 * i, _mm256_add_pd(yv, cmul(ar, ai, xv)));
  }
  for (; i < n; ++i) {
    const double xr = x[i].real(), xi = x[i].imag();
    y[i] = cplx(y[i].real() + (a.real() * xr - a.imag() * xi),
                y[i].imag() + (a.real() * xi + a.imag() * xr));
  }
}

cplx zdotc_avx2(std::size_t n, const cplx* x, const cplx* y) {
  const auto* xd = reinterpret_cast<const double*>(x);
  const auto* yd = reinterpret_cast<const double*>(y);
  __m256d p = _mm256_setzero_pd();  // re parts: xr*yr, xi*yi interleaved
  __m256d q = _mm256_setzero_pd();  // im parts: xi*yr, xr*yi interleaved
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d xv = _mm256_loadu_pd(xd + 2 * i);
    const __m256d yv = _mm256_loadu_pd(yd + 2 * i);
    p = _mm256_fmadd_pd(xv, yv, p);
    q = _mm256_fmadd_pd(_mm256_permute_pd(xv, 0b0101), yv, q);
  }
  alignas(32) double pl[4], ql[4];
  _mm256_store_pd(pl, p);
  _mm256_store_pd(ql, q);
  double re = (pl[0] + pl[2]) + (pl[1] + pl[3]);
  double im = (ql[1] + ql[3]) - (ql[0] + ql[2]);
  for (; i < n; ++i) {
    re += x[i].real() * y[i].real() + x[i].imag() * y[i].imag();
    im += x[i].real() * y[i].imag() - x[i].imag() * y[i].real();
  }
  return {re, im};
}

void zrot2_avx2(std::size_t n, cplx u00, cplx u01, cplx u10, cplx u11,
                cplx* x, cplx* y) {
  const __m256d u00r = _mm256_set1_pd(u00.real()), u00i = _mm256_set1_pd(u00.imag());
  const __m256d u01r = _mm256_set1_pd(u01.real()), u01i = _mm256_set1_pd(u01.imag());
  const __m256d u10r = _mm256_set1_pd(u10.real()), u10i = _mm256_set1_pd(u10.imag());
  const __m256d u11r = _mm256_set1_pd(u11.real()), u11i = _mm256_set1_pd(u11.imag());
  auto* xd = reinterpret_cast<double*>(x);
  auto* yd = reinterpret_cast<double*>(y);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d xv = _mm256_loadu_pd(xd + 2 * i);
    const __m256d yv = _mm256_loadu_pd(yd + 2 * i);
    const __m256d nx = _mm256_add_pd(cmul(u00r, u00i, xv), cmul(u01r, u01i, yv));
    const __m256d ny = _mm256_add_pd(cmul(u10r, u10i, xv), cmul(u11r, u11i, yv));
    _mm256_storeu_pd(xd + 2 * i, nx);
    _mm256_storeu_pd(yd + 2 * i, ny);
  }
  for (; i < n; ++i) {
    const double xr = x[i].real(), xi = x[i].imag();
    const double yr = y[i].real(), yi = y[i].imag();
    x[i] = cplx(u00.real() * xr - u00.imag() * xi + u01.real() * yr - u01.imag() * yi,
                u00.real() * xi + u00.imag() * xr + u01.real() * yi + u01.imag() * yr);
    y[i] = cplx(u10.real() * xr - u10.imag() * xi + u11.real() * yr - u11.imag() * yi,
                u10.real() * xi + u10.imag() * xr + u11.real() * yi + u11.imag() * yr);
  }
}

const Ops kAvx2 = {
    "avx2",       daxpy_avx2, ddot_avx2, drot2_avx2,
    zaxpy_avx2,  zdotc_avx2, zrot2_avx2,
};

}  // namespace

const Ops* avx2_ops() {
  static const bool supported =
      __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return supported ? &kAvx2 : nullptr;
}

}  // namespace incompat::kernels

#else

namespace incompat::kernels {
const Ops* avx2_ops() { return nullptr; }
}  // namespace incompat::kernels

#endif
