#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "incompat/kernels.hpp"

namespace {

using incompat::kernels::cplx;

std::vector<double> random_reals(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(n);
  for (double& x : v) x = u(rng);
  return v;
}

std::vector<cplx> random_complexes(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<cplx> v(n);
  for (cplx& x : v) x = cplx(u(rng), u(rng));
  return v;
}

const std::size_t kSizes[] = {0, 1, 2, 3, 5, 7, 8, 16, 63, 64, 257, 1000};

}  // namespace

TEST_CASE("scalar kernels match hand-computed values") {
  const auto& ops = incompat::kernels::scalar_ops();

  SUBCASE("ddot") {
    const double x[] = {1.0, 2.0, 3.0};
    const double y[] = {4.0, 5.0, 6.0};
    CHECK(ops.ddot(3, x, y) == 32.0);
    CHECK(ops.ddot(0, x, y) == 0.0);
  }

  SUBCASE("daxpy") {
    const double x[] = {1.0, 2.0};
    double y[] = {3.0, 4.0};
    ops.daxpy(2, 2.0, x, y);
    CHECK(y[0] == 5.0);
    CHECK(y[1] == 8.0);
  }

  SUBCASE("drot2 quarter turn") {
    double x[] = {1.0, 0.0};
    double y[] = {0.0, 2.0};
    ops.drot2(2, 0.0, 1.0, x, y);  // x <- -y, y <- x
    CHECK(x[0] == 0.0);
    CHECK(x[1] == -2.0);
    CHECK(y[0] == 1.0);
    CHECK(y[1] == 0.0);
  }

  SUBCASE("zdotc conjugates the left argument") {
    const cplx x[] = {cplx(0.0, 1.0)};
    const cplx y[] = {cplx(1.0, 0.0)};
    const cplx r = ops.zdotc(1, x, y);
    CHECK(r.real() == 0.0);
    CHECK(r.imag() == -1.0);
  }

  SUBCASE("zaxpy with imaginary coefficient") {
    const cplx x[] = {cplx(1.0, 2.0)};
    cplx y[] = {cplx(0.5, 0.0)};
    ops.zaxpy(1, cplx(0.0, 1.0), x, y);  // y += i*(1+2i) = -2 + i
    CHECK(y[0].real() == -1.5);
    CHECK(y[0].imag() == 1.0);
  }

  SUBCASE("zrot2 identity and swap") {
    cplx x[] = {cplx(1.0, 1.0)};
    cplx y[] = {cplx(2.0, -1.0)};
    ops.zrot2(1, cplx(1.0, 0.0), cplx(0.0, 0.0), cplx(0.0, 0.0), cplx(1.0, 0.0), x, y);
    CHECK(x[0] == cplx(1.0, 1.0));
    CHECK(y[0] == cplx(2.0, -1.0));
    ops.zrot2(1, cplx(0.0, 0.0), cplx(1.0, 0.0), cplx(1.0, 0.0), cplx(0.0, 0.0), x, y);
    CHECK(x[0] == cplx(2.0, -1.0));
    CHECK(y[0] == cplx(1.0, 1.0));
  }
}

TEST_CASE("active table can be pinned and restored") {
  const auto& before = incompat::kernels::active();
  incompat::kernels::set_active(incompat::kernels::scalar_ops());
  CHECK(std::string(incompat::kernels::active().name) == "scalar");
  incompat::kernels::set_active(before);
  CHECK(std::string(incompat::kernels::active().name) == std::string(before.name));
}

TEST_CASE("avx2 kernels agree with scalar kernels") {
  const auto* vec = incompat::kernels::avx2_ops();
  if (vec == nullptr) {
    MESSAGE("AVX2 kernels unavailable on this machine; equivalence not exercised");
    return;
  }
  const auto& ref = incompat::kernels::scalar_ops();
  std::mt19937_64 rng(20250815);

  for (std::size_t n : kSizes) {
    CAPTURE(n);
    const double tol = 1e-12 * (static_cast<double>(n) + 1.0);

    SUBCASE("real") {
      const auto x = random_reals(rng, n);
      const auto y0 = random_reals(rng, n);

      auto ya = y0, yb = y0;
      ref.daxpy(n, 0.7, x.data(), ya.data());
      vec->daxpy(n, 0.7, x.data(), yb.data());
      for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(ya[i] - yb[i]) <= tol);

      CHECK(std::abs(ref.ddot(n, x.data(), y0.data()) -
                     vec->ddot(n, x.data(), y0.data())) <= tol);

      auto xa = x, xb = x;
      ya = y0;
      yb = y0;
      const double c = std::cos(0.3), s = std::sin(0.3);
      ref.drot2(n, c, s, xa.data(), ya.data());
      vec->drot2(n, c, s, xb.data(), yb.data());
      for (std::size_t i = 0; i < n; ++i) {
        CHECK(std::abs(xa[i] - xb[i]) <= tol);
        CHECK(std::abs(ya[i] - yb[i]) <= tol);
      }
    }

    SUBCASE("complex") {
      const auto x = random_complexes(rng, n);
      const auto y0 = random_complexes(rng, n);
      const cplx a(0.6, -0.8);

      auto ya = y0, yb = y0;
      ref.zaxpy(n, a, x.data(), ya.data());
      vec->zaxpy(n, a, x.data(), yb.data());
      for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(ya[i] - yb[i]) <= tol);

      CHECK(std::abs(ref.zdotc(n, x.data(), y0.data()) -
                     vec->zdotc(n, x.data(), y0.data())) <= tol);

      const cplx u00(0.6, 0.2), u01(-0.3, 0.4), u10(0.1, -0.5), u11(0.7, 0.3);
      auto xa = x, xb = x;
      ya = y0;
      yb = y0;
      ref.zrot2(n, u00, u01, u10, u11, xa.data(), ya.data());
      vec->zrot2(n, u00, u01, u10, u11, xb.data(), yb.data());
      for (std::size_t i = 0; i < n; ++i) {
        CHECK(std::abs(xa[i] - xb[i]) <= tol);
        CHECK(std::abs(ya[i] - yb[i]) <= tol);
      }
    }
  }
}
