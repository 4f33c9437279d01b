#include <algorithm>
#include <cmath>
#include <numeric>

#include "incompat/kernels.hpp"
#include "incompat/linalg.hpp"

namespace incompat::linalg {

RealMatrix::RealMatrix(int rows, int cols) : rows_(rows), cols_(cols) {
  if (!(rows >= 1 && cols >= 1))
    throw InvalidInputError("matrix dimensions must be positive");
  a_.assign(static_cast<std::size_t>(rows) * cols, 0.0);
}

RealMatrix RealMatrix::identity(int d) {
  RealMatrix m(d, d);
  for (int i = 0; i < d; ++i) m(i, i) = 1.0;
  return m;
}

double RealMatrix::max_abs() const {
  double m = 0.0;
  for (double v : a_) m = std::max(m, std::abs(v));
  return m;
}

RealMatrix& RealMatrix::operator+=(const RealMatrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_)
    throw DimensionError("matrix addition shape mismatch");
  for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
  return *this;
}

RealMatrix& RealMatrix::operator-=(const RealMatrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_)
    throw DimensionError("matrix subtraction shape mismatch");
  for (std::size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
  return *this;
}

RealMatrix& RealMatrix::operator*=(double s) {
  for (double& v : a_) v *= s;
  return *this;
}

RealMatrix matmul(const RealMatrix& a, const RealMatrix& b) {
  if (a.cols() != b.rows()) throw DimensionError("matrix product shape mismatch");
  RealMatrix c(a.rows(), b.cols());
  const auto& k = kernels::active();
  for (int i = 0; i < a.rows(); ++i) {
    for (int l = 0; l < a.cols(); ++l) {
      const double ail = a(i, l);
      if (ail == 0.0) continue;
      k.daxpy(static_cast<std::size_t>(b.cols()), ail, b.row(l), c.row(i));
    }
  }
  return c;
}

RealMatrix transpose(const RealMatrix& a) {
  RealMatrix t(a.cols(), a.rows());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  return t;
}

double trace_product_sym(const RealMatrix& a, const RealMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols() || a.rows() != a.cols())
    throw DimensionError("trace_product_sym shape mismatch");
  const auto& k = kernels::active();
  const std::size_t n = static_cast<std::size_t>(a.rows()) * a.cols();
  return k.ddot(n, a.data(), b.data());
}

RealMatrix real_embedding(const HermitianMatrix& h) {
  const int d = h.dim();
  RealMatrix e(2 * d, 2 * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      const cplx v = h(i, j);
      e(i, j) = v.real();
      e(d + i, d + j) = v.real();
      e(i, d + j) = -v.imag();
      e(d + i, j) = v.imag();
    }
  return e;
}

namespace {

double offdiag_frobenius(const RealMatrix& a) {
  double s = 0.0;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      if (i != j) s += a(i, j) * a(i, j);
  return std::sqrt(s);
}

double frobenius(const RealMatrix& a) {
  double s = 0.0;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) s += a(i, j) * a(i, j);
  return std::sqrt(s);
}

}  // namespace

RealSpectrum sym_eig(const RealMatrix& m) {
  if (m.rows() != m.cols()) throw DimensionError("sym_eig requires a square matrix");
  const int d = m.rows();
  RealMatrix a = m;
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      const double v = 0.5 * (a(i, j) + a(j, i));
      a(i, j) = v;
      a(j, i) = v;
    }
  RealMatrix u = RealMatrix::identity(d);  // rows of u are eigenvectors

  const double stop = 1e-13 * frobenius(a);
  const auto& k = kernels::active();
  const int max_sweeps = 64;

  for (int sweep = 0; sweep < max_sweeps && offdiag_frobenius(a) > stop; ++sweep) {
    for (int p = 0; p < d - 1; ++p) {
      for (int q = p + 1; q < d; ++q) {
        const double h = a(p, q);
        if (h == 0.0) continue;
        const double app = a(p, p);
        const double aqq = a(q, q);
        const double tau = (aqq - app) / (2.0 * h);
        const double t = (tau >= 0.0)
                             ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                             : -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;

        k.drot2(static_cast<std::size_t>(d), c, s, a.row(p), a.row(q));
        for (int r = 0; r < d; ++r) {
          const double arp = a(r, p);
          const double arq = a(r, q);
          a(r, p) = c * arp - s * arq;
          a(r, q) = s * arp + c * arq;
        }
        k.drot2(static_cast<std::size_t>(d), c, s, u.row(p), u.row(q));

        a(p, p) = app - t * h;
        a(q, q) = aqq + t * h;
        a(p, q) = 0.0;
        a(q, p) = 0.0;
      }
    }
  }

  std::vector<int> order(d);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&a](int lhs, int rhs) { return a(lhs, lhs) > a(rhs, rhs); });

  RealSpectrum out;
  out.eigenvalues.resize(d);
  out.eigenvectors = RealMatrix(d, d);
  for (int col = 0; col < d; ++col) {
    const int src = order[col];
    out.eigenvalues[col] = a(src, src);
    for (int r = 0; r < d; ++r) out.eigenvectors(r, col) = u(src, r);
  }
  return out;
}

bool cholesky(const RealMatrix& a, RealMatrix& lower) {
  if (a.rows() != a.cols()) throw DimensionError("cholesky requires a square matrix");
  const int d = a.rows();
  lower = RealMatrix(d, d);
  const auto& k = kernels::active();
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j <= i; ++j) {
      const double dot = k.ddot(static_cast<std::size_t>(j), lower.row(i), lower.row(j));
      const double v = a(i, j) - dot;
      if (i == j) {
        if (!(v > 0.0)) return false;
        lower(i, i) = std::sqrt(v);
      } else {
        lower(i, j) = v / lower(j, j);
      }
    }
  }
  return true;
}

RealMatrix invert_lower(const RealMatrix& lower) {
  if (lower.rows() != lower.cols())
    throw DimensionError("invert_lower requires a square matrix");
  const int d = lower.rows();
  RealMatrix inv(d, d);
  for (int j = 0; j < d; ++j) {
    inv(j, j) = 1.0 / lower(j, j);
    for (int i = j + 1; i < d; ++i) {
      double s = 0.0;
      for (int l = j; l < i; ++l) s += lower(i, l) * inv(l, j);
      inv(i, j) = -s / lower(i, i);
    }
  }
  return inv;
}

}  // namespace incompat::linalg
