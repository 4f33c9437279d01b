#include "incompat/nosignal.hpp"

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>

namespace incompat::nosignal {

namespace {

void check_distribution(const std::vector<double>& p, std::size_t want) {
  if (p.size() != want)
    throw InvalidInputError("distribution has " + std::to_string(p.size()) +
                            " entries, expected " + std::to_string(want));
  double sum = 0.0;
  for (double v : p) {
    if (!(v >= -1e-12))
      throw InvalidInputError("distribution has a negative entry");
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw InvalidInputError("distribution does not sum to 1");
}

}  // namespace

TripleDistribution::TripleDistribution(int n_a1, int n_a2, int n_b,
                                       std::vector<double> p)
    : n_a1_(n_a1), n_a2_(n_a2), n_b_(n_b), p_(std::move(p)) {
  if (n_a1_ < 1 || n_a2_ < 1 || n_b_ < 1)
    throw InvalidInputError("outcome cardinalities must be at least 1");
  check_distribution(p_, static_cast<std::size_t>(n_a1_) * n_a2_ * n_b_);
}

std::vector<double> TripleDistribution::marginal_a() const {
  std::vector<double> m(static_cast<std::size_t>(n_a1_) * n_a2_, 0.0);
  for (int a1 = 0; a1 < n_a1_; ++a1)
    for (int a2 = 0; a2 < n_a2_; ++a2)
      for (int b = 0; b < n_b_; ++b) m[a1 * n_a2_ + a2] += p(a1, a2, b);
  return m;
}

QuadDistribution::QuadDistribution(int n_a1, int n_a2, int n_b1, int n_b2,
                                   std::vector<double> p)
    : n_a1_(n_a1), n_a2_(n_a2), n_b1_(n_b1), n_b2_(n_b2), p_(std::move(p)) {
  if (n_a1_ < 1 || n_a2_ < 1 || n_b1_ < 1 || n_b2_ < 1)
    throw InvalidInputError("outcome cardinalities must be at least 1");
  check_distribution(p_,
                     static_cast<std::size_t>(n_a1_) * n_a2_ * n_b1_ * n_b2_);
}

QuadDistribution join_distributions(const TripleDistribution& t1,
                                    const TripleDistribution& t2, double tol) {
  if (t1.n_a1() != t2.n_a1() || t1.n_a2() != t2.n_a2())
    throw DimensionError("the two distributions disagree on the shared outcome counts");
  if (!(tol >= 0.0)) throw InvalidInputError("tolerance must be nonnegative");

  const std::vector<double> m1 = t1.marginal_a();
  const std::vector<double> m2 = t2.marginal_a();
  double dev = 0.0;
  for (std::size_t k = 0; k < m1.size(); ++k)
    dev = std::max(dev, std::abs(m1[k] - m2[k]));
  if (dev > tol)
    throw SignalingError(
        dev, "the marginal over the original pair depends on the partner setting");

  const int na1 = t1.n_a1(), na2 = t1.n_a2(), nb1 = t1.n_b(), nb2 = t2.n_b();
  std::vector<double> q(static_cast<std::size_t>(na1) * na2 * nb1 * nb2, 0.0);
  double sum = 0.0;
  std::size_t idx = 0;
  for (int a1 = 0; a1 < na1; ++a1)
    for (int a2 = 0; a2 < na2; ++a2) {
      const double shared = 0.5 * (m1[a1 * na2 + a2] + m2[a1 * na2 + a2]);
      for (int b1 = 0; b1 < nb1; ++b1)
        for (int b2 = 0; b2 < nb2; ++b2, ++idx) {
          if (shared <= 0.0) continue;
          q[idx] = t1.p(a1, a2, b1) * t2.p(a1, a2, b2) / shared;
          sum += q[idx];
        }
    }
  // Tolerated marginal mismatch leaks into the total mass; renormalize so the
  // result is a distribution regardless (a no-op beyond roundoff when the
  // marginals agree exactly).
  if (sum > 0.0)
    for (double& v : q) v /= sum;
  return QuadDistribution(na1, na2, nb1, nb2, std::move(q));
}

double chsh_value_classical(const QuadDistribution& q) {
  if (q.n_a1() != 2 || q.n_a2() != 2 || q.n_b1() != 2 || q.n_b2() != 2)
    throw InvalidInputError("the classical game value needs binary outcomes everywhere");
  double acc = 0.0;
  for (int a1 = 0; a1 < 2; ++a1)
    for (int a2 = 0; a2 < 2; ++a2)
      for (int b1 = 0; b1 < 2; ++b1)
        for (int b2 = 0; b2 < 2; ++b2) {
          const double sa1 = a1 == 0 ? 1.0 : -1.0;
          const double sa2 = a2 == 0 ? 1.0 : -1.0;
          const double sb1 = b1 == 0 ? 1.0 : -1.0;
          const double sb2 = b2 == 0 ? 1.0 : -1.0;
          acc += q.p(a1, a2, b1, b2) *
                 (sa1 * (sb1 + sb2) + sa2 * (sb1 - sb2));
        }
  return 0.5 * std::abs(acc);
}

}  // namespace incompat::nosignal
