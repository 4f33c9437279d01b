#pragma once

#include <vector>

#include "incompat/errors.hpp"

namespace incompat::nosignal {

// Probability distribution p(a1, a2, b) observed when one fixed observable is
// measured on the added site: two outcomes for the original pair of
// measurements and one for the partner. Entries are stored row-major in the
// order (a1, a2, b) and must be nonnegative and sum to 1 within 1e-12.
class TripleDistribution {
 public:
  TripleDistribution(int n_a1, int n_a2, int n_b, std::vector<double> p);

  int n_a1() const { return n_a1_; }
  int n_a2() const { return n_a2_; }
  int n_b() const { return n_b_; }
  double p(int a1, int a2, int b) const {
    return p_[(a1 * n_a2_ + a2) * n_b_ + b];
  }

  // Marginal over the partner outcome, indexed a1 * n_a2 + a2.
  std::vector<double> marginal_a() const;

 private:
  int n_a1_, n_a2_, n_b_;
  std::vector<double> p_;
};

// Joint distribution p(a1, a2, b1, b2) over both partner settings at once.
// Entries are stored row-major in the order (a1, a2, b1, b2) and must be
// nonnegative and sum to 1 within 1e-12.
class QuadDistribution {
 public:
  QuadDistribution(int n_a1, int n_a2, int n_b1, int n_b2,
                   std::vector<double> p);

  int n_a1() const { return n_a1_; }
  int n_a2() const { return n_a2_; }
  int n_b1() const { return n_b1_; }
  int n_b2() const { return n_b2_; }
  double p(int a1, int a2, int b1, int b2) const {
    return p_[((a1 * n_a2_ + a2) * n_b1_ + b1) * n_b2_ + b2];
  }

 private:
  int n_a1_, n_a2_, n_b1_, n_b2_;
  std::vector<double> p_;
};

// Glues the two single-setting distributions into one joint distribution:
//
//   p(a1, a2, b1, b2) = t1(a1, a2, b1) * t2(a1, a2, b2) / p(a1, a2),
//
// where p(a1, a2) is the shared marginal (the average of the two inputs'
// marginals; entries with p(a1, a2) = 0 are set to 0). Requires the two
// marginals over the partner outcome to agree entrywise within `tol`,
// otherwise throws SignalingError carrying the largest deviation. All three
// observed distributions are reproduced as marginals of the result.
QuadDistribution join_distributions(const TripleDistribution& t1,
                                    const TripleDistribution& t2,
                                    double tol = 1e-9);

// (1/2) |E[a1 b1] + E[a1 b2] + E[a2 b1] - E[a2 b2]| under `q`, with outcome 0
// mapped to +1 and outcome 1 to -1. Requires binary outcomes on all four
// variables. Never exceeds 1 (up to roundoff) for a valid joint distribution.
double chsh_value_classical(const QuadDistribution& q);

}  // namespace incompat::nosignal
