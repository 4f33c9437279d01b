#pragma once

#include <stdexcept>
#include <string>

namespace incompat {

// Base class for all library errors so callers can catch one type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidInputError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

// The supplied S violates one of the four operator inequalities that make
// {S, Q-S, P-S, 1-Q-P+S} a valid four-outcome observable.
class InfeasibleSError : public Error {
 public:
  enum class Constraint { s_psd, s_le_q, s_le_p, s_ge_q_plus_p_minus_one };

  InfeasibleSError(Constraint which, double violation, const std::string& msg)
      : Error(msg), which_(which), violation_(violation) {}

  Constraint which() const { return which_; }
  double violation() const { return violation_; }

 private:
  Constraint which_;
  double violation_;
};

// Raised by dichotomize_vn when every spectral-projector pair commutes, i.e.
// the two observables admit a trivial joint measurement.
class ObservablesCompatibleError : public Error {
 public:
  using Error::Error;
};

// Raised when the two triple distributions disagree on the shared marginal.
class SignalingError : public Error {
 public:
  SignalingError(double max_deviation, const std::string& msg)
      : Error(msg), max_deviation_(max_deviation) {}

  double max_deviation() const { return max_deviation_; }

 private:
  double max_deviation_;
};

class SizeLimitError : public Error {
 public:
  using Error::Error;
};

// A solver result failed the cross-checks it should satisfy by construction.
class InconsistentSolutionError : public Error {
 public:
  using Error::Error;
};

}  // namespace incompat
