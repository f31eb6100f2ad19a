#pragma once

#include <cstddef>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace bdkit {

namespace detail {
inline std::string format_g(double x, int digits) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}
}  // namespace detail

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: unknown family, nonpositive parameter, bad table, ...
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A quantity left the representable floating-point range.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// Forward recursion from recurrence coefficients produced a rate <= 0.
class PositivityViolation : public Error {
 public:
  PositivityViolation(std::size_t index, std::string what)
      : Error("positivity violation at n=" + std::to_string(index) + ": " + what),
        index_(index) {}
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

/// A coefficient sequence is shorter than an evaluation requires.
class InsufficientCoefficients : public Error {
 public:
  using Error::Error;
};

/// S_n(0) vanished, so the kernel identity cannot be normalized.
class DegenerateKernel : public Error {
 public:
  using Error::Error;
};

/// Minimal parameter recursion left (0,1) at index n.
class NotAChainSequencePrefix : public Error {
 public:
  explicit NotAChainSequencePrefix(std::size_t index)
      : Error("not a chain sequence prefix: g_" + std::to_string(index) +
              " left (0,1)"),
        index_(index) {}
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

/// Backward recursion for the maximal parameter sequence did not settle.
class MaximalParamsNonconvergence : public Error {
 public:
  MaximalParamsNonconvergence(double previous, double last)
      : Error("maximal parameter sequence did not converge: M_0 in [" +
              detail::format_g(previous < last ? previous : last, 17) + ", " +
              detail::format_g(previous < last ? last : previous, 17) + "]"),
        previous_(previous),
        last_(last) {}
  double previous() const noexcept { return previous_; }
  double last() const noexcept { return last_; }

 private:
  double previous_;
  double last_;
};

class NegativeMomentWithAtomAtZero : public Error {
 public:
  NegativeMomentWithAtomAtZero()
      : Error("negative-order moment of a measure with an atom at 0") {}
};

class AtomAtZero : public Error {
 public:
  AtomAtZero() : Error("measure has an atom at 0") {}
};

class AllMassAtZero : public Error {
 public:
  AllMassAtZero() : Error("measure has no mass away from 0") {}
};

class Mu0ExceedsBound : public Error {
 public:
  using Error::Error;
};

/// mu0 = 0 corresponds to a = infinity.
class AtomParameterInfinite : public Error {
 public:
  AtomParameterInfinite() : Error("mu0 = 0 corresponds to a = infinity") {}
};

/// Implicit QL iteration on the Jacobi matrix failed to deflate.
class EigenNonconvergence : public Error {
 public:
  using Error::Error;
};

/// Absorbing/reflecting bracket too wide: the state space must grow.
class TruncationTooSmall : public Error {
 public:
  TruncationTooSmall(double estimate, double limit)
      : Error("truncation too small: bracket " + detail::format_g(estimate, 3) +
              " exceeds " + detail::format_g(limit, 3)),
        estimate_(estimate) {}
  double estimate() const noexcept { return estimate_; }

 private:
  double estimate_;
};

/// Two rate sets violate the similarity relations at index n.
class NotSimilar : public Error {
 public:
  NotSimilar(std::size_t index, std::string what)
      : Error("rate sets are not similar at n=" + std::to_string(index) + ": " +
              what),
        index_(index) {}
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

}  // namespace bdkit
