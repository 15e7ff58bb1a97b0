#pragma once

#include <stdexcept>
#include <string>

namespace stein {

// Bad input: out-of-range parameters, malformed patterns, inconsistent flags.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A computation that was well-posed but could not produce a result.
class RuntimeFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The closed-form gamma* denominator vanished on the sample (Y == 1 almost surely).
class DegenerateDenominator : public RuntimeFailure {
 public:
  DegenerateDenominator(int k, double kappa, double denominator);
  int k() const noexcept { return k_; }
  double kappa() const noexcept { return kappa_; }
  double denominator() const noexcept { return denominator_; }

 private:
  int k_;
  double kappa_;
  double denominator_;
};

// The data-driven intensity interval cannot be truncated to a positive range.
class InvalidInterval : public RuntimeFailure {
 public:
  using RuntimeFailure::RuntimeFailure;
};

// find_sign_change observed zero or several sign changes of the gain kernel.
class SignChangeError : public RuntimeFailure {
 public:
  SignChangeError(const std::string& what, int n_changes)
      : RuntimeFailure(what), n_changes_(n_changes) {}
  int sign_changes() const noexcept { return n_changes_; }

 private:
  int n_changes_;
};

namespace detail {

template <class... Parts>
[[noreturn]] void fail_validation(const Parts&... parts) {
  std::string msg;
  ((msg += parts), ...);
  throw ValidationError(msg);
}

}  // namespace detail
}  // namespace stein
