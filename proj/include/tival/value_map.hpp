#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tival/rational.hpp"

namespace tival {

/// Raised when a value map is applied outside its domain or is ill-formed.
class ValueMapError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A real-to-real map f with f(0) = 0, applied pointwise to step-function
/// values (u -> f o u). Monotonicity and continuity are asserted metadata:
/// they cannot be decided from an oracle, so construction only spot-checks
/// the monotone flag on a fixed rational grid.
class ValueMap {
 public:
  using Evaluator = std::function<std::optional<Rational>(const Rational&)>;
  /// m -> an upper bound for sup over [-m, m] of |f|.
  using BoundProfile = std::function<Rational(const Rational&)>;

  struct Flags {
    bool monotone = false;
    bool continuous = false;
    /// Global Lipschitz constant when one is known.
    std::optional<Rational> lipschitz;
  };

  ValueMap(std::string name, Evaluator fn, Flags flags, BoundProfile bound = {});

  static ValueMap identity();
  /// x -> |x|.
  static ValueMap abs0();
  /// x -> clamp(x, lo, hi) - clamp(0, lo, hi); requires lo <= hi.
  static ValueMap clamp(const Rational& lo, const Rational& hi);
  /// x -> c1 x + c2 x^2 + ... + ck x^k (no constant term).
  static ValueMap poly(std::vector<Rational> coeffs);

  const std::string& name() const { return name_; }
  const Flags& flags() const { return flags_; }
  bool has_bound_profile() const { return static_cast<bool>(bound_); }
  /// Throws ValueMapError when no profile was supplied.
  Rational bound(const Rational& m) const;

  std::optional<Rational> try_apply(const Rational& x) const { return fn_(x); }
  /// Throws ValueMapError when x is outside the domain.
  Rational operator()(const Rational& x) const;

 private:
  std::string name_;
  Evaluator fn_;
  Flags flags_;
  BoundProfile bound_;
};

}  // namespace tival
