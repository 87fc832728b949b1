#pragma once

#include <optional>

#include "tival/rational.hpp"
#include "tival/stepfn.hpp"

namespace tival {

/// Exact integral of u over [a, b]; for b < a this is minus the integral
/// over [b, a]. Tail periods are summed in closed form, so the cost does not
/// depend on |b - a|.
Rational integral(const StepFn& u, const Rational& a, const Rational& b);

/// Cesaro-like average (1/x) * integral of u over [0, x]; u(0) at x = 0.
Rational cesaro_eval(const StepFn& u, const Rational& x);

/// Limit of the Cesaro average at +inf together with a convergence
/// certificate: for every x > 0 with x >= valid_from,
///   |cesaro_eval(u, x) - mean| <= (core_defect + tail_slack) / x.
struct CesaroLimit {
  Rational mean;
  /// |integral over [0, core_end] of (u - mean)|.
  Rational core_defect;
  /// 2 * ||u||_inf * right period; bounds one partial period of (u - mean).
  Rational tail_slack;
  Rational valid_from;

  /// The certified bound at x; requires x > 0 and x >= valid_from.
  Rational bound_at(const Rational& x) const;
};

CesaroLimit cesaro_limit_right(const StepFn& u);
/// Limit at -inf, computed on the reflection x -> -x.
CesaroLimit cesaro_limit_left(const StepFn& u);

/// The limit of u itself at +inf when it exists, i.e. when the right tail
/// is a.e. constant.
std::optional<Rational> has_limit_right(const StepFn& u);
std::optional<Rational> has_limit_left(const StepFn& u);

}  // namespace tival
