#include "tival/cesaro.hpp"

#include <stdexcept>

namespace tival {

namespace {

// Integral of a periodic tail cell anchored at `anchor` over [lo, hi).
Rational cell_integral(const PeriodicCell& cell, const Rational& anchor, const Rational& lo,
                       const Rational& hi) {
  if (!(lo < hi)) return Rational(0);
  const Rational& p = cell.period();
  // F(y) = integral over [anchor, anchor + y) of the periodic extension, any real y.
  auto primitive = [&](const Rational& y) {
    const Rational k(mpq_class(floor(y / p)));
    return k * cell.integral() + cell.integral_to(y - k * p);
  };
  return primitive(hi - anchor) - primitive(lo - anchor);
}

// Integral over [lo, hi) with lo <= hi.
Rational forward_integral(const StepFn& u, const Rational& lo, const Rational& hi) {
  if (!(lo < hi)) return Rational(0);
  Rational acc = cell_integral(u.left_tail(), u.core_start(), lo, min(hi, u.core_start()));
  const auto core = u.core();
  for (std::size_t i = 0; i < core.size(); ++i) {
    const Rational& start = core[i].start;
    const Rational& end = i + 1 < core.size() ? core[i + 1].start : u.core_end();
    const Rational a = max(start, lo);
    const Rational b = min(end, hi);
    if (a < b) acc += core[i].value * (b - a);
  }
  acc += cell_integral(u.right_tail(), u.core_end(), max(lo, u.core_end()), hi);
  return acc;
}

}  // namespace

Rational integral(const StepFn& u, const Rational& a, const Rational& b) {
  return b < a ? -forward_integral(u, b, a) : forward_integral(u, a, b);
}

Rational cesaro_eval(const StepFn& u, const Rational& x) {
  if (x.is_zero()) return u(x);
  return integral(u, Rational(0), x) / x;
}

Rational CesaroLimit::bound_at(const Rational& x) const {
  if (x.sign() <= 0 || x < valid_from)
    throw std::domain_error("Cesaro certificate requested outside its range at x = " + x.str());
  return (core_defect + tail_slack) / x;
}

CesaroLimit cesaro_limit_right(const StepFn& u) {
  const PeriodicCell& tail = u.right_tail();
  Rational mean = tail.integral() / tail.period();
  const Rational& end = u.core_end();
  // integral over [0, end] of (u - mean), with the oriented-integral convention.
  Rational defect = abs(integral(u, Rational(0), end) - mean * end);
  Rational slack = Rational(2) * ess_sup_norm(u) * tail.period();
  return CesaroLimit{std::move(mean), std::move(defect), std::move(slack), end};
}

CesaroLimit cesaro_limit_left(const StepFn& u) { return cesaro_limit_right(reflect(u)); }

std::optional<Rational> has_limit_right(const StepFn& u) { return u.right_tail().constant_value(); }
std::optional<Rational> has_limit_left(const StepFn& u) { return u.left_tail().constant_value(); }

}  // namespace tival
