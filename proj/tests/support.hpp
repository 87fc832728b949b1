#pragma once

#include <string_view>
#include <vector>

#include "tival/dsl.hpp"
#include "tival/rational.hpp"
#include "tival/stepfn.hpp"

namespace testing_support {

using tival::Rational;
using tival::StepFn;

inline Rational Q(std::string_view s) { return Rational::parse(s); }
inline StepFn F(std::string_view s) { return tival::dsl::parse_fn(s); }

inline StepFn square_wave() { return F("periodic(2; [0,1)=1, [1,2)=0)"); }

// Every breakpoint produced by the checker generators (and by the shifts
// used in these tests) is a multiple of 1/48, so midpoints of a 1/48 grid
// never sit on a breakpoint.
inline const Rational kGrid(1, 48);

/// Integral of u over [a, b] (a <= b, both on the grid) as a midpoint sum.
inline Rational grid_integral(const StepFn& u, const Rational& a, const Rational& b) {
  Rational sum(0);
  for (Rational x = a; x < b; x += kGrid) sum += u(x + kGrid / Rational(2));
  return sum * kGrid;
}

/// Pointwise comparison on the grid midpoints of [a, b).
template <class Pred>
bool on_grid(const Rational& a, const Rational& b, Pred pred) {
  for (Rational x = a; x < b; x += kGrid)
    if (!pred(x + kGrid / Rational(2))) return false;
  return true;
}

}  // namespace testing_support
