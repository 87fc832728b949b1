#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "tival/rational.hpp"
#include "tival/value_map.hpp"

namespace tival {

/// Malformed step-function data (bad breakpoints, overlapping intervals, ...).
class StepFnError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An operation would need a tail period or piece count beyond the
/// configured limits. Never recovered from by approximation.
class PeriodExplosion : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Half-open interval [lo, hi).
struct Interval {
  Rational lo;
  Rational hi;
};

/// A constant piece starting at `start`; it extends to the next piece's start.
struct Piece {
  Rational start;
  Rational value;
  friend bool operator==(const Piece&, const Piece&) = default;
};

/// Caps guarding binary operations against lcm-period blow-up.
struct Limits {
  mpz_class max_period_num = mpz_class(1) << 64;
  mpz_class max_period_den = mpz_class(1) << 64;
  std::size_t max_pieces = std::size_t{1} << 22;
};

const Limits& default_limits();

/// One period of a tail: pieces tiling [0, period).
class PeriodicCell {
 public:
  /// Validates (first start 0, strictly increasing, all < period) and merges
  /// equal neighbours. A single-valued cell becomes the period-1 constant cell.
  PeriodicCell(Rational period, std::vector<Piece> pieces);

  static PeriodicCell constant(const Rational& c);

  const Rational& period() const { return period_; }
  std::span<const Piece> pieces() const { return pieces_; }

  /// Value at offset in [0, period).
  const Rational& at(const Rational& offset) const;
  std::optional<Rational> constant_value() const;
  bool is_zero() const;

  /// Integral over [0, y] for y in [0, period].
  Rational integral_to(const Rational& y) const;
  Rational integral() const { return integral_to(period_); }

  /// The cell of the reflected tail: value at y is (a.e.) the value at period - y.
  PeriodicCell reversed() const;

  friend bool operator==(const PeriodicCell&, const PeriodicCell&) = default;

 private:
  Rational period_;
  std::vector<Piece> pieces_;
};

/// Eventually periodic rational step function on the real line: a compact
/// core [core_start, core_end) of constant pieces, a periodic left tail
/// anchored at core_start and a periodic right tail anchored at core_end.
/// Every piece is half-open, so two representations agree a.e. iff they
/// agree pointwise.
class StepFn {
 public:
  /// The core is empty iff core_start == core_end; otherwise core[0].start
  /// must equal core_start and starts must be strictly increasing below
  /// core_end.
  StepFn(PeriodicCell left, Rational core_start, std::vector<Piece> core, Rational core_end,
         PeriodicCell right);

  const PeriodicCell& left_tail() const { return left_; }
  const PeriodicCell& right_tail() const { return right_; }
  const Rational& core_start() const { return core_start_; }
  const Rational& core_end() const { return core_end_; }
  std::span<const Piece> core() const { return core_; }

  /// Pointwise value of the canonical representative.
  Rational operator()(const Rational& x) const;

  friend bool operator==(const StepFn&, const StepFn&) = default;

 private:
  PeriodicCell left_;
  Rational core_start_;
  std::vector<Piece> core_;
  Rational core_end_;
  PeriodicCell right_;
};

StepFn make_constant(const Rational& c);
/// Indicator of a finite disjoint union of [lo, hi) intervals.
StepFn make_indicator(std::span<const Interval> intervals);
StepFn make_periodic(const PeriodicCell& cell, const Rational& anchor);
/// Indicator of [0, inf) (right) or (-inf, 0) (left).
StepFn half_line(bool right);

Rational eval(const StepFn& u, const Rational& x);

/// Breakpoints of u inside [a, b), always starting with a.
std::vector<Rational> breakpoints_in(const StepFn& u, const Rational& a, const Rational& b,
                                     const Limits& lim = default_limits());

using BinaryOp = std::function<Rational(const Rational&, const Rational&)>;
using UnaryOp = std::function<Rational(const Rational&)>;

/// Pointwise op(u, v); tails realigned on lcm periods, cores refined on the
/// union of breakpoints.
StepFn combine(const StepFn& u, const StepFn& v, const BinaryOp& op,
               const Limits& lim = default_limits());
StepFn map_values(const StepFn& u, const UnaryOp& f);

StepFn add(const StepFn& u, const StepFn& v, const Limits& lim = default_limits());
StepFn sub(const StepFn& u, const StepFn& v, const Limits& lim = default_limits());
StepFn mul(const StepFn& u, const StepFn& v, const Limits& lim = default_limits());
StepFn scale(const Rational& alpha, const StepFn& u);
StepFn join(const StepFn& u, const StepFn& v, const Limits& lim = default_limits());
StepFn meet(const StepFn& u, const StepFn& v, const Limits& lim = default_limits());
StepFn abs(const StepFn& u);
/// Graph shifted right by t: (T_t u)(x) = u(x - t).
StepFn translate(const StepFn& u, const Rational& t);
/// x -> u(-x), up to a null set.
StepFn reflect(const StepFn& u);
/// f o u; throws ValueMapError if f is undefined at an attained value.
StepFn compose(const ValueMap& f, const StepFn& u);

bool eq_ae(const StepFn& u, const StepFn& v, const Limits& lim = default_limits());
/// u <= v almost everywhere.
bool le_ae(const StepFn& u, const StepFn& v, const Limits& lim = default_limits());
Rational ess_sup_norm(const StepFn& u);
/// Sorted distinct values attained by u (each on a set of positive measure).
std::vector<Rational> attained_values(const StepFn& u);

bool has_compact_support(const StepFn& u);
/// u * indicator of [0, inf).
StepFn restrict_right(const StepFn& u);
/// u * indicator of (-inf, 0).
StepFn restrict_left(const StepFn& u);

/// For u supported in (0, n): the function equal to u(x mod n) on (0, inf)
/// and 0 on (-inf, 0]. Satisfies u + T_n(result) == result.
StepFn prolong_periodic(const StepFn& u, const Rational& n);

StepFn operator+(const StepFn& u, const StepFn& v);
StepFn operator-(const StepFn& u, const StepFn& v);
StepFn operator-(const StepFn& u);
StepFn operator*(const Rational& alpha, const StepFn& u);

}  // namespace tival
