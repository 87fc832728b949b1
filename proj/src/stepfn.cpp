#include "tival/stepfn.hpp"

#include <algorithm>
#include <utility>

namespace tival {

const Limits& default_limits() {
  static const Limits limits{};
  return limits;
}

namespace {

// Merges neighbours with equal values.
std::vector<Piece> merge_equal(std::vector<Piece> pieces) {
  std::vector<Piece> out;
  out.reserve(pieces.size());
  for (auto& p : pieces) {
    if (!out.empty() && out.back().value == p.value) continue;
    out.push_back(std::move(p));
  }
  return out;
}

// Index of the piece containing x (pieces sorted by start, x >= first start).
std::size_t locate(std::span<const Piece> pieces, const Rational& x) {
  auto it = std::upper_bound(pieces.begin(), pieces.end(), x,
                             [](const Rational& v, const Piece& p) { return v < p.start; });
  return static_cast<std::size_t>(it - pieces.begin()) - 1;
}

Rational checked_lcm(const Rational& a, const Rational& b, const Limits& lim) {
  Rational p = lcm(a, b);
  if (p.num() > lim.max_period_num || p.den() > lim.max_period_den)
    throw PeriodExplosion("period explosion: lcm(" + a.str() + ", " + b.str() + ") = " + p.str() +
                          " exceeds the configured cap");
  return p;
}

// Appends anchor + k*period + s for every piece start s, over the k range
// covering [lo, hi).
void replicate_cell(const PeriodicCell& cell, const Rational& anchor, const Rational& lo,
                    const Rational& hi, const Limits& lim, std::vector<Rational>& out) {
  if (!(lo < hi)) return;
  const Rational& p = cell.period();
  const auto n_pieces = cell.pieces().size();
  if (n_pieces == 1) return;  // constant cells have no interior breakpoints
  const mpz_class k_lo = floor((lo - anchor) / p);
  const mpz_class k_hi = floor((hi - anchor) / p);
  const mpz_class count = (k_hi - k_lo + 1) * static_cast<unsigned long>(n_pieces);
  if (count > mpz_class(static_cast<unsigned long>(lim.max_pieces)) ||
      out.size() + count.get_ui() > lim.max_pieces)
    throw PeriodExplosion("period explosion: " + count.get_str() +
                          " pieces needed, cap is " + std::to_string(lim.max_pieces));
  for (mpz_class k = k_lo; k <= k_hi; ++k) {
    const Rational base = anchor + Rational(mpq_class(k)) * p;
    for (const auto& piece : cell.pieces()) {
      Rational x = base + piece.start;
      if (lo < x && x < hi) out.push_back(std::move(x));
    }
  }
}

std::vector<Rational> merged_breakpoints(const StepFn& u, const StepFn& v, const Rational& a,
                                         const Rational& b, const Limits& lim) {
  auto bu = breakpoints_in(u, a, b, lim);
  auto bv = breakpoints_in(v, a, b, lim);
  std::vector<Rational> all;
  all.reserve(bu.size() + bv.size());
  std::merge(std::make_move_iterator(bu.begin()), std::make_move_iterator(bu.end()),
             std::make_move_iterator(bv.begin()), std::make_move_iterator(bv.end()),
             std::back_inserter(all));
  all.erase(std::unique(all.begin(), all.end()), all.end());
  if (all.size() > lim.max_pieces)
    throw PeriodExplosion("period explosion: " + std::to_string(all.size()) + " pieces needed");
  return all;
}

std::vector<Piece> sample_pieces(const StepFn& u, const StepFn& v, const BinaryOp& op,
                                 const Rational& a, const Rational& b, const Rational& origin,
                                 const Limits& lim) {
  std::vector<Piece> pieces;
  for (auto& x : merged_breakpoints(u, v, a, b, lim)) {
    Rational value = op(u(x), v(x));
    pieces.push_back({x - origin, std::move(value)});
  }
  return pieces;
}

PeriodicCell map_cell(const PeriodicCell& cell, const UnaryOp& f) {
  std::vector<Piece> pieces;
  for (const auto& p : cell.pieces()) pieces.push_back({p.start, f(p.value)});
  return PeriodicCell(cell.period(), std::move(pieces));
}

bool all_zero(const StepFn& u) {
  auto zero = [](std::span<const Piece> ps) {
    return std::all_of(ps.begin(), ps.end(), [](const Piece& p) { return p.value.is_zero(); });
  };
  return zero(u.core()) && zero(u.left_tail().pieces()) && zero(u.right_tail().pieces());
}

}  // namespace

// ---------------------------------------------------------------------------
// PeriodicCell

PeriodicCell::PeriodicCell(Rational period, std::vector<Piece> pieces)
    : period_(std::move(period)) {
  if (period_.sign() <= 0) throw StepFnError("period must be positive");
  if (pieces.empty()) throw StepFnError("a periodic cell needs at least one piece");
  if (!pieces.front().start.is_zero()) throw StepFnError("cell breakpoints must start at 0");
  for (std::size_t i = 1; i < pieces.size(); ++i)
    if (!(pieces[i - 1].start < pieces[i].start))
      throw StepFnError("cell breakpoints must be strictly increasing");
  if (!(pieces.back().start < period_)) throw StepFnError("cell breakpoints must lie below the period");
  pieces_ = merge_equal(std::move(pieces));
  if (pieces_.size() == 1) period_ = Rational(1);
}

PeriodicCell PeriodicCell::constant(const Rational& c) {
  return PeriodicCell(Rational(1), {Piece{Rational(0), c}});
}

const Rational& PeriodicCell::at(const Rational& offset) const {
  return pieces_[locate(pieces_, offset)].value;
}

std::optional<Rational> PeriodicCell::constant_value() const {
  if (pieces_.size() == 1) return pieces_.front().value;
  return std::nullopt;
}

bool PeriodicCell::is_zero() const {
  return pieces_.size() == 1 && pieces_.front().value.is_zero();
}

Rational PeriodicCell::integral_to(const Rational& y) const {
  Rational acc(0);
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    const Rational& lo = pieces_[i].start;
    if (!(lo < y)) break;
    const Rational hi = min(i + 1 < pieces_.size() ? pieces_[i + 1].start : period_, y);
    acc += pieces_[i].value * (hi - lo);
  }
  return acc;
}

PeriodicCell PeriodicCell::reversed() const {
  // Piece [s_i, s_{i+1}) maps to [p - s_{i+1}, p - s_i).
  std::vector<Piece> out;
  out.reserve(pieces_.size());
  for (std::size_t i = pieces_.size(); i-- > 0;) {
    const Rational end = i + 1 < pieces_.size() ? pieces_[i + 1].start : period_;
    out.push_back({period_ - end, pieces_[i].value});
  }
  return PeriodicCell(period_, std::move(out));
}

// ---------------------------------------------------------------------------
// StepFn

StepFn::StepFn(PeriodicCell left, Rational core_start, std::vector<Piece> core, Rational core_end,
               PeriodicCell right)
    : left_(std::move(left)),
      core_start_(std::move(core_start)),
      core_end_(std::move(core_end)),
      right_(std::move(right)) {
  if (core_end_ < core_start_) throw StepFnError("core_start must not exceed core_end");
  if (core.empty() != (core_start_ == core_end_))
    throw StepFnError("core must be empty exactly when core_start == core_end");
  if (!core.empty()) {
    if (core.front().start != core_start_) throw StepFnError("first core piece must start at core_start");
    for (std::size_t i = 1; i < core.size(); ++i)
      if (!(core[i - 1].start < core[i].start))
        throw StepFnError("core breakpoints must be strictly increasing");
    if (!(core.back().start < core_end_)) throw StepFnError("core breakpoints must lie below core_end");
  }
  core_ = merge_equal(std::move(core));
}

Rational StepFn::operator()(const Rational& x) const {
  if (x < core_start_) return left_.at(mod(x - core_start_, left_.period()));
  if (!(x < core_end_)) return right_.at(mod(x - core_end_, right_.period()));
  return core_[locate(core_, x)].value;
}

Rational eval(const StepFn& u, const Rational& x) { return u(x); }

// ---------------------------------------------------------------------------
// Constructors

StepFn make_constant(const Rational& c) {
  return StepFn(PeriodicCell::constant(c), Rational(0), {}, Rational(0), PeriodicCell::constant(c));
}

StepFn make_indicator(std::span<const Interval> intervals) {
  if (intervals.empty()) return make_constant(Rational(0));
  std::vector<Interval> sorted(intervals.begin(), intervals.end());
  for (const auto& iv : sorted)
    if (!(iv.lo < iv.hi)) throw StepFnError("empty interval [" + iv.lo.str() + "," + iv.hi.str() + ")");
  std::sort(sorted.begin(), sorted.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  std::vector<Piece> core;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (i > 0) {
      if (sorted[i].lo < sorted[i - 1].hi) throw StepFnError("intervals must be disjoint");
      if (sorted[i - 1].hi < sorted[i].lo) core.push_back({sorted[i - 1].hi, Rational(0)});
    }
    core.push_back({sorted[i].lo, Rational(1)});
  }
  return StepFn(PeriodicCell::constant(0), sorted.front().lo, std::move(core), sorted.back().hi,
                PeriodicCell::constant(0));
}

StepFn make_periodic(const PeriodicCell& cell, const Rational& anchor) {
  return StepFn(cell, anchor, {}, anchor, cell);
}

StepFn half_line(bool right) {
  return right ? StepFn(PeriodicCell::constant(0), Rational(0), {}, Rational(0), PeriodicCell::constant(1))
               : StepFn(PeriodicCell::constant(1), Rational(0), {}, Rational(0), PeriodicCell::constant(0));
}

// ---------------------------------------------------------------------------
// Sampling and combination

std::vector<Rational> breakpoints_in(const StepFn& u, const Rational& a, const Rational& b,
                                     const Limits& lim) {
  std::vector<Rational> out;
  if (!(a < b)) return out;
  out.push_back(a);
  replicate_cell(u.left_tail(), u.core_start(), a, min(b, u.core_start()), lim, out);
  auto inside = [&](const Rational& x) { return a < x && x < b; };
  if (inside(u.core_start())) out.push_back(u.core_start());
  for (const auto& p : u.core())
    if (inside(p.start)) out.push_back(p.start);
  if (inside(u.core_end())) out.push_back(u.core_end());
  replicate_cell(u.right_tail(), u.core_end(), max(a, u.core_end()), b, lim, out);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

StepFn combine(const StepFn& u, const StepFn& v, const BinaryOp& op, const Limits& lim) {
  const Rational lo = min(u.core_start(), v.core_start());
  const Rational hi = max(u.core_end(), v.core_end());
  const Rational left_p = checked_lcm(u.left_tail().period(), v.left_tail().period(), lim);
  const Rational right_p = checked_lcm(u.right_tail().period(), v.right_tail().period(), lim);

  PeriodicCell left(left_p, sample_pieces(u, v, op, lo - left_p, lo, lo - left_p, lim));
  std::vector<Piece> core = sample_pieces(u, v, op, lo, hi, Rational(0), lim);
  PeriodicCell right(right_p, sample_pieces(u, v, op, hi, hi + right_p, hi, lim));
  return StepFn(std::move(left), lo, std::move(core), hi, std::move(right));
}

StepFn map_values(const StepFn& u, const UnaryOp& f) {
  std::vector<Piece> core;
  for (const auto& p : u.core()) core.push_back({p.start, f(p.value)});
  return StepFn(map_cell(u.left_tail(), f), u.core_start(), std::move(core), u.core_end(),
                map_cell(u.right_tail(), f));
}

StepFn add(const StepFn& u, const StepFn& v, const Limits& lim) {
  return combine(u, v, [](const Rational& a, const Rational& b) { return a + b; }, lim);
}

StepFn sub(const StepFn& u, const StepFn& v, const Limits& lim) {
  return combine(u, v, [](const Rational& a, const Rational& b) { return a - b; }, lim);
}

StepFn mul(const StepFn& u, const StepFn& v, const Limits& lim) {
  return combine(u, v, [](const Rational& a, const Rational& b) { return a * b; }, lim);
}

StepFn scale(const Rational& alpha, const StepFn& u) {
  return map_values(u, [&alpha](const Rational& a) { return alpha * a; });
}

StepFn join(const StepFn& u, const StepFn& v, const Limits& lim) {
  return combine(u, v, [](const Rational& a, const Rational& b) { return max(a, b); }, lim);
}

StepFn meet(const StepFn& u, const StepFn& v, const Limits& lim) {
  return combine(u, v, [](const Rational& a, const Rational& b) { return min(a, b); }, lim);
}

StepFn abs(const StepFn& u) {
  return map_values(u, [](const Rational& a) { return tival::abs(a); });
}

StepFn translate(const StepFn& u, const Rational& t) {
  std::vector<Piece> core;
  for (const auto& p : u.core()) core.push_back({p.start + t, p.value});
  return StepFn(u.left_tail(), u.core_start() + t, std::move(core), u.core_end() + t, u.right_tail());
}

StepFn reflect(const StepFn& u) {
  std::vector<Piece> core;
  const auto pieces = u.core();
  for (std::size_t i = pieces.size(); i-- > 0;) {
    const Rational end = i + 1 < pieces.size() ? pieces[i + 1].start : u.core_end();
    core.push_back({-end, pieces[i].value});
  }
  return StepFn(u.right_tail().reversed(), -u.core_end(), std::move(core), -u.core_start(),
                u.left_tail().reversed());
}

StepFn compose(const ValueMap& f, const StepFn& u) {
  return map_values(u, [&f](const Rational& a) { return f(a); });
}

// ---------------------------------------------------------------------------
// Queries

bool eq_ae(const StepFn& u, const StepFn& v, const Limits& lim) {
  if (u == v) return true;
  return all_zero(combine(
      u, v, [](const Rational& a, const Rational& b) { return a == b ? Rational(0) : Rational(1); },
      lim));
}

bool le_ae(const StepFn& u, const StepFn& v, const Limits& lim) {
  return all_zero(combine(
      u, v, [](const Rational& a, const Rational& b) { return a <= b ? Rational(0) : Rational(1); },
      lim));
}

Rational ess_sup_norm(const StepFn& u) {
  Rational m(0);
  auto scan = [&m](std::span<const Piece> ps) {
    for (const auto& p : ps) m = max(m, tival::abs(p.value));
  };
  scan(u.core());
  scan(u.left_tail().pieces());
  scan(u.right_tail().pieces());
  return m;
}

std::vector<Rational> attained_values(const StepFn& u) {
  std::vector<Rational> vals;
  auto scan = [&vals](std::span<const Piece> ps) {
    for (const auto& p : ps) vals.push_back(p.value);
  };
  scan(u.core());
  scan(u.left_tail().pieces());
  scan(u.right_tail().pieces());
  std::sort(vals.begin(), vals.end());
  vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
  return vals;
}

bool has_compact_support(const StepFn& u) {
  return u.left_tail().is_zero() && u.right_tail().is_zero();
}

StepFn restrict_right(const StepFn& u) { return mul(u, half_line(true)); }
StepFn restrict_left(const StepFn& u) { return mul(u, half_line(false)); }

StepFn prolong_periodic(const StepFn& u, const Rational& n) {
  if (n.sign() <= 0) throw StepFnError("prolongation period must be positive");
  const Interval window[] = {{Rational(0), n}};
  const StepFn outside = combine(u, make_indicator(window), [](const Rational& a, const Rational& in) {
    return in.is_zero() ? a : Rational(0);
  });
  if (!all_zero(outside))
    throw StepFnError("prolongation needs support inside (0, " + n.str() + ")");
  std::vector<Piece> cell;
  for (auto& x : breakpoints_in(u, Rational(0), n)) {
    Rational value = u(x);
    cell.push_back({std::move(x), std::move(value)});
  }
  return StepFn(PeriodicCell::constant(0), Rational(0), {}, Rational(0),
                PeriodicCell(n, std::move(cell)));
}

StepFn operator+(const StepFn& u, const StepFn& v) { return add(u, v); }
StepFn operator-(const StepFn& u, const StepFn& v) { return sub(u, v); }
StepFn operator-(const StepFn& u) { return scale(Rational(-1), u); }
StepFn operator*(const Rational& alpha, const StepFn& u) { return scale(alpha, u); }

}  // namespace tival
