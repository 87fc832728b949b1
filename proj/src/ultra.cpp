#include "tival/ultra.hpp"

#include <algorithm>
#include <stdexcept>

namespace tival {

std::string to_string(UltraVerdict v) {
  switch (v) {
    case UltraVerdict::ForcedIn: return "ForcedIn";
    case UltraVerdict::ForcedOut: return "ForcedOut";
    case UltraVerdict::Undetermined: return "Undetermined";
  }
  return "?";
}

std::string to_string(Side s) { return s == Side::Right ? "right" : "left"; }

DefinableSet::DefinableSet(StepFn indicator) : indicator_(std::move(indicator)) {
  for (const auto& v : attained_values(indicator_))
    if (!v.is_zero() && v != Rational(1))
      throw StepFnError("definable sets need a 0/1-valued indicator, found value " + v.str());
}

DefinableSet DefinableSet::everything() { return DefinableSet(make_constant(1)); }
DefinableSet DefinableSet::nothing() { return DefinableSet(make_constant(0)); }

DefinableSet DefinableSet::ball_preimage(const StepFn& u, const Rational& center, const Rational& eps) {
  return DefinableSet(map_values(u, [&](const Rational& a) {
    return abs(a - center) < eps ? Rational(1) : Rational(0);
  }));
}

DefinableSet DefinableSet::complement() const {
  return DefinableSet(map_values(indicator_, [](const Rational& a) { return Rational(1) - a; }));
}

DefinableSet DefinableSet::intersect(const DefinableSet& other) const {
  return DefinableSet(meet(indicator_, other.indicator_));
}

DefinableSet DefinableSet::unite(const DefinableSet& other) const {
  return DefinableSet(join(indicator_, other.indicator_));
}

bool DefinableSet::subset_of(const DefinableSet& other) const {
  return le_ae(indicator_, other.indicator_);
}

// Every right Lebesgue-ultrafilter contains (a, inf) minus any null set, so a
// set whose right tail is a.e. all of a period is in; its complement is in
// when the tail is a.e. empty. A tail with both values on positive measure
// is in some right ultrafilters and out of others.
UltraVerdict membership(const DefinableSet& s, const UltrafilterTag& tag) {
  const PeriodicCell& tail =
      tag.side == Side::Right ? s.indicator().right_tail() : s.indicator().left_tail();
  const auto c = tail.constant_value();
  if (!c) return UltraVerdict::Undetermined;
  return c->is_zero() ? UltraVerdict::ForcedOut : UltraVerdict::ForcedIn;
}

const Rational& UltraLimit::value() const {
  if (!determined()) throw std::logic_error("ultralimit is not determined");
  return candidates.front();
}

// For step functions the quantifier over eps reduces to the finitely many
// tail values: {|u - l| < eps} is forced in for every eps iff the tail is
// a.e. l, and every value the tail takes on positive measure is the limit
// along some ultrafilter of that side.
UltraLimit ultralimit(const StepFn& u, const UltrafilterTag& tag) {
  const PeriodicCell& tail = tag.side == Side::Right ? u.right_tail() : u.left_tail();
  std::vector<Rational> vals;
  for (const auto& p : tail.pieces()) vals.push_back(p.value);
  std::sort(vals.begin(), vals.end());
  vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
  return UltraLimit{std::move(vals)};
}

}  // namespace tival
