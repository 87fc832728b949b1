#pragma once

#include <string>
#include <variant>
#include <vector>

#include "tival/rational.hpp"
#include "tival/stepfn.hpp"

namespace tival {

enum class Side { Right, Left };

/// Names a right (or left) Lebesgue-ultrafilter. It carries no choice data:
/// only memberships forced by the axioms are ever decided, so every verdict
/// holds for all ultrafilters of the given side at once.
///
/// There is no bilateral tag: an ultrafilter containing every complement of
/// a bounded interval already contains (0, inf) or (-inf, 0) and hence is a
/// right or a left one.
struct UltrafilterTag {
  Side side = Side::Right;
  std::string id = "U";
  friend bool operator==(const UltrafilterTag&, const UltrafilterTag&) = default;
};

enum class UltraVerdict { ForcedIn, ForcedOut, Undetermined };

std::string to_string(UltraVerdict v);
std::string to_string(Side s);

/// A set given by its 0/1-valued indicator step function.
class DefinableSet {
 public:
  /// Throws StepFnError unless every attained value is 0 or 1.
  explicit DefinableSet(StepFn indicator);

  static DefinableSet everything();
  static DefinableSet nothing();
  /// {x : |u(x) - center| < eps}.
  static DefinableSet ball_preimage(const StepFn& u, const Rational& center, const Rational& eps);

  const StepFn& indicator() const { return indicator_; }

  DefinableSet complement() const;
  DefinableSet intersect(const DefinableSet& other) const;
  DefinableSet unite(const DefinableSet& other) const;
  /// this is a subset of other up to a null set.
  bool subset_of(const DefinableSet& other) const;

 private:
  StepFn indicator_;
};

UltraVerdict membership(const DefinableSet& s, const UltrafilterTag& tag);

/// Outcome of lim_U u over all ultrafilters of one side.
struct UltraLimit {
  /// Sorted candidate values. A single candidate means the limit is the
  /// same for every ultrafilter of that side.
  std::vector<Rational> candidates;

  bool determined() const { return candidates.size() == 1; }
  const Rational& value() const;
};

UltraLimit ultralimit(const StepFn& u, const UltrafilterTag& tag);

}  // namespace tival
