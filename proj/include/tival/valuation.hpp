#pragma once

#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "tival/rational.hpp"
#include "tival/stepfn.hpp"
#include "tival/ultra.hpp"
#include "tival/value_map.hpp"

namespace tival {

/// Banach limit along a right (or left) Lebesgue-ultrafilter: the ultralimit
/// of the Cesaro average. On eventually periodic step functions the Cesaro
/// average converges, so the result is exact and does not depend on which
/// ultrafilter the tag names.
Rational banach_limit(const StepFn& u, const UltrafilterTag& tag);

class ValuationSpec;
using SpecPtr = std::shared_ptr<const ValuationSpec>;

struct SeriesTerm {
  UltrafilterTag tag;
  ValueMap f;
  /// Certified bound for sup over [-m, m] of |f|, m = ||u||_inf.
  Rational bound;
};

/// A functional mu on step functions.
class ValuationSpec {
 public:
  /// u -> Blim_U f(u).
  struct BanachLimit {
    UltrafilterTag tag;
    ValueMap f;
  };
  /// u -> inner(u * chi_(0,inf)).
  struct RightTail {
    SpecPtr inner;
  };
  /// u -> inner(u * chi_(-inf,0)).
  struct LeftTail {
    SpecPtr inner;
  };
  /// Finite truncation of sum_i Blim_{U_i} f_i(u); tail_bound certifies the
  /// omitted terms.
  struct Series {
    std::vector<SeriesTerm> terms;
    Rational tail_bound;
  };
  using Variant = std::variant<BanachLimit, RightTail, LeftTail, Series>;

  static SpecPtr banach_limit(ValueMap f, UltrafilterTag tag = {});
  static SpecPtr right_tail(SpecPtr inner);
  static SpecPtr left_tail(SpecPtr inner);
  static SpecPtr series(std::vector<SeriesTerm> terms, Rational tail_bound);

  const Variant& variant() const { return v_; }
  /// Canonical textual form, parseable by the DSL.
  std::string str() const;

 private:
  explicit ValuationSpec(Variant v) : v_(std::move(v)) {}
  Variant v_;
};

struct Valuation {
  Rational value;
  /// |true value - value| <= truncation_error; zero for non-series specs.
  Rational truncation_error;
};

/// Throws ValueMapError on domain errors and missing/violated bound certificates.
Valuation evaluate(const ValuationSpec& spec, const StepFn& u);

/// Properties that hold by construction for a spec, given its value-map flags.
struct ValuationCertificate {
  struct Claim {
    bool guaranteed = false;
    std::string reason;
  };
  Claim valuation;
  Claim translation_invariant;
  Claim monotone;
  Claim continuous;
  Claim nontrivial;
};

ValuationCertificate is_valuation_certificate(const ValuationSpec& spec);

}  // namespace tival
