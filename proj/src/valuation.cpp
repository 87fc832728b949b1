#include "tival/valuation.hpp"

#include "tival/cesaro.hpp"

namespace tival {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string tag_suffix(const UltrafilterTag& tag) {
  return tag.side == Side::Left ? ",left" : "";
}

struct MapFlags {
  bool monotone = true;
  bool continuous = true;
};

MapFlags collect_flags(const ValuationSpec& spec) {
  return std::visit(
      overloaded{
          [](const ValuationSpec::BanachLimit& b) {
            return MapFlags{b.f.flags().monotone, b.f.flags().continuous};
          },
          [](const ValuationSpec::RightTail& t) { return collect_flags(*t.inner); },
          [](const ValuationSpec::LeftTail& t) { return collect_flags(*t.inner); },
          [](const ValuationSpec::Series& s) {
            MapFlags acc;
            for (const auto& term : s.terms) {
              acc.monotone = acc.monotone && term.f.flags().monotone;
              acc.continuous = acc.continuous && term.f.flags().continuous;
            }
            return acc;
          },
      },
      spec.variant());
}

bool is_series(const ValuationSpec& spec) {
  return std::holds_alternative<ValuationSpec::Series>(spec.variant());
}

}  // namespace

Rational banach_limit(const StepFn& u, const UltrafilterTag& tag) {
  return tag.side == Side::Right ? cesaro_limit_right(u).mean : cesaro_limit_left(u).mean;
}

SpecPtr ValuationSpec::banach_limit(ValueMap f, UltrafilterTag tag) {
  return SpecPtr(new ValuationSpec(BanachLimit{std::move(tag), std::move(f)}));
}

SpecPtr ValuationSpec::right_tail(SpecPtr inner) {
  return SpecPtr(new ValuationSpec(RightTail{std::move(inner)}));
}

SpecPtr ValuationSpec::left_tail(SpecPtr inner) {
  return SpecPtr(new ValuationSpec(LeftTail{std::move(inner)}));
}

SpecPtr ValuationSpec::series(std::vector<SeriesTerm> terms, Rational tail_bound) {
  if (tail_bound.sign() < 0) throw ValueMapError("series tail bound must be non-negative");
  for (const auto& t : terms)
    if (t.bound.sign() < 0) throw ValueMapError("series term bounds must be non-negative");
  return SpecPtr(new ValuationSpec(Series{std::move(terms), std::move(tail_bound)}));
}

std::string ValuationSpec::str() const {
  return std::visit(
      overloaded{
          [](const BanachLimit& b) { return "blim(" + b.f.name() + tag_suffix(b.tag) + ")"; },
          [](const RightTail& t) { return "right(" + t.inner->str() + ")"; },
          [](const LeftTail& t) { return "left(" + t.inner->str() + ")"; },
          [](const Series& s) {
            std::string out = "series(";
            for (std::size_t i = 0; i < s.terms.size(); ++i)
              out += (i ? ", " : "") + s.terms[i].f.name() + ":" + s.terms[i].bound.str();
            return out + "; tail=" + s.tail_bound.str() + ")";
          },
      },
      v_);
}

Valuation evaluate(const ValuationSpec& spec, const StepFn& u) {
  return std::visit(
      overloaded{
          [&](const ValuationSpec::BanachLimit& b) {
            return Valuation{banach_limit(compose(b.f, u), b.tag), Rational(0)};
          },
          [&](const ValuationSpec::RightTail& t) { return evaluate(*t.inner, restrict_right(u)); },
          [&](const ValuationSpec::LeftTail& t) { return evaluate(*t.inner, restrict_left(u)); },
          [&](const ValuationSpec::Series& s) {
            const Rational m = ess_sup_norm(u);
            Rational sum(0);
            for (const auto& term : s.terms) {
              if (!term.f.has_bound_profile())
                throw ValueMapError("missing bound certificate for series term " + term.f.name());
              if (term.bound < term.f.bound(m))
                throw ValueMapError("bound certificate " + term.bound.str() + " for " + term.f.name() +
                                    " is below sup|f| = " + term.f.bound(m).str() + " on [-" +
                                    m.str() + ", " + m.str() + "]");
              sum += banach_limit(compose(term.f, u), term.tag);
            }
            return Valuation{std::move(sum), s.tail_bound};
          },
      },
      spec.variant());
}

ValuationCertificate is_valuation_certificate(const ValuationSpec& spec) {
  ValuationCertificate cert;
  const MapFlags flags = collect_flags(spec);
  const bool series = is_series(spec);

  cert.valuation = {true, series ? "sum of Banach-limit valuations of maps fixing 0"
                                 : "Banach limits are linear and f o (u v v) + f o (u ^ v) = f o u + f o v"};
  cert.translation_invariant = {true, "Banach limits are translation invariant"};
  cert.monotone = flags.monotone
                      ? ValuationCertificate::Claim{true, "every value map is monotone non-decreasing"}
                      : ValuationCertificate::Claim{false, "some value map is not flagged monotone"};
  cert.continuous =
      flags.continuous
          ? ValuationCertificate::Claim{true, series ? "continuous maps with dominated series of sup bounds"
                                                     : "every value map is continuous"}
          : ValuationCertificate::Claim{false, "some value map is not flagged continuous"};

  // Non-triviality is witnessed exactly on a constant function.
  cert.nontrivial = {false, "no constant witness found"};
  for (const Rational& c : {Rational(1), Rational(-1), Rational(2), Rational(-2), Rational(1, 2),
                            Rational(-1, 2)}) {
    try {
      const Valuation v = evaluate(spec, make_constant(c));
      if (abs(v.value) > v.truncation_error) {
        cert.nontrivial = {true, "mu(const " + c.str() + ") = " + v.value.str() + " != 0"};
        break;
      }
    } catch (const ValueMapError&) {
      continue;
    }
  }
  return cert;
}

}  // namespace tival
