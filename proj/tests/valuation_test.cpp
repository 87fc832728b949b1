#include <gtest/gtest.h>

#include "support.hpp"
#include "tival/cesaro.hpp"
#include "tival/checker.hpp"
#include "tival/valuation.hpp"

using namespace tival;
using namespace testing_support;

namespace {

const UltrafilterTag R{Side::Right, "U"};
const UltrafilterTag L{Side::Left, "U"};

StepFn sample(std::uint64_t seed, std::uint64_t i) { return checker::gen_stepfn({.seed = seed}, i); }

SpecPtr geometric_series(const Rational& m, int terms) {
  std::vector<SeriesTerm> t;
  for (int i = 1; i <= terms; ++i)
    t.push_back({UltrafilterTag{Side::Right, "U" + std::to_string(i)}, ValueMap::poly({Rational::pow2(-i)}),
                 m * Rational::pow2(-i)});
  return ValuationSpec::series(std::move(t), m * Rational::pow2(-terms));
}

}  // namespace

TEST(ValueMap, Validation) {
  EXPECT_THROW(ValueMap("shift", [](const Rational& x) -> std::optional<Rational> { return x + 1; }, {}),
               ValueMapError);
  EXPECT_THROW(ValueMap("neg", [](const Rational& x) -> std::optional<Rational> { return -x; }, {.monotone = true}),
               ValueMapError);
  EXPECT_THROW(ValueMap::clamp(2, 1), ValueMapError);
  EXPECT_THROW(ValueMap::poly({}), ValueMapError);
  const ValueMap bare("bare", [](const Rational& x) -> std::optional<Rational> { return x; }, {});
  EXPECT_FALSE(bare.has_bound_profile());
  EXPECT_THROW(bare.bound(1), ValueMapError);
  EXPECT_EQ(ValueMap::abs0().bound(Q("3/2")), Q("3/2"));
}

TEST(ValueMap, Catalogue) {
  const ValueMap c = ValueMap::clamp(Q("1/2"), 2);
  EXPECT_EQ(c(0), Q("0"));
  EXPECT_EQ(c(5), Q("3/2"));
  EXPECT_EQ(c(-5), Q("0"));
  EXPECT_TRUE(c.flags().monotone);
  const ValueMap p = ValueMap::poly({1, 0, 1});
  EXPECT_EQ(p(2), Q("10"));
  EXPECT_TRUE(p.flags().monotone);
  EXPECT_EQ(p.bound(2), Q("10"));
  EXPECT_FALSE(ValueMap::poly({1, 1}).flags().monotone);
  EXPECT_EQ(ValueMap::abs0()(Q("-3")), Q("3"));
  EXPECT_FALSE(ValueMap::abs0().flags().monotone);
  EXPECT_EQ(ValueMap::identity().flags().lipschitz, Q("1"));
}

TEST(BanachLimit, Examples) {
  EXPECT_EQ(banach_limit(square_wave(), R), Q("1/2"));
  EXPECT_EQ(banach_limit(square_wave(), L), Q("1/2"));
  EXPECT_EQ(banach_limit(make_constant(Q("5/3")), R), Q("5/3"));
  const Interval iv[] = {{Q("-2"), Q("3")}};
  EXPECT_EQ(banach_limit(make_indicator(iv), R), Q("0"));
  // Independent of which ultrafilter the tag names.
  EXPECT_EQ(banach_limit(square_wave(), UltrafilterTag{Side::Right, "V"}), Q("1/2"));
}

TEST(BanachLimit, AgreesWithLongCesaroAverage) {
  // Oracle: the Cesaro average far out, within the returned certificate.
  for (std::uint64_t i = 0; i < 50; ++i) {
    const StepFn u = sample(43, i);
    const CesaroLimit lim = cesaro_limit_right(u);
    const Rational x = Q("1000000");
    EXPECT_LE(abs(cesaro_eval(u, x) - banach_limit(u, R)), lim.bound_at(x));
  }
}

TEST(Evaluate, Examples) {
  const Valuation v = evaluate(*ValuationSpec::banach_limit(ValueMap::identity()), square_wave());
  EXPECT_EQ(v.value, Q("1/2"));
  EXPECT_EQ(v.truncation_error, Q("0"));

  const SpecPtr id = ValuationSpec::banach_limit(ValueMap::identity());
  const StepFn one = make_constant(1);
  EXPECT_EQ(evaluate(*ValuationSpec::right_tail(id), one).value, Q("1"));
  const SpecPtr left_id = ValuationSpec::banach_limit(ValueMap::identity(), L);
  EXPECT_EQ(evaluate(*ValuationSpec::left_tail(left_id), one).value, Q("1"));
  // Right Banach limits ignore the left tail and vice versa.
  EXPECT_EQ(evaluate(*ValuationSpec::left_tail(id), one).value, Q("0"));
  EXPECT_EQ(evaluate(*ValuationSpec::right_tail(left_id), one).value, Q("0"));
}

TEST(Evaluate, TailDecomposition) {
  const SpecPtr id = ValuationSpec::banach_limit(ValueMap::identity());
  const SpecPtr left_id = ValuationSpec::banach_limit(ValueMap::identity(), L);
  for (std::uint64_t i = 0; i < 100; ++i) {
    const StepFn u = sample(47, i);
    for (const SpecPtr& s : {id, left_id})
      EXPECT_EQ(evaluate(*s, u).value,
                evaluate(*ValuationSpec::right_tail(s), u).value + evaluate(*ValuationSpec::left_tail(s), u).value);
  }
}

TEST(Evaluate, GeometricSeries) {
  const SpecPtr s = geometric_series(1, 20);
  const Valuation v = evaluate(*s, square_wave());
  // Partial sum of (1/2) 2^-i for i = 1..20.
  EXPECT_EQ(v.value, Q("1/2") * (Q("1") - Rational::pow2(-20)));
  EXPECT_EQ(v.truncation_error, Rational::pow2(-20));
  EXPECT_LE(v.value - v.truncation_error, Q("1/2"));
  EXPECT_GE(v.value + v.truncation_error, Q("1/2"));
}

TEST(Evaluate, SeriesCertificates) {
  const ValueMap bare("bare", [](const Rational& x) -> std::optional<Rational> { return x; }, {});
  std::vector<SeriesTerm> missing{{R, bare, 1}};
  EXPECT_THROW(evaluate(*ValuationSpec::series(missing, 0), square_wave()), ValueMapError);
  std::vector<SeriesTerm> small{{R, ValueMap::identity(), Q("1/2")}};
  EXPECT_THROW(evaluate(*ValuationSpec::series(small, 0), square_wave()), ValueMapError);
  EXPECT_NO_THROW(evaluate(*ValuationSpec::series(small, 0), scale(Q("1/2"), square_wave())));
  EXPECT_THROW(ValuationSpec::series(small, -1), ValueMapError);
}

TEST(Evaluate, Str) {
  EXPECT_EQ(ValuationSpec::banach_limit(ValueMap::identity())->str(), "blim(id)");
  EXPECT_EQ(ValuationSpec::banach_limit(ValueMap::clamp(-1, 2), L)->str(), "blim(clamp(-1,2),left)");
  EXPECT_EQ(ValuationSpec::right_tail(ValuationSpec::banach_limit(ValueMap::abs0()))->str(), "right(blim(abs0))");
  EXPECT_EQ(geometric_series(1, 2)->str(), "series(poly(1/2):1/2, poly(1/4):1/4; tail=1/4)");
}

TEST(Certificate, Examples) {
  const ValuationCertificate id = is_valuation_certificate(*ValuationSpec::banach_limit(ValueMap::identity()));
  for (const auto& c : {id.valuation, id.translation_invariant, id.monotone, id.continuous, id.nontrivial})
    EXPECT_TRUE(c.guaranteed) << c.reason;

  const ValueMap mono_discontinuous("step", [](const Rational& x) -> std::optional<Rational> {
    return x.sign() > 0 ? Rational(1) : Rational(0);
  }, {.monotone = true, .continuous = false});
  const ValuationCertificate m = is_valuation_certificate(*ValuationSpec::banach_limit(mono_discontinuous));
  EXPECT_TRUE(m.valuation.guaranteed);
  EXPECT_TRUE(m.translation_invariant.guaranteed);
  EXPECT_TRUE(m.monotone.guaranteed);
  EXPECT_FALSE(m.continuous.guaranteed);

  const ValuationCertificate s = is_valuation_certificate(*geometric_series(1, 5));
  EXPECT_TRUE(s.monotone.guaranteed);
  EXPECT_TRUE(s.nontrivial.guaranteed);

  const ValuationCertificate a = is_valuation_certificate(*ValuationSpec::banach_limit(ValueMap::abs0()));
  EXPECT_FALSE(a.monotone.guaranteed);
  EXPECT_TRUE(a.continuous.guaranteed);

  const ValueMap zero("zero", [](const Rational&) -> std::optional<Rational> { return Rational(0); },
                      {.monotone = true, .continuous = true});
  EXPECT_FALSE(is_valuation_certificate(*ValuationSpec::banach_limit(zero)).nontrivial.guaranteed);
}

TEST(BanachLimitProperties, OnSamples) {
  for (std::uint64_t i = 0; i < 150; ++i) {
    const StepFn u = sample(53, 2 * i), v = sample(53, 2 * i + 1);
    const Rational a = Rational(static_cast<long>(i % 7) - 3, 4), b = Rational(static_cast<long>(i % 5) - 2, 3);
    const Rational t = Rational(static_cast<long>(i % 41) - 20, 6);
    for (const auto& tag : {R, L}) {
      EXPECT_EQ(banach_limit(add(scale(a, u), scale(b, v)), tag), a * banach_limit(u, tag) + b * banach_limit(v, tag));
      EXPECT_GE(banach_limit(abs(u), tag), Q("0"));
      EXPECT_EQ(banach_limit(translate(u, t), tag), banach_limit(u, tag));
      EXPECT_LE(abs(banach_limit(u, tag)), ess_sup_norm(u));
    }
    if (auto l = has_limit_right(u)) EXPECT_EQ(banach_limit(u, R), *l);
    if (auto l = has_limit_left(u)) EXPECT_EQ(banach_limit(u, L), *l);
  }
}

TEST(ValuationProperties, IdentityAndMonotonicity) {
  const std::vector<SpecPtr> specs{
      ValuationSpec::banach_limit(ValueMap::identity()),
      ValuationSpec::banach_limit(ValueMap::clamp(-1, 2), L),
      ValuationSpec::right_tail(ValuationSpec::banach_limit(ValueMap::poly({1, 0, 1}))),
      ValuationSpec::left_tail(ValuationSpec::banach_limit(ValueMap::clamp(0, 1), L)),
  };
  for (std::uint64_t i = 0; i < 100; ++i) {
    const StepFn u = sample(59, 2 * i), w = sample(59, 2 * i + 1);
    const StepFn v = add(u, abs(w));
    for (const auto& s : specs) {
      EXPECT_EQ(evaluate(*s, join(u, w)).value + evaluate(*s, meet(u, w)).value,
                evaluate(*s, u).value + evaluate(*s, w).value)
          << s->str();
      EXPECT_LE(evaluate(*s, u).value, evaluate(*s, v).value) << s->str();
      EXPECT_EQ(evaluate(*s, make_constant(0)).value, Q("0"));
    }
  }
}

TEST(ValuationProperties, DisjointAdditivityAndVanishing) {
  const SpecPtr s = ValuationSpec::banach_limit(ValueMap::poly({1, 1}));
  for (std::uint64_t i = 0; i < 100; ++i) {
    const StepFn u = sample(61, 2 * i);
    const StepFn v = combine(sample(61, 2 * i + 1), u,
                             [](const Rational& b, const Rational& a) { return a.is_zero() ? b : Rational(0); });
    EXPECT_EQ(evaluate(*s, add(u, v)).value, evaluate(*s, u).value + evaluate(*s, v).value);
    const StepFn c = checker::gen_stepfn_of(checker::FnKind::CompactSupport, {.seed = 61}, i);
    EXPECT_EQ(evaluate(*s, c).value, Q("0"));
  }
}

TEST(ValuationProperties, NonMonotoneMapBreaksMonotonicity) {
  // u = -1 <= v = 0, yet Blim |u| = 1 > Blim |v| = 0.
  const SpecPtr s = ValuationSpec::banach_limit(ValueMap::abs0());
  EXPECT_GT(evaluate(*s, make_constant(-1)).value, evaluate(*s, make_constant(0)).value);
}
