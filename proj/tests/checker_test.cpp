#include <gtest/gtest.h>

#include <set>

#include "support.hpp"
#include "tival/cesaro.hpp"
#include "tival/checker.hpp"
#include "tival/dsl.hpp"

using namespace tival;
using namespace testing_support;

TEST(Generator, DeterministicPerIndex) {
  const checker::GenConfig cfg{.seed = 99};
  for (std::uint64_t i = 0; i < 50; ++i) EXPECT_EQ(dsl::print(checker::gen_stepfn(cfg, i)), dsl::print(checker::gen_stepfn(cfg, i)));
  std::set<std::string> distinct;
  for (std::uint64_t i = 0; i < 50; ++i) distinct.insert(dsl::print(checker::gen_stepfn(cfg, i)));
  EXPECT_GT(distinct.size(), 30u);
  const checker::GenConfig other{.seed = 100};
  int same = 0;
  for (std::uint64_t i = 0; i < 50; ++i)
    same += dsl::print(checker::gen_stepfn(cfg, i)) == dsl::print(checker::gen_stepfn(other, i));
  EXPECT_LT(same, 25);
}

TEST(Generator, UniformDrawsStayInRange) {
  checker::SampleRng rng(5, 0);
  std::set<long> seen;
  for (int i = 0; i < 2000; ++i) {
    const long v = rng.uniform(-3, 3);
    ASSERT_GE(v, -3);
    ASSERT_LE(v, 3);
    seen.insert(v);
    const Rational r = rng.rational(4, 3);
    ASSERT_LE(abs(r), Q("4"));
    ASSERT_LE(r.den(), 3);
  }
  EXPECT_EQ(seen.size(), 7u);
}

TEST(Generator, KindsHaveTheirShape) {
  const checker::GenConfig cfg{.seed = 17};
  for (std::uint64_t i = 0; i < 100; ++i) {
    using checker::FnKind;
    const StepFn c = checker::gen_stepfn_of(FnKind::Constant, cfg, i);
    EXPECT_TRUE(eq_ae(c, make_constant(c(0))));

    const StepFn ind = checker::gen_stepfn_of(FnKind::Indicator, cfg, i);
    for (const Rational& a : attained_values(ind)) EXPECT_TRUE(a == Q("0") || a == Q("1"));
    EXPECT_TRUE(has_compact_support(ind));

    const StepFn cs = checker::gen_stepfn_of(FnKind::CompactSupport, cfg, i);
    EXPECT_TRUE(has_compact_support(cs));
    EXPECT_TRUE(checker::gen_stepfn_of(FnKind::Periodic, cfg, i).left_tail() ==
                checker::gen_stepfn_of(FnKind::Periodic, cfg, i).right_tail());

    for (const StepFn& u : {c, ind, cs, checker::gen_stepfn_of(FnKind::Periodic, cfg, i),
                            checker::gen_stepfn_of(FnKind::Mixed, cfg, i)}) {
      EXPECT_LE(ess_sup_norm(u), Q("4"));
      EXPECT_LE(u.core().size(), 5u);
    }
  }
}

TEST(Suites, CatalogueIsComplete) {
  std::set<std::string> ids;
  for (const auto& s : checker::suites()) {
    EXPECT_FALSE(s.description.empty()) << s.id;
    ids.insert(s.id);
  }
  for (const char* id : {"filter_laws", "distr", "ddd", "vanish_compact_support", "prolongation", "blim_linearity",
                         "blim_positivity", "blim_extension", "blim_translation", "cesaro_limit",
                         "valuation_identity", "monotonicity", "continuity", "roundtrip"})
    EXPECT_TRUE(ids.count(id)) << id;
  EXPECT_THROW(checker::find_suite("no_such_suite"), std::invalid_argument);
  EXPECT_THROW(checker::run_suite("no_such_suite", {}), std::invalid_argument);
}

TEST(Suites, AllPassOnDefaultSpec) {
  const checker::GenConfig cfg{.seed = 7, .samples = 150, .threads = 4};
  for (const auto& r : checker::run_all(cfg)) {
    EXPECT_TRUE(r.passed) << r.property_id << ": "
                          << (r.counterexample ? checker::to_json(*r.counterexample).dump() : std::string());
    EXPECT_EQ(r.samples_run, 150u);
    EXPECT_EQ(r.seed, 7u);
    EXPECT_EQ(r.spec, "blim(id)");
  }
}

TEST(Suites, PassUnderOtherValuations) {
  for (const char* text : {"blim(clamp(-1,2),left)", "right(blim(poly(1,0,1)))", "left(blim(clamp(0,1),left))"}) {
    const SpecPtr spec = dsl::parse_spec(text);
    for (const char* id : {"valuation_identity", "monotonicity", "continuity", "vanish_compact_support"}) {
      const checker::Report r = checker::run_suite(id, {.seed = 3, .samples = 150}, spec);
      EXPECT_TRUE(r.passed) << text << " " << id;
    }
  }
}

TEST(Suites, NonMonotoneMapIsCaught) {
  const SpecPtr spec = dsl::parse_spec("blim(abs0)");
  const checker::Report r = checker::run_suite("monotonicity", {.seed = 7, .samples = 500}, spec);
  ASSERT_FALSE(r.passed);
  ASSERT_TRUE(r.counterexample.has_value());
  const auto& cx = *r.counterexample;
  EXPECT_FALSE(cx.fns.empty());
  EXPECT_NE(cx.observed, cx.expected);

  // The serialized case reproduces the failure on its own.
  const checker::Counterexample back = checker::counterexample_from_json(checker::to_json(cx));
  EXPECT_EQ(back.fns, cx.fns);
  EXPECT_EQ(back.index, cx.index);
  const auto again = checker::replay("monotonicity", back, spec);
  ASSERT_TRUE(again.has_value());
  EXPECT_EQ(again->observed, cx.observed);
  // Under a monotone valuation the same case passes.
  EXPECT_FALSE(checker::replay("monotonicity", back, checker::default_spec()).has_value());

  // Continuity still holds for abs0: it is 1-Lipschitz.
  EXPECT_TRUE(checker::run_suite("continuity", {.seed = 7, .samples = 200}, spec).passed);
}

TEST(Suites, ThreadCountDoesNotChangeResults) {
  const SpecPtr spec = dsl::parse_spec("blim(abs0)");
  for (const char* id : {"valuation_identity", "monotonicity", "cesaro_certificate"}) {
    std::string first;
    for (unsigned threads : {1u, 3u, 8u}) {
      const checker::Report r = checker::run_suite(id, {.seed = 11, .samples = 400, .threads = threads}, spec);
      const std::string dump = checker::to_json(r, false).dump();
      if (first.empty()) first = dump;
      EXPECT_EQ(dump, first) << id << " threads=" << threads;
    }
  }
}

TEST(Suites, ConfigValidation) {
  EXPECT_THROW(checker::run_suite("distr", {.samples = 0}), std::invalid_argument);
  EXPECT_THROW(checker::run_suite("distr", {.max_breakpoints = 0}), std::invalid_argument);
  EXPECT_THROW(checker::run_suite("distr", {.max_period_denominator = 0}), std::invalid_argument);
  EXPECT_THROW(checker::run_suite("distr", {.value_range = 0}), std::invalid_argument);
}

TEST(Report, JsonFields) {
  const checker::Report r = checker::run_suite("vanish_compact_support", {.seed = 7, .samples = 500});
  const auto j = checker::to_json(r);
  EXPECT_EQ(j.at("property_id"), "vanish_compact_support");
  EXPECT_EQ(j.at("seed"), 7);
  EXPECT_EQ(j.at("spec"), "blim(id)");
  EXPECT_EQ(j.at("samples_run"), 500);
  EXPECT_EQ(j.at("passed"), true);
  EXPECT_TRUE(j.at("counterexample").is_null());
  EXPECT_TRUE(j.at("elapsed_ms").is_number());
  EXPECT_FALSE(checker::to_json(r, false).contains("elapsed_ms"));
}

TEST(Replay, RejectsMalformedCases) {
  checker::Counterexample cx;
  cx.fns = {"const("};
  EXPECT_THROW(checker::replay("distr", cx), dsl::ParseError);
  EXPECT_THROW(checker::counterexample_from_json(nlohmann::json::parse(R"({"fns": 3})")), std::exception);
}
