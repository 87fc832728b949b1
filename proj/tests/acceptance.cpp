// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "tival/cesaro.hpp"
#include "tival/checker.hpp"
#include "tival/dsl.hpp"
#include "tival/ndim.hpp"
#include "tival/ultra.hpp"
#include "tival/valuation.hpp"

using namespace tival;

namespace {

constexpr std::uint64_t kSeed = 20240601;

struct Outcome {
  bool ok = true;
  std::string note;
};

Outcome fail(std::string note) { return {false, std::move(note)}; }

Rational q(std::string_view s) { return Rational::parse(s); }

StepFn square_wave() { return dsl::parse_fn("periodic(2; [0,1)=1, [1,2)=0)"); }

std::string counterexample(const checker::Report& r) {
  return r.counterexample ? checker::to_json(*r.counterexample).dump() : std::string();
}

Outcome suite(std::string_view id, std::size_t samples, SpecPtr spec = nullptr, unsigned threads = 4) {
  const checker::Report r =
      checker::run_suite(id, {.seed = kSeed, .samples = samples, .threads = threads}, std::move(spec));
  if (!r.passed) return fail(std::string(id) + " " + counterexample(r));
  if (r.samples_run != samples) return fail("ran " + std::to_string(r.samples_run) + " samples");
  return {true, std::to_string(samples) + " samples"};
}

Outcome c1_square_wave() {
  const StepFn sq = square_wave();
  const UltrafilterTag right{Side::Right, "U"};
  const Rational b = banach_limit(sq, right);
  if (b != q("1/2")) return fail("Blim = " + b.str());
  const UltraLimit lim = ultralimit(sq, right);
  if (lim.determined() || lim.candidates != std::vector<Rational>{q("0"), q("1")})
    return fail("ultralimit not Undetermined({0,1})");
  return {true, "Blim = 1/2, ultralimit Undetermined({0,1})"};
}

Outcome c2_valuation_identity() { return suite("valuation_identity", 1000); }

Outcome c3_translation() { return suite("blim_translation", 500); }

Outcome c4_vanishing() { return suite("vanish_compact_support", 500); }

Outcome c5_limit_extension() {
  const checker::GenConfig cfg{.seed = kSeed};
  for (std::uint64_t i = 0; i < 500; ++i) {
    checker::SampleRng rng(kSeed, i);
    const StepFn base = checker::draw_stepfn(rng, cfg);
    const Rational l = rng.rational(cfg.value_range, 6);
    const StepFn u(base.left_tail(), base.core_start(), {base.core().begin(), base.core().end()}, base.core_end(),
                   PeriodicCell::constant(l));
    const auto lim = has_limit_right(u);
    if (!lim || *lim != l) return fail("limit not detected for " + dsl::print(u));
    if (banach_limit(u, UltrafilterTag{Side::Right, "U"}) != l) return fail(dsl::print(u));
  }
  return {true, "500 samples"};
}

Outcome c6_norm_bound() {
  const checker::GenConfig cfg{.seed = kSeed};
  for (std::uint64_t i = 0; i < 500; ++i) {
    const StepFn u = checker::gen_stepfn(cfg, i);
    for (Side side : {Side::Right, Side::Left})
      if (abs(banach_limit(u, UltrafilterTag{side, "U"})) > ess_sup_norm(u)) return fail(dsl::print(u));
  }
  return suite("blim_norm_bound", 500);
}

Outcome c7_monotone() { return suite("monotonicity", 300, dsl::parse_spec("blim(clamp(-1,2))")); }

Outcome c8_series() {
  auto spec_for = [](const Rational& m) {
    std::vector<SeriesTerm> terms;
    for (int i = 1; i <= 20; ++i)
      terms.push_back({UltrafilterTag{Side::Right, "U" + std::to_string(i)}, ValueMap::poly({Rational::pow2(-i)}),
                       m * Rational::pow2(-i)});
    return ValuationSpec::series(std::move(terms), m * Rational::pow2(-20));
  };
  auto contains = [](const Valuation& v, const Rational& target) {
    return v.value - v.truncation_error <= target && target <= v.value + v.truncation_error;
  };
  const Valuation sq = evaluate(*spec_for(Rational(1)), square_wave());
  if (!contains(sq, q("1/2"))) return fail("square wave interval misses 1/2");
  if (sq.truncation_error * 2 != Rational::pow2(-19)) return fail("interval width");
  // Sum over i of Blim(u)/2^i is Blim(u) exactly.
  const checker::GenConfig cfg{.seed = kSeed};
  for (std::uint64_t i = 0; i < 200; ++i) {
    const StepFn u = checker::gen_stepfn(cfg, i);
    const Valuation v = evaluate(*spec_for(ess_sup_norm(u)), u);
    if (!contains(v, banach_limit(u, UltrafilterTag{Side::Right, "U"}))) return fail(dsl::print(u));
  }
  return {true, "square wave in [" + (sq.value - sq.truncation_error).str() + ", " +
                    (sq.value + sq.truncation_error).str() + "], 200 samples"};
}

Outcome c9_cesaro_certificate() {
  const checker::GenConfig cfg{.seed = kSeed};
  for (std::uint64_t i = 0; i < 200; ++i) {
    const StepFn u = checker::gen_stepfn(cfg, i);
    const CesaroLimit lim = cesaro_limit_right(u);
    const Rational x = Rational(1000) * u.right_tail().period();
    if (x < lim.valid_from) return fail("x below certificate range for " + dsl::print(u));
    if (abs(cesaro_eval(u, x) - lim.mean) > lim.bound_at(x)) return fail(dsl::print(u) + " x=" + x.str());
  }
  return {true, "200 samples"};
}

Outcome c10_ndim_cross_method() {
  double worst = 0;
  for (int dim : {2, 3, 4})
    for (double x : {1.0, 5.0, 20.0})
      for (double d : {0.5, 1.0}) {
        std::vector<double> t(dim, 0.0);
        t[0] = d;
        const double diff = std::abs(ndim::overlap_ratio_caps(dim, x, t) - ndim::overlap_ratio_layers(dim, x, t));
        worst = std::max(worst, diff);
        if (diff > 1e-6) return fail("dim " + std::to_string(dim) + " x " + std::to_string(x));
      }
  for (double x : {0.5, 1.0, 10.0, 1e4})
    for (double d : {0.25, 1.0, 3.0}) {
      const double want = d >= 2 * x ? 0 : (2 * x - d) / (2 * x);
      if (std::abs(ndim::overlap_ratio_caps(1, x, std::vector<double>{d}) - want) > 1e-12) return fail("dim 1");
    }
  for (int dim = 1; dim <= 4; ++dim) {
    std::vector<double> t(dim, 0.0);
    t[0] = 1;
    if (1 - ndim::overlap_ratio_caps(dim, 1e4, t) >= 1e-3) return fail("caps at 1e4");
    if (dim > 1 && 1 - ndim::overlap_ratio_layers(dim, 1e4, t) >= 1e-3) return fail("layers at 1e4");
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "max |caps - layers| = %.2e", worst);
  return {true, buf};
}

Outcome c11_ndim_translation() {
  double worst_slack = 1e300;
  for (std::uint64_t i = 0; i < 20; ++i) {
    checker::SampleRng rng(kSeed, 1000 + i);
    auto real = [&](double lo, double hi) { return lo + (hi - lo) * double(rng.uniform(0, 1 << 20)) / (1 << 20); };
    const int dim = int(rng.uniform(1, 4));
    std::vector<double> normal(dim), t(dim);
    for (auto& c : normal) c = real(-1, 1);
    for (auto& c : t) c = real(-1.5, 1.5);
    const double offset = real(-1, 1), a = real(-2, 2), b = real(-1, 1), w = real(0.2, 3);
    ndim::SampledField u{dim,
                         [=](std::span<const double> y) {
                           double s = -offset;
                           for (int k = 0; k < dim; ++k) s += normal[k] * y[k];
                           return (s > 0 ? a : 0.0) + b * std::sin(w * y[0]);
                         },
                         std::abs(a) + std::abs(b)};
    const double x = real(0.5, 40);
    const auto base = ndim::ball_cesaro(u, x, ndim::Method::MonteCarlo, 100'000, kSeed + i);
    const auto moved = ndim::ball_cesaro(ndim::translate(u, t), x, ndim::Method::MonteCarlo, 100'000, kSeed + i);
    const double bound = 2 * u.bound * ndim::symdiff_ratio(dim, x, t) + 3 * std::hypot(base.std_error, moved.std_error);
    const double gap = std::abs(moved.mean - base.mean);
    if (gap > bound) return fail("sample " + std::to_string(i));
    worst_slack = std::min(worst_slack, bound - gap);
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "20 samples, min slack %.2e", worst_slack);
  return {true, buf};
}

Outcome c12_determinism() {
  std::string first;
  for (unsigned threads : {1u, 2u, 8u, 1u}) {
    const checker::Report r = checker::run_suite("valuation_identity", {.seed = kSeed, .samples = 1000, .threads = threads});
    const std::string dump = checker::to_json(r, false).dump();
    if (first.empty()) first = dump;
    if (dump != first) return fail("threads " + std::to_string(threads) + " differs");
  }
  return {true, "threads 1, 2, 8, 1 byte-identical"};
}

struct Criterion {
  int id;
  const char* name;
  double limit_s;  // 0 for no runtime limit
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "square wave Banach limit and undetermined ultralimit", 1, c1_square_wave},
      {2, "valuation identity on 1000 pairs", 10, c2_valuation_identity},
      {3, "translation invariance on 500 pairs", 10, c3_translation},
      {4, "vanishing on compact support with prolongation", 10, c4_vanishing},
      {5, "limit extension on 500 samples", 0, c5_limit_extension},
      {6, "|Blim u| <= ||u||", 0, c6_norm_bound},
      {7, "monotone clamp valuation on 300 pairs", 0, c7_monotone},
      {8, "geometric series interval", 0, c8_series},
      {9, "Cesaro certificate at x = 1000 periods", 0, c9_cesaro_certificate},
      {10, "overlap ratio cross-method", 60, c10_ndim_cross_method},
      {11, "ball average translation bound", 60, c11_ndim_translation},
      {12, "determinism across thread counts", 0, c12_determinism},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = fail(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (o.ok && c.limit_s > 0 && secs >= c.limit_s) o = fail("over the " + std::to_string(int(c.limit_s)) + " s budget");
    failures += !o.ok;
    std::printf("%s %2d  %-52s %8.3f s  %s\n", o.ok ? "PASS" : "FAIL", c.id, c.name, secs, o.note.c_str());
  }
  std::printf("%d/%zu criteria passed\n", int(criteria.size()) - failures, criteria.size());
  return failures ? 1 : 0;
}
