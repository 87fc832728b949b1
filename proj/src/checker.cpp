#include "tival/checker.hpp"

#include <algorithm>
#include <chrono>
#include <exception>
#include <stdexcept>
#include <thread>

#include "tival/cesaro.hpp"
#include "tival/dsl.hpp"
#include "tival/ultra.hpp"

namespace tival::checker {

namespace {

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::optional<Failure> fail(const Rational& observed, const Rational& expected, std::string detail) {
  return Failure{observed.str(), expected.str(), std::move(detail)};
}

std::optional<Failure> fail(std::string observed, std::string expected, std::string detail) {
  return Failure{std::move(observed), std::move(expected), std::move(detail)};
}

// Certified intervals [a - ea, a + ea] and [b - eb, b + eb] overlap.
bool consistent(const Rational& a, const Rational& ea, const Rational& b, const Rational& eb) {
  return abs(a - b) <= ea + eb;
}

const UltrafilterTag kRight{Side::Right, "U"};
const UltrafilterTag kLeft{Side::Left, "U"};

StepFn with_right_tail(const StepFn& u, PeriodicCell tail) {
  return StepFn(u.left_tail(), u.core_start(), {u.core().begin(), u.core().end()}, u.core_end(),
                std::move(tail));
}

StepFn nonneg(const StepFn& u) { return abs(u); }

PeriodicCell draw_cell(SampleRng& rng, const GenConfig& cfg) {
  const Rational period(rng.uniform(1, 4), rng.uniform(1, cfg.max_period_denominator));
  const long n = rng.uniform(1, static_cast<long>(cfg.max_breakpoints));
  // Breakpoints on the grid period * j / 8.
  std::vector<long> grid{1, 2, 3, 4, 5, 6, 7};
  for (std::size_t i = grid.size(); i > 1; --i)
    std::swap(grid[i - 1], grid[static_cast<std::size_t>(rng.uniform(0, static_cast<long>(i) - 1))]);
  std::vector<long> cuts(grid.begin(), grid.begin() + std::min<long>(n - 1, 7));
  std::sort(cuts.begin(), cuts.end());
  std::vector<Piece> pieces{{Rational(0), rng.rational(cfg.value_range, 2)}};
  for (long j : cuts) pieces.push_back({period * Rational(j, 8), rng.rational(cfg.value_range, 2)});
  return PeriodicCell(period, std::move(pieces));
}

Rational draw_width(SampleRng& rng, const GenConfig& cfg) {
  return Rational(rng.uniform(1, 4), rng.uniform(1, cfg.max_period_denominator));
}

StepFn draw_core(SampleRng& rng, const GenConfig& cfg, PeriodicCell left, PeriodicCell right) {
  const Rational start = rng.rational(5, 2);
  const long n = rng.uniform(1, static_cast<long>(cfg.max_breakpoints));
  std::vector<Piece> core;
  Rational x = start;
  for (long i = 0; i < n; ++i) {
    core.push_back({x, rng.rational(cfg.value_range, 2)});
    x += draw_width(rng, cfg);
  }
  return StepFn(std::move(left), start, std::move(core), x, std::move(right));
}

Rational draw_shift(SampleRng& rng) { return rng.rational(20, 6); }

}  // namespace

// ---------------------------------------------------------------------------
// Generators

void GenConfig::validate() const {
  if (samples < 1) throw std::invalid_argument("samples must be >= 1");
  if (max_breakpoints < 1 || max_period_denominator < 1 || value_range < 1)
    throw std::invalid_argument("generation bounds must be positive");
}

std::string to_string(FnKind k) {
  switch (k) {
    case FnKind::Constant: return "constant";
    case FnKind::Indicator: return "indicator";
    case FnKind::Periodic: return "periodic";
    case FnKind::Mixed: return "mixed";
    case FnKind::CompactSupport: return "compact";
  }
  return "?";
}

SampleRng::SampleRng(std::uint64_t seed, std::uint64_t index)
    : engine_(splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632be59bd9b4e019ULL))) {}

long SampleRng::uniform(long lo, long hi) {
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
  std::uint64_t r;
  do {
    r = next();
  } while (r >= limit);
  return lo + static_cast<long>(r % span);
}

Rational SampleRng::rational(long range, long max_den) {
  const long den = uniform(1, max_den);
  return Rational(uniform(-range * den, range * den), den);
}

StepFn draw_stepfn(SampleRng& rng, const GenConfig& cfg, FnKind kind) {
  switch (kind) {
    case FnKind::Constant:
      return make_constant(rng.rational(cfg.value_range, 2));
    case FnKind::Indicator: {
      std::vector<Interval> ivs;
      Rational x = rng.rational(5, 2);
      const long n = rng.uniform(1, 3);
      for (long i = 0; i < n; ++i) {
        if (i > 0 && rng.coin()) x += draw_width(rng, cfg);
        const Rational hi = x + draw_width(rng, cfg);
        ivs.push_back({x, hi});
        x = hi;
      }
      return make_indicator(ivs);
    }
    case FnKind::Periodic:
      return make_periodic(draw_cell(rng, cfg), rng.rational(3, 2));
    case FnKind::Mixed: {
      PeriodicCell left = draw_cell(rng, cfg);
      PeriodicCell right = draw_cell(rng, cfg);
      return draw_core(rng, cfg, std::move(left), std::move(right));
    }
    case FnKind::CompactSupport:
      return draw_core(rng, cfg, PeriodicCell::constant(0), PeriodicCell::constant(0));
  }
  throw std::logic_error("unknown FnKind");
}

StepFn draw_stepfn(SampleRng& rng, const GenConfig& cfg) {
  const long r = rng.uniform(0, 9);
  const FnKind kind = r < 1   ? FnKind::Constant
                      : r < 3 ? FnKind::Indicator
                      : r < 5 ? FnKind::Periodic
                      : r < 8 ? FnKind::Mixed
                              : FnKind::CompactSupport;
  return draw_stepfn(rng, cfg, kind);
}

StepFn gen_stepfn(const GenConfig& cfg, std::uint64_t index) {
  SampleRng rng(cfg.seed, index);
  return draw_stepfn(rng, cfg);
}

StepFn gen_stepfn_of(FnKind kind, const GenConfig& cfg, std::uint64_t index) {
  SampleRng rng(cfg.seed, index);
  return draw_stepfn(rng, cfg, kind);
}

// ---------------------------------------------------------------------------
// Suite catalogue

namespace {

using Check = std::function<std::optional<Failure>(const Case&, const ValuationSpec&)>;

Case two_fns(SampleRng& rng, const GenConfig& cfg) {
  StepFn u = draw_stepfn(rng, cfg);
  StepFn v = draw_stepfn(rng, cfg);
  return Case{{std::move(u), std::move(v)}, {}};
}

Case one_fn(SampleRng& rng, const GenConfig& cfg) { return Case{{draw_stepfn(rng, cfg)}, {}}; }

// u and a v supported where u vanishes.
Case disjoint_pair(SampleRng& rng, const GenConfig& cfg) {
  StepFn u = draw_stepfn(rng, cfg);
  StepFn v = combine(draw_stepfn(rng, cfg), u, [](const Rational& b, const Rational& a) {
    return a.is_zero() ? b : Rational(0);
  });
  return Case{{std::move(u), std::move(v)}, {}};
}

// Compact-support u shifted into [0, n) for a natural n.
Case prolongation_case(SampleRng& rng, const GenConfig& cfg) {
  StepFn u = draw_stepfn(rng, cfg, FnKind::CompactSupport);
  u = translate(u, -u.core_start() + Rational(rng.uniform(0, 2), 2));
  const Rational n(mpq_class(floor(u.core_end()) + 1));
  return Case{{std::move(u)}, {n}};
}

Rational x_nonzero(SampleRng& rng) {
  Rational x = rng.rational(40, 7);
  return x.is_zero() ? Rational(1, 3) : x;
}

std::vector<Suite> build_catalogue() {
  std::vector<Suite> s;

  s.push_back({"filter_laws", "F1-F4 and ultrafilter dichotomy on forced membership verdicts",
               [](SampleRng& rng, const GenConfig& cfg) {
                 Case c = two_fns(rng, cfg);
                 c.params = {rng.rational(cfg.value_range, 2), rng.rational(cfg.value_range, 2)};
                 return c;
               },
               [](const Case& c, const ValuationSpec&) -> std::optional<Failure> {
                 auto above = [](const StepFn& u, const Rational& t) {
                   return DefinableSet(map_values(u, [&t](const Rational& a) {
                     return a > t ? Rational(1) : Rational(0);
                   }));
                 };
                 const DefinableSet S = above(c.fns[0], c.params[0]);
                 const DefinableSet T = above(c.fns[1], c.params[1]);
                 for (const auto& tag : {kRight, kLeft}) {
                   const std::string side = to_string(tag.side);
                   if (membership(DefinableSet::everything(), tag) != UltraVerdict::ForcedIn)
                     return fail("not ForcedIn", "ForcedIn", "F1: R must be in every " + side + " ultrafilter");
                   if (membership(DefinableSet::nothing(), tag) != UltraVerdict::ForcedOut)
                     return fail("not ForcedOut", "ForcedOut", "F2: empty set must be out");
                   const UltraVerdict vs = membership(S, tag);
                   const UltraVerdict vc = membership(S.complement(), tag);
                   const bool dichotomy = (vs == UltraVerdict::ForcedIn) == (vc == UltraVerdict::ForcedOut) &&
                                          (vs == UltraVerdict::Undetermined) == (vc == UltraVerdict::Undetermined);
                   if (!dichotomy)
                     return fail(to_string(vs) + "/" + to_string(vc), "complementary verdicts",
                                 "dichotomy violated (" + side + ")");
                   const UltraVerdict vt = membership(T, tag);
                   if (vs == UltraVerdict::ForcedIn && vt == UltraVerdict::ForcedIn &&
                       membership(S.intersect(T), tag) != UltraVerdict::ForcedIn)
                     return fail(to_string(membership(S.intersect(T), tag)), "ForcedIn", "F3 (" + side + ")");
                   if (vs == UltraVerdict::ForcedIn && membership(S.unite(T), tag) != UltraVerdict::ForcedIn)
                     return fail(to_string(membership(S.unite(T), tag)), "ForcedIn", "F4 (" + side + ")");
                   if (vt == UltraVerdict::ForcedOut && S.subset_of(T) && vs != UltraVerdict::ForcedOut)
                     return fail(to_string(vs), "ForcedOut", "subsets of excluded sets are excluded (" + side + ")");
                 }
                 return std::nullopt;
               }});

  s.push_back({"lattice_identity", "u + v == (u v v) + (u ^ v) almost everywhere", two_fns,
               [](const Case& c, const ValuationSpec&) -> std::optional<Failure> {
                 const StepFn& u = c.fns[0];
                 const StepFn& v = c.fns[1];
                 const StepFn lhs = add(u, v);
                 const StepFn rhs = add(join(u, v), meet(u, v));
                 if (!eq_ae(lhs, rhs)) return fail(dsl::print(rhs), dsl::print(lhs), "lattice identity");
                 return std::nullopt;
               }});

  s.push_back({"distr", "disjoint supports: (u+v) v 0 == u v 0 + v v 0, dually for ^", disjoint_pair,
               [](const Case& c, const ValuationSpec&) -> std::optional<Failure> {
                 const StepFn& u = c.fns[0];
                 const StepFn& v = c.fns[1];
                 const StepFn zero = make_constant(0);
                 if (!eq_ae(mul(u, v), zero)) return fail("overlapping supports", "u*v == 0", "generator");
                 const StepFn sum = add(u, v);
                 if (!eq_ae(join(sum, zero), add(join(u, zero), join(v, zero))))
                   return fail(dsl::print(join(sum, zero)), dsl::print(add(join(u, zero), join(v, zero))), "join");
                 if (!eq_ae(meet(sum, zero), add(meet(u, zero), meet(v, zero))))
                   return fail(dsl::print(meet(sum, zero)), dsl::print(add(meet(u, zero), meet(v, zero))), "meet");
                 return std::nullopt;
               }});

  s.push_back({"ddd", "disjoint supports: mu(u + v) == mu(u) + mu(v)", disjoint_pair,
               [](const Case& c, const ValuationSpec& spec) -> std::optional<Failure> {
                 const Valuation a = evaluate(spec, add(c.fns[0], c.fns[1]));
                 const Valuation b = evaluate(spec, c.fns[0]);
                 const Valuation d = evaluate(spec, c.fns[1]);
                 if (!consistent(a.value, a.truncation_error, b.value + d.value,
                                 b.truncation_error + d.truncation_error))
                   return fail(a.value, b.value + d.value, "mu(u+v) vs mu(u)+mu(v)");
                 return std::nullopt;
               }});

  s.push_back({"vanish_compact_support", "mu vanishes on compact support; u + T_n(prolongation) == prolongation",
               prolongation_case, [](const Case& c, const ValuationSpec& spec) -> std::optional<Failure> {
                 const StepFn& u = c.fns[0];
                 const Rational& n = c.params[0];
                 if (!has_compact_support(u)) return fail("false", "true", "generator: compact support");
                 const Valuation m = evaluate(spec, u);
                 if (abs(m.value) > m.truncation_error) return fail(m.value, Rational(0), "mu(u) != 0");
                 const StepFn p = prolong_periodic(u, n);
                 if (!eq_ae(add(u, translate(p, n)), p))
                   return fail(dsl::print(add(u, translate(p, n))), dsl::print(p), "u + T_n(p) != p");
                 return std::nullopt;
               }});

  s.push_back({"prolongation", "mu(p) = mu(u) + mu(T_n p) with disjoint supports, forcing mu(u) = 0",
               prolongation_case, [](const Case& c, const ValuationSpec& spec) -> std::optional<Failure> {
                 const StepFn& u = c.fns[0];
                 const Rational& n = c.params[0];
                 const StepFn p = prolong_periodic(u, n);
                 const StepFn shifted = translate(p, n);
                 if (!eq_ae(mul(u, shifted), make_constant(0)))
                   return fail("overlap", "disjoint", "u and T_n(p) must have disjoint supports");
                 if (!eq_ae(add(u, shifted), p)) return fail(dsl::print(add(u, shifted)), dsl::print(p), "u + T_n(p) != p");
                 const Valuation mp = evaluate(spec, p);
                 const Valuation mu = evaluate(spec, u);
                 const Valuation ms = evaluate(spec, shifted);
                 if (!consistent(ms.value, ms.truncation_error, mp.value, mp.truncation_error))
                   return fail(ms.value, mp.value, "translation invariance on the prolongation");
                 if (!consistent(mp.value, mp.truncation_error, mu.value + ms.value,
                                 mu.truncation_error + ms.truncation_error))
                   return fail(mp.value, mu.value + ms.value, "additivity on disjoint supports");
                 if (abs(mu.value) > mu.truncation_error) return fail(mu.value, Rational(0), "mu(u) != 0");
                 return std::nullopt;
               }});

  s.push_back({"tail_decomposition", "mu(u) == mu(u chi_(0,inf)) + mu(u chi_(-inf,0))", one_fn,
               [](const Case& c, const ValuationSpec& spec) -> std::optional<Failure> {
                 const Valuation full = evaluate(spec, c.fns[0]);
                 const Valuation r = evaluate(spec, restrict_right(c.fns[0]));
                 const Valuation l = evaluate(spec, restrict_left(c.fns[0]));
                 if (!consistent(full.value, full.truncation_error, r.value + l.value,
                                 r.truncation_error + l.truncation_error))
                   return fail(r.value + l.value, full.value, "tail decomposition");
                 return std::nullopt;
               }});

  s.push_back({"blim_linearity", "Blim(a u + b v) == a Blim u + b Blim v",
               [](SampleRng& rng, const GenConfig& cfg) {
                 Case c = two_fns(rng, cfg);
                 c.params = {rng.rational(5, 3), rng.rational(5, 3)};
                 return c;
               },
               [](const Case& c, const ValuationSpec&) -> std::optional<Failure> {
                 const StepFn lin = add(scale(c.params[0], c.fns[0]), scale(c.params[1], c.fns[1]));
                 for (const auto& tag : {kRight, kLeft}) {
                   const Rational lhs = banach_limit(lin, tag);
                   const Rational rhs = c.params[0] * banach_limit(c.fns[0], tag) +
                                        c.params[1] * banach_limit(c.fns[1], tag);
                   if (lhs != rhs) return fail(lhs, rhs, "linearity (" + to_string(tag.side) + ")");
                 }
                 return std::nullopt;
               }});

  s.push_back({"blim_positivity", "u >= 0 a.e. implies Blim u >= 0",
               [](SampleRng& rng, const GenConfig& cfg) { return Case{{nonneg(draw_stepfn(rng, cfg))}, {}}; },
               [](const Case& c, const ValuationSpec&) -> std::optional<Failure> {
                 for (const auto& tag : {kRight, kLeft}) {
                   const Rational b = banach_limit(c.fns[0], tag);
                   if (b.sign() < 0) return fail(b, Rational(0), "positivity (" + to_string(tag.side) + ")");
                 }
                 return std::nullopt;
               }});

  s.push_back({"blim_extension", "Blim u equals lim u at +inf whenever it exists",
               [](SampleRng& rng, const GenConfig& cfg) {
                 StepFn u = draw_stepfn(rng, cfg, FnKind::Mixed);
                 return Case{{with_right_tail(u, PeriodicCell::constant(rng.rational(cfg.value_range, 3)))}, {}};
               },
               [](const Case& c, const ValuationSpec&) -> std::optional<Failure> {
                 const auto l = has_limit_right(c.fns[0]);
                 if (!l) return fail("no limit", "a limit", "generator: constant right tail");
                 const Rational b = banach_limit(c.fns[0], kRight);
                 if (b != *l) return fail(b, *l, "limit extension");
                 if (cesaro_limit_right(c.fns[0]).mean != *l)
                   return fail(cesaro_limit_right(c.fns[0]).mean, *l, "Cesaro limit extension");
                 return std::nullopt;
               }});

  s.push_back({"blim_translation", "Blim(T_t u) == Blim u for rational t",
               [](SampleRng& rng, const GenConfig& cfg) {
                 Case c = one_fn(rng, cfg);
                 c.params = {draw_shift(rng)};
                 return c;
               },
               [](const Case& c, const ValuationSpec&) -> std::optional<Failure> {
                 const StepFn moved = translate(c.fns[0], c.params[0]);
                 for (const auto& tag : {kRight, kLeft}) {
                   const Rational a = banach_limit(moved, tag);
                   const Rational b = banach_limit(c.fns[0], tag);
                   if (a != b) return fail(a, b, "translation invariance (" + to_string(tag.side) + ")");
                 }
                 return std::nullopt;
               }});

  s.push_back({"blim_norm_bound", "|Blim u| <= ||u||_inf", one_fn,
               [](const Case& c, const ValuationSpec&) -> std::optional<Failure> {
                 const Rational m = ess_sup_norm(c.fns[0]);
                 for (const auto& tag : {kRight, kLeft}) {
                   const Rational b = banach_limit(c.fns[0], tag);
                   if (abs(b) > m) return fail(abs(b), m, "continuity bound (" + to_string(tag.side) + ")");
                 }
                 return std::nullopt;
               }});

  s.push_back({"cesaro_linearity", "Cesaro average is linear at every x",
               [](SampleRng& rng, const GenConfig& cfg) {
                 Case c = two_fns(rng, cfg);
                 c.params = {rng.rational(5, 3), rng.rational(5, 3), x_nonzero(rng)};
                 return c;
               },
               [](const Case& c, const ValuationSpec&) -> std::optional<Failure> {
                 const StepFn lin = add(scale(c.params[0], c.fns[0]), scale(c.params[1], c.fns[1]));
                 const Rational& x = c.params[2];
                 const Rational lhs = cesaro_eval(lin, x);
                 const Rational rhs = c.params[0] * cesaro_eval(c.fns[0], x) + c.params[1] * cesaro_eval(c.fns[1], x);
                 if (lhs != rhs) return fail(lhs, rhs, "Cesaro linearity");
                 return std::nullopt;
               }});

  s.push_back({"cesaro_positivity", "u >= 0 a.e. implies a non-negative Cesaro average",
               [](SampleRng& rng, const GenConfig& cfg) {
                 return Case{{nonneg(draw_stepfn(rng, cfg))}, {x_nonzero(rng)}};
               },
               [](const Case& c, const ValuationSpec&) -> std::optional<Failure> {
                 const Rational a = cesaro_eval(c.fns[0], c.params[0]);
                 if (a.sign() < 0) return fail(a, Rational(0), "Cesaro positivity");
                 return std::nullopt;
               }});

  s.push_back({"cesaro_boundedness", "|Cesaro average| <= ||u||_inf",
               [](SampleRng& rng, const GenConfig& cfg) { return Case{{draw_stepfn(rng, cfg)}, {x_nonzero(rng)}}; },
               [](const Case& c, const ValuationSpec&) -> std::optional<Failure> {
                 const Rational a = abs(cesaro_eval(c.fns[0], c.params[0]));
                 if (a > ess_sup_norm(c.fns[0])) return fail(a, ess_sup_norm(c.fns[0]), "Cesaro boundedness");
                 return std::nullopt;
               }});

  s.push_back({"cesaro_limit", "lim u = l implies the Cesaro limit is l",
               [](SampleRng& rng, const GenConfig& cfg) {
                 StepFn u = draw_stepfn(rng, cfg, FnKind::Mixed);
                 return Case{{with_right_tail(u, PeriodicCell::constant(rng.rational(cfg.value_range, 3)))}, {}};
               },
               [](const Case& c, const ValuationSpec&) -> std::optional<Failure> {
                 const Rational l = *has_limit_right(c.fns[0]);
                 const Rational mean = cesaro_limit_right(c.fns[0]).mean;
                 if (mean != l) return fail(mean, l, "Cesaro limit");
                 return std::nullopt;
               }});

  s.push_back({"cesaro_certificate", "|u^(x) - mean| <= certificate(x) for x beyond the core",
               [](SampleRng& rng, const GenConfig& cfg) {
                 Case c = one_fn(rng, cfg);
                 const Rational p = c.fns[0].right_tail().period();
                 const Rational from = max(c.fns[0].core_end(), Rational(1, 100));
                 c.params = {from + Rational(rng.uniform(0, 2000), rng.uniform(1, 7)), Rational(1000) * p};
                 return c;
               },
               [](const Case& c, const ValuationSpec&) -> std::optional<Failure> {
                 const CesaroLimit lim = cesaro_limit_right(c.fns[0]);
                 for (const auto& x : c.params) {
                   if (x.sign() <= 0 || x < lim.valid_from) continue;
                   const Rational err = abs(cesaro_eval(c.fns[0], x) - lim.mean);
                   if (err > lim.bound_at(x)) return fail(err, lim.bound_at(x), "certificate at x = " + x.str());
                 }
                 return std::nullopt;
               }});

  s.push_back({"cesaro_telescoping", "|u^(x) - (T_t u)^(x)| <= 2|t| ||u|| / x for x > 0",
               [](SampleRng& rng, const GenConfig& cfg) {
                 Case c = one_fn(rng, cfg);
                 c.params = {draw_shift(rng), abs(x_nonzero(rng))};
                 return c;
               },
               [](const Case& c, const ValuationSpec&) -> std::optional<Failure> {
                 const Rational& t = c.params[0];
                 const Rational& x = c.params[1];
                 const Rational diff = abs(cesaro_eval(c.fns[0], x) - cesaro_eval(translate(c.fns[0], t), x));
                 const Rational bound = Rational(2) * abs(t) * ess_sup_norm(c.fns[0]) / x;
                 if (diff > bound) return fail(diff, bound, "telescoping bound");
                 return std::nullopt;
               }});

  s.push_back({"valuation_identity", "mu(u v v) + mu(u ^ v) == mu(u) + mu(v), mu(0) == 0", two_fns,
               [](const Case& c, const ValuationSpec& spec) -> std::optional<Failure> {
                 const Valuation j = evaluate(spec, join(c.fns[0], c.fns[1]));
                 const Valuation m = evaluate(spec, meet(c.fns[0], c.fns[1]));
                 const Valuation a = evaluate(spec, c.fns[0]);
                 const Valuation b = evaluate(spec, c.fns[1]);
                 if (!consistent(j.value + m.value, j.truncation_error + m.truncation_error, a.value + b.value,
                                 a.truncation_error + b.truncation_error))
                   return fail(j.value + m.value, a.value + b.value, "valuation identity");
                 const Valuation z = evaluate(spec, make_constant(0));
                 if (abs(z.value) > z.truncation_error) return fail(z.value, Rational(0), "mu(0) != 0");
                 return std::nullopt;
               }});

  s.push_back({"monotonicity", "u <= v a.e. implies mu(u) <= mu(v)",
               [](SampleRng& rng, const GenConfig& cfg) {
                 StepFn u = draw_stepfn(rng, cfg);
                 StepFn v = add(u, nonneg(draw_stepfn(rng, cfg)));
                 return Case{{std::move(u), std::move(v)}, {}};
               },
               [](const Case& c, const ValuationSpec& spec) -> std::optional<Failure> {
                 if (!le_ae(c.fns[0], c.fns[1])) return fail("u > v somewhere", "u <= v", "generator");
                 const Valuation a = evaluate(spec, c.fns[0]);
                 const Valuation b = evaluate(spec, c.fns[1]);
                 if (a.value - a.truncation_error > b.value + b.truncation_error)
                   return fail(a.value, b.value, "mu(u) > mu(v) although u <= v");
                 return std::nullopt;
               }});

  s.push_back({"continuity", "mu(u + w/2^k) -> mu(u); Lipschitz bound when f is Lipschitz", two_fns,
               [](const Case& c, const ValuationSpec& spec) -> std::optional<Failure> {
                 const StepFn& u = c.fns[0];
                 const StepFn& w = c.fns[1];
                 const Valuation base = evaluate(spec, u);
                 const auto* b = std::get_if<ValuationSpec::BanachLimit>(&spec.variant());
                 std::vector<Rational> gaps;
                 for (long k = 1; k <= 12; ++k) {
                   const Rational h = Rational::pow2(-k);
                   const StepFn uk = add(u, scale(h, w));
                   const Valuation vk = evaluate(spec, uk);
                   const Rational gap = abs(vk.value - base.value);
                   if (b && b->f.flags().lipschitz) {
                     const Rational bound = *b->f.flags().lipschitz * ess_sup_norm(sub(uk, u)) +
                                            vk.truncation_error + base.truncation_error;
                     if (gap > bound) return fail(gap, bound, "Lipschitz bound at k = " + std::to_string(k));
                   }
                   gaps.push_back(gap - vk.truncation_error - base.truncation_error);
                 }
                 if (gaps.front().sign() > 0 && gaps.back() * Rational(64) > gaps.front())
                   return fail(gaps.back(), gaps.front() / Rational(64), "perturbation effect does not shrink");
                 return std::nullopt;
               }});

  s.push_back({"series_interval", "series valuation identity and additivity hold up to certified intervals",
               two_fns, [](const Case& c, const ValuationSpec& spec) -> std::optional<Failure> {
                 const Valuation j = evaluate(spec, join(c.fns[0], c.fns[1]));
                 const Valuation m = evaluate(spec, meet(c.fns[0], c.fns[1]));
                 const Valuation a = evaluate(spec, c.fns[0]);
                 const Valuation b = evaluate(spec, c.fns[1]);
                 if (!consistent(j.value + m.value, j.truncation_error + m.truncation_error, a.value + b.value,
                                 a.truncation_error + b.truncation_error))
                   return fail(j.value + m.value, a.value + b.value, "certified intervals do not overlap");
                 return std::nullopt;
               }});

  s.push_back({"series_geometric", "sum_i Blim(u)/2^i truncated at 20 terms brackets Blim u", one_fn,
               [](const Case& c, const ValuationSpec&) -> std::optional<Failure> {
                 const StepFn& u = c.fns[0];
                 const Rational m = ess_sup_norm(u);
                 std::vector<SeriesTerm> terms;
                 for (long i = 1; i <= 20; ++i)
                   terms.push_back({UltrafilterTag{Side::Right, "U" + std::to_string(i)},
                                    ValueMap::poly({Rational::pow2(-i)}), m * Rational::pow2(-i)});
                 const SpecPtr series = ValuationSpec::series(std::move(terms), m * Rational::pow2(-20));
                 const Valuation v = evaluate(*series, u);
                 const Rational truth = banach_limit(u, kRight);
                 if (abs(v.value - truth) > v.truncation_error)
                   return fail(v.value, truth, "truth outside [value - tail, value + tail]");
                 return std::nullopt;
               }});

  s.push_back({"ultra_laws", "ultralimit determinacy, candidate bound, eps-oracle and a.e. invariance",
               [](SampleRng& rng, const GenConfig& cfg) {
                 Case c = one_fn(rng, cfg);
                 const Rational lo = rng.rational(5, 2);
                 c.params = {lo, lo + draw_width(rng, cfg)};
                 return c;
               },
               [](const Case& c, const ValuationSpec&) -> std::optional<Failure> {
                 const StepFn& u = c.fns[0];
                 const Interval bump[] = {{c.params[0], c.params[1]}};
                 const StepFn chi = make_indicator(bump);
                 const StepFn same = sub(add(u, chi), chi);
                 if (!eq_ae(same, u)) return fail("not a.e. equal", "a.e. equal", "representation change");
                 const Rational m = ess_sup_norm(u);
                 for (const auto& tag : {kRight, kLeft}) {
                   const std::string side = to_string(tag.side);
                   const UltraLimit lim = ultralimit(u, tag);
                   if (lim.candidates != ultralimit(same, tag).candidates)
                     return fail("verdict changed", "same verdict", "a.e. invariance (" + side + ")");
                   Rational gap(1);
                   for (std::size_t i = 0; i < lim.candidates.size(); ++i) {
                     if (abs(lim.candidates[i]) > m)
                       return fail(abs(lim.candidates[i]), m, "candidate exceeds ||u|| (" + side + ")");
                     if (i > 0) gap = min(gap, lim.candidates[i] - lim.candidates[i - 1]);
                   }
                   // Sampled eps against the finite reduction.
                   for (const Rational& eps : {Rational(1, 2) * gap, gap / Rational(1000), Rational(1, 1000000000)}) {
                     const UltraVerdict want = lim.determined() ? UltraVerdict::ForcedIn : UltraVerdict::Undetermined;
                     for (const auto& l : lim.candidates) {
                       const UltraVerdict got = membership(DefinableSet::ball_preimage(u, l, eps), tag);
                       if (got != want)
                         return fail(to_string(got), to_string(want), "{|u - " + l.str() + "| < " + eps.str() + "} (" + side + ")");
                     }
                     const Rational outside = lim.candidates.back() + gap;
                     const UltraVerdict got = membership(DefinableSet::ball_preimage(u, outside, eps), tag);
                     if (got != UltraVerdict::ForcedOut)
                       return fail(to_string(got), "ForcedOut", "non-candidate " + outside.str() + " (" + side + ")");
                   }
                 }
                 return std::nullopt;
               }});

  s.push_back({"roundtrip", "parse(print(u)) == u", one_fn,
               [](const Case& c, const ValuationSpec&) -> std::optional<Failure> {
                 const std::string text = dsl::print(c.fns[0]);
                 const StepFn back = dsl::parse_fn(text);
                 if (!(back == c.fns[0]) || !eq_ae(back, c.fns[0]))
                   return fail(dsl::print(back), text, "canonical text round trip");
                 return std::nullopt;
               }});

  return s;
}

std::optional<Failure> guarded(const Suite& suite, const Case& c, const ValuationSpec& spec) {
  try {
    return suite.check(c, spec);
  } catch (const std::exception& e) {
    return Failure{"exception", "no exception", e.what()};
  }
}

Counterexample to_counterexample(std::uint64_t index, const Case& c, Failure f) {
  Counterexample cx;
  cx.index = index;
  for (const auto& u : c.fns) cx.fns.push_back(dsl::print(u));
  for (const auto& p : c.params) cx.params.push_back(p.str());
  cx.observed = std::move(f.observed);
  cx.expected = std::move(f.expected);
  cx.detail = std::move(f.detail);
  return cx;
}

}  // namespace

const std::vector<Suite>& suites() {
  static const std::vector<Suite> catalogue = build_catalogue();
  return catalogue;
}

const Suite& find_suite(std::string_view id) {
  for (const auto& s : suites())
    if (s.id == id) return s;
  throw std::invalid_argument("unknown suite '" + std::string(id) + "'");
}

SpecPtr default_spec() { return ValuationSpec::banach_limit(ValueMap::identity()); }

Report run_suite(std::string_view suite_id, const GenConfig& cfg, SpecPtr spec) {
  cfg.validate();
  const Suite& suite = find_suite(suite_id);
  if (!spec) spec = default_spec();
  const auto t0 = std::chrono::steady_clock::now();

  std::vector<std::optional<Counterexample>> outcomes(cfg.samples);
  auto work = [&](std::size_t first, std::size_t stride) {
    for (std::size_t i = first; i < cfg.samples; i += stride) {
      SampleRng rng(cfg.seed, i);
      std::optional<Failure> failure;
      Case c;
      try {
        c = suite.generate(rng, cfg);
        failure = guarded(suite, c, *spec);
      } catch (const std::exception& e) {
        failure = Failure{"exception", "no exception", std::string("generator: ") + e.what()};
      }
      if (failure) outcomes[i] = to_counterexample(i, c, *std::move(failure));
    }
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(cfg.threads, static_cast<unsigned>(cfg.samples)));
  if (threads == 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t, threads);
    for (auto& th : pool) th.join();
  }

  Report r;
  r.property_id = suite.id;
  r.seed = cfg.seed;
  r.spec = spec->str();
  r.samples_run = cfg.samples;
  for (auto& o : outcomes) {
    if (o) {
      r.passed = false;
      r.counterexample = std::move(o);
      break;
    }
  }
  r.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

std::vector<Report> run_all(const GenConfig& cfg, SpecPtr spec) {
  std::vector<Report> out;
  for (const auto& s : suites()) out.push_back(run_suite(s.id, cfg, spec));
  return out;
}

std::optional<Failure> replay(std::string_view suite_id, const Counterexample& cx, SpecPtr spec) {
  const Suite& suite = find_suite(suite_id);
  if (!spec) spec = default_spec();
  Case c;
  for (const auto& text : cx.fns) c.fns.push_back(dsl::parse_fn(text));
  for (const auto& p : cx.params) c.params.push_back(Rational::parse(p));
  return guarded(suite, c, *spec);
}

nlohmann::ordered_json to_json(const Counterexample& cx) {
  nlohmann::ordered_json j;
  j["index"] = cx.index;
  j["fns"] = cx.fns;
  j["params"] = cx.params;
  j["observed"] = cx.observed;
  j["expected"] = cx.expected;
  j["detail"] = cx.detail;
  return j;
}

Counterexample counterexample_from_json(const nlohmann::json& j) {
  Counterexample cx;
  cx.index = j.value("index", std::uint64_t{0});
  cx.fns = j.at("fns").get<std::vector<std::string>>();
  cx.params = j.value("params", std::vector<std::string>{});
  cx.observed = j.value("observed", "");
  cx.expected = j.value("expected", "");
  cx.detail = j.value("detail", "");
  return cx;
}

nlohmann::ordered_json to_json(const Report& r, bool include_elapsed) {
  nlohmann::ordered_json j;
  j["property_id"] = r.property_id;
  j["seed"] = r.seed;
  j["spec"] = r.spec;
  j["samples_run"] = r.samples_run;
  j["passed"] = r.passed;
  j["counterexample"] = r.counterexample ? to_json(*r.counterexample) : nlohmann::ordered_json(nullptr);
  if (include_elapsed) j["elapsed_ms"] = r.elapsed_ms;
  return j;
}

}  // namespace tival::checker
