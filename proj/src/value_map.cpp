#include "tival/value_map.hpp"

#include <utility>

namespace tival {

namespace {

// Grid used to spot-check the monotone flag: k/4 for k in [-16, 16].
std::vector<Rational> monotone_probe_grid() {
  std::vector<Rational> grid;
  for (long k = -16; k <= 16; ++k) grid.emplace_back(k, 4);
  return grid;
}

}  // namespace

ValueMap::ValueMap(std::string name, Evaluator fn, Flags flags, BoundProfile bound)
    : name_(std::move(name)), fn_(std::move(fn)), flags_(std::move(flags)), bound_(std::move(bound)) {
  const auto at_zero = fn_(Rational(0));
  if (!at_zero || !at_zero->is_zero())
    throw ValueMapError("value map '" + name_ + "' must satisfy f(0) = 0");
  if (flags_.monotone) {
    std::optional<Rational> prev;
    for (const auto& x : monotone_probe_grid()) {
      const auto y = fn_(x);
      if (!y) continue;
      if (prev && *y < *prev)
        throw ValueMapError("value map '" + name_ + "' is flagged monotone but decreases near " +
                            x.str());
      prev = y;
    }
  }
}

Rational ValueMap::bound(const Rational& m) const {
  if (!bound_) throw ValueMapError("value map '" + name_ + "' has no bound profile");
  return bound_(m);
}

Rational ValueMap::operator()(const Rational& x) const {
  auto y = fn_(x);
  if (!y) throw ValueMapError("value map '" + name_ + "' is undefined at " + x.str());
  return *std::move(y);
}

ValueMap ValueMap::identity() {
  return ValueMap(
      "id", [](const Rational& x) { return std::optional<Rational>(x); },
      Flags{.monotone = true, .continuous = true, .lipschitz = Rational(1)},
      [](const Rational& m) { return abs(m); });
}

ValueMap ValueMap::abs0() {
  return ValueMap(
      "abs0", [](const Rational& x) { return std::optional<Rational>(tival::abs(x)); },
      Flags{.monotone = false, .continuous = true, .lipschitz = Rational(1)},
      [](const Rational& m) { return abs(m); });
}

ValueMap ValueMap::clamp(const Rational& lo, const Rational& hi) {
  if (hi < lo) throw ValueMapError("clamp requires lo <= hi");
  auto clamp_raw = [lo, hi](const Rational& x) { return min(max(x, lo), hi); };
  const Rational shift = clamp_raw(Rational(0));
  auto f = [clamp_raw, shift](const Rational& x) {
    return std::optional<Rational>(clamp_raw(x) - shift);
  };
  auto bound = [f](const Rational& m) { return max(abs(*f(-abs(m))), abs(*f(abs(m)))); };
  return ValueMap("clamp(" + lo.str() + "," + hi.str() + ")", f,
                  Flags{.monotone = true, .continuous = true, .lipschitz = Rational(1)}, bound);
}

ValueMap ValueMap::poly(std::vector<Rational> coeffs) {
  if (coeffs.empty()) throw ValueMapError("poly needs at least one coefficient");
  std::string name = "poly(";
  for (std::size_t i = 0; i < coeffs.size(); ++i) name += (i ? "," : "") + coeffs[i].str();
  name += ")";
  // Odd powers with non-negative coefficients and no even powers: monotone.
  bool monotone = true;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    const bool odd_power = (i % 2) == 0;
    if (odd_power ? coeffs[i].sign() < 0 : !coeffs[i].is_zero()) monotone = false;
  }
  std::optional<Rational> lipschitz;
  if (coeffs.size() == 1) lipschitz = abs(coeffs[0]);
  auto f = [coeffs](const Rational& x) {
    Rational acc(0);
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = (acc + *it) * x;
    return std::optional<Rational>(acc);
  };
  auto bound = [coeffs](const Rational& m) {
    const Rational am = abs(m);
    Rational acc(0), power(1);
    for (const auto& c : coeffs) {
      power *= am;
      acc += abs(c) * power;
    }
    return acc;
  };
  return ValueMap(std::move(name), f,
                  Flags{.monotone = monotone, .continuous = true, .lipschitz = lipschitz}, bound);
}

}  // namespace tival
