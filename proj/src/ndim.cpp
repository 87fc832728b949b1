#include "tival/ndim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/beta.hpp>

namespace tival::ndim {

namespace {

void check_args(int dim, double x, std::span<const double> t) {
  if (dim < 1) throw std::invalid_argument("dim must be >= 1");
  if (!(x > 0) || !std::isfinite(x)) throw std::invalid_argument("radius x must be positive");
  if (t.size() != static_cast<std::size_t>(dim))
    throw std::invalid_argument("center has " + std::to_string(t.size()) + " coordinates, expected " +
                                std::to_string(dim));
}

// Converged when the error is within tolerance relative to max(L1, scale);
// scale keeps nearly vanishing integrals from demanding absolute precision.
template <class F>
double integrate(F f, double a, double b, const LayerOptions& opt, double scale) {
  if (!(b > a)) return 0;
  double error = 0;
  double l1 = 0;
  const double value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
      f, a, b, opt.max_depth, opt.rel_tol, &error, &l1);
  const double target = 100 * opt.rel_tol * std::max(l1, scale);
  if (error > target && error > 1e-300) {
    std::ostringstream msg;
    msg << "quadrature did not converge on [" << a << ", " << b << "]: achieved error " << error
        << " against tolerance " << target;
    throw QuadratureError(msg.str(), error);
  }
  return value;
}

// One layer step: 2 * integral over r in [0, x] of h(sqrt(x^2 - r^2)) with
// r = x sin(theta), restricted to theta <= theta_max. The result is a
// k-dimensional volume, of order x^k. Near theta_max the slice volume
// behaves like (theta_max - theta)^((k+1)/2); theta = theta_max (1 - s^2)
// turns that into a polynomial in s.
template <class H>
double layer_step(H h, double x, double theta_max, int k, const LayerOptions& opt) {
  return 2 * integrate(
                 [&](double s) {
                   const double y = x * std::cos(theta_max * (1 - s * s));
                   return h(y) * y * 2 * theta_max * s;
                 },
                 0.0, 1.0, opt, std::pow(x, k));
}

// Inner levels of the recursion run ten times tighter than the level above,
// so their rounding noise stays below the outer error estimate.
LayerOptions inner(const LayerOptions& opt) {
  LayerOptions o = opt;
  o.rel_tol = std::max(opt.rel_tol / 10, 1e-15);
  return o;
}

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double open_unit(std::uint64_t bits) { return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53; }

struct Accumulator {
  double sum = 0;
  double sum_sq = 0;
  std::uint64_t n = 0;

  void add(double v) {
    sum += v;
    sum_sq += v * v;
    ++n;
  }
  double mean() const { return n ? sum / static_cast<double>(n) : 0; }
  double std_error() const {
    if (n < 2) return 0;
    const double m = mean();
    const double var = std::max(0.0, (sum_sq - static_cast<double>(n) * m * m) / static_cast<double>(n - 1));
    return std::sqrt(var / static_cast<double>(n));
  }
};

double checked(const SampledField& u, std::span<const double> p) {
  const double v = u.evaluator(p);
  if (!(std::abs(v) <= u.bound * (1 + 1e-12)))
    throw std::runtime_error("field value " + std::to_string(v) + " exceeds declared bound " +
                             std::to_string(u.bound));
  return v;
}

Accumulator grid_average(const SampledField& u, double x, std::uint64_t per_axis) {
  Accumulator acc;
  const int n = u.dim;
  const double h = 2 * x / static_cast<double>(per_axis);
  std::vector<std::uint64_t> idx(static_cast<std::size_t>(n), 0);
  std::vector<double> p(static_cast<std::size_t>(n));
  while (true) {
    double r2 = 0;
    for (int k = 0; k < n; ++k) {
      p[k] = -x + (static_cast<double>(idx[k]) + 0.5) * h;
      r2 += p[k] * p[k];
    }
    if (r2 < x * x) acc.add(checked(u, p));
    int k = 0;
    while (k < n && ++idx[k] == per_axis) idx[k++] = 0;
    if (k == n) break;
  }
  return acc;
}

}  // namespace

void BallSpec::validate() const { check_args(dim, radius, center); }

double euclidean_norm(std::span<const double> t) {
  double s = 0;
  for (double v : t) s += v * v;
  return std::sqrt(s);
}

double overlap_ratio_caps(int dim, double x, std::span<const double> t) {
  check_args(dim, x, t);
  const double d = euclidean_norm(t);
  if (d >= 2 * x) return 0;
  if (d == 0) return 1;
  const double a = d / (2 * x);
  // I_{1-a^2}(p, 1/2) = 1 - I_{a^2}(1/2, p), which keeps precision as a -> 0.
  return boost::math::ibetac(0.5, (dim + 1) / 2.0, a * a);
}

double layer_g(int k, double y, const LayerOptions& opt) {
  if (k < 1) throw std::invalid_argument("layer dimension must be >= 1");
  if (y <= 0) return 0;
  if (k == 1) return 2 * y;
  const LayerOptions in = inner(opt);
  return layer_step([&](double r) { return layer_g(k - 1, r, in); }, y, std::numbers::pi / 2, k, opt);
}

double layer_f(int k, double y, double d, const LayerOptions& opt) {
  if (k < 1) throw std::invalid_argument("layer dimension must be >= 1");
  if (y <= d / 2) return 0;
  if (k == 1) return 2 * y - d;
  // Slices of radius <= d/2 do not overlap.
  const double theta_max = std::acos(std::clamp(d / (2 * y), 0.0, 1.0));
  const LayerOptions in = inner(opt);
  return layer_step([&](double r) { return layer_f(k - 1, r, d, in); }, y, theta_max, k, opt);
}

double overlap_ratio_layers(int dim, double x, std::span<const double> t, const LayerOptions& opt) {
  check_args(dim, x, t);
  if (dim < 2) throw std::invalid_argument("the layer recursion needs dim >= 2");
  const double d = euclidean_norm(t);
  if (d >= 2 * x) return 0;
  const double num = layer_f(dim, x, d, opt);
  const double den = layer_g(dim, x, opt);
  return std::clamp(num / den, 0.0, 1.0);
}

LayerSqueeze layer_squeeze(int dim, double x, std::span<const double> t, double z, const LayerOptions& opt) {
  check_args(dim, x, t);
  if (dim < 2) throw std::invalid_argument("the layer recursion needs dim >= 2");
  if (!(z > 0 && z < x)) throw std::invalid_argument("split point z must lie in (0, x)");
  const double d = euclidean_norm(t);
  const int k = dim - 1;
  const LayerOptions in = inner(opt);
  const double fz = layer_f(k, z, d, in);
  const double gz = layer_g(k, z, in);
  const double w = z / std::sqrt(x * x - z * z);
  const double phi_z = w * fz;
  const double psi_z = w * gz;
  // J = integral over y in [z, x] of psi, i.e. over r in [0, sqrt(x^2 - z^2)].
  const double j = layer_step([&](double r) { return layer_g(k, r, in); }, x, std::acos(z / x), dim, opt) / 2;
  LayerSqueeze s;
  s.epsilon = 1 - fz / gz;
  s.ratio = overlap_ratio_layers(dim, x, t, opt);
  s.lower = (1 - s.epsilon) * j / (z * psi_z + j);
  s.upper = (z * phi_z + (1 + s.epsilon) * j) / j;
  return s;
}

double symdiff_ratio(int dim, double x, std::span<const double> t) {
  return 2 * (1 - overlap_ratio_caps(dim, x, t));
}

void unit_ball_point(int dim, std::uint64_t seed, std::uint64_t i, std::span<double> out) {
  const std::uint64_t base = splitmix64(seed) + i * static_cast<std::uint64_t>(dim + 2);
  double norm2 = 0;
  for (int k = 0; k < dim; k += 2) {
    const double u1 = open_unit(splitmix64(base + static_cast<std::uint64_t>(k)));
    const double u2 = open_unit(splitmix64(base + static_cast<std::uint64_t>(k) + 1));
    const double r = std::sqrt(-2 * std::log(u1));
    out[k] = r * std::cos(2 * std::numbers::pi * u2);
    if (k + 1 < dim) out[k + 1] = r * std::sin(2 * std::numbers::pi * u2);
  }
  for (int k = 0; k < dim; ++k) norm2 += out[k] * out[k];
  const double radius = std::pow(open_unit(splitmix64(base + static_cast<std::uint64_t>(dim) + 1)), 1.0 / dim);
  const double scale = radius / std::sqrt(norm2);
  for (int k = 0; k < dim; ++k) out[k] *= scale;
}

Estimate overlap_ratio_mc(int dim, double x, std::span<const double> t, std::uint64_t samples,
                          std::uint64_t seed) {
  check_args(dim, x, t);
  if (samples < 2) throw std::invalid_argument("need at least two samples");
  std::vector<double> p(static_cast<std::size_t>(dim));
  std::uint64_t hits = 0;
  for (std::uint64_t i = 0; i < samples; ++i) {
    unit_ball_point(dim, seed, i, p);
    double r2 = 0;
    for (int k = 0; k < dim; ++k) {
      const double c = x * p[k] - t[k];
      r2 += c * c;
    }
    if (r2 < x * x) ++hits;
  }
  const double q = static_cast<double>(hits) / static_cast<double>(samples);
  return {q, std::sqrt(q * (1 - q) / static_cast<double>(samples))};
}

SampledField translate(const SampledField& u, std::vector<double> t) {
  if (t.size() != static_cast<std::size_t>(u.dim)) throw std::invalid_argument("translation has the wrong dimension");
  SampledField out = u;
  out.evaluator = [f = u.evaluator, t = std::move(t)](std::span<const double> y) {
    std::vector<double> shifted(y.begin(), y.end());
    for (std::size_t k = 0; k < shifted.size(); ++k) shifted[k] -= t[k];
    return f(shifted);
  };
  return out;
}

Estimate ball_cesaro(const SampledField& u, double x, Method method, std::uint64_t budget, std::uint64_t seed) {
  if (u.dim < 1) throw std::invalid_argument("dim must be >= 1");
  if (!u.evaluator) throw std::invalid_argument("field has no evaluator");
  if (!(x > 0)) return {};
  if (method == Method::MonteCarlo) {
    if (budget < 2) throw std::invalid_argument("budget exhausted: need at least two samples");
    Accumulator acc;
    std::vector<double> p(static_cast<std::size_t>(u.dim));
    for (std::uint64_t i = 0; i < budget; ++i) {
      unit_ball_point(u.dim, seed, i, p);
      for (double& c : p) c *= x;
      acc.add(checked(u, p));
    }
    return {acc.mean(), acc.std_error()};
  }
  auto per_axis = static_cast<std::uint64_t>(std::floor(std::pow(static_cast<double>(budget), 1.0 / u.dim) + 1e-9));
  per_axis -= per_axis % 2;
  if (per_axis < 4) throw std::invalid_argument("budget exhausted: grid needs at least 4 points per axis");
  const Accumulator fine = grid_average(u, x, per_axis);
  const Accumulator coarse = grid_average(u, x, per_axis / 2);
  if (fine.n == 0 || coarse.n == 0) throw std::invalid_argument("budget exhausted: no grid point inside the ball");
  return {fine.mean(), std::abs(fine.mean() - coarse.mean())};
}

}  // namespace tival::ndim
