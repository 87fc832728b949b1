#pragma once

// Ball averages and ball overlap ratios in R^n, in binary64.

#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace tival::ndim {

/// Adaptive quadrature did not reach its tolerance.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, double achieved)
      : std::runtime_error(what), achieved_(achieved) {}
  double achieved() const { return achieved_; }

 private:
  double achieved_;
};

/// The ball B_x(t) in R^dim.
struct BallSpec {
  int dim = 1;
  double radius = 1;
  std::vector<double> center;

  /// Throws std::invalid_argument on dim < 1, radius <= 0 or a center of
  /// the wrong length.
  void validate() const;
};

double euclidean_norm(std::span<const double> t);

/// |B_x(t) n B_x(0)| / |B_x(0)| as twice a hyperspherical cap:
/// I_{1-(d/2x)^2}((dim+1)/2, 1/2) with d = |t|.
double overlap_ratio_caps(int dim, double x, std::span<const double> t);

struct LayerOptions {
  /// Relative tolerance of every one-dimensional quadrature.
  double rel_tol = 1e-9;
  unsigned max_depth = 12;
};

/// The same ratio by slicing into (dim-1)-dimensional layers, recursing on
/// dimension down to the interval case. Requires dim >= 2.
double overlap_ratio_layers(int dim, double x, std::span<const double> t, const LayerOptions& opt = {});

/// Slice-volume functions of the layer recursion for |t| = d:
/// f(y) = |B_y(s) n B_y(0)| and g(y) = |B_y(0)| in R^k, |s| = d.
double layer_f(int k, double y, double d, const LayerOptions& opt = {});
double layer_g(int k, double y, const LayerOptions& opt = {});

/// Bracket obtained by splitting the layer integrals at z (0 < z < x):
/// with eps = 1 - f(z)/g(z), J = integral of psi over [z, x],
///   lower = (1 - eps) J / (z psi(z) + J)
///   upper = (z phi(z) + (1 + eps) J) / J
/// where phi(y) = y f(y)/sqrt(x^2 - y^2), psi(y) = y g(y)/sqrt(x^2 - y^2).
struct LayerSqueeze {
  double lower;
  double ratio;
  double upper;
  double epsilon;
};

LayerSqueeze layer_squeeze(int dim, double x, std::span<const double> t, double z, const LayerOptions& opt = {});

/// |B_x(-t) symmetric-difference B_x(0)| / |B_x(0)| = 2 (1 - overlap ratio).
double symdiff_ratio(int dim, double x, std::span<const double> t);

struct Estimate {
  double mean = 0;
  double std_error = 0;
};

/// Monte Carlo estimate of the overlap ratio; std_error is the binomial
/// standard error.
Estimate overlap_ratio_mc(int dim, double x, std::span<const double> t, std::uint64_t samples,
                          std::uint64_t seed = 1);

/// A bounded function on R^dim given by an evaluator.
struct SampledField {
  int dim = 1;
  std::function<double(std::span<const double>)> evaluator;
  /// |u| <= bound everywhere.
  double bound = 0;
};

/// y -> u(y - t).
SampledField translate(const SampledField& u, std::vector<double> t);

enum class Method { Grid, MonteCarlo };

/// Average of u over B_x(0); 0 for x <= 0. `budget` is the number of
/// sample points. Grid: midpoint grid on the enclosing cube, error
/// estimated against the half-resolution grid. Monte Carlo: uniform points
/// from a counter-based generator keyed by seed, so the same seed gives the
/// same points for every field. Throws std::invalid_argument when the
/// budget yields no point inside the ball, and std::runtime_error when a
/// sample exceeds the declared bound.
Estimate ball_cesaro(const SampledField& u, double x, Method method, std::uint64_t budget,
                     std::uint64_t seed = 1);

/// Uniform point of the unit ball in R^dim for counter i of stream seed.
void unit_ball_point(int dim, std::uint64_t seed, std::uint64_t i, std::span<double> out);

}  // namespace tival::ndim
