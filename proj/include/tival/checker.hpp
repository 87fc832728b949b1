#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "tival/rational.hpp"
#include "tival/stepfn.hpp"
#include "tival/valuation.hpp"

namespace tival::checker {

struct GenConfig {
  std::uint64_t seed = 1;
  std::size_t samples = 100;
  /// Pieces per core or cell, at most.
  std::size_t max_breakpoints = 5;
  long max_period_denominator = 3;
  /// Values are drawn from [-value_range, value_range].
  long value_range = 4;
  /// Worker threads; results never depend on it.
  unsigned threads = 1;

  /// Throws std::invalid_argument on zero samples or non-positive bounds.
  void validate() const;
};

enum class FnKind { Constant, Indicator, Periodic, Mixed, CompactSupport };

std::string to_string(FnKind k);

/// Deterministic per-sample generator: its stream depends only on
/// (seed, index), never on scheduling. Built on mt19937_64, whose output
/// sequence is fixed by the standard; bounded draws use rejection sampling
/// rather than std distributions, which vary between library vendors.
class SampleRng {
 public:
  SampleRng(std::uint64_t seed, std::uint64_t index);

  std::uint64_t next() { return engine_(); }
  /// Uniform integer in [lo, hi].
  long uniform(long lo, long hi);
  bool coin() { return (next() >> 63) != 0; }
  /// num/den with |value| <= range and den in [1, max_den].
  Rational rational(long range, long max_den);

 private:
  std::mt19937_64 engine_;
};

/// Draws a function of a random kind (constant 10%, indicator 20%,
/// periodic 20%, mixed tails 30%, compact support 20%).
StepFn gen_stepfn(const GenConfig& cfg, std::uint64_t index);
StepFn gen_stepfn_of(FnKind kind, const GenConfig& cfg, std::uint64_t index);
StepFn draw_stepfn(SampleRng& rng, const GenConfig& cfg);
StepFn draw_stepfn(SampleRng& rng, const GenConfig& cfg, FnKind kind);

/// Inputs of one sample: functions plus rational parameters.
struct Case {
  std::vector<StepFn> fns;
  std::vector<Rational> params;
};

struct Failure {
  std::string observed;
  std::string expected;
  std::string detail;
};

struct Counterexample {
  std::uint64_t index = 0;
  /// Functions in canonical DSL form.
  std::vector<std::string> fns;
  std::vector<std::string> params;
  std::string observed;
  std::string expected;
  std::string detail;
};

struct Report {
  std::string property_id;
  std::uint64_t seed = 0;
  std::string spec;
  std::size_t samples_run = 0;
  bool passed = true;
  std::optional<Counterexample> counterexample;
  double elapsed_ms = 0;
};

struct Suite {
  std::string id;
  std::string description;
  std::function<Case(SampleRng&, const GenConfig&)> generate;
  std::function<std::optional<Failure>(const Case&, const ValuationSpec&)> check;
};

const std::vector<Suite>& suites();
const Suite& find_suite(std::string_view id);

/// The default spec, blim(id).
SpecPtr default_spec();

/// Runs one suite on cfg.samples generated cases. Throws
/// std::invalid_argument for an unknown suite id.
Report run_suite(std::string_view suite_id, const GenConfig& cfg, SpecPtr spec = nullptr);
std::vector<Report> run_all(const GenConfig& cfg, SpecPtr spec = nullptr);

/// Re-checks a serialized counterexample; returns the failure it reproduces.
std::optional<Failure> replay(std::string_view suite_id, const Counterexample& cx, SpecPtr spec = nullptr);

nlohmann::ordered_json to_json(const Report& r, bool include_elapsed = true);
nlohmann::ordered_json to_json(const Counterexample& cx);
Counterexample counterexample_from_json(const nlohmann::json& j);

}  // namespace tival::checker
