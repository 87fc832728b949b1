// tival: command-line front end. Every subcommand prints one JSON object.
// Exit status: 0 ok, 1 property failure, 2 usage, parse or evaluation error.

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "tival/cesaro.hpp"
#include "tival/checker.hpp"
#include "tival/dsl.hpp"
#include "tival/ndim.hpp"
#include "tival/ultra.hpp"
#include "tival/valuation.hpp"

using json = nlohmann::ordered_json;
using namespace tival;

namespace {

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  }
};

json report(const std::string& command, json inputs) {
  json j;
  j["command"] = command;
  j["inputs"] = std::move(inputs);
  return j;
}

void finish(json& j, const Timer& timer) {
  for (const char* key : {"exact", "error_bound", "counterexample", "seed"})
    if (!j.contains(key)) j[key] = nullptr;
  j["elapsed_ms"] = timer.ms();
}

json error_object(const std::string& kind, const std::string& message) {
  json e;
  e["kind"] = kind;
  e["message"] = message;
  return e;
}

UltrafilterTag side_tag(const std::string& side) {
  if (side == "right") return {Side::Right, "U"};
  if (side == "left") return {Side::Left, "U"};
  throw CLI::ValidationError("--side", "expected right or left");
}

json ultra_json(const StepFn& u, Side side) {
  const UltraLimit lim = ultralimit(u, {side, "U"});
  json j;
  j["verdict"] = lim.determined() ? "Determined" : "Undetermined";
  json c = json::array();
  for (const auto& v : lim.candidates) c.push_back(v.str());
  j["candidates"] = c;
  return j;
}

std::vector<double> parse_vector(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
    if (used == 0 || used != item.size()) throw CLI::ValidationError("--t", "not a number: '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw CLI::ValidationError("--t", "empty vector");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact step functions, Banach limits and translation-invariant valuations"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  std::string fn_text, at_text, side = "right", spec_text, suite_id, method = "caps", t_text, cx_text;
  std::string from_text, to_text;
  bool limit = false;
  std::uint64_t samples = 100, seed = 1, mc_samples = 1000000;
  unsigned threads = 1;
  std::size_t dump_count = 0;
  int dim = 1;
  double radius = 1;
  checker::GenConfig gen;

  auto* eval_cmd = app.add_subcommand("eval", "evaluate u at a point");
  eval_cmd->add_option("fn", fn_text, "step function")->required();
  auto* eval_at = eval_cmd->add_option("--at", at_text, "rational point");
  auto* dump = eval_cmd->add_option("--dump-samples", dump_count, "emit N (x, u(x)) pairs on [--from, --to]");
  eval_cmd->add_option("--from", from_text)->needs(dump);
  eval_cmd->add_option("--to", to_text)->needs(dump);
  eval_at->excludes(dump);

  auto* ces_cmd = app.add_subcommand("cesaro", "Cesaro average at x, or its limit");
  ces_cmd->add_option("fn", fn_text)->required();
  auto* ces_at = ces_cmd->add_option("--at", at_text);
  auto* ces_lim = ces_cmd->add_flag("--limit", limit);
  ces_cmd->add_option("--side", side, "right or left (with --limit)");
  ces_at->excludes(ces_lim);

  auto* blim_cmd = app.add_subcommand("blim", "Banach limit");
  blim_cmd->add_option("fn", fn_text)->required();
  blim_cmd->add_option("--side", side);

  auto* ultra_cmd = app.add_subcommand("ultralimit", "ultralimit over right and left ultrafilters");
  ultra_cmd->add_option("fn", fn_text)->required();
  auto* ultra_side = ultra_cmd->add_option("--side", side);

  auto* val_cmd = app.add_subcommand("valuate", "evaluate a valuation spec");
  val_cmd->add_option("--spec", spec_text)->required();
  val_cmd->add_option("fn", fn_text)->required();

  auto add_gen_options = [&](CLI::App* cmd) {
    cmd->add_option("--samples", samples)->check(CLI::PositiveNumber);
    cmd->add_option("--seed", seed);
    cmd->add_option("--spec", spec_text);
    cmd->add_option("--threads", threads)->check(CLI::PositiveNumber);
    cmd->add_option("--max-breakpoints", gen.max_breakpoints)->check(CLI::PositiveNumber);
    cmd->add_option("--max-period-den", gen.max_period_denominator)->check(CLI::PositiveNumber);
    cmd->add_option("--value-range", gen.value_range)->check(CLI::PositiveNumber);
  };
  auto* check_cmd = app.add_subcommand("check", "run property suites");
  check_cmd->add_option("--suite", suite_id, "suite id or 'all'")->required();
  add_gen_options(check_cmd);

  auto* replay_cmd = app.add_subcommand("replay", "re-run a counterexample");
  replay_cmd->add_option("--suite", suite_id)->required();
  replay_cmd->add_option("--counterexample", cx_text, "JSON object, or @file")->required();
  replay_cmd->add_option("--spec", spec_text);

  auto* suites_cmd = app.add_subcommand("suites", "list property suites");

  auto* nd_cmd = app.add_subcommand("ndim-ratio", "ball overlap ratio |B_x(t) n B_x(0)| / |B_x(0)|");
  nd_cmd->add_option("--dim", dim)->required()->check(CLI::PositiveNumber);
  nd_cmd->add_option("--x", radius)->required();
  nd_cmd->add_option("--t", t_text, "comma-separated center")->required();
  nd_cmd->add_option("--method", method)->check(CLI::IsMember({"caps", "layers", "mc"}));
  nd_cmd->add_option("--samples", mc_samples, "Monte Carlo points");
  nd_cmd->add_option("--seed", seed);

  Timer timer;
  std::string command = "usage";
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    json j = report(app.get_subcommands().empty() ? "usage" : app.get_subcommands().front()->get_name(), nullptr);
    j["error"] = error_object("usage", e.what());
    finish(j, timer);
    std::cout << j.dump() << '\n';
    std::cerr << "error: " << e.what() << "\nrun with --help for usage\n";
    return 2;
  }

  CLI::App* sub = app.get_subcommands().front();
  command = sub->get_name();
  json out = report(command, json::object());
  int status = 0;
  try {
    if (sub == eval_cmd) {
      out["inputs"]["fn"] = fn_text;
      const StepFn u = dsl::parse_fn(fn_text);
      if (*dump) {
        if (from_text.empty() || to_text.empty()) throw CLI::ValidationError("--dump-samples", "needs --from and --to");
        const Rational a = Rational::parse(from_text), b = Rational::parse(to_text);
        if (dump_count < 2 || !(a < b)) throw CLI::ValidationError("--dump-samples", "need N >= 2 and from < to");
        out["inputs"]["from"] = a.str();
        out["inputs"]["to"] = b.str();
        json pts = json::array();
        for (std::size_t i = 0; i < dump_count; ++i) {
          const Rational x = a + (b - a) * Rational(static_cast<long>(i), static_cast<long>(dump_count - 1));
          pts.push_back({x.str(), u(x).str()});
        }
        out["samples"] = pts;
      } else {
        if (at_text.empty()) throw CLI::ValidationError("--at", "required");
        const Rational x = Rational::parse(at_text);
        out["inputs"]["at"] = x.str();
        out["value"] = u(x).str();
      }
      out["exact"] = true;
      out["error_bound"] = "0";
    } else if (sub == ces_cmd) {
      out["inputs"]["fn"] = fn_text;
      const StepFn u = dsl::parse_fn(fn_text);
      if (limit) {
        const CesaroLimit lim = side_tag(side).side == Side::Right ? cesaro_limit_right(u) : cesaro_limit_left(u);
        out["inputs"]["side"] = side;
        out["value"] = lim.mean.str();
        out["exact"] = true;
        out["error_bound"] = "0";
        out["certificate"] = {{"core_defect", lim.core_defect.str()},
                              {"tail_slack", lim.tail_slack.str()},
                              {"valid_from", lim.valid_from.str()}};
      } else {
        if (at_text.empty()) throw CLI::ValidationError("cesaro", "one of --at or --limit is required");
        const Rational x = Rational::parse(at_text);
        out["inputs"]["at"] = x.str();
        out["value"] = cesaro_eval(u, x).str();
        out["exact"] = true;
        out["error_bound"] = "0";
      }
    } else if (sub == blim_cmd) {
      out["inputs"]["fn"] = fn_text;
      const StepFn u = dsl::parse_fn(fn_text);
      out["inputs"]["side"] = side;
      out["value"] = banach_limit(u, side_tag(side)).str();
      out["exact"] = true;
      out["error_bound"] = "0";
    } else if (sub == ultra_cmd) {
      out["inputs"]["fn"] = fn_text;
      const StepFn u = dsl::parse_fn(fn_text);
      if (*ultra_side) {
        out["inputs"]["side"] = side;
        out["value"] = ultra_json(u, side_tag(side).side);
      } else {
        out["value"] = {{"right", ultra_json(u, Side::Right)}, {"left", ultra_json(u, Side::Left)}};
      }
      out["exact"] = true;
    } else if (sub == val_cmd) {
      const SpecPtr spec = dsl::parse_spec(spec_text);
      const StepFn u = dsl::parse_fn(fn_text);
      out["inputs"]["spec"] = spec->str();
      out["inputs"]["fn"] = fn_text;
      const Valuation v = evaluate(*spec, u);
      out["value"] = v.value.str();
      out["exact"] = v.truncation_error.is_zero();
      out["error_bound"] = v.truncation_error.str();
      const ValuationCertificate cert = is_valuation_certificate(*spec);
      json c;
      for (const auto& [name, claim] : {std::pair{"valuation", cert.valuation},
                                        {"translation_invariant", cert.translation_invariant},
                                        {"monotone", cert.monotone},
                                        {"continuous", cert.continuous},
                                        {"nontrivial", cert.nontrivial}})
        c[name] = {{"guaranteed", claim.guaranteed}, {"reason", claim.reason}};
      out["certificate"] = c;
    } else if (sub == check_cmd) {
      gen.seed = seed;
      gen.samples = samples;
      gen.threads = threads;
      const SpecPtr spec = spec_text.empty() ? checker::default_spec() : dsl::parse_spec(spec_text);
      out["inputs"] = {{"suite", suite_id}, {"samples", samples}, {"spec", spec->str()},
                       {"max_breakpoints", gen.max_breakpoints}, {"max_period_den", gen.max_period_denominator},
                       {"value_range", gen.value_range}};
      std::vector<checker::Report> reports;
      if (suite_id == "all") {
        reports = checker::run_all(gen, spec);
      } else {
        checker::find_suite(suite_id);
        reports.push_back(checker::run_suite(suite_id, gen, spec));
      }
      bool passed = true;
      json cx = nullptr;
      json rs = json::array();
      for (const auto& r : reports) {
        rs.push_back(checker::to_json(r, false));
        if (!r.passed && passed) {
          passed = false;
          cx = checker::to_json(*r.counterexample);
          cx["suite"] = r.property_id;
        }
      }
      out["passed"] = passed;
      out["reports"] = rs;
      out["exact"] = true;
      out["counterexample"] = cx;
      out["seed"] = seed;
      status = passed ? 0 : 1;
    } else if (sub == replay_cmd) {
      std::string text = cx_text;
      if (!text.empty() && text.front() == '@') {
        std::ifstream in(text.substr(1));
        if (!in) throw CLI::ValidationError("--counterexample", "cannot read " + text.substr(1));
        text.assign(std::istreambuf_iterator<char>(in), {});
      }
      nlohmann::json parsed = nlohmann::json::parse(text);
      if (parsed.contains("counterexample")) parsed = parsed["counterexample"];
      const checker::Counterexample cx = checker::counterexample_from_json(parsed);
      const SpecPtr spec = spec_text.empty() ? checker::default_spec() : dsl::parse_spec(spec_text);
      out["inputs"] = {{"suite", suite_id}, {"spec", spec->str()}};
      const auto failure = checker::replay(suite_id, cx, spec);
      out["passed"] = !failure;
      out["exact"] = true;
      if (failure) {
        json f = checker::to_json(cx);
        f["observed"] = failure->observed;
        f["expected"] = failure->expected;
        f["detail"] = failure->detail;
        out["counterexample"] = f;
      }
      status = failure ? 1 : 0;
    } else if (sub == suites_cmd) {
      json list = json::array();
      for (const auto& s : checker::suites()) list.push_back({{"id", s.id}, {"description", s.description}});
      out["value"] = list;
    } else if (sub == nd_cmd) {
      const std::vector<double> t = parse_vector(t_text);
      out["inputs"] = {{"dim", dim}, {"x", radius}, {"t", t}, {"method", method}};
      out["exact"] = false;
      if (method == "caps") {
        out["ratio"] = ndim::overlap_ratio_caps(dim, radius, t);
      } else if (method == "layers") {
        out["ratio"] = ndim::overlap_ratio_layers(dim, radius, t);
      } else {
        const ndim::Estimate e = ndim::overlap_ratio_mc(dim, radius, t, mc_samples, seed);
        out["inputs"]["samples"] = mc_samples;
        out["ratio"] = e.mean;
        out["error_bound"] = e.std_error;
        out["seed"] = seed;
      }
    }
  } catch (const dsl::ParseError& e) {
    json err = error_object("parse", e.detail());
    err["line"] = e.span().line;
    err["column"] = e.span().column;
    err["offset"] = e.span().offset;
    err["expected"] = e.expected();
    out["error"] = err;
    std::cerr << "error: " << e.what() << '\n';
    status = 2;
  } catch (const CLI::Error& e) {
    out["error"] = error_object("usage", e.what());
    std::cerr << "error: " << e.what() << '\n';
    status = 2;
  } catch (const nlohmann::json::exception& e) {
    out["error"] = error_object("parse", e.what());
    std::cerr << "error: " << e.what() << '\n';
    status = 2;
  } catch (const PeriodExplosion& e) {
    out["error"] = error_object("period_explosion", e.what());
    std::cerr << "error: " << e.what() << '\n';
    status = 2;
  } catch (const std::exception& e) {
    out["error"] = error_object("domain", e.what());
    std::cerr << "error: " << e.what() << '\n';
    status = 2;
  }
  finish(out, timer);
  std::cout << out.dump() << '\n';
  return status;
}
