#pragma once

// Textual form of step functions and valuation specs.
//
//   fn     := "const" "(" rat ")"
//           | "indicator" "(" iv ("u" iv)* ")"
//           | "periodic" "(" rat ";" pieces ")"
//           | "step" "{" tail "," "[" pieces? "]" "," tail "}"
//           | ("add" | "join" | "meet") "(" fn "," fn ")"
//           | "scale" "(" rat "," fn ")"
//           | "translate" "(" fn "," rat ")"
//   tail   := "const" "(" rat ")" | "periodic" "(" rat ";" pieces ")"
//   pieces := piece ("," piece)*
//   piece  := iv "=" rat
//   iv     := "[" rat "," rat ")"
//   rat    := ["-"] digits ["/" digits]
//
//   spec   := "blim" "(" map ["," ("right" | "left")] ")"
//           | "right" "(" spec ")" | "left" "(" spec ")"
//           | "series" "(" map ":" rat ("," map ":" rat)* ";" "tail" "=" rat ")"
//   map    := "id" | "abs0" | "clamp" "(" rat "," rat ")" | "poly" "(" rat ("," rat)* ")"

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "tival/rational.hpp"
#include "tival/stepfn.hpp"
#include "tival/valuation.hpp"

namespace tival::dsl {

struct Span {
  std::size_t offset = 0;
  std::size_t length = 0;
  int line = 1;
  int column = 1;
};

/// Syntax or semantic error located in the source text.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, Span span, std::vector<std::string> expected = {});

  const Span& span() const { return span_; }
  const std::vector<std::string>& expected() const { return expected_; }
  const std::string& detail() const { return detail_; }

 private:
  Span span_;
  std::vector<std::string> expected_;
  std::string detail_;
};

struct RatNode {
  Rational value;
  Span span;
};

struct IntervalNode {
  RatNode lo, hi;
  Span span;
};

struct PieceNode {
  IntervalNode iv;
  RatNode value;
  Span span;
};

struct TailNode {
  enum class Kind { Const, Periodic } kind = Kind::Const;
  RatNode scalar;  // constant value or period
  std::vector<PieceNode> pieces;
  Span span;
};

/// Parse tree of a function expression.
struct Ast {
  enum class Kind { Const, Indicator, Periodic, Step, Add, Join, Meet, Scale, Translate };
  Kind kind = Kind::Const;
  Span span;
  std::optional<RatNode> scalar;  // const value, period, scale factor or shift
  std::vector<IntervalNode> intervals;
  std::vector<PieceNode> pieces;
  std::optional<TailNode> left, right;
  std::vector<Ast> children;
};

Ast parse_ast(std::string_view text);
/// Semantic pass; errors carry the span of the offending node.
StepFn build(const Ast& ast);
StepFn parse_fn(std::string_view text);

ValueMap parse_value_map(std::string_view text);
SpecPtr parse_spec(std::string_view text);

/// Canonical text: always the step{...} form, so parse_fn(print(u)) == u.
std::string print(const StepFn& u);
std::string print(const PeriodicCell& tail);

}  // namespace tival::dsl
