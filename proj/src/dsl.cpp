#include "tival/dsl.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace tival::dsl {

namespace {

std::string join_expected(const std::vector<std::string>& expected) {
  std::string out;
  for (std::size_t i = 0; i < expected.size(); ++i) out += (i ? ", " : "") + expected[i];
  return out;
}

std::string located(const std::string& message, const Span& span) {
  return "line " + std::to_string(span.line) + ", column " + std::to_string(span.column) + ": " + message;
}

struct Token {
  enum class Kind { Ident, Number, Punct, End } kind;
  std::string text;
  Span span;
};

std::vector<Token> lex(std::string_view text) {
  std::vector<Token> out;
  int line = 1, column = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
  };
  while (i < text.size()) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    Span span{i, 1, line, column};
    std::size_t j = i;
    Token::Kind kind;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_')) ++j;
      kind = Token::Kind::Ident;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      kind = Token::Kind::Number;
    } else if (std::string_view("()[]{},;=/-:").find(c) != std::string_view::npos) {
      j = i + 1;
      kind = Token::Kind::Punct;
    } else {
      throw ParseError("unexpected character '" + std::string(1, c) + "'", span);
    }
    span.length = j - i;
    out.push_back({kind, std::string(text.substr(i, j - i)), span});
    advance(j - i);
  }
  out.push_back({Token::Kind::End, "", Span{text.size(), 0, line, column}});
  return out;
}

Span cover(const Span& a, const Span& b) {
  Span s = a;
  s.length = b.offset + b.length - a.offset;
  return s;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : tokens_(lex(text)) {}

  Ast fn() {
    const Token& head = peek();
    if (head.kind != Token::Kind::Ident) fail({"function expression"});
    const std::string name = head.text;
    Ast ast;
    if (name == "const") {
      ast.kind = Ast::Kind::Const;
      next();
      expect("(");
      ast.scalar = rat();
      expect(")");
    } else if (name == "indicator") {
      ast.kind = Ast::Kind::Indicator;
      next();
      expect("(");
      ast.intervals.push_back(interval());
      while (peek_is("u")) {
        next();
        ast.intervals.push_back(interval());
      }
      expect(")", {"u", ")"});
    } else if (name == "periodic") {
      ast.kind = Ast::Kind::Periodic;
      next();
      expect("(");
      ast.scalar = rat();
      expect(";");
      ast.pieces = piece_list();
      expect(")", {",", ")"});
    } else if (name == "step") {
      ast.kind = Ast::Kind::Step;
      next();
      expect("{");
      ast.left = tail();
      expect(",");
      expect("[");
      if (!peek_is("]")) ast.pieces = piece_list();
      expect("]", {",", "]"});
      expect(",");
      ast.right = tail();
      expect("}");
    } else if (name == "add" || name == "join" || name == "meet") {
      ast.kind = name == "add" ? Ast::Kind::Add : (name == "join" ? Ast::Kind::Join : Ast::Kind::Meet);
      next();
      expect("(");
      ast.children.push_back(fn());
      expect(",");
      ast.children.push_back(fn());
      expect(")");
    } else if (name == "scale") {
      ast.kind = Ast::Kind::Scale;
      next();
      expect("(");
      ast.scalar = rat();
      expect(",");
      ast.children.push_back(fn());
      expect(")");
    } else if (name == "translate") {
      ast.kind = Ast::Kind::Translate;
      next();
      expect("(");
      ast.children.push_back(fn());
      expect(",");
      ast.scalar = rat();
      expect(")");
    } else {
      fail({"const", "indicator", "periodic", "step", "add", "join", "meet", "scale", "translate"});
    }
    ast.span = cover(head.span, tokens_[pos_ - 1].span);
    return ast;
  }

  ValueMap value_map() {
    const Token& head = peek();
    if (peek_is("id")) {
      next();
      return ValueMap::identity();
    }
    if (peek_is("abs0")) {
      next();
      return ValueMap::abs0();
    }
    if (peek_is("clamp")) {
      next();
      expect("(");
      const RatNode lo = rat();
      expect(",");
      const RatNode hi = rat();
      expect(")");
      if (hi.value < lo.value) throw ParseError("clamp requires lo <= hi", cover(head.span, hi.span));
      return ValueMap::clamp(lo.value, hi.value);
    }
    if (peek_is("poly")) {
      next();
      expect("(");
      std::vector<Rational> coeffs{rat().value};
      while (peek_is(",")) {
        next();
        coeffs.push_back(rat().value);
      }
      expect(")", {",", ")"});
      return ValueMap::poly(std::move(coeffs));
    }
    fail({"id", "abs0", "clamp", "poly"});
  }

  SpecPtr spec() {
    if (peek_is("blim")) {
      next();
      expect("(");
      ValueMap f = value_map();
      UltrafilterTag tag;
      if (peek_is(",")) {
        next();
        if (peek_is("left")) {
          tag.side = Side::Left;
        } else if (!peek_is("right")) {
          fail({"right", "left"});
        }
        next();
      }
      expect(")", {",", ")"});
      return ValuationSpec::banach_limit(std::move(f), tag);
    }
    if (peek_is("right") || peek_is("left")) {
      const bool right = peek_is("right");
      next();
      expect("(");
      SpecPtr inner = spec();
      expect(")");
      return right ? ValuationSpec::right_tail(std::move(inner)) : ValuationSpec::left_tail(std::move(inner));
    }
    if (peek_is("series")) {
      next();
      expect("(");
      std::vector<SeriesTerm> terms;
      for (int i = 1;; ++i) {
        ValueMap f = value_map();
        expect(":");
        const RatNode bound = rat();
        if (bound.value.sign() < 0) throw ParseError("term bound must be non-negative", bound.span);
        terms.push_back({UltrafilterTag{Side::Right, "U" + std::to_string(i)}, std::move(f), bound.value});
        if (!peek_is(",")) break;
        next();
      }
      expect(";", {",", ";"});
      expect("tail");
      expect("=");
      const RatNode tail_bound = rat();
      expect(")");
      if (tail_bound.value.sign() < 0) throw ParseError("tail bound must be non-negative", tail_bound.span);
      return ValuationSpec::series(std::move(terms), tail_bound.value);
    }
    fail({"blim", "right", "left", "series"});
  }

  void finish() {
    if (peek().kind != Token::Kind::End) fail({"end of input"});
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  bool peek_is(std::string_view text) const {
    return peek().kind != Token::Kind::End && peek().kind != Token::Kind::Number && peek().text == text;
  }
  const Token& next() { return tokens_[pos_++]; }

  [[noreturn]] void fail(std::vector<std::string> expected) const {
    const Token& t = peek();
    const std::string found = t.kind == Token::Kind::End ? "end of input" : "'" + t.text + "'";
    const std::string message = "expected one of {" + join_expected(expected) + "}, found " + found;
    throw ParseError(message, t.span, std::move(expected));
  }

  void expect(std::string_view text, std::vector<std::string> expected = {}) {
    if (!peek_is(text)) {
      if (expected.empty()) expected.emplace_back(text);
      fail(std::move(expected));
    }
    next();
  }

  RatNode rat() {
    const Span start = peek().span;
    std::string text;
    if (peek_is("-")) {
      next();
      text += "-";
    }
    if (peek().kind != Token::Kind::Number) fail({"number"});
    text += next().text;
    if (peek_is("/")) {
      next();
      if (peek().kind != Token::Kind::Number) fail({"number"});
      const Token& den = next();
      if (std::all_of(den.text.begin(), den.text.end(), [](char c) { return c == '0'; }))
        throw ParseError("zero denominator", den.span);
      text += "/" + den.text;
    }
    return RatNode{Rational::parse(text), cover(start, tokens_[pos_ - 1].span)};
  }

  IntervalNode interval() {
    const Span start = peek().span;
    expect("[");
    RatNode lo = rat();
    expect(",");
    RatNode hi = rat();
    expect(")");
    return IntervalNode{std::move(lo), std::move(hi), cover(start, tokens_[pos_ - 1].span)};
  }

  std::vector<PieceNode> piece_list() {
    std::vector<PieceNode> pieces;
    for (;;) {
      IntervalNode iv = interval();
      expect("=");
      RatNode value = rat();
      const Span span = cover(iv.span, value.span);
      pieces.push_back(PieceNode{std::move(iv), std::move(value), span});
      if (!peek_is(",") || !next_is_piece()) break;
      next();
    }
    return pieces;
  }

  // After a ',' inside a piece list, another piece starts with '['.
  bool next_is_piece() const {
    return pos_ + 1 < tokens_.size() && tokens_[pos_ + 1].kind == Token::Kind::Punct &&
           tokens_[pos_ + 1].text == "[";
  }

  TailNode tail() {
    const Span start = peek().span;
    TailNode node;
    if (peek_is("const")) {
      next();
      expect("(");
      node.kind = TailNode::Kind::Const;
      node.scalar = rat();
      expect(")");
    } else if (peek_is("periodic")) {
      next();
      expect("(");
      node.kind = TailNode::Kind::Periodic;
      node.scalar = rat();
      expect(";");
      node.pieces = piece_list();
      expect(")", {",", ")"});
    } else {
      fail({"const", "periodic"});
    }
    node.span = cover(start, tokens_[pos_ - 1].span);
    return node;
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

// Checks that pieces tile [lo, hi) left to right and returns them as Piece starts.
std::vector<Piece> tile(const std::vector<PieceNode>& nodes) {
  std::vector<Piece> out;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto& iv = nodes[i].iv;
    if (!(iv.lo.value < iv.hi.value))
      throw ParseError("piece interval must be non-empty", iv.span);
    if (i > 0 && nodes[i - 1].iv.hi.value != iv.lo.value)
      throw ParseError("pieces must be contiguous: expected start " + nodes[i - 1].iv.hi.value.str(),
                       iv.lo.span);
    out.push_back({iv.lo.value, nodes[i].value.value});
  }
  return out;
}

PeriodicCell build_cell(const RatNode& period, const std::vector<PieceNode>& nodes, const Span& span) {
  if (period.value.sign() <= 0) throw ParseError("period must be positive", period.span);
  if (nodes.front().iv.lo.value.sign() != 0)
    throw ParseError("periodic pieces must start at 0", nodes.front().iv.lo.span);
  if (nodes.back().iv.hi.value != period.value)
    throw ParseError("periodic pieces must end at the period " + period.value.str(), nodes.back().iv.hi.span);
  try {
    return PeriodicCell(period.value, tile(nodes));
  } catch (const StepFnError& e) {
    throw ParseError(e.what(), span);
  }
}

PeriodicCell build_tail(const TailNode& t) {
  if (t.kind == TailNode::Kind::Const) return PeriodicCell::constant(t.scalar.value);
  return build_cell(t.scalar, t.pieces, t.span);
}

std::string print_pieces(std::span<const Piece> pieces, const Rational& end) {
  std::string out;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    const Rational& hi = i + 1 < pieces.size() ? pieces[i + 1].start : end;
    out += (i ? ", [" : "[") + pieces[i].start.str() + "," + hi.str() + ")=" + pieces[i].value.str();
  }
  return out;
}

}  // namespace

ParseError::ParseError(const std::string& message, Span span, std::vector<std::string> expected)
    : std::runtime_error(located(message, span)),
      span_(span),
      expected_(std::move(expected)),
      detail_(message) {}

Ast parse_ast(std::string_view text) {
  Parser p(text);
  Ast ast = p.fn();
  p.finish();
  return ast;
}

StepFn build(const Ast& ast) {
  switch (ast.kind) {
    case Ast::Kind::Const:
      return make_constant(ast.scalar->value);
    case Ast::Kind::Indicator: {
      std::vector<Interval> ivs;
      for (const auto& iv : ast.intervals) ivs.push_back({iv.lo.value, iv.hi.value});
      try {
        return make_indicator(ivs);
      } catch (const StepFnError& e) {
        throw ParseError(e.what(), ast.span);
      }
    }
    case Ast::Kind::Periodic:
      return make_periodic(build_cell(*ast.scalar, ast.pieces, ast.span), Rational(0));
    case Ast::Kind::Step: {
      std::vector<Piece> core = tile(ast.pieces);
      const Rational start = core.empty() ? Rational(0) : core.front().start;
      const Rational end = core.empty() ? Rational(0) : ast.pieces.back().iv.hi.value;
      return StepFn(build_tail(*ast.left), start, std::move(core), end, build_tail(*ast.right));
    }
    case Ast::Kind::Add:
    case Ast::Kind::Join:
    case Ast::Kind::Meet: {
      const StepFn u = build(ast.children[0]);
      const StepFn v = build(ast.children[1]);
      if (ast.kind == Ast::Kind::Add) return add(u, v);
      return ast.kind == Ast::Kind::Join ? join(u, v) : meet(u, v);
    }
    case Ast::Kind::Scale:
      return scale(ast.scalar->value, build(ast.children[0]));
    case Ast::Kind::Translate:
      return translate(build(ast.children[0]), ast.scalar->value);
  }
  throw ParseError("unknown expression", ast.span);
}

StepFn parse_fn(std::string_view text) { return build(parse_ast(text)); }

ValueMap parse_value_map(std::string_view text) {
  Parser p(text);
  ValueMap f = p.value_map();
  p.finish();
  return f;
}

SpecPtr parse_spec(std::string_view text) {
  Parser p(text);
  SpecPtr s = p.spec();
  p.finish();
  return s;
}

std::string print(const PeriodicCell& tail) {
  if (const auto c = tail.constant_value()) return "const(" + c->str() + ")";
  return "periodic(" + tail.period().str() + "; " + print_pieces(tail.pieces(), tail.period()) + ")";
}

std::string print(const StepFn& u) {
  std::string body = "step{" + print(u.left_tail()) + ", [" + print_pieces(u.core(), u.core_end()) + "], " +
                     print(u.right_tail()) + "}";
  if (u.core().empty() && !u.core_start().is_zero())
    return "translate(" + body + ", " + u.core_start().str() + ")";
  return body;
}

}  // namespace tival::dsl
