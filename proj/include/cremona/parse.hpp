#pragma once

#include <cctype>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cremona/birational.hpp"
#include "cremona/error.hpp"
#include "cremona/word.hpp"

namespace cremona {

/// Byte range [offset, offset + length) of the source text.
struct SourceSpan {
  std::size_t offset = 0;
  std::size_t length = 0;
};

class ParseError : public Error {
 public:
  ParseError(ErrorCode code, const std::string& what, SourceSpan span)
      : Error(code, what + " at offset " + std::to_string(span.offset)), span_(span) {}

  SourceSpan span() const { return span_; }

 private:
  SourceSpan span_;
};

template <ErrorCode Code>
class TaggedParseError : public ParseError {
 public:
  TaggedParseError(const std::string& what, SourceSpan span) : ParseError(Code, what, span) {}
};

using SyntaxError = TaggedParseError<ErrorCode::syntax_error>;
using ArityError = TaggedParseError<ErrorCode::arity_error>;
using DomainError = TaggedParseError<ErrorCode::domain_error>;

/// Unknown word letter; carries its span like the other parse errors.
using UnknownGeneratorError = TaggedParseError<ErrorCode::unknown_generator>;

namespace detail {

enum class TokenKind { number, ident, symbol, end };

struct Token {
  TokenKind kind;
  std::string text;
  SourceSpan span;

  bool is(char c) const { return kind == TokenKind::symbol && text.size() == 1 && text[0] == c; }
  bool is_ident(std::string_view s) const { return kind == TokenKind::ident && text == s; }
};

// `#` starts a comment running to the end of the line.
inline std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < src.size()) {
    const char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (c == '#') {
      while (i < src.size() && src[i] != '\n') ++i;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      out.push_back({TokenKind::number, std::string(src.substr(i, j - i)), {i, j - i}});
      i = j;
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
      out.push_back({TokenKind::ident, std::string(src.substr(i, j - i)), {i, j - i}});
      i = j;
    } else if (std::string_view("+-*/^()[],;:").find(c) != std::string_view::npos) {
      out.push_back({TokenKind::symbol, std::string(1, c), {i, 1}});
      ++i;
    } else {
      throw SyntaxError(std::string("unexpected character '") + c + "'", {i, 1});
    }
  }
  out.push_back({TokenKind::end, "", {src.size(), 0}});
  return out;
}

class TokenStream {
 public:
  explicit TokenStream(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  const Token& peek(std::size_t ahead = 0) const {
    return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)];
  }
  const Token& next() {
    const Token& t = tokens_[pos_];
    if (pos_ + 1 < tokens_.size()) ++pos_;
    return t;
  }
  bool accept(char c) {
    if (!peek().is(c)) return false;
    next();
    return true;
  }
  const Token& expect(char c) {
    if (!peek().is(c)) fail(std::string("expected '") + c + "'");
    return next();
  }
  [[noreturn]] void fail(const std::string& what) const {
    const Token& t = peek();
    const std::string found = t.kind == TokenKind::end ? "end of input" : "'" + t.text + "'";
    throw SyntaxError(what + ", found " + found, t.span);
  }
  bool at_end() const { return peek().kind == TokenKind::end; }
  std::size_t position() const { return pos_; }
  const std::vector<Token>& tokens() const { return tokens_; }

 private:
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

inline SourceSpan join(SourceSpan a, SourceSpan b) { return {a.offset, b.offset + b.length - a.offset}; }

// Recursive descent over
//   expr  := term (('+'|'-') term)*
//   term  := unary (('*'|'/') unary)*
//   unary := '-' unary | power
//   power := primary ('^' nat)?
//   primary := number | variable | '(' expr ')'
// so `^` binds tighter than unary minus: -x^2 is -(x^2).
class ExprParser {
 public:
  static constexpr std::uint64_t kMaxExponent = 4096;

  ExprParser(TokenStream& ts, Field field, std::size_t nvars) : ts_(ts), field_(std::move(field)), nvars_(nvars) {}

  RationalFunction expr() {
    RationalFunction acc = term();
    while (ts_.peek().is('+') || ts_.peek().is('-')) {
      const bool plus = ts_.next().is('+');
      RationalFunction rhs = term();
      acc = plus ? acc + rhs : acc - rhs;
    }
    return acc;
  }

 private:
  RationalFunction term() {
    RationalFunction acc = unary();
    while (ts_.peek().is('*') || ts_.peek().is('/')) {
      const bool times = ts_.next().is('*');
      const SourceSpan start = ts_.peek().span;
      RationalFunction rhs = unary();
      if (times) {
        acc = acc * rhs;
      } else {
        if (rhs.is_zero()) {
          throw DomainError("division by zero in " + field_.tag(), join(start, previous_span()));
        }
        acc = acc / rhs;
      }
    }
    return acc;
  }

  RationalFunction unary() {
    if (ts_.accept('-')) return -unary();
    return power();
  }

  RationalFunction power() {
    RationalFunction base = primary();
    if (ts_.accept('^')) {
      const Token& t = ts_.peek();
      if (t.kind != TokenKind::number) ts_.fail("expected a nonnegative integer exponent");
      ts_.next();
      const Integer e(t.text);
      if (e > static_cast<unsigned long>(kMaxExponent)) throw SyntaxError("exponent too large", t.span);
      base = base.pow(e.get_ui());
    }
    return base;
  }

  RationalFunction primary() {
    const Token& t = ts_.peek();
    if (t.kind == TokenKind::number) {
      ts_.next();
      return RationalFunction::constant(field_, nvars_, field_.from_integer(Integer(t.text)));
    }
    if (t.kind == TokenKind::ident) {
      ts_.next();
      return variable(t);
    }
    if (ts_.accept('(')) {
      RationalFunction inner = expr();
      ts_.expect(')');
      return inner;
    }
    ts_.fail("expected a number, variable or '('");
  }

  RationalFunction variable(const Token& t) {
    std::optional<std::size_t> index;
    if (t.text == "x" || t.text == "y" || t.text == "z") {
      index = static_cast<std::size_t>(t.text == "x" ? 0 : t.text == "y" ? 1 : 2);
    } else if (t.text.size() > 1 && t.text[0] == 't' &&
               std::all_of(t.text.begin() + 1, t.text.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }) &&
               t.text[1] != '0') {
      index = std::stoul(t.text.substr(1)) - 1;
    } else if (t.text == "w" && field_.is_finite() && field_.degree() > 1) {
      return RationalFunction::constant(field_, nvars_, field_.generator());
    }
    if (!index) throw SyntaxError("unknown variable '" + t.text + "'", t.span);
    if (*index >= nvars_) {
      throw ArityError("variable '" + t.text + "' not available in dimension " + std::to_string(nvars_), t.span);
    }
    return RationalFunction::variable(field_, nvars_, *index);
  }

  SourceSpan previous_span() const {
    const auto& toks = ts_.tokens();
    const std::size_t pos = ts_.position();
    return pos == 0 ? toks[0].span : toks[pos - 1].span;
  }

  TokenStream& ts_;
  Field field_;
  std::size_t nvars_;
};

inline Field parse_field(TokenStream& ts) {
  const Token& t = ts.peek();
  if (t.is_ident("QQ")) {
    ts.next();
    return Field::rationals();
  }
  if (!t.is_ident("GF")) ts.fail("expected field QQ or GF(...)");
  const SourceSpan start = ts.next().span;
  ts.expect('(');
  const Token p = ts.peek();
  if (p.kind != TokenKind::number) ts.fail("expected a prime");
  ts.next();
  std::string m = "1";
  if (ts.accept('^')) {
    if (ts.peek().kind != TokenKind::number) ts.fail("expected an extension degree");
    m = ts.next().text;
  }
  const SourceSpan end = ts.expect(')').span;
  try {
    const Integer pi(p.text), mi(m);
    if (pi.get_str().size() > 12 || mi > 64) throw FieldTooLarge("field too large");
    return Field::extension(pi.get_ui(), static_cast<unsigned>(mi.get_ui()));
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw DomainError(e.what(), join(start, end));
  }
}

// Tuple starting at the current '['. The coordinate count is read off the
// top-level commas before any coordinate is parsed, since the field follows
// the closing bracket.
inline BirationalTuple parse_tuple(TokenStream& ts) {
  const auto& toks = ts.tokens();
  const std::size_t open = ts.position();
  if (!ts.peek().is('[')) ts.fail("expected '['");
  std::size_t depth = 0, commas = 0, close = open;
  for (std::size_t i = open; i < toks.size(); ++i) {
    const Token& t = toks[i];
    if (t.is('[') || t.is('(')) {
      ++depth;
    } else if (t.is(']') || t.is(')')) {
      if (depth == 0) throw SyntaxError("unbalanced bracket", t.span);
      if (--depth == 0) {
        close = i;
        break;
      }
    } else if (t.is(',') && depth == 1) {
      ++commas;
    } else if (t.kind == TokenKind::end || t.is(';')) {
      throw SyntaxError("unterminated tuple", toks[open].span);
    }
  }
  const std::size_t d = commas + 1;

  TokenStream field_ts(std::vector<Token>(toks.begin() + close + 1, toks.end()));
  if (!field_ts.peek().is_ident("over")) field_ts.fail("expected 'over' after the tuple");
  field_ts.next();
  const Field field = parse_field(field_ts);

  ts.expect('[');
  std::vector<RationalFunction> coords;
  ExprParser parser(ts, field, d);
  coords.push_back(parser.expr());
  while (ts.accept(',')) coords.push_back(parser.expr());
  ts.expect(']');
  if (!ts.peek().is_ident("over")) ts.fail("expected 'over'");
  ts.next();
  parse_field(ts);
  return BirationalTuple(field, std::move(coords));
}

inline std::string uppercase(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

struct WordParseOptions {
  bool allow_inverses = true;
};

// word := wfactor+ ; wfactor := name ('^' int)? | '[' word ',' word ']' ('^' int)?
// Juxtaposed names inside one identifier token ("abAB") are split against
// the declared names, longest match first.
class WordParser {
 public:
  WordParser(TokenStream& ts, const std::vector<std::string>& names, WordParseOptions options)
      : ts_(ts), names_(names), options_(options) {}

  std::vector<Letter> word() {
    std::vector<Letter> out;
    if (!starts_factor()) ts_.fail("expected a generator name or '['");
    while (true) {
      auto f = factor();
      out.insert(out.end(), f.begin(), f.end());
      if (ts_.accept('*')) {
        if (!starts_factor()) ts_.fail("expected a generator name or '['");
        continue;
      }
      if (!starts_factor()) break;
    }
    return out;
  }

 private:
  bool starts_factor() const { return ts_.peek().kind == TokenKind::ident || ts_.peek().is('['); }

  std::vector<Letter> factor() {
    std::vector<Letter> base;
    std::vector<Letter> prefix;
    if (ts_.peek().is('[')) {
      ts_.next();
      auto u = word();
      ts_.expect(',');
      auto v = word();
      ts_.expect(']');
      if (!options_.allow_inverses) throw SyntaxError("commutators need inverses", ts_.peek().span);
      base = u;
      base.insert(base.end(), v.begin(), v.end());
      auto ui = invert(u), vi = invert(v);
      base.insert(base.end(), ui.begin(), ui.end());
      base.insert(base.end(), vi.begin(), vi.end());
    } else {
      const Token& t = ts_.next();
      auto letters = split(t);
      // An exponent applies to the last letter only.
      base.push_back(letters.back());
      prefix.assign(letters.begin(), letters.end() - 1);
    }
    long exponent = 1;
    if (ts_.accept('^')) {
      const Token& sign_or_num = ts_.peek();
      bool negative = false;
      if (sign_or_num.is('-')) {
        ts_.next();
        negative = true;
      }
      const Token& num = ts_.peek();
      if (num.kind != TokenKind::number) ts_.fail("expected an integer exponent");
      ts_.next();
      const Integer e(num.text);
      if (e > 4096) throw SyntaxError("exponent too large", num.span);
      exponent = negative ? -e.get_si() : e.get_si();
      if (negative && !options_.allow_inverses) {
        throw SyntaxError("inverses are not allowed in semigroup words", join(sign_or_num.span, num.span));
      }
    }
    std::vector<Letter> out = prefix;
    const auto unit = exponent < 0 ? invert(base) : base;
    for (long k = 0; k < std::labs(exponent); ++k) out.insert(out.end(), unit.begin(), unit.end());
    return out;
  }

  static std::vector<Letter> invert(const std::vector<Letter>& w) {
    std::vector<Letter> out;
    for (auto it = w.rbegin(); it != w.rend(); ++it) out.push_back(it->inverted());
    return out;
  }

  std::optional<Letter> lookup(const std::string& s) const {
    for (std::size_t i = 0; i < names_.size(); ++i) {
      if (names_[i] == s) return Letter{i, false};
    }
    if (!options_.allow_inverses) return std::nullopt;
    for (std::size_t i = 0; i < names_.size(); ++i) {
      if (uppercase(names_[i]) == s && uppercase(names_[i]) != names_[i]) return Letter{i, true};
    }
    return std::nullopt;
  }

  bool split_from(const std::string& s, std::size_t pos, std::vector<Letter>& out) const {
    if (pos == s.size()) return true;
    for (std::size_t len = s.size() - pos; len > 0; --len) {
      if (auto l = lookup(s.substr(pos, len))) {
        out.push_back(*l);
        if (split_from(s, pos + len, out)) return true;
        out.pop_back();
      }
    }
    return false;
  }

  std::vector<Letter> split(const Token& t) const {
    std::vector<Letter> out;
    if (split_from(t.text, 0, out)) return out;
    // Report the first position where no declared name matches.
    std::size_t pos = 0;
    while (pos < t.text.size()) {
      std::size_t len = t.text.size() - pos;
      while (len > 0 && !lookup(t.text.substr(pos, len))) --len;
      if (len == 0) break;
      pos += len;
    }
    const std::size_t bad = std::min(pos, t.text.size() - 1);
    throw UnknownGeneratorError("unknown generator in '" + t.text + "'", {t.span.offset + bad, 1});
  }

  TokenStream& ts_;
  const std::vector<std::string>& names_;
  WordParseOptions options_;
};

}  // namespace detail

/// `[expr_1, ..., expr_d] over FIELD` with FIELD one of QQ, GF(p), GF(p^m).
inline BirationalTuple parse_map_expr(std::string_view text) {
  detail::TokenStream ts(detail::tokenize(text));
  auto tuple = detail::parse_tuple(ts);
  if (!ts.at_end()) ts.fail("trailing input");
  return tuple;
}

/// A single expression in `nvars` variables over `field`.
inline RationalFunction parse_rational_function(std::string_view text, const Field& field, std::size_t nvars) {
  detail::TokenStream ts(detail::tokenize(text));
  detail::ExprParser parser(ts, field, nvars);
  auto f = parser.expr();
  if (!ts.at_end()) ts.fail("trailing input");
  return f;
}

inline Polynomial parse_polynomial(std::string_view text, const Field& field, std::size_t nvars) {
  auto f = parse_rational_function(text, field, nvars);
  if (!f.denominator().is_one()) throw DomainError("expression is not a polynomial", {0, text.size()});
  return f.numerator();
}

/// Letters are declared names; `^-1`, `^k` or the uppercased name for
/// inverses; juxtaposition or `*` for products; `[u,v]` is u v u^-1 v^-1.
/// The empty string and `1` denote the empty word.
inline GroupWord parse_word(std::string_view text, const std::vector<std::string>& names) {
  detail::TokenStream ts(detail::tokenize(text));
  if (ts.at_end()) return GroupWord();
  if (ts.peek().kind == detail::TokenKind::number && ts.peek().text == "1" && ts.peek(1).kind == detail::TokenKind::end) {
    return GroupWord();
  }
  detail::WordParser parser(ts, names, {});
  auto letters = parser.word();
  if (!ts.at_end()) ts.fail("trailing input");
  return GroupWord(letters);
}

/// Positive word for sub-semigroup queries, as generator indices.
inline std::vector<std::size_t> parse_semigroup_word(std::string_view text, const std::vector<std::string>& names) {
  detail::TokenStream ts(detail::tokenize(text));
  std::vector<std::size_t> out;
  if (ts.at_end()) return out;
  if (ts.peek().kind == detail::TokenKind::number && ts.peek().text == "1" && ts.peek(1).kind == detail::TokenKind::end) {
    return out;
  }
  detail::WordParser parser(ts, names, {.allow_inverses = false});
  for (const auto& l : parser.word()) out.push_back(l.generator);
  if (!ts.at_end()) ts.fail("trailing input");
  return out;
}

/// One block of a generator file: `name: TUPLE ; inverse: TUPLE`. The
/// inverse part is optional (semigroup generators need none).
struct GeneratorSpec {
  std::string name;
  BirationalTuple forward;
  std::optional<BirationalTuple> inverse;
  SourceSpan span;
};

inline std::vector<GeneratorSpec> parse_generator_file(std::string_view text) {
  detail::TokenStream ts(detail::tokenize(text));
  std::vector<GeneratorSpec> out;
  while (!ts.at_end()) {
    const detail::Token& name = ts.peek();
    if (name.kind != detail::TokenKind::ident) ts.fail("expected a generator name");
    ts.next();
    for (const auto& g : out) {
      if (g.name == name.text) throw SyntaxError("duplicate generator '" + name.text + "'", name.span);
    }
    ts.expect(':');
    GeneratorSpec spec{name.text, detail::parse_tuple(ts), std::nullopt, name.span};
    if (ts.accept(';')) {
      if (!ts.peek().is_ident("inverse")) ts.fail("expected 'inverse'");
      ts.next();
      ts.expect(':');
      spec.inverse = detail::parse_tuple(ts);
    }
    out.push_back(std::move(spec));
  }
  return out;
}

/// Certifies every block; blocks without an inverse are rejected.
inline std::vector<CremonaElement> certify_generators(const std::vector<GeneratorSpec>& specs) {
  std::vector<CremonaElement> out;
  for (const auto& s : specs) {
    if (!s.inverse) throw SyntaxError("generator '" + s.name + "' has no inverse", s.span);
    out.push_back(certify_inverse(s.forward, *s.inverse, s.name));
  }
  return out;
}

}  // namespace cremona
