#pragma once

#include <cctype>
#include <charconv>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "epsforge/critical.hpp"
#include "epsforge/errors.hpp"
#include "epsforge/expr.hpp"

namespace epsforge {

// ---------- printing ----------

namespace detail {

inline std::string binder_name(uint64_t depth) {
  static const char* names[6] = {"x", "y", "z", "u", "v", "w"};
  if (depth < 6) return names[depth];
  return "x" + std::to_string(depth);
}

inline const char* head_symbol(Expr::Kind k) {
  switch (k) {
    case Expr::Kind::Plus:
      return "+";
    case Expr::Kind::Times:
      return "*";
    case Expr::Kind::Monus:
      return "monus";
    case Expr::Kind::Eq:
      return "=";
    case Expr::Kind::Lt:
      return "<";
    case Expr::Kind::And:
      return "and";
    case Expr::Kind::Or:
      return "or";
    case Expr::Kind::Imp:
      return "imp";
    default:
      return "?";
  }
}

inline void print_rec(const Expr& e, uint64_t depth, std::string& out) {
  using K = Expr::Kind;
  switch (e.kind()) {
    case K::Num:
      out += std::to_string(e.value());
      return;
    case K::Bool:
      out += e.value() ? "true" : "false";
      return;
    case K::Var: {
      uint64_t i = e.value();
      if (i < depth)
        out += binder_name(depth - 1 - i);
      else
        out += "?" + std::to_string(i - depth);  // dangling; diagnostic only
      return;
    }
    case K::Eps:
      out += "(eps ";
      out += binder_name(depth);
      out += ' ';
      print_rec(e.body(), depth + 1, out);
      out += ')';
      return;
    case K::Not:
      out += "(not ";
      print_rec(e.body(), depth, out);
      out += ')';
      return;
    default:
      out += '(';
      out += head_symbol(e.kind());
      out += ' ';
      print_rec(e.left(), depth, out);
      out += ' ';
      print_rec(e.right(), depth, out);
      out += ')';
      return;
  }
}

}  // namespace detail

inline std::string print_expr(const Expr& e) {
  std::string s;
  detail::print_rec(e, 0, s);
  return s;
}

inline std::string print_critical(const CriticalFormula& cf) {
  std::string s = "(crit ";
  s += detail::binder_name(0);
  s += ' ';
  detail::print_rec(cf.matrix, 1, s);
  s += ' ';
  detail::print_rec(cf.witness, 0, s);
  s += ')';
  return s;
}

inline std::string print_critical_set(const CriticalFormulaSet& cr) {
  std::string s;
  for (const auto& cf : cr.axioms()) {
    s += print_critical(cf);
    s += '\n';
  }
  return s;
}

// ---------- parsing ----------

namespace detail {

struct Token {
  enum class T { LParen, RParen, Atom, End } type = T::End;
  std::string text;
  std::size_t line = 1;
  std::size_t col = 1;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) { advance(); }

  const Token& peek() const { return tok_; }

  Token next() {
    Token t = tok_;
    advance();
    return t;
  }

 private:
  static bool atom_char(char c) {
    return !std::isspace(static_cast<unsigned char>(c)) && c != '(' && c != ')' && c != ';';
  }

  void advance() {
    for (;;) {
      while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) bump();
      if (pos_ < src_.size() && src_[pos_] == ';') {  // line comment
        while (pos_ < src_.size() && src_[pos_] != '\n') bump();
        continue;
      }
      break;
    }
    tok_.line = line_;
    tok_.col = col_;
    if (pos_ >= src_.size()) {
      tok_.type = Token::T::End;
      tok_.text.clear();
      return;
    }
    char c = src_[pos_];
    if (c == '(') {
      tok_.type = Token::T::LParen;
      tok_.text = "(";
      bump();
      return;
    }
    if (c == ')') {
      tok_.type = Token::T::RParen;
      tok_.text = ")";
      bump();
      return;
    }
    std::size_t start = pos_;
    while (pos_ < src_.size() && atom_char(src_[pos_])) bump();
    tok_.type = Token::T::Atom;
    tok_.text.assign(src_.substr(start, pos_ - start));
  }

  void bump() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
  Token tok_;
};

inline bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

inline bool reserved_word(const std::string& s) {
  return s == "eps" || s == "crit" || s == "not" || s == "and" || s == "or" || s == "imp" ||
         s == "monus" || s == "true" || s == "false" || s == "+" || s == "*" || s == "=" || s == "<";
}

}  // namespace detail

class Parser {
 public:
  explicit Parser(std::string_view src) : lex_(src) {}

  // One complete expression; all variables must be bound.
  Expr parse_one() {
    Expr e = parse_any();
    expect_end();
    return e;
  }

  // A file: a sequence of (crit ...) forms.
  CriticalFormulaSet parse_file() {
    std::vector<CriticalFormula> axioms;
    while (lex_.peek().type != detail::Token::T::End) axioms.push_back(parse_crit());
    return CriticalFormulaSet::build(std::move(axioms));
  }

 private:
  using T = detail::Token::T;

  [[noreturn]] static void fail(const std::string& msg, const detail::Token& at) {
    throw ParseError(msg, at.line, at.col);
  }

  detail::Token expect(T type, const char* what) {
    if (lex_.peek().type != type) fail(std::string("expected ") + what, lex_.peek());
    return lex_.next();
  }

  void expect_end() {
    if (lex_.peek().type != T::End) fail("trailing input after expression", lex_.peek());
  }

  std::string expect_symbol(const char* what) {
    detail::Token t = expect(T::Atom, what);
    if (detail::all_digits(t.text)) fail(std::string(what) + " may not be a numeral", t);
    if (detail::reserved_word(t.text)) fail("'" + t.text + "' is a reserved word", t);
    return t.text;
  }

  Expr parse_term_arg() {
    detail::Token at = lex_.peek();
    Expr e = parse_any();
    if (!e.is_term()) fail("expected a term", at);
    return e;
  }

  Expr parse_formula_arg() {
    detail::Token at = lex_.peek();
    Expr e = parse_any();
    if (!e.is_formula()) fail("expected a formula", at);
    return e;
  }

  Expr parse_any() {
    detail::Token t = lex_.next();
    switch (t.type) {
      case T::End:
        fail("unexpected end of input", t);
      case T::RParen:
        fail("unexpected ')'", t);
      case T::Atom: {
        if (detail::all_digits(t.text)) {
          uint64_t n = 0;
          auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), n);
          if (ec != std::errc() || p != t.text.data() + t.text.size()) fail("numeral out of range", t);
          return Expr::num(n);
        }
        if (t.text == "true") return Expr::bool_const(true);
        if (t.text == "false") return Expr::bool_const(false);
        return resolve_var(t);
      }
      case T::LParen:
        break;
    }
    detail::Token head = expect(T::Atom, "an operator");
    const std::string& op = head.text;
    Expr result;
    if (op == "+" || op == "*" || op == "monus") {
      Expr a = parse_term_arg();
      Expr b = parse_term_arg();
      result = Expr::make(op == "+" ? Expr::Kind::Plus : op == "*" ? Expr::Kind::Times : Expr::Kind::Monus,
                          std::move(a), std::move(b));
    } else if (op == "=" || op == "<") {
      Expr a = parse_term_arg();
      Expr b = parse_term_arg();
      result = Expr::make(op == "=" ? Expr::Kind::Eq : Expr::Kind::Lt, std::move(a), std::move(b));
    } else if (op == "not") {
      result = Expr::neg(parse_formula_arg());
    } else if (op == "and" || op == "or" || op == "imp") {
      Expr a = parse_formula_arg();
      Expr b = parse_formula_arg();
      result = Expr::make(op == "and" ? Expr::Kind::And : op == "or" ? Expr::Kind::Or : Expr::Kind::Imp,
                          std::move(a), std::move(b));
    } else if (op == "eps") {
      std::string name = expect_symbol("a bound variable");
      scope_.push_back(name);
      Expr body = parse_formula_arg();
      scope_.pop_back();
      result = Expr::eps(std::move(body));
    } else if (op == "crit") {
      fail("crit is only allowed at the top level of a file", head);
    } else {
      fail("unknown operator '" + op + "'", head);
    }
    expect(T::RParen, "')'");
    return result;
  }

  Expr resolve_var(const detail::Token& t) {
    for (std::size_t i = scope_.size(); i-- > 0;)
      if (scope_[i] == t.text) return Expr::var(scope_.size() - 1 - i);
    if (scope_.empty())
      fail("free variable '" + t.text + "' in a closed position", t);
    fail("free variable '" + t.text + "' not distinguished", t);
  }

  CriticalFormula parse_crit() {
    expect(T::LParen, "'('");
    detail::Token head = expect(T::Atom, "'crit'");
    if (head.text != "crit") fail("expected a (crit ...) form", head);
    std::string name = expect_symbol("the distinguished variable");
    scope_.assign(1, name);
    Expr matrix = parse_formula_arg();
    scope_.clear();
    Expr witness = parse_term_arg();  // parsed in the empty scope: must be closed
    expect(T::RParen, "')'");
    return CriticalFormula{std::move(matrix), std::move(witness)};
  }

  std::vector<std::string> scope_;
  detail::Lexer lex_;
};

inline Expr parse_expr(std::string_view text) { return Parser(text).parse_one(); }

inline CriticalFormulaSet parse_critical_set(std::string_view text) { return Parser(text).parse_file(); }

}  // namespace epsforge
