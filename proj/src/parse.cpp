#include "monge/parse.hpp"

#include <cctype>

namespace monge::sym {

bool is_jet_variable_name(std::string_view name) {
  if (name == "x" || name == "y" || name == "z") return true;
  if (name.size() < 2 || name[0] != 'z') return false;
  for (std::size_t i = 1; i < name.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(name[i]))) return false;
  }
  return true;
}

Rational parse_rational(std::string_view text) {
  std::string s(text);
  auto trim = [](std::string& t) {
    while (!t.empty() && std::isspace(static_cast<unsigned char>(t.front()))) t.erase(t.begin());
    while (!t.empty() && std::isspace(static_cast<unsigned char>(t.back()))) t.pop_back();
  };
  trim(s);
  if (s.empty()) throw ParseError("empty number", 0);
  bool negative = false;
  std::size_t start = 0;
  if (s[0] == '-' || s[0] == '+') {
    negative = s[0] == '-';
    start = 1;
  }
  std::string body = s.substr(start);
  Rational q;
  if (auto slash = body.find('/'); slash != std::string::npos) {
    Rational num = parse_rational(body.substr(0, slash));
    Rational den = parse_rational(body.substr(slash + 1));
    if (den == 0) throw ParseError("zero denominator", slash);
    q = num / den;
  } else if (auto dot = body.find('.'); dot != std::string::npos) {
    std::string digits = body.substr(0, dot) + body.substr(dot + 1);
    if (digits.empty()) throw ParseError("bad number '" + s + "'", 0);
    for (char c : digits) {
      if (!std::isdigit(static_cast<unsigned char>(c))) throw ParseError("bad number '" + s + "'", 0);
    }
    mpz_class num(digits, 10);
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, body.size() - dot - 1);
    q = Rational(num, den);
  } else {
    if (body.empty()) throw ParseError("bad number '" + s + "'", 0);
    for (char c : body) {
      if (!std::isdigit(static_cast<unsigned char>(c))) throw ParseError("bad number '" + s + "'", 0);
    }
    q = Rational(mpz_class(body, 10));
  }
  q.canonicalize();
  return negative ? Rational(-q) : q;
}

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Expr parse_all() {
    Expr e = expr();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  Expr expr() {
    std::vector<Expr> terms{term()};
    for (;;) {
      if (accept('+')) {
        terms.push_back(term());
      } else if (accept('-')) {
        terms.push_back(-term());
      } else {
        return add(std::move(terms));
      }
    }
  }

  Expr term() {
    Expr acc = unary();
    for (;;) {
      if (accept('*')) {
        acc = acc * unary();
      } else if (accept('/')) {
        acc = acc / unary();
      } else {
        return acc;
      }
    }
  }

  Expr unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }

  Expr power() {
    Expr b = primary();
    if (accept('^')) return pow(b, unary());
    return b;
  }

  Expr primary() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Expr e = expr();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.')) {
        ++pos_;
      }
      return Expr(parse_rational(text_.substr(start, pos_ - start)));
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
        ++pos_;
      }
      std::string name(text_.substr(start, pos_ - start));
      if (accept('(')) {
        Expr arg = expr();
        expect(')');
        if (name == "exp") return exp(arg);
        if (name == "ln" || name == "log") return log(arg);
        if (name == "sqrt") return sqrt(arg);
        pos_ = start;
        fail("unknown function '" + name + "'");
      }
      return is_jet_variable_name(name) ? Expr::variable(name) : Expr::parameter(name);
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse(std::string_view text) { return Parser(text).parse_all(); }

}  // namespace monge::sym
