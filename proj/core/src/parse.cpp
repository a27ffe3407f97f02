#include "trilin/parse.hpp"

#include <algorithm>
#include <cctype>

#include "trilin/errors.hpp"
#include "trilin/rational_nf.hpp"

namespace trilin {

namespace {

class Parser {
 public:
  Parser(std::string_view src, const ParseOptions& options) : src_(src), options_(options) {}

  Expr run() {
    skip_space();
    if (at_end()) fail("empty input");
    Expr e = expr();
    skip_space();
    if (!at_end()) fail(std::string("unexpected '") + src_[pos_] + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& message) const { fail_at(message, pos_); }

  [[noreturn]] void fail_at(const std::string& message, std::size_t at) const {
    auto [line, col] = location(at);
    throw SyntaxError(message, line, col);
  }

  std::pair<std::size_t, std::size_t> location(std::size_t at) const {
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t i = 0; i < at && i < src_.size(); ++i) {
      if (src_[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    return {line, col};
  }

  bool at_end() const { return pos_ >= src_.size(); }
  char peek() const { return at_end() ? '\0' : src_[pos_]; }

  void skip_space() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (peek() == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Expr expr() {
    Expr acc = term();
    while (true) {
      if (accept('+')) {
        acc = acc + term();
      } else if (accept('-')) {
        acc = acc - term();
      } else {
        return acc;
      }
    }
  }

  Expr term() {
    Expr acc = unary();
    while (true) {
      if (accept('*')) {
        acc = acc * unary();
      } else if (accept('/')) {
        std::size_t at = pos_;
        Expr d = unary();
        if (d.is_literal_zero()) fail_at("division by zero", at);
        acc = acc / d;
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
    Expr base = primary();
    if (accept('^')) {
      skip_space();
      std::size_t at = pos_;
      Expr ex = simplify(unary());
      if (!ex.is_rational()) fail_at("exponent must be a rational constant", at);
      const Rational& r = ex.value();
      if (base.is_literal_zero() && sgn(r) <= 0) fail_at("zero raised to a non-positive power", at);
      if (abs(r.get_num()) > 100000 || r.get_den() > 100000) fail_at("exponent too large", at);
      return make_power(base, r);
    }
    return base;
  }

  Expr number() {
    std::size_t start = pos_;
    while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    if (peek() == '.') {
      ++pos_;
      if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("malformed decimal literal");
      while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    }
    return Expr(parse_rational(std::string(src_.substr(start, pos_ - start))));
  }

  bool allowed(const std::string& name) const {
    return std::find(options_.variables.begin(), options_.variables.end(), name) !=
               options_.variables.end() ||
           std::find(options_.params.begin(), options_.params.end(), name) !=
               options_.params.end();
  }

  Expr primary() {
    skip_space();
    if (at_end()) fail("unexpected end of input");
    char c = peek();
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (c == '(') {
      ++pos_;
      Expr e = expr();
      if (!accept(')')) fail("expected ')'");
      return e;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_') ++pos_;
      std::string name(src_.substr(start, pos_ - start));
      std::size_t primes = 0;
      while (peek() == '\'') {
        ++primes;
        ++pos_;
      }
      if (primes > 0) return derivative_alias(name, primes, start);
      skip_space();
      if (peek() == '(') {
        if (!is_known_function(name)) {
          auto [line, col] = location(start);
          throw UnknownIdentifier(name, line, col);
        }
        ++pos_;
        Expr arg = expr();
        if (!accept(')')) fail("expected ')'");
        try {
          return make_function(name, arg);
        } catch (const DomainError& err) {
          fail_at(err.what(), start);
        }
      }
      if (!allowed(name)) {
        auto [line, col] = location(start);
        throw UnknownIdentifier(name, line, col);
      }
      return Expr::symbol(name);
    }
    fail(std::string("unexpected '") + c + "'");
  }

  Expr derivative_alias(const std::string& name, std::size_t primes, std::size_t start) {
    std::string target;
    if (name == "u" && primes == 1) target = "p";
    if (name == "u" && primes == 2) target = "q";
    if (name == "ubar" && primes == 1) target = "pbar";
    if (name == "ubar" && primes == 2) target = "qbar";
    if (target.empty() || !allowed(target)) {
      auto [line, col] = location(start);
      throw UnknownIdentifier(name + std::string(primes, '\''), line, col);
    }
    return Expr::symbol(target);
  }

  std::string_view src_;
  const ParseOptions& options_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse(std::string_view src, const ParseOptions& options) {
  return normalize(Parser(src, options).run());
}

Expr parse(std::string_view src, const std::vector<std::string>& params) {
  ParseOptions options;
  options.params = params;
  return parse(src, options);
}

Expr parse_ode(std::string_view src, const std::vector<std::string>& params) {
  auto eq = src.find('=');
  if (eq == std::string_view::npos) return parse(src, params);
  std::string_view lhs = src.substr(0, eq);
  std::size_t b = lhs.find_first_not_of(" \t\r\n");
  std::size_t e = lhs.find_last_not_of(" \t\r\n");
  if (b == std::string_view::npos || lhs.substr(b, e - b + 1) != "u'''") {
    throw SyntaxError("left-hand side must be u'''", 1, b == std::string_view::npos ? 1 : b + 1);
  }
  if (src.find('=', eq + 1) != std::string_view::npos) {
    throw SyntaxError("more than one '='", 1, src.find('=', eq + 1) + 1);
  }
  std::string rhs(src.size(), ' ');
  for (std::size_t i = eq + 1; i < src.size(); ++i) rhs[i] = src[i];
  for (std::size_t i = 0; i <= eq; ++i) {
    if (src[i] == '\n') rhs[i] = '\n';
  }
  return parse(rhs, params);
}

ParseOptions barred_options(const std::vector<std::string>& params) {
  ParseOptions o;
  o.variables = {"xbar", "ubar", "pbar", "qbar"};
  o.params = params;
  return o;
}

}  // namespace trilin
