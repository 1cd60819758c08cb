#pragma once

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nnops/target.hpp"

namespace nnops {
namespace expr {

// Small arithmetic expressions over y1..y9 for CLI-defined targets:
// +, -, *, /, ^ (right-associative), unary minus, parentheses, and the
// functions sin, cos, exp, abs.
struct node {
  enum class op { constant, variable, add, sub, mul, div, pow, neg, sin, cos, exp, abs };
  op kind = op::constant;
  double value = 0.0;
  int var_index = 0;
  std::unique_ptr<node> lhs, rhs;

  double eval(std::span<const double> y) const {
    switch (kind) {
      case op::constant: return value;
      case op::variable: return y[static_cast<std::size_t>(var_index)];
      case op::add: return lhs->eval(y) + rhs->eval(y);
      case op::sub: return lhs->eval(y) - rhs->eval(y);
      case op::mul: return lhs->eval(y) * rhs->eval(y);
      case op::div: return lhs->eval(y) / rhs->eval(y);
      case op::pow: return std::pow(lhs->eval(y), rhs->eval(y));
      case op::neg: return -lhs->eval(y);
      case op::sin: return std::sin(lhs->eval(y));
      case op::cos: return std::cos(lhs->eval(y));
      case op::exp: return std::exp(lhs->eval(y));
      case op::abs: return std::abs(lhs->eval(y));
    }
    return 0.0;
  }
};

class parser {
 public:
  explicit parser(std::string_view text) : text_(text) {}

  std::unique_ptr<node> parse(int dimension) {
    dimension_ = dimension;
    auto e = parse_sum();
    skip_ws();
    if (pos_ != text_.size())
      throw argument_error("expression: unexpected input at position " + std::to_string(pos_));
    return e;
  }

 private:
  std::unique_ptr<node> parse_sum() {
    auto lhs = parse_product();
    for (;;) {
      skip_ws();
      if (peek() == '+' || peek() == '-') {
        const char c = take();
        auto n = std::make_unique<node>();
        n->kind = c == '+' ? node::op::add : node::op::sub;
        n->lhs = std::move(lhs);
        n->rhs = parse_product();
        lhs = std::move(n);
      } else {
        return lhs;
      }
    }
  }

  std::unique_ptr<node> parse_product() {
    auto lhs = parse_power();
    for (;;) {
      skip_ws();
      if (peek() == '*' || peek() == '/') {
        const char c = take();
        auto n = std::make_unique<node>();
        n->kind = c == '*' ? node::op::mul : node::op::div;
        n->lhs = std::move(lhs);
        n->rhs = parse_power();
        lhs = std::move(n);
      } else {
        return lhs;
      }
    }
  }

  std::unique_ptr<node> parse_power() {
    auto base = parse_unary();
    skip_ws();
    if (peek() == '^') {
      take();
      auto n = std::make_unique<node>();
      n->kind = node::op::pow;
      n->lhs = std::move(base);
      n->rhs = parse_power();  // right-associative
      return n;
    }
    return base;
  }

  std::unique_ptr<node> parse_unary() {
    skip_ws();
    if (peek() == '-') {
      take();
      auto n = std::make_unique<node>();
      n->kind = node::op::neg;
      n->lhs = parse_unary();
      return n;
    }
    if (peek() == '+') {
      take();
      return parse_unary();
    }
    return parse_primary();
  }

  std::unique_ptr<node> parse_primary() {
    skip_ws();
    const char c = peek();
    if (c == '(') {
      take();
      auto e = parse_sum();
      skip_ws();
      if (take() != ')') throw argument_error("expression: missing ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c))) return parse_ident();
    throw argument_error("expression: unexpected character at position " + std::to_string(pos_));
  }

  std::unique_ptr<node> parse_number() {
    const char* begin = text_.data() + pos_;
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin) throw argument_error("expression: bad number");
    pos_ += static_cast<std::size_t>(end - begin);
    auto n = std::make_unique<node>();
    n->kind = node::op::constant;
    n->value = v;
    return n;
  }

  std::unique_ptr<node> parse_ident() {
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    const std::string_view name = text_.substr(start, pos_ - start);
    if (name.size() == 2 && name[0] == 'y' && name[1] >= '1' && name[1] <= '9') {
      const int idx = name[1] - '1';
      if (idx >= dimension_)
        throw argument_error("expression: variable " + std::string(name) +
                             " exceeds the domain dimension");
      auto n = std::make_unique<node>();
      n->kind = node::op::variable;
      n->var_index = idx;
      return n;
    }
    node::op fn;
    if (name == "sin") fn = node::op::sin;
    else if (name == "cos") fn = node::op::cos;
    else if (name == "exp") fn = node::op::exp;
    else if (name == "abs") fn = node::op::abs;
    else throw argument_error("expression: unknown identifier '" + std::string(name) + "'");
    skip_ws();
    if (take() != '(') throw argument_error("expression: function call needs '('");
    auto arg = parse_sum();
    skip_ws();
    if (take() != ')') throw argument_error("expression: missing ')'");
    auto n = std::make_unique<node>();
    n->kind = fn;
    n->lhs = std::move(arg);
    return n;
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
  char take() { return pos_ < text_.size() ? text_[pos_++] : '\0'; }

  std::string_view text_;
  std::size_t pos_ = 0;
  int dimension_ = 0;
};

}  // namespace expr

// Compile an expression over y1..yr into a target function. Range class and
// domain are the caller's declaration; the CLI validates by sampling.
inline target_function make_expression_target(const std::string& text, int dimension,
                                              std::optional<box_domain> domain,
                                              range_class rclass = range_class::unit_interval,
                                              double bound = 1.0) {
  if (dimension < 1 || dimension > 9)
    throw argument_error("expression targets support dimensions 1..9");
  auto root = std::shared_ptr<const expr::node>(expr::parser(text).parse(dimension).release());
  target_function t;
  t.fn = [root](std::span<const double> y) { return root->eval(y); };
  t.dimension = dimension;
  t.domain = std::move(domain);
  t.rclass = rclass;
  t.bound = bound;
  t.description = text;
  return t;
}

}  // namespace nnops
