#pragma once

// Declarative field-definition files. Format (one declaration per line,
// '#' starts a comment):
//
//   dim 2
//   f1 = -3*sqrt(pow(w1,3)) + 2*w1*sqrt(w2)
//   f2 = sqrt(w1)*w2 - 4*sqrt(pow(w2,3))
//
// Expressions are over w1..wd with +, -, *, /, sqrt(x), pow(x,y),
// parentheses and decimal constants. The exact grammar is documented in
// the README. Parse errors carry 1-based line and column.

#include <cctype>
#include <cmath>
#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "fraccoop/vector_field.hpp"

namespace fraccoop {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::size_t col, const std::string& what_arg)
      : std::runtime_error("parse error at " + std::to_string(line) + ":" + std::to_string(col) +
                           ": " + what_arg),
        line_(line),
        col_(col) {}
  std::size_t line() const { return line_; }
  std::size_t col() const { return col_; }

 private:
  std::size_t line_, col_;
};

namespace detail {

struct ExprNode;
using ExprPtr = std::unique_ptr<ExprNode>;

struct ExprNode {
  enum class Kind { Constant, Variable, Neg, Add, Sub, Mul, Div, Sqrt, Pow } kind;
  double value = 0.0;     // Constant
  std::size_t index = 0;  // Variable (0-based)
  ExprPtr lhs, rhs;

  double eval(const Vec& w) const {
    switch (kind) {
      case Kind::Constant: return value;
      case Kind::Variable: return w[index];
      case Kind::Neg: return -lhs->eval(w);
      case Kind::Add: return lhs->eval(w) + rhs->eval(w);
      case Kind::Sub: return lhs->eval(w) - rhs->eval(w);
      case Kind::Mul: return lhs->eval(w) * rhs->eval(w);
      case Kind::Div: return lhs->eval(w) / rhs->eval(w);
      case Kind::Sqrt: return std::sqrt(lhs->eval(w));
      case Kind::Pow: return std::pow(lhs->eval(w), rhs->eval(w));
    }
    return 0.0;
  }
};

class ExprParser {
 public:
  ExprParser(const std::string& text, std::size_t line, std::size_t col0, std::size_t dim)
      : s_(text), line_(line), col0_(col0), dim_(dim) {}

  ExprPtr parse() {
    ExprPtr e = expr();
    skip_ws();
    if (pos_ != s_.size()) fail("unexpected trailing input");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(line_, col0_ + pos_ + 1, msg);
  }
  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  ExprPtr expr() {
    ExprPtr e = term();
    for (;;) {
      if (eat('+')) {
        ExprPtr r = term();
        e = node(ExprNode::Kind::Add, std::move(e), std::move(r));
      } else if (eat('-')) {
        ExprPtr r = term();
        e = node(ExprNode::Kind::Sub, std::move(e), std::move(r));
      } else {
        return e;
      }
    }
  }

  ExprPtr term() {
    ExprPtr e = unary();
    for (;;) {
      if (eat('*')) {
        ExprPtr r = unary();
        e = node(ExprNode::Kind::Mul, std::move(e), std::move(r));
      } else if (eat('/')) {
        ExprPtr r = unary();
        e = node(ExprNode::Kind::Div, std::move(e), std::move(r));
      } else {
        return e;
      }
    }
  }

  ExprPtr unary() {
    if (eat('-')) {
      ExprPtr e = unary();
      return node(ExprNode::Kind::Neg, std::move(e), nullptr);
    }
    if (eat('+')) return unary();
    return primary();
  }

  ExprPtr primary() {
    skip_ws();
    if (pos_ >= s_.size()) fail("expected expression");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      ExprPtr e = expr();
      if (!eat(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
    fail(std::string("unexpected character '") + c + "'");
  }

  ExprPtr number() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.'))
      ++pos_;
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      ++pos_;
      if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) ++pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    try {
      std::size_t used = 0;
      const double v = std::stod(s_.substr(start, pos_ - start), &used);
      if (used != pos_ - start) throw std::invalid_argument("");
      auto e = std::make_unique<ExprNode>();
      e->kind = ExprNode::Kind::Constant;
      e->value = v;
      return e;
    } catch (const std::exception&) {
      pos_ = start;
      fail("malformed number");
    }
  }

  ExprPtr identifier() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])))) ++pos_;
    const std::string name = s_.substr(start, pos_ - start);
    if (name.size() >= 2 && name[0] == 'w') {
      std::size_t idx = 0;
      for (std::size_t i = 1; i < name.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(name[i]))) {
          pos_ = start;
          fail("unknown identifier '" + name + "'");
        }
        idx = idx * 10 + static_cast<std::size_t>(name[i] - '0');
      }
      if (idx < 1 || idx > dim_) {
        pos_ = start;
        fail("variable '" + name + "' out of range for dim " + std::to_string(dim_));
      }
      auto e = std::make_unique<ExprNode>();
      e->kind = ExprNode::Kind::Variable;
      e->index = idx - 1;
      return e;
    }
    if (name == "sqrt") {
      if (!eat('(')) fail("expected '(' after sqrt");
      ExprPtr a = expr();
      if (!eat(')')) fail("expected ')'");
      return node(ExprNode::Kind::Sqrt, std::move(a), nullptr);
    }
    if (name == "pow") {
      if (!eat('(')) fail("expected '(' after pow");
      ExprPtr a = expr();
      if (!eat(',')) fail("expected ',' in pow");
      ExprPtr b = expr();
      if (!eat(')')) fail("expected ')'");
      return node(ExprNode::Kind::Pow, std::move(a), std::move(b));
    }
    pos_ = start;
    fail("unknown identifier '" + name + "'");
  }

  static ExprPtr node(ExprNode::Kind k, ExprPtr l, ExprPtr r) {
    auto e = std::make_unique<ExprNode>();
    e->kind = k;
    e->lhs = std::move(l);
    e->rhs = std::move(r);
    return e;
  }

  const std::string& s_;
  std::size_t pos_ = 0;
  std::size_t line_, col0_, dim_;
};

}  // namespace detail

struct ParsedField {
  std::size_t dimension = 0;
  std::vector<detail::ExprPtr> components;

  Vec eval(const Vec& w) const {
    Vec out(dimension);
    for (std::size_t i = 0; i < dimension; ++i) out[i] = components[i]->eval(w);
    return out;
  }
};

/// Parse field-definition text (see format above).
inline std::shared_ptr<const ParsedField> parse_field_text(const std::string& text) {
  auto field = std::make_shared<ParsedField>();
  std::istringstream in(text);
  std::string raw;
  std::size_t lineno = 0;
  std::vector<bool> defined;

  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = raw;
    if (auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
    std::size_t b = 0;
    while (b < line.size() && std::isspace(static_cast<unsigned char>(line[b]))) ++b;
    std::size_t e = line.size();
    while (e > b && std::isspace(static_cast<unsigned char>(line[e - 1]))) --e;
    if (b == e) continue;

    if (line.compare(b, 3, "dim") == 0 &&
        (b + 3 == e || std::isspace(static_cast<unsigned char>(line[b + 3])))) {
      if (field->dimension != 0) throw ParseError(lineno, b + 1, "duplicate dim declaration");
      std::istringstream ls(line.substr(b + 3, e - b - 3));
      long d = 0;
      if (!(ls >> d) || d < 1 || d > 64) throw ParseError(lineno, b + 4, "dim must be an integer in [1, 64]");
      std::string rest;
      if (ls >> rest) throw ParseError(lineno, b + 4, "unexpected input after dim");
      field->dimension = static_cast<std::size_t>(d);
      field->components.resize(field->dimension);
      defined.assign(field->dimension, false);
      continue;
    }

    if (field->dimension == 0) throw ParseError(lineno, b + 1, "expected 'dim <d>' before components");
    if (line[b] != 'f') throw ParseError(lineno, b + 1, "expected component declaration 'f<i> = <expr>'");
    std::size_t p = b + 1;
    std::size_t idx = 0;
    while (p < e && std::isdigit(static_cast<unsigned char>(line[p]))) {
      idx = idx * 10 + static_cast<std::size_t>(line[p] - '0');
      ++p;
    }
    if (p == b + 1 || idx < 1 || idx > field->dimension)
      throw ParseError(lineno, b + 2, "component index out of range for dim " +
                                          std::to_string(field->dimension));
    while (p < e && std::isspace(static_cast<unsigned char>(line[p]))) ++p;
    if (p >= e || line[p] != '=') throw ParseError(lineno, p + 1, "expected '='");
    ++p;
    if (defined[idx - 1]) throw ParseError(lineno, b + 1, "component f" + std::to_string(idx) + " defined twice");
    const std::string body = line.substr(p, e - p);
    detail::ExprParser ep(body, lineno, p, field->dimension);
    field->components[idx - 1] = ep.parse();
    defined[idx - 1] = true;
  }

  if (field->dimension == 0) throw ParseError(1, 1, "empty field definition (missing 'dim')");
  for (std::size_t i = 0; i < field->dimension; ++i)
    if (!defined[i]) throw ParseError(lineno, 1, "component f" + std::to_string(i + 1) + " not defined");
  return field;
}

inline std::shared_ptr<const ParsedField> parse_field_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open field file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_field_text(ss.str());
}

/// Wrap a parsed field as an evaluatable handle (finite-difference Jacobian).
inline VectorFieldHandle to_handle(std::shared_ptr<const ParsedField> field) {
  VectorFieldHandle h;
  h.dimension = field->dimension;
  h.eval = [field](const Vec& w) { return field->eval(w); };
  return h;
}

}  // namespace fraccoop
