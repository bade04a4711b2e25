#include "varcheck/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <vector>

namespace varcheck::expr {

enum class Builtin { sin, cos, exp, log, sqrt, abs, det2 };

struct Node {
  enum class Kind { literal, var_t, var_x, var_z, neg, add, sub, mul, div, pow, call };
  Kind kind;
  double value = 0.0;            // literal
  int a = 0, b = 0;              // var indices (1-based) or pow exponent in a
  Builtin fn = Builtin::sin;     // call
  std::shared_ptr<const Node> lhs, rhs;
};

namespace {

using NodePtr = std::shared_ptr<const Node>;

NodePtr make(Node n) { return std::make_shared<const Node>(std::move(n)); }

struct Token {
  enum class Kind { number, ident, plus, minus, star, slash, caret, lparen, rparen, comma, end };
  Kind kind;
  std::size_t offset;
  double number = 0.0;
  std::string ident;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    const std::size_t at = pos_;
    if (pos_ >= src_.size()) return {Token::Kind::end, at};
    const char c = src_[pos_];
    switch (c) {
      case '+': ++pos_; return {Token::Kind::plus, at};
      case '-': ++pos_; return {Token::Kind::minus, at};
      case '*': ++pos_; return {Token::Kind::star, at};
      case '/': ++pos_; return {Token::Kind::slash, at};
      case '^': ++pos_; return {Token::Kind::caret, at};
      case '(': ++pos_; return {Token::Kind::lparen, at};
      case ')': ++pos_; return {Token::Kind::rparen, at};
      case ',': ++pos_; return {Token::Kind::comma, at};
      default: break;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return lex_number(at);
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return lex_ident(at);
    throw ParseError(at, std::string("unexpected character '") + c + "'");
  }

 private:
  Token lex_number(std::size_t at) {
    std::size_t end = pos_;
    while (end < src_.size() && (std::isdigit(static_cast<unsigned char>(src_[end])) || src_[end] == '.')) ++end;
    if (end < src_.size() && (src_[end] == 'e' || src_[end] == 'E')) {
      std::size_t e = end + 1;
      if (e < src_.size() && (src_[e] == '+' || src_[e] == '-')) ++e;
      if (e < src_.size() && std::isdigit(static_cast<unsigned char>(src_[e]))) {
        ++e;
        while (e < src_.size() && std::isdigit(static_cast<unsigned char>(src_[e]))) ++e;
        end = e;
      }
    }
    const std::string text(src_.substr(pos_, end - pos_));
    char* tail = nullptr;
    const double v = std::strtod(text.c_str(), &tail);
    if (tail == text.c_str() || *tail != '\0')
      throw ParseError(at, "malformed number '" + text + "'");
    pos_ = end;
    Token tok{Token::Kind::number, at};
    tok.number = v;
    return tok;
  }

  Token lex_ident(std::size_t at) {
    std::size_t end = pos_;
    while (end < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[end])) || src_[end] == '_'))
      ++end;
    Token tok{Token::Kind::ident, at};
    tok.ident = std::string(src_.substr(pos_, end - pos_));
    pos_ = end;
    return tok;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

// Recursive descent; precedence ^ > unary - > * / > + -.
class Parser {
 public:
  Parser(std::string_view src, int n, int nu, const std::map<std::string, double>& constants)
      : lexer_(src), n_(n), nu_(nu), constants_(constants) {
    advance();
  }

  NodePtr parse_all() {
    NodePtr e = parse_sum();
    expect(Token::Kind::end, "end of input");
    return e;
  }

 private:
  void advance() { cur_ = lexer_.next(); }

  void expect(Token::Kind k, const char* what) {
    if (cur_.kind != k) throw ParseError(cur_.offset, std::string("expected ") + what);
  }

  NodePtr parse_sum() {
    NodePtr lhs = parse_product();
    for (;;) {
      if (cur_.kind == Token::Kind::plus || cur_.kind == Token::Kind::minus) {
        const bool add = cur_.kind == Token::Kind::plus;
        advance();
        NodePtr rhs = parse_product();
        Node n{add ? Node::Kind::add : Node::Kind::sub};
        n.lhs = lhs;
        n.rhs = rhs;
        lhs = make(std::move(n));
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_product() {
    NodePtr lhs = parse_unary();
    for (;;) {
      if (cur_.kind == Token::Kind::star || cur_.kind == Token::Kind::slash) {
        const bool mul = cur_.kind == Token::Kind::star;
        advance();
        NodePtr rhs = parse_unary();
        Node n{mul ? Node::Kind::mul : Node::Kind::div};
        n.lhs = lhs;
        n.rhs = rhs;
        lhs = make(std::move(n));
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_unary() {
    if (cur_.kind == Token::Kind::minus) {
      advance();
      Node n{Node::Kind::neg};
      n.lhs = parse_unary();
      return make(std::move(n));
    }
    return parse_power();
  }

  NodePtr parse_power() {
    NodePtr base = parse_primary();
    while (cur_.kind == Token::Kind::caret) {
      advance();
      if (cur_.kind != Token::Kind::number)
        throw ParseError(cur_.offset, "expected a nonnegative integer exponent after '^'");
      const double e = cur_.number;
      if (e < 0 || e != std::floor(e) || e > 1e9)
        throw ParseError(cur_.offset, "exponent must be a nonnegative integer literal");
      advance();
      Node n{Node::Kind::pow};
      n.a = static_cast<int>(e);
      n.lhs = base;
      base = make(std::move(n));
    }
    return base;
  }

  NodePtr parse_primary() {
    if (cur_.kind == Token::Kind::number) {
      Node n{Node::Kind::literal};
      n.value = cur_.number;
      advance();
      return make(std::move(n));
    }
    if (cur_.kind == Token::Kind::lparen) {
      advance();
      NodePtr e = parse_sum();
      expect(Token::Kind::rparen, "')'");
      advance();
      return e;
    }
    if (cur_.kind == Token::Kind::ident) return parse_ident();
    throw ParseError(cur_.offset, "expected a number, variable, function, or '('");
  }

  NodePtr parse_ident() {
    const Token tok = cur_;
    const std::string& id = tok.ident;
    advance();

    static const std::map<std::string, Builtin> functions = {
        {"sin", Builtin::sin}, {"cos", Builtin::cos}, {"exp", Builtin::exp},
        {"log", Builtin::log}, {"sqrt", Builtin::sqrt}, {"abs", Builtin::abs}};
    if (auto it = functions.find(id); it != functions.end()) {
      expect(Token::Kind::lparen, "'(' after function name");
      advance();
      NodePtr arg = parse_sum();
      expect(Token::Kind::rparen, "')'");
      advance();
      Node n{Node::Kind::call};
      n.fn = it->second;
      n.lhs = arg;
      return make(std::move(n));
    }

    if (id == "det2") {
      if (n_ != 2 || nu_ != 2)
        throw ParseError(tok.offset, "det2 requires arity n = nu = 2");
      Node n{Node::Kind::call};
      n.fn = Builtin::det2;
      return make(std::move(n));
    }

    if (id.size() >= 2 && (id[0] == 't' || id[0] == 'x') && id.find('_') == std::string::npos) {
      const int idx = parse_index(id.substr(1), tok.offset);
      const int limit = id[0] == 't' ? n_ : nu_;
      if (idx < 1 || idx > limit)
        throw ParseError(tok.offset, "variable '" + id + "' out of range (1.." +
                                         std::to_string(limit) + ")");
      Node n{id[0] == 't' ? Node::Kind::var_t : Node::Kind::var_x};
      n.a = idx;
      return make(std::move(n));
    }

    if (id.size() >= 5 && id[0] == 'z' && id[1] == '_') {
      const std::size_t sep = id.find('_', 2);
      if (sep != std::string::npos && sep + 1 < id.size()) {
        const int alpha = parse_index(id.substr(2, sep - 2), tok.offset);
        const int i = parse_index(id.substr(sep + 1), tok.offset);
        if (alpha < 1 || alpha > nu_ || i < 1 || i > n_)
          throw ParseError(tok.offset, "slope variable '" + id + "' out of range for arity (" +
                                           std::to_string(n_) + ", " + std::to_string(nu_) + ")");
        Node n{Node::Kind::var_z};
        n.a = alpha;
        n.b = i;
        return make(std::move(n));
      }
    }

    if (auto it = constants_.find(id); it != constants_.end()) {
      Node n{Node::Kind::literal};
      n.value = it->second;
      return make(std::move(n));
    }

    throw ParseError(tok.offset, "unknown identifier '" + id + "'");
  }

  int parse_index(const std::string& digits, std::size_t offset) const {
    if (digits.empty()) throw ParseError(offset, "missing variable index");
    for (char c : digits)
      if (!std::isdigit(static_cast<unsigned char>(c)))
        throw ParseError(offset, "malformed variable index '" + digits + "'");
    return std::stoi(digits);
  }

  Lexer lexer_;
  Token cur_{Token::Kind::end, 0};
  int n_, nu_;
  const std::map<std::string, double>& constants_;
};

double eval_node(const Node& node, const Vector& t, const Vector& x, const SlopeMatrix& z) {
  switch (node.kind) {
    case Node::Kind::literal: return node.value;
    case Node::Kind::var_t: return t(node.a - 1);
    case Node::Kind::var_x: return x(node.a - 1);
    case Node::Kind::var_z: return z(node.a - 1, node.b - 1);
    case Node::Kind::neg: return -eval_node(*node.lhs, t, x, z);
    case Node::Kind::add: return eval_node(*node.lhs, t, x, z) + eval_node(*node.rhs, t, x, z);
    case Node::Kind::sub: return eval_node(*node.lhs, t, x, z) - eval_node(*node.rhs, t, x, z);
    case Node::Kind::mul: return eval_node(*node.lhs, t, x, z) * eval_node(*node.rhs, t, x, z);
    case Node::Kind::div: {
      const double den = eval_node(*node.rhs, t, x, z);
      if (den == 0.0) throw EvalError("/", den);
      return eval_node(*node.lhs, t, x, z) / den;
    }
    case Node::Kind::pow: {
      const double base = eval_node(*node.lhs, t, x, z);
      double r = 1.0;
      for (int k = 0; k < node.a; ++k) r *= base;
      return r;
    }
    case Node::Kind::call: {
      if (node.fn == Builtin::det2) return z(0, 0) * z(1, 1) - z(0, 1) * z(1, 0);
      const double v = eval_node(*node.lhs, t, x, z);
      switch (node.fn) {
        case Builtin::sin: return std::sin(v);
        case Builtin::cos: return std::cos(v);
        case Builtin::exp: return std::exp(v);
        case Builtin::log:
          if (v <= 0.0) throw EvalError("log", v);
          return std::log(v);
        case Builtin::sqrt:
          if (v < 0.0) throw EvalError("sqrt", v);
          return std::sqrt(v);
        case Builtin::abs: return std::fabs(v);
        case Builtin::det2: break;
      }
      throw NumericalError("unreachable builtin");
    }
  }
  throw NumericalError("unreachable node kind");
}

std::string literal_text(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

const char* builtin_name(Builtin b) {
  switch (b) {
    case Builtin::sin: return "sin";
    case Builtin::cos: return "cos";
    case Builtin::exp: return "exp";
    case Builtin::log: return "log";
    case Builtin::sqrt: return "sqrt";
    case Builtin::abs: return "abs";
    case Builtin::det2: return "det2";
  }
  return "?";
}

void print_node(const Node& node, std::string& out) {
  switch (node.kind) {
    case Node::Kind::literal:
      if (node.value < 0) {  // negative literal needs parens to survive reparse
        out += "(0 - ";
        out += literal_text(-node.value);
        out += ")";
      } else {
        out += literal_text(node.value);
      }
      return;
    case Node::Kind::var_t: out += "t" + std::to_string(node.a); return;
    case Node::Kind::var_x: out += "x" + std::to_string(node.a); return;
    case Node::Kind::var_z:
      out += "z_" + std::to_string(node.a) + "_" + std::to_string(node.b);
      return;
    case Node::Kind::neg:
      out += "(-";
      print_node(*node.lhs, out);
      out += ")";
      return;
    case Node::Kind::add:
    case Node::Kind::sub:
    case Node::Kind::mul:
    case Node::Kind::div: {
      const char* op = node.kind == Node::Kind::add   ? " + "
                       : node.kind == Node::Kind::sub ? " - "
                       : node.kind == Node::Kind::mul ? " * "
                                                      : " / ";
      out += "(";
      print_node(*node.lhs, out);
      out += op;
      print_node(*node.rhs, out);
      out += ")";
      return;
    }
    case Node::Kind::pow:
      out += "(";
      print_node(*node.lhs, out);
      out += ")^" + std::to_string(node.a);
      return;
    case Node::Kind::call:
      out += builtin_name(node.fn);
      if (node.fn != Builtin::det2) {
        out += "(";
        print_node(*node.lhs, out);
        out += ")";
      }
      return;
  }
}

}  // namespace

double Expr::eval(const Vector& t, const Vector& x, const SlopeMatrix& z) const {
  if (!root_) throw ConfigError("eval of an empty expression");
  if (t.size() != n_ || x.size() != nu_ || z.rows() != nu_ || z.cols() != n_)
    throw ConfigError("eval arity mismatch");
  return eval_node(*root_, t, x, z);
}

std::string Expr::to_string() const {
  if (!root_) return "";
  std::string out;
  print_node(*root_, out);
  return out;
}

Expr parse(std::string_view source, int n, int nu,
           const std::map<std::string, double>& constants) {
  if (n < 1 || nu < 0) throw ConfigError("parse: arity must satisfy n >= 1, nu >= 0");
  Parser p(source, n, nu, constants);
  Expr e;
  e.root_ = p.parse_all();
  e.n_ = n;
  e.nu_ = nu;
  return e;
}

}  // namespace varcheck::expr
