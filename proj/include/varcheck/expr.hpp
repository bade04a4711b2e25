#pragma once

#include <map>
#include <memory>
#include <string>
#include <string_view>

#include "varcheck/types.hpp"

namespace varcheck::expr {

/// Syntax error with the byte offset of the offending token.
struct ParseError : std::runtime_error {
  ParseError(std::size_t offset, const std::string& message)
      : std::runtime_error("parse error at byte " + std::to_string(offset) +
                           ": " + message),
        offset(offset) {}
  std::size_t offset;
};

/// Evaluation domain error (division by zero, log of a nonpositive value,
/// sqrt of a negative value).  Carries the function name and the argument.
struct EvalError : std::runtime_error {
  EvalError(const std::string& where, double argument)
      : std::runtime_error("domain error in '" + where +
                           "' at argument " + std::to_string(argument)),
        where(where),
        argument(argument) {}
  std::string where;
  double argument;
};

struct Node;

/// Immutable parsed expression over variables t1..tn, x1..x<nu>, z_a_i.
/// Shareable across threads; evaluation is pure.
class Expr {
 public:
  Expr() = default;

  /// IEEE double evaluation; deterministic for fixed inputs.
  double eval(const Vector& t, const Vector& x, const SlopeMatrix& z) const;

  /// Fully parenthesized round-trippable form: parse(to_string()) evaluates
  /// identically (literals printed with 17 significant digits).
  std::string to_string() const;

  int base_dim() const { return n_; }
  int fiber_dim() const { return nu_; }
  bool empty() const { return root_ == nullptr; }

 private:
  friend Expr parse(std::string_view, int, int,
                    const std::map<std::string, double>&);
  std::shared_ptr<const Node> root_;
  int n_ = 0;
  int nu_ = 0;
};

/// Parses `source` for a problem of arity (n, nu).  `constants` supplies
/// named numeric constants (problem parameters); any other identifier is a
/// ParseError.  Grammar: see docs/expr-grammar.md.
Expr parse(std::string_view source, int n, int nu,
           const std::map<std::string, double>& constants = {});

}  // namespace varcheck::expr
