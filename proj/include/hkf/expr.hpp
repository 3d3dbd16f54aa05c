#pragma once

// Tiny expression language for source terms:
//
//   expr   := term (("+"|"-") term)*
//   term   := factor (("*"|"/") factor)*
//   factor := unary ("^" factor)?          right-associative
//   unary  := "-"? base
//   base   := number | "x" | "z" | ident "(" expr ")" | "(" expr ")"
//
// with ident in {exp, ln, sin, cos, sqrt, abs}. "z" is z_of_x(params, x).

#include <memory>
#include <string>
#include <string_view>

namespace hkf {

struct ExprNode;
using ExprPtr = std::shared_ptr<const ExprNode>;

enum class ExprKind { number, var_x, var_z, negate, add, subtract, multiply, divide, power, call };

struct ExprNode {
    ExprKind kind;
    double number = 0.0;   ///< ExprKind::number
    std::string function;  ///< ExprKind::call
    ExprPtr lhs;           ///< operand of negate/call, left side of binaries
    ExprPtr rhs;
};

bool operator==(const ExprNode& a, const ExprNode& b);

class SourceExpr {
  public:
    /// Throws ParseError (with byte offset) on malformed text or unknown identifiers.
    static SourceExpr parse(std::string_view text);

    double eval(double x, double z) const;
    /// Text that parses back to the same tree.
    std::string to_string() const;
    const ExprNode& root() const { return *root_; }
    /// True when the tree is the literal 0.
    bool is_zero_literal() const;

  private:
    explicit SourceExpr(ExprPtr root) : root_(std::move(root)) {}
    ExprPtr root_;
};

}  // namespace hkf
