#pragma once

#include <map>
#include <memory>
#include <string>
#include <string_view>

#include "ruledlab/jets.hpp"

namespace ruledlab::expr {

enum class Var { U, V, W };

enum class UnaryOp { Neg, Sin, Cos, Tan, Exp, Log, Sqrt, Abs, Sign };

enum class BinaryOp { Add, Sub, Mul, Div, Pow };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

/// One AST node. Immutable once built; sharing subtrees is safe, including
/// across threads.
struct Node {
    enum class Kind { Number, Variable, Constant, Unary, Binary };

    Kind kind;
    double number = 0.0;   // Kind::Number
    Var var = Var::U;      // Kind::Variable
    std::string name;      // Kind::Constant
    UnaryOp uop = UnaryOp::Neg;
    BinaryOp bop = BinaryOp::Add;
    NodePtr lhs, rhs;      // Unary uses lhs only
};

using ConstantMap = std::map<std::string, double, std::less<>>;

/// A parsed scalar expression over the variables u, v, w and named constants.
/// Evaluation is deterministic and side effect free.
class Expression {
public:
    Expression() = default;
    explicit Expression(NodePtr root) : root_(std::move(root)) {}

    const NodePtr& root() const { return root_; }
    bool empty() const { return root_ == nullptr; }

    /// Unparses the tree. parse(print()) evaluates identically.
    std::string print() const;

    /// True if the given variable occurs anywhere in the tree.
    bool uses(Var v) const;

    // Builders for programmatic composition.
    static Expression number(double value);
    static Expression variable(Var v);
    static Expression constant(std::string name);
    static Expression unary(UnaryOp op, Expression arg);
    static Expression binary(BinaryOp op, Expression lhs, Expression rhs);

private:
    NodePtr root_;
};

inline Expression operator+(Expression a, Expression b) {
    return Expression::binary(BinaryOp::Add, std::move(a), std::move(b));
}
inline Expression operator-(Expression a, Expression b) {
    return Expression::binary(BinaryOp::Sub, std::move(a), std::move(b));
}
inline Expression operator*(Expression a, Expression b) {
    return Expression::binary(BinaryOp::Mul, std::move(a), std::move(b));
}
inline Expression operator/(Expression a, Expression b) {
    return Expression::binary(BinaryOp::Div, std::move(a), std::move(b));
}
inline Expression pow(Expression a, Expression b) {
    return Expression::binary(BinaryOp::Pow, std::move(a), std::move(b));
}

/// Parses the standard precedence grammar: ^ (right associative) binds
/// tighter than unary minus, then *,/ then +,-. Function application is
/// name(argument). Throws ParseError with the byte offset on bad input.
Expression parse(std::string_view text);

/// Value and first three u-derivatives of an expression in u alone.
Jet3 eval_jet3(const Expression& e, double u, const ConstantMap& constants = {});

/// Value and (u,v)-partials up to order 2 of an expression in u, v and the
/// bound pseudo-variable w, whose jet is supplied by the caller.
BiJet2 eval_bijet2(const Expression& e, double u, double v, const BiJet2& w,
                   const ConstantMap& constants = {});

/// Plain checked evaluation with all three variables bound.
double eval_value(const Expression& e, double u, double v, double w,
                  const ConstantMap& constants = {});

/// Plain checked evaluation of an expression in u alone.
double eval_value_u(const Expression& e, double u, const ConstantMap& constants = {});

} // namespace ruledlab::expr
