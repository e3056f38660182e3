#pragma once

#include <memory>
#include <string>

namespace fde {

/// Parsed right-hand-side expression over the grammar:
///   literals, variables t and x, unary minus, + - * /, ^ (right associative),
///   functions log, exp, sin, cos, pow(a, b).
/// Precedence, tightest first: ^, unary -, * /, + -.
class RhsExpression {
public:
    enum class Kind { Number, VarT, VarX, Neg, Add, Sub, Mul, Div, Pow, Log, Exp, Sin, Cos };

    struct Node {
        Kind kind;
        double number = 0.0;
        int column = 0; // 1-based position in the source text
        std::shared_ptr<const Node> lhs;
        std::shared_ptr<const Node> rhs;
    };

    RhsExpression() = default;
    RhsExpression(std::shared_ptr<const Node> root, std::string source)
        : root_(std::move(root)), source_(std::move(source)) {}

    /// Throws EvalError (with the node column) on division by zero, log of a
    /// non-positive value, or a non-finite power result.
    double evaluate(double t, double x) const;

    const std::string& source() const { return source_; }
    const Node* root() const { return root_.get(); }
    bool references_x() const;

private:
    std::shared_ptr<const Node> root_;
    std::string source_;
};

/// Throws std::invalid_argument with the offending column on lexical or
/// syntax errors, and on unknown identifiers.
RhsExpression parse_rhs_expression(const std::string& text);

/// The right-hand side phi(t, x) of a Cauchy problem: either the linear
/// catalog entry lambda*x or a parsed expression.
class Rhs {
public:
    static Rhs linear(double lambda);
    static Rhs expression(RhsExpression expr);

    double operator()(double t, double x) const;

    bool is_linear() const { return linear_; }
    double linear_lambda() const { return lambda_; }
    const RhsExpression& expr() const { return expr_; }

private:
    bool linear_ = true;
    double lambda_ = 0.0;
    RhsExpression expr_;
};

/// Heuristic Lipschitz estimate: max difference quotient of phi in x over a
/// sampled (t, x) box, with a 2x safety factor. Not a certified bound.
double estimate_lipschitz(const Rhs& rhs, double t_lo, double t_hi, double x_lo,
                          double x_hi, int samples = 48);

} // namespace fde
