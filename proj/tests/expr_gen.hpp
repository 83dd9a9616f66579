#pragma once

#include <optional>
#include <random>
#include <vector>

#include "ruledlab/expr.hpp"

namespace testutil {

// Random expressions in u from a bounded grammar, plus sample points where
// the expression and its jets evaluate cleanly with moderate magnitudes.
// Used by the derivative-vs-finite-difference properties.
class ExprGen {
public:
    explicit ExprGen(std::uint64_t seed) : rng_(seed) {}

    ruledlab::expr::Expression expression(int max_depth = 4) { return gen(max_depth); }

    std::optional<double> sample_point(const ruledlab::expr::Expression& e) {
        using ruledlab::expr::eval_jet3;
        for (int attempt = 0; attempt < 60; ++attempt) {
            const double u = uniform(-2.0, 2.0);
            try {
                const ruledlab::Jet3 j = eval_jet3(e, u);
                const double m = std::max({std::fabs(j.v), std::fabs(j.d1), std::fabs(j.d2),
                                           std::fabs(j.d3)});
                if (m <= 100.0)
                    return u;
            } catch (const ruledlab::EvalError&) {
            }
        }
        return std::nullopt;
    }

    std::mt19937_64& rng() { return rng_; }

private:
    using Expression = ruledlab::expr::Expression;
    using UnaryOp = ruledlab::expr::UnaryOp;

    double uniform(double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(rng_);
    }
    int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }

    Expression leaf() {
        if (pick(2) == 0)
            return Expression::variable(ruledlab::expr::Var::U);
        return Expression::number(uniform(-2.0, 2.0));
    }

    Expression gen(int depth) {
        if (depth <= 0)
            return leaf();
        switch (pick(10)) {
        case 0: return gen(depth - 1) + gen(depth - 1);
        case 1: return gen(depth - 1) - gen(depth - 1);
        case 2: return gen(depth - 1) * gen(depth - 1);
        case 3: // shifted denominator keeps most samples away from poles
            return gen(depth - 1) /
                   (Expression::number(0.5 + pick(2)) +
                    Expression::unary(UnaryOp::Abs, gen(depth - 1)));
        case 4:
            return pow(gen(depth - 1), Expression::number(static_cast<double>(2 + pick(2))));
        case 5: return Expression::unary(pick(2) ? UnaryOp::Sin : UnaryOp::Cos, gen(depth - 1));
        case 6:
            return Expression::unary(UnaryOp::Exp,
                                     Expression::number(uniform(-0.5, 0.5)) * gen(depth - 1));
        case 7:
            return Expression::unary(UnaryOp::Log,
                                     Expression::number(0.5) +
                                         Expression::unary(UnaryOp::Abs, gen(depth - 1)));
        case 8:
            return Expression::unary(UnaryOp::Sqrt,
                                     Expression::number(0.5) +
                                         Expression::unary(UnaryOp::Abs, gen(depth - 1)));
        case 9: return Expression::unary(pick(2) ? UnaryOp::Neg : UnaryOp::Tan, gen(depth - 1));
        }
        return leaf();
    }

    std::mt19937_64 rng_;
};

} // namespace testutil
