#include "doctest.h"

#include <array>
#include <cmath>
#include <thread>
#include <vector>

#include "expr_gen.hpp"
#include "helpers.hpp"
#include "ruledlab/expr.hpp"
#include "ruledlab/relnorm.hpp"

using namespace ruledlab;
using expr::BinaryOp;
using expr::Expression;
using expr::Node;
using expr::UnaryOp;
using expr::Var;

TEST_CASE("parse builds the expected tree for sin(u)^2") {
    const Expression e = expr::parse("sin(u)^2");
    const Node& root = *e.root();
    REQUIRE(root.kind == Node::Kind::Binary);
    CHECK(root.bop == BinaryOp::Pow);
    REQUIRE(root.lhs->kind == Node::Kind::Unary);
    CHECK(root.lhs->uop == UnaryOp::Sin);
    CHECK(root.lhs->lhs->kind == Node::Kind::Variable);
    CHECK(root.rhs->kind == Node::Kind::Number);
    CHECK(root.rhs->number == 2.0);
}

TEST_CASE("constants resolve through the binding map") {
    const Expression e = expr::parse("c/cos(u)");
    CHECK(expr::eval_value_u(e, 0.0, {{"c", 1.0}}) == 1.0);
    CHECK_THROWS_AS((void)expr::eval_value_u(e, 0.0), EvalError); // c unbound
}

TEST_CASE("division by a numerically vanishing denominator fails loudly") {
    const Expression e = expr::parse("sin(u)^3/cos(2*u)");
    const double quarter_pi = std::atan(1.0);
    CHECK_THROWS_AS((void)expr::eval_value_u(e, quarter_pi), EvalError);
    CHECK_THROWS_AS((void)expr::eval_jet3(e, quarter_pi), EvalError);
}

TEST_CASE("parse errors carry byte offsets") {
    const auto offset_of = [](const char* text) {
        try {
            (void)expr::parse(text);
        } catch (const ParseError& e) {
            return e.offset();
        }
        return std::size_t(9999);
    };
    CHECK(offset_of("2*") == 2);
    CHECK(offset_of("foo(u)") == 0);
    CHECK(offset_of("(u+1") == 4);
    CHECK(offset_of("u$1") == 1);
    CHECK(offset_of("") == 0);
    CHECK(offset_of("u+v w") == 4);
}

TEST_CASE("jet3 evaluation matches hand derivatives") {
    SUBCASE("cos(u)^(-2) at 0") {
        const Jet3 j = expr::eval_jet3(expr::parse("cos(u)^(-2)"), 0.0);
        CHECK(j.v == 1.0);
        CHECK(j.d1 == 0.0);
        CHECK(j.d2 == 2.0);
    }
    SUBCASE("identity") {
        const Jet3 j = expr::eval_jet3(expr::parse("u"), 0.7);
        CHECK(j.v == 0.7);
        CHECK(j.d1 == 1.0);
        CHECK(j.d2 == 0.0);
        CHECK(j.d3 == 0.0);
    }
    SUBCASE("sine Taylor channels") {
        const Jet3 j = expr::eval_jet3(expr::parse("sin(u)"), 0.0);
        CHECK(j.v == 0.0);
        CHECK(j.d1 == 1.0);
        CHECK(j.d2 == 0.0);
        CHECK(j.d3 == -1.0);
    }
    SUBCASE("integer power stays exact at base 0") {
        const Jet3 j = expr::eval_jet3(expr::parse("u^3"), 0.0);
        CHECK(j.v == 0.0);
        CHECK(j.d1 == 0.0);
        CHECK(j.d2 == 0.0);
        CHECK(j.d3 == 6.0);
    }
}

TEST_CASE("bijet evaluation binds u, v and the supplied w") {
    const auto inv = surface::make_invariants("0", "1", "0", 0.0, 1.0);
    SUBCASE("1/w at the striction line") {
        const BiJet2 w = relnorm::w_jet(inv, 0.0, 0.0);
        const BiJet2 j = expr::eval_bijet2(expr::parse("1/w"), 0.0, 0.0, w);
        CHECK(j.v == 1.0);
        CHECK(j.dv == 0.0);
    }
    SUBCASE("plain v") {
        const BiJet2 w = relnorm::w_jet(inv, 0.3, 0.4);
        const BiJet2 j = expr::eval_bijet2(expr::parse("v"), 0.3, 0.4, w);
        CHECK(j.v == 0.4);
        CHECK(j.dv == 1.0);
        CHECK(j.du == 0.0);
        CHECK(j.duu == 0.0);
        CHECK(j.duv == 0.0);
        CHECK(j.dvv == 0.0);
    }
    SUBCASE("c/(cos(u)*w)") {
        const BiJet2 w = relnorm::w_jet(inv, 0.0, 0.0);
        const BiJet2 j = expr::eval_bijet2(expr::parse("c/(cos(u)*w)"), 0.0, 0.0, w, {{"c", 1.0}});
        CHECK(j.v == doctest::Approx(1.0).epsilon(1e-15));
    }
    SUBCASE("u-only contexts reject v and w") {
        CHECK_THROWS_AS((void)expr::eval_jet3(expr::parse("v+1"), 0.0), EvalError);
        CHECK_THROWS_AS((void)expr::eval_jet3(expr::parse("w"), 0.0), EvalError);
    }
}

TEST_CASE("domain errors are raised, never NaN") {
    CHECK_THROWS_AS((void)expr::eval_value_u(expr::parse("log(u-2)"), 0.0), EvalError);
    CHECK_THROWS_AS((void)expr::eval_value_u(expr::parse("sqrt(u-2)"), 0.0), EvalError);
    CHECK_THROWS_AS((void)expr::eval_value_u(expr::parse("(u-2)^0.5"), 0.0), EvalError);
    CHECK_THROWS_AS((void)expr::eval_value_u(expr::parse("1/(u-u)"), 1.0), EvalError);
    CHECK(expr::eval_value_u(expr::parse("(0-2)^3"), 0.0) == -8.0);
    CHECK(expr::eval_value_u(expr::parse("2^-2"), 0.0) == 0.25);
}

TEST_CASE("printing keeps negative literals and exponents unambiguous") {
    const Expression neg_base = pow(Expression::number(-2.0), Expression::number(2.0));
    CHECK(expr::eval_value_u(expr::parse(neg_base.print()), 0.0) == 4.0);

    const Expression nested = pow(pow(Expression::variable(Var::U), Expression::number(2.0)),
                                  Expression::number(3.0));
    CHECK(expr::eval_value_u(expr::parse(nested.print()), 1.5) ==
          expr::eval_value_u(nested, 1.5));

    const Expression neg_square =
        Expression::unary(UnaryOp::Neg,
                          pow(Expression::variable(Var::U), Expression::number(2.0)));
    CHECK(expr::eval_value_u(expr::parse(neg_square.print()), 3.0) == -9.0);
}

TEST_CASE("print/parse round-trip evaluates identically") {
    testutil::ExprGen gen(20240601);
    int checked = 0;
    for (int k = 0; k < 150; ++k) {
        const Expression e = gen.expression(5);
        const Expression r = expr::parse(e.print());
        for (int s = 0; s < 5; ++s) {
            const auto u = gen.sample_point(e);
            if (!u)
                continue;
            const Jet3 a = expr::eval_jet3(e, *u);
            const Jet3 b = expr::eval_jet3(r, *u);
            CHECK(a.v == b.v);
            CHECK(a.d1 == b.d1);
            CHECK(a.d2 == b.d2);
            CHECK(a.d3 == b.d3);
            ++checked;
        }
    }
    CHECK(checked > 100);
}

TEST_CASE("jet sum identity is exact") {
    testutil::ExprGen gen(77);
    for (int k = 0; k < 30; ++k) {
        const Expression e1 = gen.expression(3);
        const Expression e2 = gen.expression(3);
        const Expression sum = e1 + e2;
        const auto u = gen.sample_point(sum);
        if (!u)
            continue;
        const Jet3 a = expr::eval_jet3(e1, *u);
        const Jet3 b = expr::eval_jet3(e2, *u);
        const Jet3 s = expr::eval_jet3(sum, *u);
        CHECK(s.v == a.v + b.v);
        CHECK(s.d1 == a.d1 + b.d1);
        CHECK(s.d2 == a.d2 + b.d2);
        CHECK(s.d3 == a.d3 + b.d3);
    }
}

TEST_CASE("jet derivatives agree with central differences") {
    testutil::ExprGen gen(123456);
    int expressions = 0;
    while (expressions < 100) {
        const Expression e = gen.expression();
        std::vector<double> points;
        for (int s = 0; s < 10; ++s) {
            const auto u = gen.sample_point(e);
            if (u)
                points.push_back(*u);
        }
        if (points.size() < 10)
            continue;
        ++expressions;
        const auto value = [&](double x) { return expr::eval_jet3(e, x).v; };
        for (double u : points) {
            Jet3 j;
            double fd1, fd2;
            try {
                j = expr::eval_jet3(e, u);
                fd1 = testutil::cd1(value, u, 1e-5);
                fd2 = testutil::cd2(value, u, 1e-4);
            } catch (const EvalError&) {
                continue; // stencil wandered into a pole
            }
            CHECK(std::fabs(j.d1 - fd1) <= 1e-6 * (1.0 + std::fabs(j.d1)));
            CHECK(std::fabs(j.d2 - fd2) <= 1e-4 * (1.0 + std::fabs(j.d2)));
        }
    }
}

namespace {

// swaps the roles of u and v in a tree; w stays w
Expression swap_uv(const expr::NodePtr& n) {
    switch (n->kind) {
    case Node::Kind::Number: return Expression::number(n->number);
    case Node::Kind::Constant: return Expression::constant(n->name);
    case Node::Kind::Variable:
        if (n->var == Var::U)
            return Expression::variable(Var::V);
        if (n->var == Var::V)
            return Expression::variable(Var::U);
        return Expression::variable(Var::W);
    case Node::Kind::Unary: return Expression::unary(n->uop, swap_uv(n->lhs));
    case Node::Kind::Binary: return Expression::binary(n->bop, swap_uv(n->lhs), swap_uv(n->rhs));
    }
    return Expression();
}

} // namespace

TEST_CASE("mixed partials are symmetric under argument exchange") {
    const auto cases = {"sin(u*v)+v^2", "exp(0.3*u+0.2*v)", "u*v*(u+v)", "cos(u)*sin(v)"};
    const BiJet2 w = BiJet2::constant(1.0); // unused by these expressions
    for (const char* text : cases) {
        const Expression e = expr::parse(text);
        const Expression t = swap_uv(e.root());
        const BiJet2 a = expr::eval_bijet2(e, 0.7, 0.4, w);
        const BiJet2 b = expr::eval_bijet2(t, 0.4, 0.7, w);
        const auto same = [](double x, double y) {
            CHECK(std::fabs(x - y) <= 1e-14 * (1.0 + std::fabs(y)));
        };
        same(a.v, b.v);
        same(a.du, b.dv);
        same(a.dv, b.du);
        same(a.duv, b.duv);
        same(a.duu, b.dvv);
        same(a.dvv, b.duu);
    }
}

TEST_CASE("bijet partials agree with finite differences through w") {
    const auto inv = surface::make_invariants("0", "1.2+0.3*cos(u)", "0", 0.0, 1.0);
    const Expression q = expr::parse("exp(0.2*u)/w + v^2/(2+w)");
    const auto value = [&](double u, double v) {
        const double d = inv.delta_at(u);
        return expr::eval_value(q, u, v, std::sqrt(v * v + d * d));
    };
    const double u0 = 0.4, v0 = 0.3;
    const BiJet2 j = expr::eval_bijet2(q, u0, v0, relnorm::w_jet(inv, u0, v0));
    const double h = 1e-5;
    CHECK(std::fabs(j.du - testutil::cd1([&](double x) { return value(x, v0); }, u0, h)) <= 1e-8);
    CHECK(std::fabs(j.dv - testutil::cd1([&](double x) { return value(u0, x); }, v0, h)) <= 1e-8);
    const double h2 = 1e-4;
    CHECK(std::fabs(j.duu - testutil::cd2([&](double x) { return value(x, v0); }, u0, h2)) <=
          1e-5);
    CHECK(std::fabs(j.dvv - testutil::cd2([&](double x) { return value(u0, x); }, v0, h2)) <=
          1e-5);
    const double duv_fd =
        (value(u0 + h2, v0 + h2) - value(u0 + h2, v0 - h2) - value(u0 - h2, v0 + h2) +
         value(u0 - h2, v0 - h2)) /
        (4.0 * h2 * h2);
    CHECK(std::fabs(j.duv - duv_fd) <= 1e-5);
}

TEST_CASE("expressions evaluate identically across threads") {
    const Expression e = expr::parse("sin(u)^2/(1.5+cos(u))+exp(0.1*u)");
    std::vector<Jet3> serial;
    for (int i = 0; i < 64; ++i)
        serial.push_back(expr::eval_jet3(e, i * 0.05));

    std::vector<std::thread> threads;
    std::array<std::vector<Jet3>, 4> parallel;
    for (int t = 0; t < 4; ++t)
        threads.emplace_back([&, t] {
            for (int i = 0; i < 64; ++i)
                parallel[t].push_back(expr::eval_jet3(e, i * 0.05));
        });
    for (auto& th : threads)
        th.join();
    for (int t = 0; t < 4; ++t)
        for (int i = 0; i < 64; ++i) {
            CHECK(parallel[t][i].v == serial[i].v);
            CHECK(parallel[t][i].d3 == serial[i].d3);
        }
}
