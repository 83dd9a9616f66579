#include "ruledlab/expr.hpp"

#include <array>
#include <cctype>
#include <cmath>
#include <charconv>
#include <cstdio>
#include <optional>
#include <utility>
#include <vector>

namespace ruledlab::expr {

namespace {

const std::array<std::pair<std::string_view, UnaryOp>, 8> kFunctions = {{
    {"sin", UnaryOp::Sin},
    {"cos", UnaryOp::Cos},
    {"tan", UnaryOp::Tan},
    {"exp", UnaryOp::Exp},
    {"log", UnaryOp::Log},
    {"sqrt", UnaryOp::Sqrt},
    {"abs", UnaryOp::Abs},
    {"sign", UnaryOp::Sign},
}};

std::optional<UnaryOp> function_named(std::string_view name) {
    for (const auto& [fname, op] : kFunctions)
        if (fname == name)
            return op;
    return std::nullopt;
}

std::string_view function_name(UnaryOp op) {
    for (const auto& [fname, fop] : kFunctions)
        if (fop == op)
            return fname;
    return "?";
}

struct Token {
    enum class Kind { Number, Identifier, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };
    Kind kind = Kind::End;
    std::size_t offset = 0;
    double number = 0.0;
    std::string_view text = {};
};

class Lexer {
public:
    explicit Lexer(std::string_view text) : text_(text) {}

    Token next() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
        if (pos_ >= text_.size())
            return {Token::Kind::End, pos_};

        const std::size_t start = pos_;
        const char c = text_[pos_];
        switch (c) {
        case '+': ++pos_; return {Token::Kind::Plus, start};
        case '-': ++pos_; return {Token::Kind::Minus, start};
        case '*': ++pos_; return {Token::Kind::Star, start};
        case '/': ++pos_; return {Token::Kind::Slash, start};
        case '^': ++pos_; return {Token::Kind::Caret, start};
        case '(': ++pos_; return {Token::Kind::LParen, start};
        case ')': ++pos_; return {Token::Kind::RParen, start};
        default: break;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            double value = 0.0;
            const char* first = text_.data() + pos_;
            const char* last = text_.data() + text_.size();
            auto [ptr, ec] = std::from_chars(first, last, value);
            if (ec != std::errc())
                throw ParseError("malformed number", start);
            pos_ = static_cast<std::size_t>(ptr - text_.data());
            return {Token::Kind::Number, start, value};
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t end = pos_;
            while (end < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[end])) || text_[end] == '_'))
                ++end;
            Token t{Token::Kind::Identifier, start};
            t.text = text_.substr(start, end - start);
            pos_ = end;
            return t;
        }
        throw ParseError(std::string("unexpected character '") + c + "'", start);
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;
};

class Parser {
public:
    explicit Parser(std::string_view text) : lexer_(text) { advance(); }

    Expression run() {
        Expression e = parse_sum();
        if (current_.kind != Token::Kind::End)
            throw ParseError("unexpected trailing input", current_.offset);
        return e;
    }

private:
    void advance() { current_ = lexer_.next(); }

    bool accept(Token::Kind k) {
        if (current_.kind != k)
            return false;
        advance();
        return true;
    }

    Expression parse_sum() {
        Expression lhs = parse_product();
        for (;;) {
            if (accept(Token::Kind::Plus))
                lhs = std::move(lhs) + parse_product();
            else if (accept(Token::Kind::Minus))
                lhs = std::move(lhs) - parse_product();
            else
                return lhs;
        }
    }

    Expression parse_product() {
        Expression lhs = parse_unary();
        for (;;) {
            if (accept(Token::Kind::Star))
                lhs = std::move(lhs) * parse_unary();
            else if (accept(Token::Kind::Slash))
                lhs = std::move(lhs) / parse_unary();
            else
                return lhs;
        }
    }

    Expression parse_unary() {
        if (accept(Token::Kind::Minus))
            return Expression::unary(UnaryOp::Neg, parse_unary());
        return parse_power();
    }

    Expression parse_power() {
        Expression base = parse_primary();
        if (accept(Token::Kind::Caret))
            return pow(std::move(base), parse_unary());
        return base;
    }

    Expression parse_primary() {
        const Token t = current_;
        switch (t.kind) {
        case Token::Kind::Number:
            advance();
            return Expression::number(t.number);
        case Token::Kind::LParen: {
            advance();
            Expression e = parse_sum();
            if (!accept(Token::Kind::RParen))
                throw ParseError("expected ')'", current_.offset);
            return e;
        }
        case Token::Kind::Identifier: {
            advance();
            if (current_.kind == Token::Kind::LParen) {
                const auto op = function_named(t.text);
                if (!op)
                    throw ParseError("unknown function '" + std::string(t.text) + "'", t.offset);
                advance();
                Expression arg = parse_sum();
                if (!accept(Token::Kind::RParen))
                    throw ParseError("expected ')'", current_.offset);
                return Expression::unary(*op, std::move(arg));
            }
            if (t.text == "u")
                return Expression::variable(Var::U);
            if (t.text == "v")
                return Expression::variable(Var::V);
            if (t.text == "w")
                return Expression::variable(Var::W);
            return Expression::constant(std::string(t.text));
        }
        default:
            throw ParseError("expected expression", t.offset);
        }
    }

    Lexer lexer_;
    Token current_{Token::Kind::End, 0};
};

// Generic evaluation environment. A disabled variable slot means the
// expression is not allowed to reference that variable in this context.
template <typename J>
struct Env {
    std::optional<J> u, v, w;
    const ConstantMap* constants = nullptr;

    J variable(Var var) const {
        const std::optional<J>* slot = nullptr;
        const char* name = "";
        switch (var) {
        case Var::U: slot = &u; name = "u"; break;
        case Var::V: slot = &v; name = "v"; break;
        case Var::W: slot = &w; name = "w"; break;
        }
        if (!slot->has_value())
            throw EvalError(std::string("variable '") + name + "' is not allowed here");
        return **slot;
    }

    J constant(std::string_view name) const {
        if (constants) {
            auto it = constants->find(name);
            if (it != constants->end())
                return J::constant(it->second);
        }
        if (name == "pi")
            return J::constant(3.14159265358979323846);
        throw EvalError("unknown identifier '" + std::string(name) + "'");
    }
};

template <typename J>
J eval_node(const Node& n, const Env<J>& env) {
    switch (n.kind) {
    case Node::Kind::Number:
        return J::constant(n.number);
    case Node::Kind::Variable:
        return env.variable(n.var);
    case Node::Kind::Constant:
        return env.constant(n.name);
    case Node::Kind::Unary: {
        const J a = eval_node(*n.lhs, env);
        switch (n.uop) {
        case UnaryOp::Neg: return -a;
        case UnaryOp::Sin: return sin(a);
        case UnaryOp::Cos: return cos(a);
        case UnaryOp::Tan: return tan(a);
        case UnaryOp::Exp: return exp(a);
        case UnaryOp::Log: return log(a);
        case UnaryOp::Sqrt: return sqrt(a);
        case UnaryOp::Abs: return abs(a);
        case UnaryOp::Sign: return sign(a);
        }
        break;
    }
    case Node::Kind::Binary: {
        const J a = eval_node(*n.lhs, env);
        const J b = eval_node(*n.rhs, env);
        switch (n.bop) {
        case BinaryOp::Add: return a + b;
        case BinaryOp::Sub: return a - b;
        case BinaryOp::Mul: return a * b;
        case BinaryOp::Div: return a / b;
        case BinaryOp::Pow: return pow(a, b);
        }
        break;
    }
    }
    throw EvalError("malformed expression tree");
}

const Node& checked_root(const Expression& e) {
    if (e.empty())
        throw EvalError("empty expression");
    return *e.root();
}

int precedence(const Node& n) {
    switch (n.kind) {
    case Node::Kind::Binary:
        switch (n.bop) {
        case BinaryOp::Add:
        case BinaryOp::Sub: return 1;
        case BinaryOp::Mul:
        case BinaryOp::Div: return 2;
        case BinaryOp::Pow: return 4;
        }
        return 1;
    case Node::Kind::Unary:
        return n.uop == UnaryOp::Neg ? 3 : 5;
    case Node::Kind::Number:
        // a negative literal prints with a leading minus and binds like a
        // negation, so "-2^2" would re-parse as -(2^2)
        return std::signbit(n.number) ? 3 : 5;
    default:
        return 5;
    }
}

void print_node(const Node& n, std::string& out);

void print_child(const Node& child, int min_prec, std::string& out) {
    const bool parens = precedence(child) < min_prec;
    if (parens)
        out += '(';
    print_node(child, out);
    if (parens)
        out += ')';
}

void print_node(const Node& n, std::string& out) {
    switch (n.kind) {
    case Node::Kind::Number: {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", n.number);
        out += buf;
        return;
    }
    case Node::Kind::Variable:
        out += (n.var == Var::U ? 'u' : n.var == Var::V ? 'v' : 'w');
        return;
    case Node::Kind::Constant:
        out += n.name;
        return;
    case Node::Kind::Unary:
        if (n.uop == UnaryOp::Neg) {
            out += '-';
            print_child(*n.lhs, 3, out);
        } else {
            out += function_name(n.uop);
            out += '(';
            print_node(*n.lhs, out);
            out += ')';
        }
        return;
    case Node::Kind::Binary: {
        const int prec = precedence(n);
        const char* sym = "";
        switch (n.bop) {
        case BinaryOp::Add: sym = "+"; break;
        case BinaryOp::Sub: sym = "-"; break;
        case BinaryOp::Mul: sym = "*"; break;
        case BinaryOp::Div: sym = "/"; break;
        case BinaryOp::Pow: sym = "^"; break;
        }
        if (n.bop == BinaryOp::Pow) {
            // left operand of ^ must be a primary; right side re-parses via
            // the unary rule, so a leading minus survives unparenthesized
            print_child(*n.lhs, 5, out);
            out += sym;
            print_child(*n.rhs, 3, out);
        } else {
            print_child(*n.lhs, prec, out);
            out += sym;
            // - and / do not associate to the right
            print_child(*n.rhs, prec + 1, out);
        }
        return;
    }
    }
}

bool node_uses(const Node& n, Var v) {
    switch (n.kind) {
    case Node::Kind::Variable: return n.var == v;
    case Node::Kind::Unary: return node_uses(*n.lhs, v);
    case Node::Kind::Binary: return node_uses(*n.lhs, v) || node_uses(*n.rhs, v);
    default: return false;
    }
}

} // namespace

Expression Expression::number(double value) {
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::Number;
    n->number = value;
    return Expression(std::move(n));
}

Expression Expression::variable(Var v) {
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::Variable;
    n->var = v;
    return Expression(std::move(n));
}

Expression Expression::constant(std::string name) {
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::Constant;
    n->name = std::move(name);
    return Expression(std::move(n));
}

Expression Expression::unary(UnaryOp op, Expression arg) {
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::Unary;
    n->uop = op;
    n->lhs = arg.root();
    return Expression(std::move(n));
}

Expression Expression::binary(BinaryOp op, Expression lhs, Expression rhs) {
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::Binary;
    n->bop = op;
    n->lhs = lhs.root();
    n->rhs = rhs.root();
    return Expression(std::move(n));
}

std::string Expression::print() const {
    if (empty())
        return "";
    std::string out;
    print_node(*root_, out);
    return out;
}

bool Expression::uses(Var v) const { return root_ && node_uses(*root_, v); }

Expression parse(std::string_view text) {
    if (text.empty())
        throw ParseError("empty input", 0);
    return Parser(text).run();
}

Jet3 eval_jet3(const Expression& e, double u, const ConstantMap& constants) {
    Env<Jet3> env;
    env.u = Jet3::variable(u);
    env.constants = &constants;
    return eval_node(checked_root(e), env);
}

BiJet2 eval_bijet2(const Expression& e, double u, double v, const BiJet2& w,
                   const ConstantMap& constants) {
    Env<BiJet2> env;
    env.u = BiJet2::var_u(u);
    env.v = BiJet2::var_v(v);
    env.w = w;
    env.constants = &constants;
    return eval_node(checked_root(e), env);
}

double eval_value(const Expression& e, double u, double v, double w,
                  const ConstantMap& constants) {
    Env<Jet0> env;
    env.u = Jet0{u};
    env.v = Jet0{v};
    env.w = Jet0{w};
    env.constants = &constants;
    return eval_node(checked_root(e), env).v;
}

double eval_value_u(const Expression& e, double u, const ConstantMap& constants) {
    Env<Jet0> env;
    env.u = Jet0{u};
    env.constants = &constants;
    return eval_node(checked_root(e), env).v;
}

} // namespace ruledlab::expr
