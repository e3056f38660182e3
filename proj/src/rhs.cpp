#include "fde/rhs.hpp"

#include "fde/errors.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace fde {

namespace {

using Node = RhsExpression::Node;
using Kind = RhsExpression::Kind;
using NodePtr = std::shared_ptr<const Node>;

NodePtr make_node(Kind kind, int column, NodePtr lhs = nullptr, NodePtr rhs = nullptr,
                  double number = 0.0) {
    auto n = std::make_shared<Node>();
    n->kind = kind;
    n->column = column;
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    n->number = number;
    return n;
}

struct Token {
    enum class Type { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, Comma, End };
    Type type;
    double number = 0.0;
    std::string text;
    int column = 0;
};

class Lexer {
public:
    explicit Lexer(const std::string& text) : text_(text) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        std::size_t i = 0;
        while (i < text_.size()) {
            const char c = text_[i];
            const int col = static_cast<int>(i) + 1;
            if (std::isspace(static_cast<unsigned char>(c))) {
                ++i;
                continue;
            }
            if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
                char* end = nullptr;
                double v = std::strtod(text_.c_str() + i, &end);
                if (end == text_.c_str() + i) fail("malformed number", col);
                i = static_cast<std::size_t>(end - text_.c_str());
                out.push_back({Token::Type::Number, v, "", col});
                continue;
            }
            if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                std::size_t j = i;
                while (j < text_.size() &&
                       (std::isalnum(static_cast<unsigned char>(text_[j])) || text_[j] == '_')) {
                    ++j;
                }
                out.push_back({Token::Type::Ident, 0.0, text_.substr(i, j - i), col});
                i = j;
                continue;
            }
            Token::Type t;
            switch (c) {
                case '+': t = Token::Type::Plus; break;
                case '-': t = Token::Type::Minus; break;
                case '*': t = Token::Type::Star; break;
                case '/': t = Token::Type::Slash; break;
                case '^': t = Token::Type::Caret; break;
                case '(': t = Token::Type::LParen; break;
                case ')': t = Token::Type::RParen; break;
                case ',': t = Token::Type::Comma; break;
                default:
                    fail(std::string("unexpected character '") + c + "'", col);
                    t = Token::Type::End;
            }
            out.push_back({t, 0.0, "", col});
            ++i;
        }
        out.push_back({Token::Type::End, 0.0, "", static_cast<int>(text_.size()) + 1});
        return out;
    }

private:
    [[noreturn]] static void fail(const std::string& msg, int col) {
        std::ostringstream os;
        os << "expression error at column " << col << ": " << msg;
        throw std::invalid_argument(os.str());
    }

    const std::string& text_;
};

class Parser {
public:
    explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

    NodePtr parse() {
        NodePtr e = expr();
        expect(Token::Type::End, "end of expression");
        return e;
    }

private:
    const Token& peek() const { return tokens_[pos_]; }
    Token take() { return tokens_[pos_++]; }

    [[noreturn]] void fail(const std::string& msg, int col) const {
        std::ostringstream os;
        os << "expression error at column " << col << ": " << msg;
        throw std::invalid_argument(os.str());
    }

    void expect(Token::Type t, const char* what) {
        if (peek().type != t) fail(std::string("expected ") + what, peek().column);
        ++pos_;
    }

    NodePtr expr() {
        NodePtr lhs = term();
        while (peek().type == Token::Type::Plus || peek().type == Token::Type::Minus) {
            Token op = take();
            NodePtr rhs = term();
            lhs = make_node(op.type == Token::Type::Plus ? Kind::Add : Kind::Sub, op.column,
                            std::move(lhs), std::move(rhs));
        }
        return lhs;
    }

    NodePtr term() {
        NodePtr lhs = unary();
        while (peek().type == Token::Type::Star || peek().type == Token::Type::Slash) {
            Token op = take();
            NodePtr rhs = unary();
            lhs = make_node(op.type == Token::Type::Star ? Kind::Mul : Kind::Div, op.column,
                            std::move(lhs), std::move(rhs));
        }
        return lhs;
    }

    NodePtr unary() {
        if (peek().type == Token::Type::Minus) {
            Token op = take();
            return make_node(Kind::Neg, op.column, unary());
        }
        return power();
    }

    NodePtr power() {
        NodePtr base = primary();
        if (peek().type == Token::Type::Caret) {
            Token op = take();
            // Right associative; the exponent may carry its own sign.
            NodePtr exp = unary();
            return make_node(Kind::Pow, op.column, std::move(base), std::move(exp));
        }
        return base;
    }

    NodePtr primary() {
        const Token tok = take();
        switch (tok.type) {
            case Token::Type::Number:
                return make_node(Kind::Number, tok.column, nullptr, nullptr, tok.number);
            case Token::Type::LParen: {
                NodePtr e = expr();
                expect(Token::Type::RParen, "')'");
                return e;
            }
            case Token::Type::Ident: {
                if (tok.text == "t") return make_node(Kind::VarT, tok.column);
                if (tok.text == "x") return make_node(Kind::VarX, tok.column);
                Kind k;
                int arity = 1;
                if (tok.text == "log") k = Kind::Log;
                else if (tok.text == "exp") k = Kind::Exp;
                else if (tok.text == "sin") k = Kind::Sin;
                else if (tok.text == "cos") k = Kind::Cos;
                else if (tok.text == "pow") { k = Kind::Pow; arity = 2; }
                else fail("unknown identifier '" + tok.text + "'", tok.column);
                expect(Token::Type::LParen, "'('");
                NodePtr a = expr();
                NodePtr b;
                if (arity == 2) {
                    expect(Token::Type::Comma, "','");
                    b = expr();
                }
                expect(Token::Type::RParen, "')'");
                return make_node(k, tok.column, std::move(a), std::move(b));
            }
            default:
                fail("expected a value", tok.column);
        }
        return nullptr;
    }

    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
};

double eval_node(const Node* n, double t, double x) {
    switch (n->kind) {
        case Kind::Number: return n->number;
        case Kind::VarT: return t;
        case Kind::VarX: return x;
        case Kind::Neg: return -eval_node(n->lhs.get(), t, x);
        case Kind::Add: return eval_node(n->lhs.get(), t, x) + eval_node(n->rhs.get(), t, x);
        case Kind::Sub: return eval_node(n->lhs.get(), t, x) - eval_node(n->rhs.get(), t, x);
        case Kind::Mul: return eval_node(n->lhs.get(), t, x) * eval_node(n->rhs.get(), t, x);
        case Kind::Div: {
            const double d = eval_node(n->rhs.get(), t, x);
            if (d == 0.0) throw EvalError("division by zero", n->column);
            return eval_node(n->lhs.get(), t, x) / d;
        }
        case Kind::Pow: {
            const double b = eval_node(n->lhs.get(), t, x);
            const double e = eval_node(n->rhs.get(), t, x);
            const double r = std::pow(b, e);
            if (!std::isfinite(r)) throw EvalError("non-finite power result", n->column);
            return r;
        }
        case Kind::Log: {
            const double a = eval_node(n->lhs.get(), t, x);
            if (!(a > 0.0)) throw EvalError("log of non-positive value", n->column);
            return std::log(a);
        }
        case Kind::Exp: return std::exp(eval_node(n->lhs.get(), t, x));
        case Kind::Sin: return std::sin(eval_node(n->lhs.get(), t, x));
        case Kind::Cos: return std::cos(eval_node(n->lhs.get(), t, x));
    }
    throw std::logic_error("unreachable expression kind");
}

bool node_references_x(const Node* n) {
    if (n == nullptr) return false;
    if (n->kind == Kind::VarX) return true;
    return node_references_x(n->lhs.get()) || node_references_x(n->rhs.get());
}

} // namespace

double RhsExpression::evaluate(double t, double x) const {
    if (!root_) throw std::logic_error("RhsExpression: empty expression");
    return eval_node(root_.get(), t, x);
}

bool RhsExpression::references_x() const { return node_references_x(root_.get()); }

RhsExpression parse_rhs_expression(const std::string& text) {
    if (text.empty()) throw std::invalid_argument("expression error: empty input");
    Parser parser(Lexer(text).run());
    return RhsExpression(parser.parse(), text);
}

Rhs Rhs::linear(double lambda) {
    Rhs r;
    r.linear_ = true;
    r.lambda_ = lambda;
    return r;
}

Rhs Rhs::expression(RhsExpression expr) {
    Rhs r;
    r.linear_ = false;
    r.expr_ = std::move(expr);
    return r;
}

double Rhs::operator()(double t, double x) const {
    return linear_ ? lambda_ * x : expr_.evaluate(t, x);
}

double estimate_lipschitz(const Rhs& rhs, double t_lo, double t_hi, double x_lo, double x_hi,
                          int samples) {
    if (samples < 2) throw std::invalid_argument("estimate_lipschitz: samples must be >= 2");
    double best = 0.0;
    for (int i = 0; i < samples; ++i) {
        const double t = t_lo + (t_hi - t_lo) * i / (samples - 1);
        for (int j = 0; j + 1 < samples; ++j) {
            const double x1 = x_lo + (x_hi - x_lo) * j / (samples - 1);
            const double x2 = x_lo + (x_hi - x_lo) * (j + 1) / (samples - 1);
            const double q = std::abs(rhs(t, x2) - rhs(t, x1)) / std::abs(x2 - x1);
            best = std::max(best, q);
        }
    }
    return 2.0 * best;
}

} // namespace fde
