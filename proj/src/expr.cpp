#include "cvf/expr.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <vector>

namespace cvf::expr {

namespace {

enum class Func { Sin, Cos, Tanh, Exp, Abs, Sqrt };

struct Node {
    enum class Kind { Constant, Variable, Negate, Add, Sub, Mul, Div, Pow, Call } kind;
    double value = 0.0;     // Constant
    std::size_t var = 0;    // Variable, zero-based
    Func fn = Func::Sin;    // Call
    std::unique_ptr<Node> a, b;
};

using NodePtr = std::unique_ptr<Node>;

double eval_node(const Node& n, const Vector& x) {
    switch (n.kind) {
    case Node::Kind::Constant: return n.value;
    case Node::Kind::Variable: return x[n.var];
    case Node::Kind::Negate: return -eval_node(*n.a, x);
    case Node::Kind::Add: return eval_node(*n.a, x) + eval_node(*n.b, x);
    case Node::Kind::Sub: return eval_node(*n.a, x) - eval_node(*n.b, x);
    case Node::Kind::Mul: return eval_node(*n.a, x) * eval_node(*n.b, x);
    case Node::Kind::Div: return eval_node(*n.a, x) / eval_node(*n.b, x);
    case Node::Kind::Pow: return std::pow(eval_node(*n.a, x), eval_node(*n.b, x));
    case Node::Kind::Call: {
        double v = eval_node(*n.a, x);
        switch (n.fn) {
        case Func::Sin: return std::sin(v);
        case Func::Cos: return std::cos(v);
        case Func::Tanh: return std::tanh(v);
        case Func::Exp: return std::exp(v);
        case Func::Abs: return std::abs(v);
        case Func::Sqrt: return std::sqrt(v);
        }
        return 0.0;
    }
    }
    return 0.0;
}

struct Token {
    enum class Type { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, Semi, End };
    Type type;
    double number = 0.0;
    std::string text;
    std::size_t offset = 0;
};

class Parser {
public:
    Parser(const std::string& src, std::size_t dim) : src_(src), dim_(dim) { advance(); }

    std::vector<NodePtr> parse_program() {
        std::vector<NodePtr> comps;
        comps.push_back(parse_expr());
        while (cur_.type == Token::Type::Semi) {
            advance();
            if (cur_.type == Token::Type::End) break; // trailing separator
            comps.push_back(parse_expr());
        }
        if (cur_.type != Token::Type::End) fail("expected ';' or end of input");
        if (comps.size() != dim_)
            fail("field has " + std::to_string(comps.size()) + " components, expected " +
                 std::to_string(dim_));
        return comps;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const { fail_at(msg, cur_.offset); }

    [[noreturn]] void fail_at(const std::string& msg, std::size_t offset) const {
        std::size_t line = 1, col = 1;
        for (std::size_t i = 0; i < offset && i < src_.size(); ++i) {
            if (src_[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw ParseError(msg, offset, line, col);
    }

    void advance() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        cur_.offset = pos_;
        cur_.text.clear();
        if (pos_ >= src_.size()) {
            cur_.type = Token::Type::End;
            return;
        }
        char c = src_[pos_];
        switch (c) {
        case '+': cur_.type = Token::Type::Plus; ++pos_; return;
        case '-': cur_.type = Token::Type::Minus; ++pos_; return;
        case '*': cur_.type = Token::Type::Star; ++pos_; return;
        case '/': cur_.type = Token::Type::Slash; ++pos_; return;
        case '^': cur_.type = Token::Type::Caret; ++pos_; return;
        case '(': cur_.type = Token::Type::LParen; ++pos_; return;
        case ')': cur_.type = Token::Type::RParen; ++pos_; return;
        case ';': cur_.type = Token::Type::Semi; ++pos_; return;
        default: break;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
                ++pos_;
            if (pos_ < src_.size() && src_[pos_] == '.') {
                ++pos_;
                while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
                    ++pos_;
            }
            if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
                std::size_t mark = pos_++;
                if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
                if (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                    while (pos_ < src_.size() &&
                           std::isdigit(static_cast<unsigned char>(src_[pos_])))
                        ++pos_;
                } else {
                    pos_ = mark; // 'e' starts an identifier, not an exponent
                }
            }
            cur_.type = Token::Type::Number;
            cur_.number = std::strtod(src_.substr(start, pos_ - start).c_str(), nullptr);
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < src_.size() &&
                   std::isalnum(static_cast<unsigned char>(src_[pos_])))
                ++pos_;
            cur_.type = Token::Type::Ident;
            cur_.text = src_.substr(start, pos_ - start);
            return;
        }
        fail_at(std::string("unexpected character '") + c + "'", pos_);
    }

    NodePtr make(Node::Kind k, NodePtr a = nullptr, NodePtr b = nullptr) {
        auto n = std::make_unique<Node>();
        n->kind = k;
        n->a = std::move(a);
        n->b = std::move(b);
        return n;
    }

    NodePtr parse_expr() {
        NodePtr lhs = parse_term();
        while (cur_.type == Token::Type::Plus || cur_.type == Token::Type::Minus) {
            bool add = cur_.type == Token::Type::Plus;
            advance();
            lhs = make(add ? Node::Kind::Add : Node::Kind::Sub, std::move(lhs), parse_term());
        }
        return lhs;
    }

    NodePtr parse_term() {
        NodePtr lhs = parse_factor();
        while (cur_.type == Token::Type::Star || cur_.type == Token::Type::Slash) {
            bool mul = cur_.type == Token::Type::Star;
            advance();
            lhs = make(mul ? Node::Kind::Mul : Node::Kind::Div, std::move(lhs), parse_factor());
        }
        return lhs;
    }

    NodePtr parse_factor() {
        NodePtr base = parse_base();
        if (cur_.type == Token::Type::Caret) {
            advance();
            return make(Node::Kind::Pow, std::move(base), parse_factor()); // right-assoc
        }
        return base;
    }

    NodePtr parse_base() {
        switch (cur_.type) {
        case Token::Type::Number: {
            auto n = make(Node::Kind::Constant);
            n->value = cur_.number;
            advance();
            return n;
        }
        case Token::Type::Minus: {
            advance();
            return make(Node::Kind::Negate, parse_base());
        }
        case Token::Type::LParen: {
            advance();
            NodePtr inner = parse_expr();
            if (cur_.type != Token::Type::RParen) fail("expected ')'");
            advance();
            return inner;
        }
        case Token::Type::Ident: return parse_ident();
        default: fail("expected a number, variable, function call, or '('");
        }
    }

    NodePtr parse_ident() {
        const std::string name = cur_.text;
        const std::size_t at = cur_.offset;

        if (name.size() >= 2 && name[0] == 'x' &&
            std::all_of(name.begin() + 1, name.end(),
                        [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
            std::size_t idx = std::strtoull(name.c_str() + 1, nullptr, 10);
            if (idx < 1 || idx > dim_)
                fail_at("unknown identifier '" + name + "' (variables are x1..x" +
                            std::to_string(dim_) + ")",
                        at);
            advance();
            auto n = make(Node::Kind::Variable);
            n->var = idx - 1;
            return n;
        }

        static const std::pair<const char*, Func> funcs[] = {
            {"sin", Func::Sin}, {"cos", Func::Cos}, {"tanh", Func::Tanh},
            {"exp", Func::Exp}, {"abs", Func::Abs}, {"sqrt", Func::Sqrt},
        };
        for (const auto& [fname, fn] : funcs) {
            if (name == fname) {
                advance();
                if (cur_.type != Token::Type::LParen) fail("expected '(' after '" + name + "'");
                advance();
                NodePtr arg = parse_expr();
                if (cur_.type != Token::Type::RParen) fail("expected ')'");
                advance();
                auto n = make(Node::Kind::Call, std::move(arg));
                n->fn = fn;
                return n;
            }
        }
        fail_at("unknown identifier '" + name + "'", at);
    }

    const std::string& src_;
    std::size_t dim_;
    std::size_t pos_ = 0;
    Token cur_;
};

} // namespace

struct Program::Impl {
    std::string source;
    std::size_t dim = 0;
    std::vector<NodePtr> components;
};

Program Program::parse(const std::string& source, std::size_t dim) {
    if (dim == 0) throw Error("field dimension must be positive");
    auto impl = std::make_shared<Impl>();
    impl->source = source;
    impl->dim = dim;
    Parser parser(impl->source, dim);
    impl->components = parser.parse_program();
    Program p;
    p.impl_ = std::move(impl);
    return p;
}

std::size_t Program::components() const { return impl_->components.size(); }
std::size_t Program::dim() const { return impl_->dim; }
const std::string& Program::source() const { return impl_->source; }

Vector Program::eval(const Vector& x) const {
    if (x.size() != impl_->dim) throw DimensionError("field input dimension mismatch");
    Vector out(impl_->components.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = eval_node(*impl_->components[i], x);
    return out;
}

} // namespace cvf::expr
