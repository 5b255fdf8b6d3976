#include "toruspdo/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <utility>

#include "toruspdo/errors.hpp"

namespace toruspdo {

struct ExprNode {
    enum class Op {
        Num, VarX, VarK, ImagUnit, JapK,       // leaves; JapK is <k>
        Add, Sub, Mul, Div, Pow,               // binary
        Neg, Exp, Sin, Cos, Abs,               // unary
    };
    Op op;
    double num = 0.0;
    std::unique_ptr<ExprNode> a, b;

    explicit ExprNode(Op o) : op(o) {}
};

namespace {

using Node = std::unique_ptr<ExprNode>;

Node leaf(ExprNode::Op op) { return std::make_unique<ExprNode>(op); }

Node unary(ExprNode::Op op, Node a) {
    auto n = std::make_unique<ExprNode>(op);
    n->a = std::move(a);
    return n;
}

Node binary(ExprNode::Op op, Node a, Node b) {
    auto n = std::make_unique<ExprNode>(op);
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
}

class Parser {
public:
    explicit Parser(const std::string& s) : s_(s) {}

    Node run() {
        Node e = expr();
        skip_ws();
        if (pos_ != s_.size())
            fail("unexpected trailing input");
        return e;
    }

private:
    const std::string& s_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& why) const {
        throw ParseError(why + " at position " + std::to_string(pos_) +
                         " in \"" + s_ + "\"");
    }

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    char peek() {
        skip_ws();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }

    bool consume(char c) {
        if (peek() == c) { ++pos_; return true; }
        return false;
    }

    Node expr() {
        Node lhs = term();
        for (;;) {
            if (consume('+'))      lhs = binary(ExprNode::Op::Add, std::move(lhs), term());
            else if (consume('-')) lhs = binary(ExprNode::Op::Sub, std::move(lhs), term());
            else return lhs;
        }
    }

    Node term() {
        Node lhs = prefixed();
        for (;;) {
            if (consume('*'))      lhs = binary(ExprNode::Op::Mul, std::move(lhs), prefixed());
            else if (consume('/')) lhs = binary(ExprNode::Op::Div, std::move(lhs), prefixed());
            else return lhs;
        }
    }

    Node prefixed() {
        if (consume('-')) return unary(ExprNode::Op::Neg, prefixed());
        if (consume('+')) return prefixed();
        return power();
    }

    Node power() {
        Node base = atom();
        if (consume('^'))
            return binary(ExprNode::Op::Pow, std::move(base), prefixed());
        return base;
    }

    Node atom() {
        const char c = peek();
        if (c == '\0') fail("unexpected end of expression");

        if (c == '(') {
            ++pos_;
            Node e = expr();
            if (!consume(')')) fail("expected ')'");
            return e;
        }
        if (c == '<') {
            ++pos_;
            if (!consume('k')) fail("expected 'k' after '<'");
            if (!consume('>')) fail("expected '>' after '<k'");
            return leaf(ExprNode::Op::JapK);
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.')
            return number();
        if (std::isalpha(static_cast<unsigned char>(c)))
            return identifier();
        fail(std::string("unexpected character '") + c + "'");
    }

    Node number() {
        const char* begin = s_.c_str() + pos_;
        char* end = nullptr;
        const double v = std::strtod(begin, &end);
        if (end == begin) fail("malformed number");
        pos_ += static_cast<std::size_t>(end - begin);
        auto n = leaf(ExprNode::Op::Num);
        n->num = v;
        return n;
    }

    Node identifier() {
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        const std::string name = s_.substr(start, pos_ - start);

        if (name == "x") return leaf(ExprNode::Op::VarX);
        if (name == "k") return leaf(ExprNode::Op::VarK);
        if (name == "i") return leaf(ExprNode::Op::ImagUnit);

        ExprNode::Op op;
        if (name == "exp")      op = ExprNode::Op::Exp;
        else if (name == "sin") op = ExprNode::Op::Sin;
        else if (name == "cos") op = ExprNode::Op::Cos;
        else if (name == "abs") op = ExprNode::Op::Abs;
        else { pos_ = start; fail("unknown identifier \"" + name + "\""); }

        if (!consume('(')) fail("expected '(' after \"" + name + "\"");
        Node arg = expr();
        if (!consume(')')) fail("expected ')'");
        return unary(op, std::move(arg));
    }
};

// Integer exponents use repeated multiplication so that k^2 and <k>^-1 come
// out exact (up to one rounding per multiply) instead of exp(log) noise.
cplx pow_eval(cplx base, cplx e) {
    if (e.imag() == 0.0) {
        const double er = e.real();
        const double n = std::nearbyint(er);
        if (er == n && std::abs(n) <= 64.0) {
            long long m = static_cast<long long>(n);
            const bool inv = m < 0;
            if (inv) m = -m;
            cplx acc{1.0, 0.0};
            cplx b = base;
            while (m > 0) {
                if (m & 1) acc *= b;
                b *= b;
                m >>= 1;
            }
            return inv ? cplx{1.0, 0.0} / acc : acc;
        }
    }
    return std::pow(base, e);
}

cplx eval_node(const ExprNode& n, double x, double k) {
    using Op = ExprNode::Op;
    switch (n.op) {
        case Op::Num:      return {n.num, 0.0};
        case Op::VarX:     return {x, 0.0};
        case Op::VarK:     return {k, 0.0};
        case Op::ImagUnit: return {0.0, 1.0};
        case Op::JapK:     return {std::sqrt(1.0 + k * k), 0.0};
        case Op::Add:      return eval_node(*n.a, x, k) + eval_node(*n.b, x, k);
        case Op::Sub:      return eval_node(*n.a, x, k) - eval_node(*n.b, x, k);
        case Op::Mul:      return eval_node(*n.a, x, k) * eval_node(*n.b, x, k);
        case Op::Div:      return eval_node(*n.a, x, k) / eval_node(*n.b, x, k);
        case Op::Pow:      return pow_eval(eval_node(*n.a, x, k), eval_node(*n.b, x, k));
        case Op::Neg:      return -eval_node(*n.a, x, k);
        case Op::Exp:      return std::exp(eval_node(*n.a, x, k));
        case Op::Sin:      return std::sin(eval_node(*n.a, x, k));
        case Op::Cos:      return std::cos(eval_node(*n.a, x, k));
        case Op::Abs:      return {std::abs(eval_node(*n.a, x, k)), 0.0};
    }
    return {};
}

bool node_uses_x(const ExprNode& n) {
    if (n.op == ExprNode::Op::VarX) return true;
    if (n.a && node_uses_x(*n.a)) return true;
    if (n.b && node_uses_x(*n.b)) return true;
    return false;
}

} // namespace

Expr Expr::parse(const std::string& text) {
    Parser p(text);
    Expr e;
    e.root_ = std::shared_ptr<const ExprNode>(p.run().release());
    e.text_ = text;
    return e;
}

cplx Expr::eval(double x, double k) const { return eval_node(*root_, x, k); }

bool Expr::depends_on_x() const { return node_uses_x(*root_); }

} // namespace toruspdo
