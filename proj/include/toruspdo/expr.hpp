#pragma once

#include <memory>
#include <string>

#include "toruspdo/kernels.hpp"

namespace toruspdo {

struct ExprNode;

// Parsed closed-form symbol expression in the variables x (point on the
// circle) and k (integer frequency). Supported: numbers, i, <k> for
// (1+k^2)^(1/2), + - * / ^, exp, sin, cos, abs, parentheses.
class Expr {
public:
    static Expr parse(const std::string& text); // throws ParseError

    cplx eval(double x, double k) const;
    bool depends_on_x() const;
    const std::string& text() const { return text_; }

private:
    std::shared_ptr<const ExprNode> root_;
    std::string text_;
};

} // namespace toruspdo
