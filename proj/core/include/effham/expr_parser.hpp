// expr_parser.hpp — Operator expressions for scenario files
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*        '/' requires a scalar divisor
//   unary   := '-' unary | '+' unary | primary
//   primary := number | name | name '(' expr ')' | '(' expr ')'
//
// Names resolve to a parameter, a constant (pi, e, I), a scalar function
// (cos, sin, sqrt, exp of a real scalar) or a ladder operator on a leg:
// a(k) adag(k) n(k) sp(k) sm(k) sz(k). `id` is the identity. Products are
// operator composition left to right; a scalar added to an operator is taken
// as a multiple of the identity.

#pragma once

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "effham/hilbert.hpp"

namespace effham {

struct ExprNode {
    enum class Kind { kNumber, kName, kCall, kNeg, kAdd, kSub, kMul, kDiv };

    Kind kind{Kind::kNumber};
    double number{0.0};
    std::string name;
    std::size_t offset{0};
    std::vector<std::unique_ptr<ExprNode>> children;
};

class Expression {
public:
    static Expression parse(std::string_view source);

    Operator evaluate(const SpacePtr& space, const std::map<std::string, Complex>& params) const;

    // Canonical, fully parenthesised text that re-parses to the same tree.
    std::string to_string() const;

    const ExprNode& root() const { return *root_; }

private:
    explicit Expression(std::shared_ptr<const ExprNode> root) : root_(std::move(root)) {}
    std::shared_ptr<const ExprNode> root_;
};

Operator parse_operator_expr(std::string_view source, const SpacePtr& space,
                             const std::map<std::string, Complex>& params);

} // namespace effham
