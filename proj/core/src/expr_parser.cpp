#include "effham/expr_parser.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <optional>
#include <variant>

#include "effham/errors.hpp"

namespace effham {

namespace {

using Node = ExprNode;
using NodePtr = std::unique_ptr<Node>;

NodePtr make_node(Node::Kind kind, std::size_t offset) {
    auto n = std::make_unique<Node>();
    n->kind = kind;
    n->offset = offset;
    return n;
}

class Parser {
public:
    explicit Parser(std::string_view src) : src_(src) {}

    NodePtr parse_all() {
        auto root = parse_expr();
        skip_ws();
        if (pos_ != src_.size()) fail("unexpected '" + std::string(1, src_[pos_]) + "'");
        return root;
    }

private:
    [[noreturn]] void fail(const std::string& what) const { throw ParseError("syntax error: " + what, pos_); }

    void skip_ws() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    NodePtr parse_expr() {
        auto lhs = parse_term();
        while (true) {
            skip_ws();
            const auto at = pos_;
            if (accept('+')) {
                lhs = binary(Node::Kind::kAdd, std::move(lhs), parse_term(), at);
            } else if (accept('-')) {
                lhs = binary(Node::Kind::kSub, std::move(lhs), parse_term(), at);
            } else {
                return lhs;
            }
        }
    }

    NodePtr parse_term() {
        auto lhs = parse_unary();
        while (true) {
            skip_ws();
            const auto at = pos_;
            if (accept('*')) {
                lhs = binary(Node::Kind::kMul, std::move(lhs), parse_unary(), at);
            } else if (accept('/')) {
                lhs = binary(Node::Kind::kDiv, std::move(lhs), parse_unary(), at);
            } else {
                return lhs;
            }
        }
    }

    NodePtr parse_unary() {
        skip_ws();
        const auto at = pos_;
        if (accept('-')) {
            auto n = make_node(Node::Kind::kNeg, at);
            n->children.push_back(parse_unary());
            return n;
        }
        if (accept('+')) return parse_unary();
        return parse_primary();
    }

    NodePtr parse_primary() {
        skip_ws();
        if (pos_ >= src_.size()) fail("unexpected end of expression");
        const auto at = pos_;
        const char c = src_[pos_];
        if (c == '(') {
            ++pos_;
            auto inner = parse_expr();
            if (!accept(')')) fail("expected ')'");
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t end = pos_;
            while (end < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[end])) || src_[end] == '_')) {
                ++end;
            }
            std::string name(src_.substr(pos_, end - pos_));
            pos_ = end;
            if (accept('(')) {
                auto n = make_node(Node::Kind::kCall, at);
                n->name = std::move(name);
                n->children.push_back(parse_expr());
                if (!accept(')')) fail("expected ')' after argument of " + n->name);
                return n;
            }
            auto n = make_node(Node::Kind::kName, at);
            n->name = std::move(name);
            return n;
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }

    NodePtr parse_number() {
        const auto at = pos_;
        std::size_t end = pos_;
        while (end < src_.size() && (std::isdigit(static_cast<unsigned char>(src_[end])) || src_[end] == '.')) ++end;
        if (end < src_.size() && (src_[end] == 'e' || src_[end] == 'E')) {
            std::size_t e = end + 1;
            if (e < src_.size() && (src_[e] == '+' || src_[e] == '-')) ++e;
            if (e < src_.size() && std::isdigit(static_cast<unsigned char>(src_[e]))) {
                while (e < src_.size() && std::isdigit(static_cast<unsigned char>(src_[e]))) ++e;
                end = e;
            }
        }
        double value = 0.0;
        const auto* first = src_.data() + pos_;
        const auto* last = src_.data() + end;
        const auto res = std::from_chars(first, last, value);
        if (res.ec != std::errc() || res.ptr != last) {
            throw ParseError("syntax error: malformed number", at);
        }
        pos_ = end;
        auto n = make_node(Node::Kind::kNumber, at);
        n->number = value;
        return n;
    }

    static NodePtr binary(Node::Kind kind, NodePtr lhs, NodePtr rhs, std::size_t at) {
        auto n = make_node(kind, at);
        n->children.push_back(std::move(lhs));
        n->children.push_back(std::move(rhs));
        return n;
    }

    std::string_view src_;
    std::size_t pos_{0};
};

using Value = std::variant<Complex, Operator>;

class Evaluator {
public:
    Evaluator(const SpacePtr& space, const std::map<std::string, Complex>& params)
        : space_(space), params_(params) {}

    Value eval(const Node& n) const {
        switch (n.kind) {
        case Node::Kind::kNumber: return Complex{n.number, 0.0};
        case Node::Kind::kName: return eval_name(n);
        case Node::Kind::kCall: return eval_call(n);
        case Node::Kind::kNeg: return negate(eval(*n.children[0]));
        case Node::Kind::kAdd: return add_values(eval(*n.children[0]), eval(*n.children[1]), 1.0);
        case Node::Kind::kSub: return add_values(eval(*n.children[0]), eval(*n.children[1]), -1.0);
        case Node::Kind::kMul: return mul_values(eval(*n.children[0]), eval(*n.children[1]));
        case Node::Kind::kDiv: {
            const auto rhs = eval(*n.children[1]);
            if (!std::holds_alternative<Complex>(rhs)) {
                throw ParseError("division by an operator is not supported", n.offset);
            }
            const auto d = std::get<Complex>(rhs);
            if (d == Complex{0.0, 0.0}) throw ParseError("division by zero", n.offset);
            return mul_values(eval(*n.children[0]), Complex{1.0, 0.0} / d);
        }
        }
        throw ParseError("internal: unknown node", n.offset);
    }

    Operator to_operator(const Value& v) const {
        if (const auto* op = std::get_if<Operator>(&v)) return *op;
        return std::get<Complex>(v) * Operator::identity(space_);
    }

private:
    Value eval_name(const Node& n) const {
        if (const auto it = params_.find(n.name); it != params_.end()) return it->second;
        if (n.name == "pi") return Complex{std::numbers::pi, 0.0};
        if (n.name == "e") return Complex{std::numbers::e, 0.0};
        if (n.name == "I") return Complex{0.0, 1.0};
        if (n.name == "id") return Operator::identity(space_);
        throw ParseError("unknown identifier '" + n.name + "'", n.offset);
    }

    Value eval_call(const Node& n) const {
        static const std::map<std::string, double (*)(double)> kScalarFns = {
            {"cos", [](double x) { return std::cos(x); }},
            {"sin", [](double x) { return std::sin(x); }},
            {"sqrt", [](double x) { return std::sqrt(x); }},
            {"exp", [](double x) { return std::exp(x); }},
        };
        if (const auto fn = kScalarFns.find(n.name); fn != kScalarFns.end()) {
            const auto arg = eval(*n.children[0]);
            const auto* z = std::get_if<Complex>(&arg);
            if (z == nullptr) throw ParseError(n.name + " expects a scalar argument", n.offset);
            if (z->imag() != 0.0) throw ParseError(n.name + " expects a real argument", n.offset);
            if (n.name == "sqrt" && z->real() < 0.0) throw ParseError("sqrt of a negative number", n.offset);
            return Complex{fn->second(z->real()), 0.0};
        }

        const auto leg = leg_argument(n);
        try {
            if (n.name == "a") return boson_op(space_, leg, BosonOp::kA);
            if (n.name == "adag") return boson_op(space_, leg, BosonOp::kAdag);
            if (n.name == "n") return boson_op(space_, leg, BosonOp::kN);
            if (n.name == "sp") return qubit_op(space_, leg, QubitOp::kSp);
            if (n.name == "sm") return qubit_op(space_, leg, QubitOp::kSm);
            if (n.name == "sz") return qubit_op(space_, leg, QubitOp::kSz);
        } catch (const InvalidArgument& err) {
            throw ParseError(std::string("leg/type mismatch: ") + err.what(), n.offset);
        }
        throw ParseError("unknown function '" + n.name + "'", n.offset);
    }

    std::size_t leg_argument(const Node& n) const {
        const auto arg = eval(*n.children[0]);
        const auto* z = std::get_if<Complex>(&arg);
        if (z == nullptr || z->imag() != 0.0 || z->real() < 0.0 || std::floor(z->real()) != z->real()) {
            throw ParseError(n.name + " expects a non-negative integer leg index", n.offset);
        }
        const auto leg = static_cast<std::size_t>(z->real());
        if (leg >= space_->num_factors()) {
            throw ParseError("leg " + std::to_string(leg) + " out of range for " + n.name, n.offset);
        }
        return leg;
    }

    static Value negate(const Value& v) {
        if (const auto* z = std::get_if<Complex>(&v)) return -*z;
        return -std::get<Operator>(v);
    }

    Value add_values(const Value& a, const Value& b, double sign) const {
        if (std::holds_alternative<Complex>(a) && std::holds_alternative<Complex>(b)) {
            return std::get<Complex>(a) + sign * std::get<Complex>(b);
        }
        return to_operator(a) + Complex{sign, 0.0} * to_operator(b);
    }

    static Value mul_values(const Value& a, const Value& b) {
        const auto* za = std::get_if<Complex>(&a);
        const auto* zb = std::get_if<Complex>(&b);
        if (za && zb) return *za * *zb;
        if (za) return *za * std::get<Operator>(b);
        if (zb) return std::get<Operator>(a) * *zb;
        return std::get<Operator>(a) * std::get<Operator>(b);
    }

    const SpacePtr& space_;
    const std::map<std::string, Complex>& params_;
};

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    std::string s(buf);
    // Keep the token a number on re-parse ("1e+20" is fine, "inf" is not representable).
    return s;
}

void print(const Node& n, std::string& out) {
    switch (n.kind) {
    case Node::Kind::kNumber: out += format_number(n.number); return;
    case Node::Kind::kName: out += n.name; return;
    case Node::Kind::kCall:
        out += n.name;
        out += '(';
        print(*n.children[0], out);
        out += ')';
        return;
    case Node::Kind::kNeg:
        out += "(-";
        print(*n.children[0], out);
        out += ')';
        return;
    default: break;
    }
    const char* op = n.kind == Node::Kind::kAdd   ? " + "
                     : n.kind == Node::Kind::kSub ? " - "
                     : n.kind == Node::Kind::kMul ? "*"
                                                  : "/";
    out += '(';
    print(*n.children[0], out);
    out += op;
    print(*n.children[1], out);
    out += ')';
}

} // namespace

Expression Expression::parse(std::string_view source) {
    Parser parser(source);
    return Expression(std::shared_ptr<const ExprNode>(parser.parse_all()));
}

Operator Expression::evaluate(const SpacePtr& space, const std::map<std::string, Complex>& params) const {
    Evaluator ev(space, params);
    return ev.to_operator(ev.eval(*root_));
}

std::string Expression::to_string() const {
    std::string out;
    print(*root_, out);
    return out;
}

Operator parse_operator_expr(std::string_view source, const SpacePtr& space,
                             const std::map<std::string, Complex>& params) {
    return Expression::parse(source).evaluate(space, params);
}

} // namespace effham
