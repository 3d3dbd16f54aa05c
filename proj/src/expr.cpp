#include "hkf/expr.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>

#include "hkf/errors.hpp"

namespace hkf {

namespace {

constexpr std::array<std::string_view, 6> kFunctions = {"exp", "ln", "sin", "cos", "sqrt", "abs"};

ExprPtr make(ExprKind kind, ExprPtr lhs = nullptr, ExprPtr rhs = nullptr) {
    auto n = std::make_shared<ExprNode>();
    n->kind = kind;
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    return n;
}

class Parser {
  public:
    explicit Parser(std::string_view text) : text_(text) {}

    ExprPtr parse() {
        skip_space();
        if (pos_ == text_.size()) throw ParseError("empty expression", pos_);
        auto e = expr();
        skip_space();
        if (pos_ != text_.size()) throw ParseError("unexpected trailing input", pos_);
        return e;
    }

  private:
    void skip_space() {
        while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t' ||
                                       text_[pos_] == '\n' || text_[pos_] == '\r'))
            ++pos_;
    }

    // Accepts ASCII '-' and U+2212 (minus sign).
    bool consume_minus() {
        if (pos_ < text_.size() && text_[pos_] == '-') {
            ++pos_;
            return true;
        }
        if (text_.substr(pos_, 3) == "\xE2\x88\x92") {
            pos_ += 3;
            return true;
        }
        return false;
    }

    bool consume(char c) {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    ExprPtr expr() {
        auto lhs = term();
        for (;;) {
            skip_space();
            if (consume('+')) {
                lhs = make(ExprKind::add, lhs, term());
            } else if (consume_minus()) {
                lhs = make(ExprKind::subtract, lhs, term());
            } else {
                return lhs;
            }
        }
    }

    ExprPtr term() {
        auto lhs = factor();
        for (;;) {
            if (consume('*')) {
                lhs = make(ExprKind::multiply, lhs, factor());
            } else if (consume('/')) {
                lhs = make(ExprKind::divide, lhs, factor());
            } else {
                return lhs;
            }
        }
    }

    ExprPtr factor() {
        auto base = unary();
        if (consume('^')) return make(ExprKind::power, base, factor());
        return base;
    }

    ExprPtr unary() {
        skip_space();
        if (consume_minus()) return make(ExprKind::negate, base());
        return base();
    }

    ExprPtr base() {
        skip_space();
        if (pos_ >= text_.size()) throw ParseError("unexpected end of input", pos_);
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            auto e = expr();
            if (!consume(')')) throw ParseError("expected ')'", pos_);
            return e;
        }
        if ((c >= '0' && c <= '9') || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
        throw ParseError(std::string("unexpected character '") + c + "'", pos_);
    }

    ExprPtr number() {
        const std::size_t start = pos_;
        auto digits = [&] {
            while (pos_ < text_.size() && text_[pos_] >= '0' && text_[pos_] <= '9') ++pos_;
        };
        digits();
        if (pos_ < text_.size() && text_[pos_] == '.') {
            ++pos_;
            digits();
        }
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            std::size_t save = pos_++;
            if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
            if (pos_ < text_.size() && text_[pos_] >= '0' && text_[pos_] <= '9') {
                digits();
            } else {
                pos_ = save;  // 'e' not followed by an exponent
            }
        }
        double v = 0.0;
        const auto* first = text_.data() + start;
        const auto* last = text_.data() + pos_;
        const auto [ptr, ec] = std::from_chars(first, last, v);
        if (ec != std::errc() || ptr != last || !std::isfinite(v))
            throw ParseError("malformed number", start);
        auto n = std::make_shared<ExprNode>();
        n->kind = ExprKind::number;
        n->number = v;
        return n;
    }

    ExprPtr identifier() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                                       text_[pos_] == '_'))
            ++pos_;
        const std::string name(text_.substr(start, pos_ - start));
        if (name == "x") return make(ExprKind::var_x);
        if (name == "z") return make(ExprKind::var_z);
        bool known = false;
        for (auto f : kFunctions) known = known || f == name;
        if (!known) throw ParseError("unknown identifier '" + name + "'", start);
        if (!consume('(')) throw ParseError("expected '(' after " + name, pos_);
        auto arg = expr();
        if (!consume(')')) throw ParseError("expected ')'", pos_);
        auto n = std::make_shared<ExprNode>();
        n->kind = ExprKind::call;
        n->function = name;
        n->lhs = std::move(arg);
        return n;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

double eval_node(const ExprNode& n, double x, double z) {
    switch (n.kind) {
        case ExprKind::number: return n.number;
        case ExprKind::var_x: return x;
        case ExprKind::var_z: return z;
        case ExprKind::negate: return -eval_node(*n.lhs, x, z);
        case ExprKind::add: return eval_node(*n.lhs, x, z) + eval_node(*n.rhs, x, z);
        case ExprKind::subtract: return eval_node(*n.lhs, x, z) - eval_node(*n.rhs, x, z);
        case ExprKind::multiply: return eval_node(*n.lhs, x, z) * eval_node(*n.rhs, x, z);
        case ExprKind::divide: return eval_node(*n.lhs, x, z) / eval_node(*n.rhs, x, z);
        case ExprKind::power: return std::pow(eval_node(*n.lhs, x, z), eval_node(*n.rhs, x, z));
        case ExprKind::call: {
            const double v = eval_node(*n.lhs, x, z);
            if (n.function == "exp") return std::exp(v);
            if (n.function == "ln") return std::log(v);
            if (n.function == "sin") return std::sin(v);
            if (n.function == "cos") return std::cos(v);
            if (n.function == "sqrt") return std::sqrt(v);
            return std::fabs(v);
        }
    }
    return 0.0;
}

bool is_binary(ExprKind k) {
    return k == ExprKind::add || k == ExprKind::subtract || k == ExprKind::multiply ||
           k == ExprKind::divide || k == ExprKind::power;
}

void print_node(const ExprNode& n, std::string& out);

void print_operand(const ExprNode& n, std::string& out) {
    if (is_binary(n.kind)) {
        out += '(';
        print_node(n, out);
        out += ')';
    } else {
        print_node(n, out);
    }
}

void print_node(const ExprNode& n, std::string& out) {
    switch (n.kind) {
        case ExprKind::number: {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.17g", n.number);
            out += buf;
            return;
        }
        case ExprKind::var_x: out += 'x'; return;
        case ExprKind::var_z: out += 'z'; return;
        case ExprKind::negate:
            // The operand of a unary minus must be a base: wrap anything else.
            out += '-';
            if (n.lhs->kind == ExprKind::negate || is_binary(n.lhs->kind)) {
                out += '(';
                print_node(*n.lhs, out);
                out += ')';
            } else {
                print_node(*n.lhs, out);
            }
            return;
        case ExprKind::call:
            out += n.function;
            out += '(';
            print_node(*n.lhs, out);
            out += ')';
            return;
        default: break;
    }
    static constexpr char ops[] = {'+', '-', '*', '/', '^'};
    const char op = ops[static_cast<int>(n.kind) - static_cast<int>(ExprKind::add)];
    print_operand(*n.lhs, out);
    out += ' ';
    out += op;
    out += ' ';
    print_operand(*n.rhs, out);
}

}  // namespace

bool operator==(const ExprNode& a, const ExprNode& b) {
    if (a.kind != b.kind) return false;
    if (a.kind == ExprKind::number) return a.number == b.number;
    if (a.function != b.function) return false;
    auto same = [](const ExprPtr& p, const ExprPtr& q) {
        if (!p || !q) return !p && !q;
        return *p == *q;
    };
    return same(a.lhs, b.lhs) && same(a.rhs, b.rhs);
}

SourceExpr SourceExpr::parse(std::string_view text) { return SourceExpr(Parser(text).parse()); }

double SourceExpr::eval(double x, double z) const { return eval_node(*root_, x, z); }

std::string SourceExpr::to_string() const {
    std::string out;
    print_node(*root_, out);
    return out;
}

bool SourceExpr::is_zero_literal() const {
    return root_->kind == ExprKind::number && root_->number == 0.0;
}

}  // namespace hkf
