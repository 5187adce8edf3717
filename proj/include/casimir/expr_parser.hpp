#pragma once

#include <cctype>
#include <optional>
#include <string>
#include <utility>

#include "errors.hpp"
#include "rational.hpp"

namespace casimir {

// Recursive-descent parser for sums of products:
//   expr   := [+|-] term {(+|-) term}
//   term   := factor {(*|/) factor}        division only by constants
//   factor := atom [^ int]
//   atom   := number | name [^[copy]] | ( expr )
// Products keep their written order; Ops decides what multiplication means.
template <class Ops>
class ExprParser {
public:
    using Value = typename Ops::Value;

    ExprParser(const std::string& text, Ops& ops) : s_(text), ops_(ops) {}

    Value parse() {
        Value v = expr();
        skip();
        if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return v;
    }

private:
    const std::string& s_;
    Ops& ops_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError("expression parse error at " + std::to_string(pos_) + ": " + msg + " in \"" + s_ + "\"");
    }
    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool eat(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    char peek() {
        skip();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }

    Value expr() {
        Value v = signed_term();
        for (;;) {
            if (eat('+'))
                v = ops_.add(v, signed_term());
            else if (eat('-'))
                v = ops_.add(v, ops_.scale(signed_term(), Rational(-1)));
            else
                break;
        }
        return v;
    }

    Value signed_term() {
        bool neg = false;
        for (;;) {
            if (eat('-'))
                neg = !neg;
            else if (!eat('+'))
                break;
        }
        Value v = term();
        return neg ? ops_.scale(v, Rational(-1)) : v;
    }

    Value term() {
        Value v = factor();
        for (;;) {
            if (eat('*')) {
                v = ops_.mul(v, factor());
            } else if (eat('/')) {
                Value d = factor();
                std::optional<Rational> c = ops_.as_constant(d);
                if (!c || c->is_zero()) fail("division by a non-constant or zero");
                v = ops_.scale(v, c->inverse());
            } else {
                break;
            }
        }
        return v;
    }

    int integer() {
        skip();
        bool neg = false;
        if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) {
            neg = s_[pos_] == '-';
            ++pos_;
        }
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (start == pos_) fail("expected integer");
        int v = std::stoi(s_.substr(start, pos_ - start));
        return neg ? -v : v;
    }

    Value factor() {
        Value v = atom();
        skip();
        if (pos_ < s_.size() && s_[pos_] == '^') {
            ++pos_;
            int e;
            if (eat('(')) {
                e = integer();
                if (!eat(')')) fail("expected ')'");
            } else {
                e = integer();
            }
            v = ops_.pow(v, e);
        }
        return v;
    }

    Value atom() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end");
        char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            Value v = expr();
            if (!eat(')')) fail("expected ')'");
            return v;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            return ops_.number(Rational(s_.substr(start, pos_ - start)));
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
            std::string name = s_.substr(start, pos_ - start);
            int copy = 0;
            if (pos_ + 1 < s_.size() && s_[pos_] == '^' && s_[pos_ + 1] == '[') {
                pos_ += 2;
                copy = integer();
                if (!eat(']')) fail("expected ']'");
            }
            return ops_.symbol(name, copy);
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }
};

template <class Ops>
typename Ops::Value parse_expression(const std::string& text, Ops& ops) {
    return ExprParser<Ops>(text, ops).parse();
}

}  // namespace casimir
