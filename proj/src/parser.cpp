#include "crlab/parser.hpp"

#include <cctype>

namespace crlab {

bool VarSpace::contains(Variable v) const {
    switch (v.kind) {
        case VarKind::Z:
        case VarKind::ZBar: return v.index >= 1 && static_cast<int>(v.index) <= n_z;
        case VarKind::W:
        case VarKind::WBar: return v.index >= 1 && static_cast<int>(v.index) <= n_w;
        case VarKind::S: return v.index >= 1 && static_cast<int>(v.index) <= n_s;
        case VarKind::U: return allow_u;
        case VarKind::T: return allow_t;
        case VarKind::V: return false;
    }
    return false;
}

namespace {

class Parser {
public:
    Parser(const std::string& text, const VarSpace& space) : text_(text), space_(space) {}

    Poly run() {
        Poly p = expr();
        skip_ws();
        if (pos_ != text_.size()) fail("unexpected trailing input");
        return p;
    }

private:
    const std::string& text_;
    const VarSpace& space_;
    size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& what) const {
        throw parse_error(what + " at offset " + std::to_string(pos_) + " in \"" + text_ + "\"");
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool eat(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    Integer read_uint() {
        skip_ws();
        size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (pos_ == start) fail("expected a number");
        return Integer(text_.substr(start, pos_ - start));
    }

    Rational read_rational() {
        bool neg = eat('-');
        Integer num = read_uint();
        Integer den(1);
        // Only consume '/' when a digit follows: "3/(...)" is a division of
        // the literal 3 by a parenthesized factor, handled one level up.
        {
            size_t save = pos_;
            if (eat('/')) {
                if (std::isdigit(static_cast<unsigned char>(peek()))) {
                    den = read_uint();
                    if (den == 0) fail("zero denominator");
                } else {
                    pos_ = save;
                }
            }
        }
        Rational r(num, den);
        return neg ? Rational(-r) : r;
    }

    Poly expr() {
        bool neg = eat('-');
        Poly acc = term();
        if (neg) acc = -acc;
        for (;;) {
            if (eat('+'))
                acc += term();
            else if (eat('-'))
                acc -= term();
            else
                return acc;
        }
    }

    Poly term() {
        Poly acc = factor();
        for (;;) {
            if (eat('*')) {
                acc *= factor();
            } else if (eat('/')) {
                Poly d = factor();
                if (!d.is_constant()) fail("non-constant divisor");
                GaussianRational c = d.constant_value();
                if (c.is_zero()) fail("division by zero");
                acc = acc.scale(GaussianRational(1) / c);
            } else {
                return acc;
            }
        }
    }

    Poly factor() {
        Poly b = base();
        if (!eat('^')) return b;
        if (eat('-')) fail("negative exponent");
        if (eat('(')) {
            Rational r = read_rational();
            if (!eat(')')) fail("expected ')'");
            if (r < 0) fail("negative exponent");
            if (denominator(r) != 1) fail("non-integer exponent");
            return b.pow(numerator(r).template convert_to<unsigned>());
        }
        Integer e = read_uint();
        return b.pow(e.template convert_to<unsigned>());
    }

    Poly base() {
        char c = peek();
        if (c == '(') {
            eat('(');
            Poly p = expr();
            if (!eat(')')) fail("expected ')'");
            return p;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) return Poly::constant(read_rational());
        if (std::isalpha(static_cast<unsigned char>(c))) return named();
        fail("expected a variable, number, or '('");
    }

    Poly named() {
        skip_ws();
        size_t start = pos_;
        while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        std::string word = text_.substr(start, pos_ - start);
        if (word == "i") return Poly::constant(GaussianRational::i());
        if (word == "conj") {
            if (!eat('(')) fail("expected '(' after conj");
            Variable v = variable();
            if (!eat(')')) fail("expected ')'");
            return Poly::variable(conjugate(v));
        }
        pos_ = start;
        return Poly::variable(variable());
    }

    Variable variable() {
        skip_ws();
        size_t start = pos_;
        if (pos_ >= text_.size() || !std::isalpha(static_cast<unsigned char>(text_[pos_])))
            fail("expected a variable");
        char letter = text_[pos_++];
        size_t digit_start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        std::string digits = text_.substr(digit_start, pos_ - digit_start);
        Variable v;
        if (letter == 'u' && digits.empty())
            v = var_u();
        else if (letter == 't' && digits.empty())
            v = var_t();
        else if ((letter == 'z' || letter == 'w' || letter == 's') && !digits.empty()) {
            int idx = std::stoi(digits);
            v = (letter == 'z') ? var_z(idx) : (letter == 'w') ? var_w(idx) : var_s(idx);
        } else {
            pos_ = start;
            fail("unknown variable \"" + std::string(1, letter) + digits + "\"");
        }
        if (!space_.contains(v)) {
            pos_ = start;
            fail("unknown variable \"" + var_name(v) + "\" (outside the declared ranges)");
        }
        return v;
    }
};

}  // namespace

Poly parse_poly(const std::string& text, const VarSpace& space) {
    return Parser(text, space).run();
}

}  // namespace crlab
