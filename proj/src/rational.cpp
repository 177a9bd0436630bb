#include "crlab/rational.hpp"

#include <cmath>

namespace crlab {

Rational parse_rational(const std::string& s) {
    if (s.empty()) throw parse_error("empty rational literal");
    size_t pos = 0;
    bool neg = false;
    if (s[pos] == '-') {
        neg = true;
        ++pos;
    }
    auto digits = [&](size_t start) {
        size_t end = start;
        while (end < s.size() && std::isdigit(static_cast<unsigned char>(s[end]))) ++end;
        if (end == start) throw parse_error("bad rational literal: " + s);
        return end;
    };
    size_t num_end = digits(pos);
    Integer num(s.substr(pos, num_end - pos));
    Integer den(1);
    if (num_end < s.size()) {
        if (s[num_end] != '/') throw parse_error("bad rational literal: " + s);
        size_t den_end = digits(num_end + 1);
        if (den_end != s.size()) throw parse_error("bad rational literal: " + s);
        den = Integer(s.substr(num_end + 1, den_end - num_end - 1));
        if (den == 0) throw parse_error("zero denominator in rational literal: " + s);
    }
    Rational r(num, den);
    return neg ? Rational(-r) : r;
}

Rational rational_from_double(double x) {
    if (!std::isfinite(x)) throw input_error("non-finite value cannot be made exact");
    if (x == 0.0) return Rational(0);
    int exp = 0;
    double mant = std::frexp(x, &exp);  // x = mant * 2^exp, |mant| in [1/2, 1)
    // 53 mantissa bits make mant * 2^53 integral.
    Integer m(static_cast<long long>(std::ldexp(mant, 53)));
    exp -= 53;
    Rational r(m);
    if (exp > 0)
        r *= Rational(Integer(1) << exp);
    else if (exp < 0)
        r /= Rational(Integer(1) << (-exp));
    return r;
}

GaussianRational& GaussianRational::operator/=(const GaussianRational& o) {
    Rational n2 = o.norm2();
    if (n2 == 0) throw input_error("division by zero");
    Rational r = (re_ * o.re_ + im_ * o.im_) / n2;
    im_ = (im_ * o.re_ - re_ * o.im_) / n2;
    re_ = std::move(r);
    return *this;
}

std::string GaussianRational::str() const {
    if (im_ == 0) return to_string(re_);
    std::string im_part;
    if (im_ == 1)
        im_part = "i";
    else if (im_ == -1)
        im_part = "-i";
    else
        im_part = to_string(im_) + "*i";
    if (re_ == 0) return im_part;
    if (im_ > 0) return to_string(re_) + " + " + im_part;
    return to_string(re_) + " - " + (im_ == -1 ? std::string("i") : to_string(-im_) + "*i");
}

std::complex<double> to_complex(const GaussianRational& z) {
    return {to_double(z.re()), to_double(z.im())};
}

}  // namespace crlab
