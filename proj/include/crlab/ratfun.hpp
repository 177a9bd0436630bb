#pragma once

#include "crlab/point.hpp"
#include "crlab/poly.hpp"

namespace crlab {

// Ratio of polynomials. No polynomial gcd is attempted (the toolkit has no
// factorization); normalization only strips a scalar so the denominator's
// leading coefficient is 1, and recognizes num == den. Equality is decided by
// cross-multiplication, which is exact regardless of common factors.
class RatFun {
public:
    RatFun() : num_(), den_(Poly::constant(GaussianRational(1))) {}
    RatFun(Poly num) : num_(std::move(num)), den_(Poly::constant(GaussianRational(1))) {}
    RatFun(Poly num, Poly den) : num_(std::move(num)), den_(std::move(den)) {
        if (den_.is_zero()) throw input_error("rational expression with zero denominator");
        normalize();
    }

    static RatFun constant(GaussianRational c) { return RatFun(Poly::constant(std::move(c))); }

    const Poly& num() const { return num_; }
    const Poly& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }
    bool is_polynomial() const {
        return den_ == Poly::constant(GaussianRational(1));
    }

    RatFun operator-() const {
        RatFun out = *this;
        out.num_ = -out.num_;
        return out;
    }

    friend RatFun operator+(const RatFun& a, const RatFun& b) {
        if (a.den_ == b.den_) return RatFun(a.num_ + b.num_, a.den_);
        return RatFun(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend RatFun operator-(const RatFun& a, const RatFun& b) { return a + (-b); }
    friend RatFun operator*(const RatFun& a, const RatFun& b) {
        return RatFun(a.num_ * b.num_, a.den_ * b.den_);
    }
    friend RatFun operator/(const RatFun& a, const RatFun& b) {
        if (b.num_.is_zero()) throw input_error("division by zero rational expression");
        return RatFun(a.num_ * b.den_, a.den_ * b.num_);
    }
    RatFun& operator+=(const RatFun& o) { return *this = *this + o; }
    RatFun& operator-=(const RatFun& o) { return *this = *this - o; }
    RatFun& operator*=(const RatFun& o) { return *this = *this * o; }

    friend bool operator==(const RatFun& a, const RatFun& b) {
        return a.num_ * b.den_ == b.num_ * a.den_;
    }
    friend bool operator!=(const RatFun& a, const RatFun& b) { return !(a == b); }

    RatFun derivative(Variable v) const {
        Poly dn = num_.derivative(v), dd = den_.derivative(v);
        if (dd.is_zero()) return RatFun(dn, den_);
        return RatFun(dn * den_ - num_ * dd, den_ * den_);
    }

    RatFun conj() const { return RatFun(num_.conj(), den_.conj()); }

    RatFun substitute(const std::map<Variable, Poly>& repl) const {
        return RatFun(num_.substitute(repl), den_.substitute(repl));
    }

    GaussianRational evaluate(const PointAssignment& p) const {
        GaussianRational d = p.evaluate(den_);
        if (d.is_zero()) throw input_error("rational expression undefined at the given point");
        return p.evaluate(num_) / d;
    }

private:
    void normalize() {
        if (num_.is_zero()) {
            den_ = Poly::constant(GaussianRational(1));
            return;
        }
        if (num_ == den_) {
            num_ = Poly::constant(GaussianRational(1));
            den_ = num_;
            return;
        }
        GaussianRational lead = den_.terms().begin()->second;
        GaussianRational inv = GaussianRational(1) / lead;
        num_ = num_.scale(inv);
        den_ = den_.scale(inv);
    }

    Poly num_;
    Poly den_;
};

}  // namespace crlab
