#pragma once

#include <complex>
#include <map>
#include <set>
#include <vector>

#include "crlab/rational.hpp"
#include "crlab/variable.hpp"

namespace crlab {

// Sorted (variable, exponent) pairs with positive exponents.
using Monomial = std::vector<std::pair<Variable, unsigned>>;

inline unsigned monomial_degree(const Monomial& m) {
    unsigned d = 0;
    for (const auto& [v, e] : m) d += e;
    return d;
}

// Graded-lexicographic order: higher total degree first, ties broken by the
// variable order (a power of an earlier variable outranks later ones).
// Returns true when a ranks strictly before b.
bool monomial_before(const Monomial& a, const Monomial& b);

struct MonomialBefore {
    bool operator()(const Monomial& a, const Monomial& b) const { return monomial_before(a, b); }
};

// Coefficient adapters shared by the exact and floating instantiations.
inline bool coeff_is_zero(const GaussianRational& c) { return c.is_zero(); }
inline bool coeff_is_zero(const std::complex<double>& c) { return c.real() == 0.0 && c.imag() == 0.0; }
inline GaussianRational coeff_conj(const GaussianRational& c) { return c.conj(); }
inline std::complex<double> coeff_conj(const std::complex<double>& c) { return std::conj(c); }

template <class C>
C coeff_from_int(long long n);
template <>
inline GaussianRational coeff_from_int<GaussianRational>(long long n) {
    return GaussianRational(Rational(n));
}
template <>
inline std::complex<double> coeff_from_int<std::complex<double>>(long long n) {
    return {static_cast<double>(n), 0.0};
}

template <class C>
class BasicPoly {
public:
    using Coeff = C;
    using TermMap = std::map<Monomial, C, MonomialBefore>;

    BasicPoly() = default;

    static BasicPoly constant(C c) {
        BasicPoly p;
        if (!coeff_is_zero(c)) p.terms_.emplace(Monomial{}, std::move(c));
        return p;
    }
    static BasicPoly variable(Variable v) {
        BasicPoly p;
        p.terms_.emplace(Monomial{{v, 1u}}, coeff_from_int<C>(1));
        return p;
    }

    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const {
        return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty());
    }
    C constant_value() const {
        if (terms_.empty()) return coeff_from_int<C>(0);
        auto it = terms_.find(Monomial{});
        return it == terms_.end() ? coeff_from_int<C>(0) : it->second;
    }

    const TermMap& terms() const { return terms_; }

    unsigned total_degree() const {
        return terms_.empty() ? 0u : monomial_degree(terms_.begin()->first);
    }

    unsigned degree_in(Variable v) const {
        unsigned d = 0;
        for (const auto& [m, c] : terms_)
            for (const auto& [mv, e] : m)
                if (mv == v && e > d) d = e;
        return d;
    }

    std::set<Variable> variables() const {
        std::set<Variable> out;
        for (const auto& [m, c] : terms_)
            for (const auto& [v, e] : m) out.insert(v);
        return out;
    }

    void add_term(const Monomial& m, const C& c) {
        if (coeff_is_zero(c)) return;
        auto [it, inserted] = terms_.emplace(m, c);
        if (!inserted) {
            it->second += c;
            if (coeff_is_zero(it->second)) terms_.erase(it);
        }
    }

    BasicPoly operator-() const {
        BasicPoly out = *this;
        for (auto& [m, c] : out.terms_) c = -c;
        return out;
    }
    BasicPoly& operator+=(const BasicPoly& o) {
        for (const auto& [m, c] : o.terms_) add_term(m, c);
        return *this;
    }
    BasicPoly& operator-=(const BasicPoly& o) {
        for (const auto& [m, c] : o.terms_) add_term(m, -c);
        return *this;
    }
    friend BasicPoly operator+(BasicPoly a, const BasicPoly& b) { return a += b; }
    friend BasicPoly operator-(BasicPoly a, const BasicPoly& b) { return a -= b; }

    friend BasicPoly operator*(const BasicPoly& a, const BasicPoly& b) {
        BasicPoly out;
        for (const auto& [ma, ca] : a.terms_)
            for (const auto& [mb, cb] : b.terms_) out.add_term(merge_monomials(ma, mb), ca * cb);
        return out;
    }
    BasicPoly& operator*=(const BasicPoly& o) { return *this = *this * o; }

    BasicPoly scale(const C& c) const {
        BasicPoly out;
        if (coeff_is_zero(c)) return out;
        out.terms_ = terms_;
        for (auto& [m, cc] : out.terms_) cc *= c;
        return out;
    }

    BasicPoly pow(unsigned k) const {
        BasicPoly out = constant(coeff_from_int<C>(1));
        BasicPoly base = *this;
        while (k) {
            if (k & 1u) out *= base;
            base = (k >>= 1u) ? base * base : base;
        }
        return out;
    }

    // Formal partial derivative; for Z/ZBar variables this is the Wirtinger
    // derivative since the ring treats z and conj(z) as independent.
    BasicPoly derivative(Variable v) const {
        BasicPoly out;
        for (const auto& [m, c] : terms_) {
            for (size_t k = 0; k < m.size(); ++k) {
                if (m[k].first != v) continue;
                Monomial dm = m;
                C dc = c * coeff_from_int<C>(m[k].second);
                if (dm[k].second == 1)
                    dm.erase(dm.begin() + static_cast<long>(k));
                else
                    --dm[k].second;
                out.add_term(dm, dc);
                break;
            }
        }
        return out;
    }

    BasicPoly conj() const {
        BasicPoly out;
        for (const auto& [m, c] : terms_) {
            Monomial cm;
            cm.reserve(m.size());
            for (const auto& [v, e] : m) cm.emplace_back(conjugate(v), e);
            std::sort(cm.begin(), cm.end());
            out.add_term(cm, coeff_conj(c));
        }
        return out;
    }

    template <class ValueOf>
    C evaluate(ValueOf&& value_of) const {
        C acc = coeff_from_int<C>(0);
        for (const auto& [m, c] : terms_) {
            C term = c;
            for (const auto& [v, e] : m) {
                C val = value_of(v);
                for (unsigned k = 0; k < e; ++k) term *= val;
            }
            acc += term;
        }
        return acc;
    }

    // Replaces the listed variables by polynomials; all others are untouched.
    BasicPoly substitute(const std::map<Variable, BasicPoly>& repl) const {
        BasicPoly out;
        for (const auto& [m, c] : terms_) {
            BasicPoly term = constant(c);
            Monomial keep;
            for (const auto& [v, e] : m) {
                auto it = repl.find(v);
                if (it == repl.end())
                    keep.emplace_back(v, e);
                else
                    term *= it->second.pow(e);
            }
            BasicPoly kept;
            kept.terms_.emplace(keep, coeff_from_int<C>(1));
            out += term * kept;
        }
        return out;
    }

    friend bool operator==(const BasicPoly& a, const BasicPoly& b) { return a.terms_ == b.terms_; }
    friend bool operator!=(const BasicPoly& a, const BasicPoly& b) { return !(a == b); }

    static Monomial merge_monomials(const Monomial& a, const Monomial& b) {
        Monomial out;
        out.reserve(a.size() + b.size());
        size_t i = 0, j = 0;
        while (i < a.size() && j < b.size()) {
            if (a[i].first == b[j].first) {
                out.emplace_back(a[i].first, a[i].second + b[j].second);
                ++i;
                ++j;
            } else if (a[i].first < b[j].first) {
                out.push_back(a[i++]);
            } else {
                out.push_back(b[j++]);
            }
        }
        for (; i < a.size(); ++i) out.push_back(a[i]);
        for (; j < b.size(); ++j) out.push_back(b[j]);
        return out;
    }

private:
    TermMap terms_;
};

using Poly = BasicPoly<GaussianRational>;
using CPoly = BasicPoly<std::complex<double>>;

// Canonical printing of exact polynomials; parse_poly(str(p)) == p.
std::string to_string(const Poly& p);

// True division in the polynomial ring; throws internal_error when the
// quotient is not a polynomial. Needed by fraction-free elimination, whose
// intermediate divisions are exact by construction.
Poly divide_exact(const Poly& num, const Poly& den);

// Real-valued means invariant under conjugation.
inline bool is_real_valued(const Poly& p) { return p.conj() == p; }

CPoly to_cpoly(const Poly& p);

}  // namespace crlab
