#include "crlab/poly.hpp"

#include <algorithm>
#include <sstream>

namespace crlab {

std::string var_name(Variable v) {
    switch (v.kind) {
        case VarKind::Z: return "z" + std::to_string(v.index);
        case VarKind::ZBar: return "conj(z" + std::to_string(v.index) + ")";
        case VarKind::W: return "w" + std::to_string(v.index);
        case VarKind::WBar: return "conj(w" + std::to_string(v.index) + ")";
        case VarKind::U: return "u";
        case VarKind::V: return "v";
        case VarKind::S: return "s" + std::to_string(v.index);
        case VarKind::T: return "t";
    }
    return "?";
}

bool monomial_before(const Monomial& a, const Monomial& b) {
    unsigned da = monomial_degree(a), db = monomial_degree(b);
    if (da != db) return da > db;
    // Entries are sorted by variable; the first position where the exponents
    // differ decides. A missing variable counts as exponent zero.
    size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i].first == b[j].first) {
            if (a[i].second != b[j].second) return a[i].second > b[j].second;
            ++i;
            ++j;
        } else if (a[i].first < b[j].first) {
            return true;  // a has positive power on an earlier variable
        } else {
            return false;
        }
    }
    return i < a.size();
}

namespace {

std::string monomial_str(const Monomial& m) {
    std::string out;
    for (const auto& [v, e] : m) {
        if (!out.empty()) out += "*";
        out += var_name(v);
        if (e > 1) out += "^" + std::to_string(e);
    }
    return out;
}

// Renders one coefficient as a parser-compatible prefix, with sign pulled out.
struct RenderedCoeff {
    bool negative = false;
    std::string text;  // empty means coefficient 1 (after sign extraction)
};

RenderedCoeff render_coeff(const GaussianRational& c) {
    RenderedCoeff out;
    GaussianRational v = c;
    if (v.re() < 0 || (v.re() == 0 && v.im() < 0)) {
        out.negative = true;
        v = -v;
    }
    if (v.im() == 0) {
        if (v.re() != 1) out.text = to_string(v.re());
    } else if (v.re() == 0) {
        out.text = (v.im() == 1) ? "i" : to_string(v.im()) + "*i";
    } else {
        out.text = "(" + v.str() + ")";
    }
    return out;
}

}  // namespace

std::string to_string(const Poly& p) {
    if (p.is_zero()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [m, c] : p.terms()) {
        RenderedCoeff rc = render_coeff(c);
        if (first) {
            if (rc.negative) out += "-";
        } else {
            out += rc.negative ? " - " : " + ";
        }
        std::string mono = monomial_str(m);
        if (mono.empty())
            out += rc.text.empty() ? "1" : rc.text;
        else if (rc.text.empty())
            out += mono;
        else
            out += rc.text + "*" + mono;
        first = false;
    }
    return out;
}

Poly divide_exact(const Poly& num, const Poly& den) {
    if (den.is_zero()) throw internal_error("exact division by zero polynomial");
    Poly rem = num;
    Poly quot;
    const auto& lead = *den.terms().begin();
    while (!rem.is_zero()) {
        const auto& rlead = *rem.terms().begin();
        // Divide leading monomials; failure means the division is not exact.
        Monomial q;
        size_t i = 0, j = 0;
        bool ok = true;
        const Monomial& rm = rlead.first;
        const Monomial& dm = lead.first;
        while (j < dm.size()) {
            if (i >= rm.size()) {
                ok = false;
                break;
            }
            if (rm[i].first == dm[j].first) {
                if (rm[i].second < dm[j].second) {
                    ok = false;
                    break;
                }
                if (rm[i].second > dm[j].second) q.emplace_back(rm[i].first, rm[i].second - dm[j].second);
                ++i;
                ++j;
            } else if (rm[i].first < dm[j].first) {
                q.push_back(rm[i++]);
            } else {
                ok = false;
                break;
            }
        }
        if (!ok) throw internal_error("polynomial division is not exact");
        for (; i < rm.size(); ++i) q.push_back(rm[i]);
        GaussianRational qc = rlead.second / lead.second;
        Poly qterm;
        qterm.add_term(q, qc);
        quot += qterm;
        rem -= qterm * den;
    }
    return quot;
}

CPoly to_cpoly(const Poly& p) {
    CPoly out;
    for (const auto& [m, c] : p.terms()) out.add_term(m, to_complex(c));
    return out;
}

}  // namespace crlab
