#pragma once

#include <map>

#include "crlab/poly.hpp"

namespace crlab {

// Exact coordinate assignment. Values are stored for holomorphic and real
// variables only; conjugate variables always evaluate to the conjugate of
// their partner, so an assignment cannot be conjugate-inconsistent.
class PointAssignment {
public:
    void set(Variable v, GaussianRational value) {
        if (is_antiholomorphic(v.kind))
            throw input_error("assign the holomorphic variable, not its conjugate: " + var_name(v));
        if (is_real_kind(v.kind) && !value.is_real())
            throw input_error("real variable " + var_name(v) + " assigned a non-real value");
        vals_[v] = std::move(value);
    }

    bool has(Variable v) const {
        return vals_.count(is_antiholomorphic(v.kind) ? conjugate(v) : v) > 0;
    }

    GaussianRational value(Variable v) const {
        Variable key = is_antiholomorphic(v.kind) ? conjugate(v) : v;
        auto it = vals_.find(key);
        if (it == vals_.end()) throw input_error("unassigned variable " + var_name(v));
        return is_antiholomorphic(v.kind) ? it->second.conj() : it->second;
    }

    GaussianRational operator()(Variable v) const { return value(v); }

    GaussianRational evaluate(const Poly& p) const {
        return p.evaluate([this](Variable v) { return value(v); });
    }

    const std::map<Variable, GaussianRational>& stored() const { return vals_; }

private:
    std::map<Variable, GaussianRational> vals_;
};

}  // namespace crlab
