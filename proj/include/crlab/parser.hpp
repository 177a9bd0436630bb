#pragma once

#include <string>

#include "crlab/poly.hpp"

namespace crlab {

// Declares which variables a polynomial may mention. Indices are 1-based and
// run up to the stored counts; u and t are individually switchable.
struct VarSpace {
    int n_z = 0;
    int n_w = 0;
    int n_s = 0;
    bool allow_u = false;
    bool allow_t = false;

    static VarSpace source(int n_z, int n_s = 0, bool allow_u = true, bool allow_t = false) {
        return {n_z, 0, n_s, allow_u, allow_t};
    }
    static VarSpace target(int n_w) { return {0, n_w, 0, false, false}; }
    static VarSpace mixed(int n_z, int n_w, int n_s = 0, bool allow_u = true, bool allow_t = false) {
        return {n_z, n_w, n_s, allow_u, allow_t};
    }

    bool contains(Variable v) const;
};

// Recursive-descent parser for the expression grammar
//   expr   := ["-"] term (("+"|"-") term)*
//   term   := factor (("*"|"/") factor)*
//   factor := base ("^" exponent)?
//   base   := var | "conj(" var ")" | "i" | rational | "(" expr ")"
// Division requires a nonzero constant divisor, and exponents must be
// nonnegative integers (a parenthesized rational is accepted so that inputs
// like z1^(1/2) fail with a specific message rather than a generic one).
Poly parse_poly(const std::string& text, const VarSpace& space);

}  // namespace crlab
