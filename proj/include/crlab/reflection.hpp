#pragma once

#include <map>

#include "crlab/jet.hpp"

namespace crlab {

struct ReflectionReport {
    unsigned level = 0;                  // l
    std::vector<int> columns;            // 1-based target indices I = (1..n+l-1, n+k)
    std::vector<MultiIndex> frame_rows;  // chosen multiindices, one per column
    RatFun frame_det;                    // determinant of the frame submatrix, nonzero at p
    // For each target index j outside the frame (1-based), the coefficients
    // G_{i0}^j aligned with `columns`, so that a_j = sum_{i0} G_{i0}^j a_{i0}
    // holds on the source manifold.
    std::map<int, std::vector<RatFun>> quotients;
    bool cr_exact = false;        // every L_nu G reduced to zero symbolically
    bool cr_numeric = false;      // numeric spot-check route used instead, and passed
    double cr_max_residual = 0;   // largest |(L_nu G)(p_s)| on the numeric route
    bool reconstruction_ok = false;
    bool pass = false;
};

// Expresses the gradient-pullback columns outside a frame through CR-function
// coefficients. The frame takes columns I = (1, ..., n+l-1, n+k) and greedily
// selects multiindices with |beta| <= l, in graded order, until the frame
// submatrix is invertible at p; each quotient is a ratio of two determinants
// (a column replacement over the frame determinant). The verification legs
// check, modulo the source ideal, that every quotient is annihilated by every
// CR field and that the excluded columns are exactly reconstituted. When the
// symbolic derivative grows past a size budget, the CR check falls back to
// twenty random on-manifold points with tolerance 1e-9.
//
// Requires the rank to have stalled at p: rank_l(p) = n+l while the generic
// rank at level l+1 is still n+l. `exact_term_budget` caps the size of a
// symbolic derivative the exact CR check will reduce; anything larger goes
// through the numeric route.
ReflectionReport reflection_quotients(JetTable& table, const PointAssignment& p, unsigned l,
                                      size_t exact_term_budget = 20000);

}  // namespace crlab
