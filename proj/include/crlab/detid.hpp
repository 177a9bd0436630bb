#pragma once

// Exact determinant identities over the Gaussian rationals: minors addressed
// by 1-based index sets, the bordered-minor quotient identity, Chio-style
// condensation, the 3x3 entry displays, and a column-dependence certificate.
// All checks return both sides of the identity so callers (and the CLI
// verifier) can report mismatches instead of silently trusting them.

#include "crlab/matrix.hpp"
#include "crlab/rational.hpp"

#include <vector>

namespace crlab {

// Determinant of the square minor of `b` with the given 1-based row and
// column sets.  The sets are sorted ascending before extraction, so the
// result is independent of the order the caller lists them in.  Duplicate or
// out-of-range indices are input errors.  Empty sets give 1.
GaussianRational minor_det(const QMat& b, std::vector<int> rows,
                           std::vector<int> cols);

// Both sides of an identity plus the comparison verdict.
struct IdentityCheck {
    GaussianRational lhs;
    GaussianRational rhs;
    bool equal = false;
};

// Sylvester-style bordered-minor identity for a square n x n matrix, n >= 3.
// `i_set` and `j_set` pick n-2 rows/columns out of {1..n-1}; the two leftover
// rows {r1 < r2} and columns {c1 < c2} border the common minor.  The check
// compares
//   det [[ M(I+r1; J+c1), M(I+r1; J+c2) ],
//        [ M(I+r2; J+c1), M(I+r2; J+c2) ]]   (lhs)
// against  M(I; J) * det(b)                   (rhs),
// where M(R; C) is the minor with rows R and columns C.
IdentityCheck bordered_minor_identity(const QMat& b, std::vector<int> i_set,
                                      std::vector<int> j_set);

// One condensation step: for a p x p matrix with p >= 2, the (p-1) x (p-1)
// matrix of 2x2 determinants pinned at the corner,
//   out(i, j) = c(1,1) * c(i+1, j+1) - c(1, j+1) * c(i+1, 1)   (1-based).
QMat condense(const QMat& c);

// Condensation identity for a p x p matrix, p >= 3:
//   c(1,1)^(p-2) * det(c)  ==  det(condense(c)).
// Holds with no restriction on the corner entry (both sides vanish when the
// corner is zero and p >= 3).
IdentityCheck condensation_identity(const QMat& c);

// For a 3x3 matrix, each pair (i, j) in {1,2}^2 yields a bordered-minor
// display whose left side also equals entry a(i,j) of the adjugate-style
// form: the 2x2 determinant of complementary 2x2 minors equals
// a(i, j) * det(a).
struct BorderedDisplay {
    int i = 0;
    int j = 0;
    IdentityCheck check;                  // bordered identity for ({i}, {j})
    GaussianRational entry_times_det;     // a(i, j) * det(a)
    bool matches_entry_form = false;      // check.lhs == entry_times_det
};

// All four displays for a 3x3 matrix, ordered (1,1), (1,2), (2,1), (2,2).
std::vector<BorderedDisplay> all_bordered_displays(const QMat& a);

// Decides whether `a` is the zero vector using only bordered determinants
// against an invertible column set `b` (square, nonsingular; else input
// error).  Dropping column j of `b` in order j = 1..n and appending `a`
// produces n bordered matrices; the first with nonzero determinant is
// returned as a witness that `a` is nonzero.  If every bordered determinant
// vanishes, `a` must be zero, and the expansion coefficients of `a` in the
// columns of `b` (all zero) certify it.
struct DependenceResult {
    bool is_zero = false;
    std::vector<int> witness_columns;          // 1-based kept columns of b
    GaussianRational witness_det;              // nonzero iff a witness exists
    std::vector<GaussianRational> coefficients;  // x with b x = a
};

DependenceResult dependence_certificate(const QMat& b,
                                        const std::vector<GaussianRational>& a);

}  // namespace crlab
