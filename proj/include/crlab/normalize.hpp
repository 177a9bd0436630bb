#pragma once

// Unitary change of target coordinates that puts the jet rows of a map into
// block-normal form: after the change, the independent jet rows above order
// zero read (B | 0 | b) with B square invertible, and the order-zero row at
// the base point becomes (0, ..., 0, i/2).  The chosen frame of jet rows is
// exact; the unitary itself is floating point (unitarity forces irrational
// entries), so the result carries residuals against fixed tolerances.

#include "crlab/jet.hpp"

#include <Eigen/Dense>

#include <complex>
#include <vector>

namespace crlab {

// Greedy frame extension.  Starting from the order-zero row together with the
// n first-order rows, walks the multiindices of order 2..l in graded order
// and keeps each row that increases the exact rank at the point, stopping
// once the point rank at level l is reached.  Returns the kept extension
// multiindices.  Requires the point rank to be at least n+1 (the order-zero
// and first-order rows span that much whenever the map has an injective
// differential); otherwise reports the deficiency as an input error.
std::vector<MultiIndex> select_frame(JetTable& table, const PointAssignment& p,
                                     unsigned l);

struct NormalizationTolerances {
    double unitarity = 1e-12;      // max-norm of A A* - I
    double zero_block = 1e-10;     // max entry of the forced-zero block
    double invertibility = 1e-8;   // smallest singular value of B
};

struct NormalizationResult {
    Eigen::MatrixXcd a;              // the unitary change, target-dim square
    std::vector<MultiIndex> extension;  // frame rows beyond first order
    std::vector<MultiIndex> frame;      // all independent rows above order 0
    Eigen::MatrixXcd transformed;    // frame rows times a: (B | 0 | b)
    Eigen::MatrixXcd b_block;        // leading square block of `transformed`
    double unitarity_residual = 0.0;
    double zero_block_residual = 0.0;
    double smallest_singular_value = 0.0;
    double model_row_residual = 0.0;  // order-zero row vs (0, ..., 0, i/2)
    NormalizationTolerances tolerances;
    bool pass = false;
};

// Builds the unitary.  The frame rows' leading components are orthonormalized
// by modified Gram-Schmidt with re-orthogonalization and completed to a full
// basis by identity columns taken in order; the unitary has that basis as
// conjugated columns, bordered by a final (0, ..., 0, 1) row and column.
// Preconditions: hypersurface target in model position, and the map must send
// the base point to the target origin (translate first).
NormalizationResult normalize_frame(JetTable& table, const PointAssignment& p,
                                    unsigned l,
                                    NormalizationTolerances tol = {});

// Symbolic cross-check of the coordinate change.  Rebuilds the target
// defining polynomial and the map components in the new coordinates as
// complex-coefficient polynomials, then compares (i) the pullback of the
// rebuilt polynomial through the rebuilt map against the original pullback
// and (ii) the rebuilt order-zero jet row at p against the matrix-transformed
// one.  Returns the largest residual found; a correct unitary keeps it at
// roundoff level.
double transformation_law_residual(JetTable& table, const PointAssignment& p,
                                   const NormalizationResult& res);

}  // namespace crlab
