#pragma once

#include <map>
#include <optional>
#include <vector>

#include "crlab/matrix.hpp"
#include "crlab/parser.hpp"
#include "crlab/point.hpp"
#include "crlab/ratfun.hpp"

namespace crlab {

// Which holomorphic letter the ambient coordinates use. Source manifolds live
// in z-space, target manifolds in w-space; everything downstream is letter-
// agnostic and just asks the manifold for its variables.
enum class Letter { Z, W };

Variable holo_var(Letter letter, int index);
Variable antiholo_var(Letter letter, int index);

// A complex vector field written in the coordinate frame
// {d/dz_k, d/dzbar_k, d/ds_l} with rational-function coefficients. Only
// variables with nonzero coefficient are stored.
class VectorField {
public:
    VectorField() = default;

    void set_coeff(Variable v, RatFun c);
    const RatFun& coeff(Variable v) const;  // zero if absent
    const std::map<Variable, RatFun>& coeffs() const { return coeff_; }

    // Applies the field as a derivation.
    RatFun apply(const Poly& f) const;
    RatFun apply(const RatFun& f) const;

    // Complex conjugate field: conjugated coefficients on conjugated frame
    // vectors (d/ds_l is fixed).
    VectorField conj() const;

    // Coefficient values at a point, keyed by frame variable.
    std::map<Variable, GaussianRational> evaluate(const PointAssignment& p) const;

    bool is_zero() const;

    std::string str() const;

private:
    std::map<Variable, RatFun> coeff_;
};

VectorField commutator(const VectorField& x, const VectorField& y);

// Rewrites the distinguished coordinate of a hypersurface as a graph
// v = phi(z', zbar', u) over the remaining variables plus u = Re z_N.
// Substituting z_N = u + i*phi reduces any polynomial modulo the defining
// ideal, which is how "vanishes on the manifold" becomes an exact zero test.
class GraphForm {
public:
    GraphForm(Letter letter, int ambient_dim, int normal_index, Poly phi);

    int normal_index() const { return normal_index_; }
    const Poly& phi() const { return phi_; }

    // f(z, zbar) -> f(z', u + i*phi, zbar', u - i*phi); the result uses the
    // tangential variables and u only.
    Poly reduce(const Poly& f) const;
    RatFun reduce(const RatFun& f) const;

    // Completes a point (tangential values + u) to an ambient point on the
    // manifold by evaluating the graph.
    PointAssignment complete_point(const PointAssignment& partial) const;

private:
    Letter letter_;
    int ambient_dim_;
    int normal_index_;
    Poly phi_;
    std::map<Variable, Poly> subst_;
};

class EmbeddedManifold {
public:
    // Validates that every defining polynomial is real-valued and uses only
    // the declared ambient variables.
    EmbeddedManifold(Letter letter, int ambient_dim, std::vector<Poly> defining);

    Letter letter() const { return letter_; }
    int ambient_dim() const { return ambient_dim_; }
    int codim() const { return static_cast<int>(defining_.size()); }
    int cr_dim() const { return ambient_dim_ - codim(); }
    const std::vector<Poly>& defining() const { return defining_; }

    Variable z(int index) const { return holo_var(letter_, index); }
    Variable zbar(int index) const { return antiholo_var(letter_, index); }

    bool contains(const PointAssignment& p) const;
    void require_on_manifold(const PointAssignment& p) const;

    // d x N matrix of holomorphic partials dρ_mu/dz_k at p; genericity means
    // full row rank d.
    QMat holomorphic_gradient(const PointAssignment& p) const;
    bool is_generic_at(const PointAssignment& p) const;
    void require_generic(const PointAssignment& p) const;

    // Real span of the ambient differentials dρ_mu(p), one realified
    // coefficient row per mu (layout matches Covector::realified).
    std::vector<std::vector<Rational>> conormal_rows(const PointAssignment& p) const;

    // Detects the graph form with respect to Im z_j for a hypersurface:
    // ρ must be linear in Im z_j with nonzero constant coefficient. Tries the
    // last variable first, then earlier ones; empty if none works.
    std::optional<GraphForm> graph_form() const;

private:
    Letter letter_;
    int ambient_dim_;
    std::vector<Poly> defining_;
};

// CR structure given directly by frame coefficients: the i-th field is
// d/dzbar_i + sum_j a(i,j) d/dz_j + sum_l b(i,l) d/ds_l.
class AbstractCRStructure {
public:
    AbstractCRStructure(int n, int d, std::vector<std::vector<Poly>> a,
                        std::vector<std::vector<Poly>> b);

    int cr_dim() const { return n_; }
    int codim() const { return d_; }
    const std::vector<VectorField>& fields() const { return fields_; }

    // True when every non-leading coefficient vanishes at the origin.
    bool normalized_at_origin() const;

private:
    int n_, d_;
    std::vector<VectorField> fields_;
};

// Basis of (0,1) CR vector fields at p. Hypersurfaces get the denominator-
// free pencil rho_{zbar_piv} d/dzbar_i - rho_{zbar_i} d/dzbar_piv; higher
// codimension solves a d x d system, giving rational coefficients whose
// denominators do not vanish at p. Every field annihilates every defining
// polynomial identically.
std::vector<VectorField> cr_basis(const EmbeddedManifold& m, const PointAssignment& p);

struct InvolutivityReport {
    bool involutive = true;
    // On failure: indices of the offending pair and their commutator.
    size_t i = 0, j = 0;
    VectorField witness;
};

// Checks that all pairwise commutators lie in the span of the given fields
// over rational functions, by exact linear solve.
InvolutivityReport involutivity_check(const std::vector<VectorField>& fields);

}  // namespace crlab
