#pragma once

#include <vector>

#include "crlab/manifold.hpp"
#include "crlab/matrix.hpp"

namespace crlab {

// A real one-form at a point, stored through its complex-frame coefficients:
//   sigma = sum_k a_k dz_k + conj(a_k) dzbar_k + sum_l c_l ds_l
// with a_k Gaussian rational and c_l rational. Reality is built in: the
// dzbar coefficients are never stored separately.
class Covector {
public:
    Covector(Letter letter, std::vector<GaussianRational> dz, std::vector<Rational> ds = {});

    Letter letter() const { return letter_; }
    const std::vector<GaussianRational>& dz() const { return dz_; }
    const std::vector<Rational>& ds() const { return ds_; }

    // <sigma, X(p)> for a field given by its coefficient values at p.
    GaussianRational pair(const std::map<Variable, GaussianRational>& field_at_p) const;

    // Real coefficient vector (2 Re a_1, -2 Im a_1, ..., c_1, ..., c_d): the
    // coefficients in the underlying real coordinate frame. Linear algebra on
    // covectors (spans, quotients by the conormal) happens on these rows.
    std::vector<Rational> realified() const;

    Covector scaled(const Rational& t) const;
    Covector operator-() const { return scaled(Rational(-1)); }
    friend Covector operator+(const Covector& a, const Covector& b);

    // Divides by the first nonzero realified coefficient.
    Covector normalized() const;

    std::string str() const;

private:
    Letter letter_;
    std::vector<GaussianRational> dz_;
    std::vector<Rational> ds_;
};

// Characteristic covectors at p: real one-forms annihilating every CR field
// (and, by reality, every conjugate field). For an embedded manifold the
// result is a basis of the ambient solutions modulo the conormal span of the
// defining differentials; its size equals the codimension.
std::vector<Covector> characteristic_space(const EmbeddedManifold& m, const PointAssignment& p);

// Abstract version: solves the realified annihilation system in the
// (dz, ds) coefficients; no conormal quotient applies.
std::vector<Covector> characteristic_space(const AbstractCRStructure& s, const PointAssignment& p);

bool is_characteristic(const Covector& sigma, const std::vector<VectorField>& fields,
                       const PointAssignment& p);

// Tests whether sigma and tau differ by a real combination of the conormals
// dρ_mu(p), i.e. represent the same class on the manifold.
bool equal_mod_conormal(const Covector& sigma, const Covector& tau, const EmbeddedManifold& m,
                        const PointAssignment& p);

// Hermitian form with entries (1/2i) <sigma, [L_i, conj(L_j)](p)> on the
// given basis fields.
QMat levi_form_on_fields(const std::vector<VectorField>& fields, const Covector& sigma,
                         const PointAssignment& p);

// Levi form of an embedded manifold at a characteristic sigma, on the
// cr_basis fields. The commutators are tangent to the manifold, so the
// result does not change when sigma moves within its conormal class.
QMat levi_form(const EmbeddedManifold& m, const PointAssignment& p, const Covector& sigma);

Inertia signature(const QMat& hermitian);

}  // namespace crlab
