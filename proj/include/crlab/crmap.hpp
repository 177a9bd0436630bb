#pragma once

#include <optional>
#include <vector>

#include "crlab/manifold.hpp"

namespace crlab {

// A polynomial map H = (H_1, ..., H_N') from a source manifold in z-space to
// a target manifold in w-space; each component is holomorphic (a polynomial
// in z only).
class CRMap {
public:
    CRMap(EmbeddedManifold source, EmbeddedManifold target, std::vector<Poly> components);

    const EmbeddedManifold& source() const { return source_; }
    const EmbeddedManifold& target() const { return target_; }
    const std::vector<Poly>& components() const { return components_; }

    int source_cr_dim() const { return source_.cr_dim(); }
    int target_ambient_dim() const { return target_.ambient_dim(); }
    // The regularity index k with N' = n + k.
    int k_index() const { return target_.ambient_dim() - source_.cr_dim(); }

    // Substitution map {w_j -> H_j, conj(w_j) -> conj(H_j)}.
    const std::map<Variable, Poly>& pullback_substitution() const { return pullback_; }

    // Image of a source point under H.
    PointAssignment image_point(const PointAssignment& p) const;

private:
    EmbeddedManifold source_;
    EmbeddedManifold target_;
    std::vector<Poly> components_;
    std::map<Variable, Poly> pullback_;
};

struct MapVerification {
    bool pass = false;
    // For a failing map: the first nonzero reduced pullback of a target
    // defining polynomial.
    Poly residual;
    size_t failing_target_index = 0;
};

// Pulls every target defining polynomial back through (H, conj H) and
// reduces modulo the source ideal via the graph substitution; the map sends
// the source into the target iff every reduction is exactly zero.
MapVerification verify_map_into_target(const CRMap& f);

// Rows (dρ'_mu/dw_j)(H, conj H), one row per target defining polynomial:
// the exact pullback of the target's holomorphic gradient. For a hypersurface
// target this is the single vector whose jet spans drive every rank below.
std::vector<std::vector<Poly>> target_gradient_pullback(const CRMap& f);

// True when the hypersurface target is in model position at the origin:
// ρ' vanishes at 0, its w_{N'} partial there is i/2, and the other
// holomorphic partials vanish at 0. In that position the last entry of the
// gradient pullback evaluates to i/2 at every source point mapped to 0.
bool target_in_model_position(const CRMap& f);

}  // namespace crlab
