#include "crlab/crmap.hpp"

namespace crlab {

CRMap::CRMap(EmbeddedManifold source, EmbeddedManifold target, std::vector<Poly> components)
    : source_(std::move(source)), target_(std::move(target)), components_(std::move(components)) {
    if (source_.letter() != Letter::Z || target_.letter() != Letter::W)
        throw input_error("maps go from a z-space source to a w-space target");
    if (components_.size() != static_cast<size_t>(target_.ambient_dim()))
        throw input_error("component count does not match the target ambient dimension");
    for (const Poly& h : components_)
        for (Variable v : h.variables())
            if (v.kind != VarKind::Z || v.index < 1 || v.index > source_.ambient_dim())
                throw input_error(
                    "map components must be holomorphic polynomials in the source variables; "
                    "offending variable: " + var_name(v));
    for (int j = 1; j <= target_.ambient_dim(); ++j) {
        pullback_[var_w(j)] = components_[j - 1];
        pullback_[var_wbar(j)] = components_[j - 1].conj();
    }
}

PointAssignment CRMap::image_point(const PointAssignment& p) const {
    PointAssignment out;
    for (int j = 1; j <= target_.ambient_dim(); ++j)
        out.set(var_w(j), p.evaluate(components_[j - 1]));
    return out;
}

MapVerification verify_map_into_target(const CRMap& f) {
    auto graph = f.source().graph_form();
    if (!graph)
        throw input_error(
            "map verification needs the source in graph form to reduce modulo its ideal");
    MapVerification out;
    out.pass = true;
    for (size_t mu = 0; mu < f.target().defining().size(); ++mu) {
        Poly pulled = f.target().defining()[mu].substitute(f.pullback_substitution());
        Poly reduced = graph->reduce(pulled);
        if (!reduced.is_zero()) {
            out.pass = false;
            out.residual = std::move(reduced);
            out.failing_target_index = mu;
            return out;
        }
    }
    return out;
}

std::vector<std::vector<Poly>> target_gradient_pullback(const CRMap& f) {
    std::vector<std::vector<Poly>> rows;
    for (const Poly& rho : f.target().defining()) {
        std::vector<Poly> row;
        for (int j = 1; j <= f.target().ambient_dim(); ++j)
            row.push_back(rho.derivative(var_w(j)).substitute(f.pullback_substitution()));
        rows.push_back(std::move(row));
    }
    return rows;
}

bool target_in_model_position(const CRMap& f) {
    if (f.target().codim() != 1) return false;
    const Poly& rho = f.target().defining()[0];
    const int np = f.target().ambient_dim();
    PointAssignment origin;
    for (int j = 1; j <= np; ++j) origin.set(var_w(j), GaussianRational(0));
    if (!origin.evaluate(rho).is_zero()) return false;
    const GaussianRational i_half(Rational(0), Rational(1, 2));
    if (origin.evaluate(rho.derivative(var_w(np))) != i_half) return false;
    for (int j = 1; j < np; ++j)
        if (!origin.evaluate(rho.derivative(var_w(j))).is_zero()) return false;
    return true;
}

}  // namespace crlab
