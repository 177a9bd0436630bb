#include "crlab/manifold.hpp"

#include <algorithm>

namespace crlab {

Variable holo_var(Letter letter, int index) {
    return letter == Letter::Z ? var_z(index) : var_w(index);
}

Variable antiholo_var(Letter letter, int index) {
    return letter == Letter::Z ? var_zbar(index) : var_wbar(index);
}

namespace {

GaussianRational value_at_origin(const Poly& p) {
    for (const auto& [m, c] : p.terms())
        if (m.empty()) return c;
    return GaussianRational(0);
}

}  // namespace

void VectorField::set_coeff(Variable v, RatFun c) {
    if (c.is_zero())
        coeff_.erase(v);
    else
        coeff_[v] = std::move(c);
}

const RatFun& VectorField::coeff(Variable v) const {
    static const RatFun zero;
    auto it = coeff_.find(v);
    return it == coeff_.end() ? zero : it->second;
}

RatFun VectorField::apply(const Poly& f) const {
    return apply(RatFun(f));
}

RatFun VectorField::apply(const RatFun& f) const {
    RatFun acc;
    for (const auto& [v, c] : coeff_) {
        RatFun df = f.derivative(v);
        if (!df.is_zero()) acc = acc + c * df;
    }
    return acc;
}

VectorField VectorField::conj() const {
    VectorField out;
    for (const auto& [v, c] : coeff_) out.set_coeff(conjugate(v), c.conj());
    return out;
}

std::map<Variable, GaussianRational> VectorField::evaluate(const PointAssignment& p) const {
    std::map<Variable, GaussianRational> out;
    for (const auto& [v, c] : coeff_) out[v] = c.evaluate(p);
    return out;
}

bool VectorField::is_zero() const {
    return coeff_.empty();
}

std::string VectorField::str() const {
    if (coeff_.empty()) return "0";
    std::string out;
    for (const auto& [v, c] : coeff_) {
        if (!out.empty()) out += " + ";
        std::string cs = c.is_polynomial() ? to_string(c.num())
                                           : "(" + to_string(c.num()) + ")/(" + to_string(c.den()) + ")";
        if (cs.find(' ') != std::string::npos && cs.front() != '(') cs = "(" + cs + ")";
        out += cs + "*d/d" + var_name(v);
    }
    return out;
}

VectorField commutator(const VectorField& x, const VectorField& y) {
    VectorField out;
    std::vector<Variable> frame;
    for (const auto& [v, c] : x.coeffs()) frame.push_back(v);
    for (const auto& [v, c] : y.coeffs())
        if (std::find(frame.begin(), frame.end(), v) == frame.end()) frame.push_back(v);
    for (Variable v : frame) {
        RatFun c = x.apply(y.coeff(v)) - y.apply(x.coeff(v));
        out.set_coeff(v, std::move(c));
    }
    return out;
}

GraphForm::GraphForm(Letter letter, int ambient_dim, int normal_index, Poly phi)
    : letter_(letter), ambient_dim_(ambient_dim), normal_index_(normal_index), phi_(std::move(phi)) {
    Poly u = Poly::variable(var_u());
    Poly i_phi = phi_.scale(GaussianRational::i());
    subst_[holo_var(letter_, normal_index_)] = u + i_phi;
    subst_[antiholo_var(letter_, normal_index_)] = u - i_phi;
}

Poly GraphForm::reduce(const Poly& f) const {
    return f.substitute(subst_);
}

RatFun GraphForm::reduce(const RatFun& f) const {
    Poly den = f.den().substitute(subst_);
    if (den.is_zero())
        throw input_error("denominator vanishes identically on the manifold");
    return RatFun(f.num().substitute(subst_), std::move(den));
}

PointAssignment GraphForm::complete_point(const PointAssignment& partial) const {
    GaussianRational phi_val = partial.evaluate(phi_);
    if (phi_val.im() != 0)
        throw internal_error("graph function evaluated to a non-real value");
    GaussianRational u_val = partial(var_u());
    PointAssignment full;
    for (const auto& [v, val] : partial.stored())
        if (v.kind != VarKind::U && v.kind != VarKind::V) full.set(v, val);
    full.set(holo_var(letter_, normal_index_),
             u_val + GaussianRational::i() * phi_val);
    return full;
}

EmbeddedManifold::EmbeddedManifold(Letter letter, int ambient_dim, std::vector<Poly> defining)
    : letter_(letter), ambient_dim_(ambient_dim), defining_(std::move(defining)) {
    if (ambient_dim_ < 2) throw input_error("ambient dimension must be at least 2");
    if (defining_.empty()) throw input_error("a manifold needs at least one defining polynomial");
    if (codim() >= ambient_dim_)
        throw input_error("codimension must be smaller than the ambient dimension");
    const VarKind holo = letter_ == Letter::Z ? VarKind::Z : VarKind::ZBar;
    (void)holo;
    for (const Poly& rho : defining_) {
        if (rho.is_constant()) throw input_error("defining polynomial is constant");
        if (!is_real_valued(rho))
            throw input_error("defining polynomial is not real-valued: " + to_string(rho));
        for (Variable v : rho.variables()) {
            bool ok = false;
            if (letter_ == Letter::Z)
                ok = (v.kind == VarKind::Z || v.kind == VarKind::ZBar);
            else
                ok = (v.kind == VarKind::W || v.kind == VarKind::WBar);
            if (!ok || v.index < 1 || v.index > ambient_dim_)
                throw input_error("defining polynomial uses a variable outside the ambient space: " +
                                  var_name(v));
        }
    }
}

bool EmbeddedManifold::contains(const PointAssignment& p) const {
    for (const Poly& rho : defining_)
        if (!p.evaluate(rho).is_zero()) return false;
    return true;
}

void EmbeddedManifold::require_on_manifold(const PointAssignment& p) const {
    for (size_t mu = 0; mu < defining_.size(); ++mu)
        if (!p.evaluate(defining_[mu]).is_zero())
            throw input_error("point does not lie on the manifold (defining polynomial " +
                              std::to_string(mu + 1) + " is nonzero there)");
}

QMat EmbeddedManifold::holomorphic_gradient(const PointAssignment& p) const {
    QMat g(defining_.size(), ambient_dim_);
    for (size_t mu = 0; mu < defining_.size(); ++mu)
        for (int k = 1; k <= ambient_dim_; ++k)
            g(mu, k - 1) = p.evaluate(defining_[mu].derivative(z(k)));
    return g;
}

bool EmbeddedManifold::is_generic_at(const PointAssignment& p) const {
    return rank_of(holomorphic_gradient(p)) == defining_.size();
}

void EmbeddedManifold::require_generic(const PointAssignment& p) const {
    if (!is_generic_at(p))
        throw input_error(
            "genericity fails at the point: the holomorphic gradients of the defining "
            "polynomials are linearly dependent there");
}

std::vector<std::vector<Rational>> EmbeddedManifold::conormal_rows(const PointAssignment& p) const {
    QMat g = holomorphic_gradient(p);
    std::vector<std::vector<Rational>> rows;
    for (size_t mu = 0; mu < defining_.size(); ++mu) {
        std::vector<Rational> row;
        for (int k = 0; k < ambient_dim_; ++k) {
            row.push_back(2 * g(mu, k).re());
            row.push_back(-2 * g(mu, k).im());
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::optional<GraphForm> EmbeddedManifold::graph_form() const {
    if (codim() != 1) return std::nullopt;
    const Poly& rho = defining_[0];
    Poly u = Poly::variable(var_u());
    Poly v = Poly::variable(var_v());
    for (int j = ambient_dim_; j >= 1; --j) {
        std::map<Variable, Poly> repl;
        repl[z(j)] = u + v.scale(GaussianRational::i());
        repl[zbar(j)] = u - v.scale(GaussianRational::i());
        Poly hat = rho.substitute(repl);
        if (hat.degree_in(var_v()) != 1) continue;
        Poly c = hat.derivative(var_v());
        if (!c.is_constant()) continue;
        GaussianRational cv = c.constant_value();
        if (cv.is_zero() || cv.im() != 0) continue;
        std::map<Variable, Poly> kill_v;
        kill_v[var_v()] = Poly();
        Poly r = hat.substitute(kill_v);
        Poly phi = r.scale(-GaussianRational(1) / cv);
        return GraphForm(letter_, ambient_dim_, j, std::move(phi));
    }
    return std::nullopt;
}

AbstractCRStructure::AbstractCRStructure(int n, int d, std::vector<std::vector<Poly>> a,
                                         std::vector<std::vector<Poly>> b)
    : n_(n), d_(d) {
    if (n < 1 || d < 0) throw input_error("CR dimension must be positive, codimension nonnegative");
    if (a.size() != static_cast<size_t>(n) || b.size() != static_cast<size_t>(n))
        throw input_error("coefficient arrays need one row per CR field");
    for (int i = 0; i < n; ++i) {
        if (a[i].size() != static_cast<size_t>(n) || b[i].size() != static_cast<size_t>(d))
            throw input_error("coefficient row has the wrong length");
        VectorField L;
        L.set_coeff(var_zbar(i + 1), RatFun::constant(GaussianRational(1)));
        for (int j = 0; j < n; ++j) L.set_coeff(var_z(j + 1), RatFun(a[i][j]));
        for (int l = 0; l < d; ++l) L.set_coeff(var_s(l + 1), RatFun(b[i][l]));
        fields_.push_back(std::move(L));
    }
}

bool AbstractCRStructure::normalized_at_origin() const {
    for (const VectorField& L : fields_)
        for (const auto& [v, c] : L.coeffs()) {
            if (is_antiholomorphic(v.kind)) continue;  // the leading d/dzbar_i term
            if (!c.is_polynomial()) return false;
            if (!value_at_origin(c.num()).is_zero()) return false;
        }
    return true;
}

std::vector<VectorField> cr_basis(const EmbeddedManifold& m, const PointAssignment& p) {
    m.require_on_manifold(p);
    m.require_generic(p);
    const int big_n = m.ambient_dim();
    const int d = m.codim();

    if (d == 1) {
        const Poly& rho = m.defining()[0];
        std::vector<Poly> grad(big_n);
        std::vector<GaussianRational> at_p(big_n);
        for (int k = 1; k <= big_n; ++k) {
            grad[k - 1] = rho.derivative(m.zbar(k));
            at_p[k - 1] = p.evaluate(grad[k - 1]);
        }
        int piv = -1;
        for (int k = big_n; k >= 1; --k)
            if (!at_p[k - 1].is_zero()) {
                piv = k;
                break;
            }
        if (piv < 0) throw internal_error("generic point with vanishing gradient");
        std::vector<VectorField> basis;
        for (int i = 1; i <= big_n; ++i) {
            if (i == piv) continue;
            VectorField L;
            L.set_coeff(m.zbar(i), RatFun(grad[piv - 1]));
            L.set_coeff(m.zbar(piv), RatFun(grad[i - 1].scale(GaussianRational(-1))));
            basis.push_back(std::move(L));
        }
        return basis;
    }

    // Higher codimension: pick the pivot index set preferring later
    // variables, then solve the d x d system by Cramer's rule.
    std::vector<std::vector<int>> subsets;
    std::vector<int> cur;
    auto gen = [&](auto&& self, int start) -> void {
        if (static_cast<int>(cur.size()) == d) {
            subsets.push_back(cur);
            return;
        }
        for (int k = start; k <= big_n; ++k) {
            cur.push_back(k);
            self(self, k + 1);
            cur.pop_back();
        }
    };
    gen(gen, 1);
    std::sort(subsets.begin(), subsets.end(), [](const auto& a, const auto& b) {
        for (size_t k = a.size(); k-- > 0;)
            if (a[k] != b[k]) return a[k] > b[k];
        return false;
    });

    std::vector<std::vector<Poly>> grad(d, std::vector<Poly>(big_n));
    for (int mu = 0; mu < d; ++mu)
        for (int k = 1; k <= big_n; ++k) grad[mu][k - 1] = m.defining()[mu].derivative(m.zbar(k));

    const std::vector<int>* pivots = nullptr;
    for (const auto& sub : subsets) {
        QMat a(d, d);
        for (int mu = 0; mu < d; ++mu)
            for (int k = 0; k < d; ++k) a(mu, k) = p.evaluate(grad[mu][sub[k] - 1]);
        if (!det_bareiss(a).is_zero()) {
            pivots = &sub;
            break;
        }
    }
    if (!pivots) throw internal_error("generic point without an invertible pivot block");

    PolyMat a_sym(d, d);
    for (int mu = 0; mu < d; ++mu)
        for (int k = 0; k < d; ++k) a_sym(mu, k) = grad[mu][(*pivots)[k] - 1];
    Poly det_a = det_bareiss(a_sym);

    std::vector<VectorField> basis;
    for (int i = 1; i <= big_n; ++i) {
        if (std::find(pivots->begin(), pivots->end(), i) != pivots->end()) continue;
        VectorField L;
        L.set_coeff(m.zbar(i), RatFun::constant(GaussianRational(1)));
        for (int k = 0; k < d; ++k) {
            std::vector<Poly> col(d);
            for (int mu = 0; mu < d; ++mu) col[mu] = grad[mu][i - 1].scale(GaussianRational(-1));
            PolyMat replaced = a_sym.with_column(k, col);
            L.set_coeff(m.zbar((*pivots)[k]), RatFun(det_bareiss(replaced), det_a));
        }
        // Hard invariant: the solved field annihilates every defining
        // polynomial identically.
        for (int mu = 0; mu < d; ++mu)
            if (!L.apply(m.defining()[mu]).is_zero())
                throw internal_error("constructed CR field fails to annihilate a defining polynomial");
        basis.push_back(std::move(L));
    }
    return basis;
}

InvolutivityReport involutivity_check(const std::vector<VectorField>& fields) {
    InvolutivityReport out;
    const size_t n = fields.size();
    std::vector<Variable> frame;
    for (const VectorField& f : fields)
        for (const auto& [v, c] : f.coeffs())
            if (std::find(frame.begin(), frame.end(), v) == frame.end()) frame.push_back(v);
    std::sort(frame.begin(), frame.end());

    for (size_t i = 0; i < n; ++i) {
        for (size_t j = i + 1; j < n; ++j) {
            VectorField c = commutator(fields[i], fields[j]);
            if (c.is_zero()) continue;
            std::vector<Variable> all = frame;
            for (const auto& [v, cc] : c.coeffs())
                if (std::find(all.begin(), all.end(), v) == all.end()) all.push_back(v);
            std::sort(all.begin(), all.end());
            Mat<RatFun> a(all.size(), n);
            std::vector<RatFun> rhs(all.size());
            for (size_t r = 0; r < all.size(); ++r) {
                for (size_t mcol = 0; mcol < n; ++mcol) a(r, mcol) = fields[mcol].coeff(all[r]);
                rhs[r] = c.coeff(all[r]);
            }
            auto sol = solve_linear(a, rhs);
            if (!sol.consistent) {
                out.involutive = false;
                out.i = i;
                out.j = j;
                out.witness = std::move(c);
                return out;
            }
        }
    }
    return out;
}

}  // namespace crlab
