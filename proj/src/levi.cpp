#include "crlab/levi.hpp"

namespace crlab {

Covector::Covector(Letter letter, std::vector<GaussianRational> dz, std::vector<Rational> ds)
    : letter_(letter), dz_(std::move(dz)), ds_(std::move(ds)) {}

GaussianRational Covector::pair(const std::map<Variable, GaussianRational>& field_at_p) const {
    GaussianRational acc;
    for (const auto& [v, val] : field_at_p) {
        switch (v.kind) {
            case VarKind::Z:
            case VarKind::W: {
                if (v.index >= 1 && v.index <= static_cast<int>(dz_.size()))
                    acc += dz_[v.index - 1] * val;
                break;
            }
            case VarKind::ZBar:
            case VarKind::WBar: {
                if (v.index >= 1 && v.index <= static_cast<int>(dz_.size()))
                    acc += conj(dz_[v.index - 1]) * val;
                break;
            }
            case VarKind::S: {
                if (v.index >= 1 && v.index <= static_cast<int>(ds_.size()))
                    acc += GaussianRational(ds_[v.index - 1]) * val;
                break;
            }
            default:
                throw internal_error("vector field uses a frame variable without a covector slot");
        }
    }
    return acc;
}

std::vector<Rational> Covector::realified() const {
    std::vector<Rational> out;
    for (const GaussianRational& a : dz_) {
        out.push_back(2 * a.re());
        out.push_back(-2 * a.im());
    }
    for (const Rational& c : ds_) out.push_back(c);
    return out;
}

Covector Covector::scaled(const Rational& t) const {
    Covector out = *this;
    for (GaussianRational& a : out.dz_) a *= GaussianRational(t);
    for (Rational& c : out.ds_) c *= t;
    return out;
}

Covector operator+(const Covector& a, const Covector& b) {
    if (a.letter_ != b.letter_ || a.dz_.size() != b.dz_.size() || a.ds_.size() != b.ds_.size())
        throw input_error("covector shapes do not match");
    Covector out = a;
    for (size_t k = 0; k < b.dz_.size(); ++k) out.dz_[k] += b.dz_[k];
    for (size_t l = 0; l < b.ds_.size(); ++l) out.ds_[l] += b.ds_[l];
    return out;
}

Covector Covector::normalized() const {
    for (const Rational& r : realified()) {
        if (r != 0) return scaled(1 / r);
    }
    return *this;
}

std::string Covector::str() const {
    const char* letter_name = letter_ == Letter::Z ? "z" : "w";
    std::string out;
    auto add = [&](const std::string& coeff, const std::string& base) {
        if (coeff == "0") return;
        if (!out.empty()) out += " + ";
        if (coeff == "1")
            out += base;
        else
            out += coeff + "*" + base;
    };
    std::vector<Rational> re = realified();
    for (size_t k = 0; k < dz_.size(); ++k) {
        std::string idx = std::to_string(k + 1);
        add(to_string(re[2 * k]), "dRe(" + std::string(letter_name) + idx + ")");
        add(to_string(re[2 * k + 1]), "dIm(" + std::string(letter_name) + idx + ")");
    }
    for (size_t l = 0; l < ds_.size(); ++l)
        add(to_string(ds_[l]), "ds" + std::to_string(l + 1));
    return out.empty() ? "0" : out;
}

namespace {

size_t rank_of_rows(const std::vector<std::vector<Rational>>& rows) {
    if (rows.empty()) return 0;
    Mat<Rational> m(rows.size(), rows[0].size());
    for (size_t i = 0; i < rows.size(); ++i)
        for (size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
    return rank_of(m);
}

}  // namespace

std::vector<Covector> characteristic_space(const EmbeddedManifold& m, const PointAssignment& p) {
    std::vector<VectorField> fields = cr_basis(m, p);
    const int big_n = m.ambient_dim();
    const int d = m.codim();

    // sigma annihilates L_i iff sum_k a_k conj(beta_ik) = 0 where
    // L_i = sum_k beta_ik d/dzbar_k; the condition is complex-linear in a.
    QMat sys(fields.size(), big_n);
    for (size_t i = 0; i < fields.size(); ++i) {
        auto at_p = fields[i].evaluate(p);
        for (const auto& [v, val] : at_p) {
            if (!is_antiholomorphic(v.kind))
                throw internal_error("embedded CR field with a non-(0,1) component");
            sys(i, v.index - 1) = conj(val);
        }
    }
    std::vector<std::vector<GaussianRational>> null = kernel_basis(sys);

    // Realify the complex kernel, then keep the members independent of the
    // conormal span.
    std::vector<std::vector<Rational>> stack = m.conormal_rows(p);
    size_t rank = rank_of_rows(stack);
    std::vector<Covector> out;
    for (const auto& v : null) {
        for (int variant = 0; variant < 2 && out.size() < static_cast<size_t>(d); ++variant) {
            std::vector<GaussianRational> a = v;
            if (variant == 1)
                for (GaussianRational& x : a) x *= GaussianRational::i();
            Covector sigma(m.letter(), a);
            std::vector<std::vector<Rational>> trial = stack;
            trial.push_back(sigma.realified());
            size_t r = rank_of_rows(trial);
            if (r > rank) {
                stack = std::move(trial);
                rank = r;
                out.push_back(sigma.normalized());
            }
        }
    }
    if (out.size() != static_cast<size_t>(d))
        throw internal_error("characteristic space has unexpected dimension");
    return out;
}

std::vector<Covector> characteristic_space(const AbstractCRStructure& s, const PointAssignment& p) {
    const int n = s.cr_dim();
    const int d = s.codim();
    // Unknowns: (Re a_1, Im a_1, ..., Re a_n, Im a_n, c_1, ..., c_d).
    // <sigma, L_i(p)> = conj(a_i) + sum_j A_ij a_j + sum_l B_il c_l with
    // A = a-coefficients at p, B = b-coefficients at p; two real equations
    // per field.
    Mat<Rational> sys(2 * n, 2 * n + d);
    for (int i = 0; i < n; ++i) {
        auto at_p = s.fields()[i].evaluate(p);
        for (const auto& [v, val] : at_p) {
            if (v.kind == VarKind::ZBar) {
                // val * conj(a_j) = (Re val + i Im val)(x_j - i y_j)
                const int j = v.index - 1;
                sys(2 * i, 2 * j) += val.re();
                sys(2 * i, 2 * j + 1) += val.im();
                sys(2 * i + 1, 2 * j) += val.im();
                sys(2 * i + 1, 2 * j + 1) -= val.re();
            } else if (v.kind == VarKind::Z) {
                const int j = v.index - 1;
                // val * a_j = (Re val + i Im val)(x_j + i y_j)
                sys(2 * i, 2 * j) += val.re();
                sys(2 * i, 2 * j + 1) -= val.im();
                sys(2 * i + 1, 2 * j) += val.im();
                sys(2 * i + 1, 2 * j + 1) += val.re();
            } else if (v.kind == VarKind::S) {
                const int l = v.index - 1;
                sys(2 * i, 2 * n + l) += val.re();
                sys(2 * i + 1, 2 * n + l) += val.im();
            } else {
                throw internal_error("abstract CR field uses an unexpected frame variable");
            }
        }
    }
    std::vector<std::vector<Rational>> null = kernel_basis(sys);
    std::vector<Covector> out;
    for (const auto& x : null) {
        std::vector<GaussianRational> a(n);
        for (int j = 0; j < n; ++j) a[j] = GaussianRational(x[2 * j], x[2 * j + 1]);
        std::vector<Rational> c(x.begin() + 2 * n, x.end());
        out.push_back(Covector(Letter::Z, std::move(a), std::move(c)).normalized());
    }
    return out;
}

bool is_characteristic(const Covector& sigma, const std::vector<VectorField>& fields,
                       const PointAssignment& p) {
    for (const VectorField& f : fields)
        if (!sigma.pair(f.evaluate(p)).is_zero()) return false;
    return true;
}

bool equal_mod_conormal(const Covector& sigma, const Covector& tau, const EmbeddedManifold& m,
                        const PointAssignment& p) {
    std::vector<std::vector<Rational>> stack = m.conormal_rows(p);
    size_t base = rank_of_rows(stack);
    std::vector<Rational> rs = sigma.realified(), rt = tau.realified();
    if (rs.size() != rt.size()) return false;
    std::vector<Rational> diff(rs.size());
    for (size_t k = 0; k < rs.size(); ++k) diff[k] = rs[k] - rt[k];
    stack.push_back(std::move(diff));
    return rank_of_rows(stack) == base;
}

QMat levi_form_on_fields(const std::vector<VectorField>& fields, const Covector& sigma,
                         const PointAssignment& p) {
    const size_t n = fields.size();
    const GaussianRational half_over_i(Rational(0), Rational(-1, 2));  // 1/(2i)
    QMat h(n, n);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            VectorField c = commutator(fields[i], fields[j].conj());
            h(i, j) = half_over_i * sigma.pair(c.evaluate(p));
        }
    if (!is_hermitian(h)) throw internal_error("Levi form came out non-Hermitian");
    return h;
}

QMat levi_form(const EmbeddedManifold& m, const PointAssignment& p, const Covector& sigma) {
    std::vector<VectorField> fields = cr_basis(m, p);
    if (!is_characteristic(sigma, fields, p))
        throw input_error("covector is not characteristic at the point");
    return levi_form_on_fields(fields, sigma, p);
}

Inertia signature(const QMat& hermitian) {
    return hermitian_inertia(hermitian);
}

}  // namespace crlab
