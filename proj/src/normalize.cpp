#include "crlab/normalize.hpp"

#include <algorithm>
#include <sstream>

namespace crlab {

namespace {

// Exact value of a jet row at a point.
std::vector<GaussianRational> row_values(JetTable& table, const MultiIndex& alpha,
                                         const PointAssignment& p) {
    const auto& rw = table.row(0, alpha);
    std::vector<GaussianRational> out(rw.size());
    for (size_t j = 0; j < rw.size(); ++j) out[j] = rw[j].evaluate(p);
    return out;
}

QMat stack_rows(const std::vector<std::vector<GaussianRational>>& rows) {
    const size_t w = rows.empty() ? 0 : rows[0].size();
    QMat m(rows.size(), w);
    for (size_t i = 0; i < rows.size(); ++i)
        for (size_t j = 0; j < w; ++j) m(i, j) = rows[i][j];
    return m;
}

MultiIndex unit_index(int n, int slot) {
    MultiIndex e(static_cast<size_t>(n), 0u);
    e[static_cast<size_t>(slot)] = 1u;
    return e;
}

CPoly cvar(Variable v) {
    CPoly out;
    Monomial m;
    m.emplace_back(v, 1u);
    out.add_term(m, std::complex<double>(1.0, 0.0));
    return out;
}

}  // namespace

std::vector<MultiIndex> select_frame(JetTable& table, const PointAssignment& p,
                                     unsigned l) {
    table.require_usable_at(p);
    const int n = table.n();
    const size_t want = table.rank_at(p, l);
    if (want < static_cast<size_t>(n) + 1) {
        std::ostringstream os;
        os << "frame selection needs point rank at least n+1 = " << (n + 1)
           << " at this level, got " << want
           << "; an injective differential guarantees it";
        throw input_error(os.str());
    }

    std::vector<std::vector<GaussianRational>> rows;
    rows.push_back(row_values(table, MultiIndex(static_cast<size_t>(n), 0u), p));
    for (int i = 0; i < n; ++i) rows.push_back(row_values(table, unit_index(n, i), p));
    size_t rank = rank_of(stack_rows(rows));

    std::vector<MultiIndex> chosen;
    for (const auto& beta : multiindices_up_to(n, l)) {
        if (rank == want) break;
        if (mi_degree(beta) <= 1) continue;
        rows.push_back(row_values(table, beta, p));
        size_t r2 = rank_of(stack_rows(rows));
        if (r2 > rank) {
            rank = r2;
            chosen.push_back(beta);
        } else {
            rows.pop_back();
        }
    }
    if (rank != want)
        throw internal_error("select_frame: greedy extension missed the point rank");
    return chosen;
}

NormalizationResult normalize_frame(JetTable& table, const PointAssignment& p,
                                    unsigned l, NormalizationTolerances tol) {
    if (table.families() != 1)
        throw input_error("normalization needs a hypersurface target");
    if (!target_in_model_position(table.map()))
        throw input_error("normalization needs the target in model position at the origin");
    for (const auto& h : table.map().components())
        if (!h.evaluate([&](Variable v) { return p.value(v); }).is_zero())
            throw input_error(
                "normalization expects the base point to map to the target origin; "
                "translate coordinates first");

    const int n = table.n();
    const size_t np = static_cast<size_t>(table.width());
    const size_t n0 = table.rank_at(p, l);

    NormalizationResult res;
    res.tolerances = tol;
    res.extension = select_frame(table, p, l);

    // Independent rows above order zero, kept in frame order; exact rank
    // decisions, floating values only for the unitary itself.
    std::vector<MultiIndex> candidates;
    for (int i = 0; i < n; ++i) candidates.push_back(unit_index(n, i));
    for (const auto& beta : res.extension) candidates.push_back(beta);

    std::vector<std::vector<GaussianRational>> kept_rows;
    kept_rows.push_back(row_values(table, MultiIndex(static_cast<size_t>(n), 0u), p));
    for (const auto& alpha : candidates) {
        auto vals = row_values(table, alpha, p);
        kept_rows.push_back(vals);
        if (rank_of(stack_rows(kept_rows)) == kept_rows.size()) {
            res.frame.push_back(alpha);
        } else {
            kept_rows.pop_back();
        }
    }
    if (kept_rows.size() != n0)
        throw internal_error("normalize_frame: frame size disagrees with the point rank");

    const size_t hat = n0 - 1;  // rows above order zero
    Eigen::MatrixXcd hat_full(hat, np);
    for (size_t i = 0; i < hat; ++i)
        for (size_t j = 0; j < np; ++j)
            hat_full(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                to_complex(kept_rows[i + 1][j]);

    // Modified Gram-Schmidt with one re-orthogonalization pass over the
    // leading np-1 components of the frame rows.
    std::vector<Eigen::VectorXcd> basis;
    auto orthogonalize = [&basis](Eigen::VectorXcd v) {
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& q : basis) v -= q.dot(v) * q;
        return v;
    };
    for (size_t i = 0; i < hat; ++i) {
        Eigen::VectorXcd v = orthogonalize(
            hat_full.row(static_cast<Eigen::Index>(i)).head(static_cast<Eigen::Index>(np - 1))
                .transpose());
        const double norm = v.norm();
        if (norm <= 1e-10 * std::max(1.0, hat_full.row(static_cast<Eigen::Index>(i)).norm())) {
            std::ostringstream os;
            os << "frame row " << mi_str(res.frame[i])
               << " degenerates in the leading block (residual norm " << norm
               << "); the leading components do not span the expected space";
            throw input_error(os.str());
        }
        basis.push_back(v / norm);
    }
    for (size_t j = 0; j < np - 1 && basis.size() < np - 1; ++j) {
        Eigen::VectorXcd e = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(np - 1));
        e(static_cast<Eigen::Index>(j)) = 1.0;
        Eigen::VectorXcd v = orthogonalize(e);
        if (v.norm() > 1e-8) basis.push_back(v / v.norm());
    }
    if (basis.size() != np - 1)
        throw internal_error("normalize_frame: completion to a full basis failed");

    // The unitary: conjugated basis vectors as columns, bordered by a final
    // (0, ..., 0, 1) row and column so the last target coordinate is fixed.
    res.a = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(np), static_cast<Eigen::Index>(np));
    for (size_t c = 0; c < np - 1; ++c)
        for (size_t r = 0; r < np - 1; ++r)
            res.a(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                std::conj(basis[c](static_cast<Eigen::Index>(r)));
    res.a(static_cast<Eigen::Index>(np - 1), static_cast<Eigen::Index>(np - 1)) = 1.0;

    res.unitarity_residual =
        (res.a * res.a.adjoint() - Eigen::MatrixXcd::Identity(res.a.rows(), res.a.cols()))
            .cwiseAbs().maxCoeff();

    res.transformed = hat_full * res.a;
    res.b_block = res.transformed.leftCols(static_cast<Eigen::Index>(hat));
    res.zero_block_residual = 0.0;
    if (np - 1 > hat)
        res.zero_block_residual = res.transformed
                                      .middleCols(static_cast<Eigen::Index>(hat),
                                                  static_cast<Eigen::Index>(np - 1 - hat))
                                      .cwiseAbs().maxCoeff();

    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(res.b_block);
    res.smallest_singular_value = svd.singularValues().minCoeff();

    Eigen::RowVectorXcd order_zero(static_cast<Eigen::Index>(np));
    for (size_t j = 0; j < np; ++j)
        order_zero(static_cast<Eigen::Index>(j)) = to_complex(kept_rows[0][j]);
    Eigen::RowVectorXcd model = order_zero * res.a;
    model(static_cast<Eigen::Index>(np - 1)) -= std::complex<double>(0.0, 0.5);
    res.model_row_residual = model.cwiseAbs().maxCoeff();

    res.pass = res.unitarity_residual <= tol.unitarity &&
               res.zero_block_residual <= tol.zero_block &&
               res.smallest_singular_value >= tol.invertibility &&
               res.model_row_residual <= tol.zero_block;
    return res;
}

double transformation_law_residual(JetTable& table, const PointAssignment& p,
                                   const NormalizationResult& res) {
    const CRMap& f = table.map();
    const EmbeddedManifold& tgt = f.target();
    const size_t np = static_cast<size_t>(tgt.ambient_dim());
    const Eigen::MatrixXcd& a = res.a;
    auto at = [&a](size_t r, size_t c) {
        return a(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    };

    // Old target coordinates in terms of the new ones: w_k = sum_j a(k,j) v_j,
    // using the same variable symbols for the new coordinates.
    std::map<Variable, CPoly> old_in_new;
    for (size_t k = 0; k < np; ++k) {
        CPoly wk, wkb;
        for (size_t j = 0; j < np; ++j) {
            wk += cvar(tgt.z(static_cast<int>(j) + 1)).scale(at(k, j));
            wkb += cvar(tgt.zbar(static_cast<int>(j) + 1)).scale(std::conj(at(k, j)));
        }
        old_in_new[tgt.z(static_cast<int>(k) + 1)] = wk;
        old_in_new[tgt.zbar(static_cast<int>(k) + 1)] = wkb;
    }
    const CPoly rho_new = to_cpoly(tgt.defining()[0]).substitute(old_in_new);

    // Map components in the new coordinates: the inverse of a unitary is its
    // adjoint.
    std::vector<CPoly> ht(np);
    for (size_t j = 0; j < np; ++j)
        for (size_t k = 0; k < np; ++k)
            ht[j] += to_cpoly(f.components()[k]).scale(std::conj(at(k, j)));

    std::map<Variable, CPoly> pull;
    for (size_t j = 0; j < np; ++j) {
        pull[tgt.z(static_cast<int>(j) + 1)] = ht[j];
        pull[tgt.zbar(static_cast<int>(j) + 1)] = ht[j].conj();
    }

    // (i) The rebuilt polynomial pulled through the rebuilt map must agree
    // with the original pullback, coefficient by coefficient.
    const CPoly lhs = rho_new.substitute(pull);
    const CPoly rhs = to_cpoly(tgt.defining()[0].substitute(f.pullback_substitution()));
    double worst = 0.0;
    for (const auto& [m, c] : (lhs - rhs).terms()) worst = std::max(worst, std::abs(c));

    // (ii) The order-zero jet row of the rebuilt data at p must match the
    // matrix-transformed exact row.
    const auto& row0 = table.row(0, MultiIndex(static_cast<size_t>(table.n()), 0u));
    auto value_of = [&p](Variable v) { return to_complex(p.value(v)); };
    for (size_t j = 0; j < np; ++j) {
        const std::complex<double> direct = rho_new.derivative(tgt.z(static_cast<int>(j) + 1))
                                                .substitute(pull)
                                                .evaluate(value_of);
        std::complex<double> via_matrix;
        for (size_t k = 0; k < np; ++k)
            via_matrix += to_complex(row0[k].evaluate(p)) * at(k, j);
        worst = std::max(worst, std::abs(direct - via_matrix));
    }
    return worst;
}

}  // namespace crlab
