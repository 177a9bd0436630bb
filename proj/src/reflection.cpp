#include "crlab/reflection.hpp"

#include <cmath>
#include <complex>
#include <sstream>

namespace crlab {

namespace {

constexpr int kNumericSamples = 20;
constexpr double kNumericTol = 1e-9;

Mat<RatFun> with_column_replaced(const Mat<RatFun>& d, int col, const std::vector<RatFun>& b) {
    Mat<RatFun> out = d;
    for (int r = 0; r < d.rows(); ++r) out(r, col) = b[static_cast<size_t>(r)];
    return out;
}

}  // namespace

ReflectionReport reflection_quotients(JetTable& table, const PointAssignment& p, unsigned l,
                                      size_t exact_term_budget) {
    const CRMap& f = table.map();
    const int n = table.n();
    const int np = table.width();
    const int k = f.k_index();
    if (table.families() != 1)
        throw input_error("reflection quotients need a hypersurface target");
    if (l < 1 || static_cast<int>(l) >= k)
        throw input_error("reflection level must satisfy 1 <= l <= k-1");
    auto gf = f.source().graph_form();
    if (!gf) throw input_error("reflection verification needs the source in graph form");

    const size_t stall = static_cast<size_t>(n) + l;
    {
        size_t at_p = table.rank_at(p, l);
        if (at_p != stall) {
            std::ostringstream os;
            os << "rank at level " << l << " is " << at_p << " at the point, expected n+l = "
               << stall;
            throw input_error(os.str());
        }
        size_t gen = table.generic_rank(l + 1);
        if (gen != stall) {
            std::ostringstream os;
            os << "generic rank at level " << (l + 1) << " is " << gen
               << ", expected the stalled value n+l = " << stall;
            throw input_error(os.str());
        }
    }

    ReflectionReport rep;
    rep.level = l;
    std::vector<int> cols0;  // 0-based column indices of the frame
    for (int i = 1; i <= n + static_cast<int>(l) - 1; ++i) cols0.push_back(i - 1);
    cols0.push_back(np - 1);
    for (int c : cols0) rep.columns.push_back(c + 1);

    // Greedy row frame: walk the graded multiindex list and keep each row
    // that grows the rank of the frame columns at p.
    const auto mis = multiindices_up_to(n, l);
    std::vector<std::vector<GaussianRational>> vals;
    for (const MultiIndex& beta : mis) {
        const auto& rw = table.row(0, beta);
        std::vector<GaussianRational> row_vals(cols0.size());
        for (size_t c = 0; c < cols0.size(); ++c)
            row_vals[c] = rw[static_cast<size_t>(cols0[c])].evaluate(p);
        QMat trial(static_cast<int>(vals.size()) + 1, static_cast<int>(cols0.size()));
        for (size_t r = 0; r < vals.size(); ++r)
            for (size_t c = 0; c < cols0.size(); ++c)
                trial(static_cast<int>(r), static_cast<int>(c)) = vals[r][c];
        for (size_t c = 0; c < cols0.size(); ++c)
            trial(static_cast<int>(vals.size()), static_cast<int>(c)) = row_vals[c];
        if (rank_of(trial) > vals.size()) {
            vals.push_back(std::move(row_vals));
            rep.frame_rows.push_back(beta);
        }
        if (vals.size() == cols0.size()) break;
    }
    if (vals.size() != cols0.size())
        throw input_error("frame determinant vanishes at the point for every multiindex choice");

    Mat<RatFun> d(static_cast<int>(cols0.size()), static_cast<int>(cols0.size()));
    for (size_t r = 0; r < rep.frame_rows.size(); ++r) {
        const auto& rw = table.row(0, rep.frame_rows[r]);
        for (size_t c = 0; c < cols0.size(); ++c)
            d(static_cast<int>(r), static_cast<int>(c)) = rw[static_cast<size_t>(cols0[c])];
    }
    rep.frame_det = det_bareiss(d);
    if (rep.frame_det.evaluate(p).is_zero())
        throw internal_error("frame determinant evaluates to zero after a full-rank selection");

    // Cramer quotients for every excluded column.
    for (int j = n + static_cast<int>(l) - 1; j < np - 1; ++j) {
        std::vector<RatFun> b(cols0.size());
        for (size_t r = 0; r < rep.frame_rows.size(); ++r)
            b[r] = table.row(0, rep.frame_rows[r])[static_cast<size_t>(j)];
        std::vector<RatFun> g(cols0.size());
        for (size_t c = 0; c < cols0.size(); ++c)
            g[c] = det_bareiss(with_column_replaced(d, static_cast<int>(c), b)) / rep.frame_det;
        rep.quotients[j + 1] = std::move(g);
    }

    // Reconstruction: the excluded gradient entries are recovered exactly on
    // the manifold from the frame entries.
    rep.reconstruction_ok = true;
    const auto& a_row = table.row(0, MultiIndex(static_cast<size_t>(n), 0));
    for (const auto& [j1, g] : rep.quotients) {
        RatFun acc;
        for (size_t c = 0; c < cols0.size(); ++c)
            acc += g[c] * a_row[static_cast<size_t>(cols0[c])];
        acc -= a_row[static_cast<size_t>(j1 - 1)];
        if (!gf->reduce(acc).is_zero()) rep.reconstruction_ok = false;
    }

    // CR property of each quotient, exact first, numeric fallback when the
    // symbolic derivative would outgrow the budget.
    bool exact_failed = false;
    bool numeric_used = false;
    bool numeric_ok = true;
    std::vector<PointAssignment> samples;
    for (const auto& [j1, g] : rep.quotients) {
        (void)j1;
        for (const RatFun& quot : g) {
            for (const VectorField& field : table.fields()) {
                RatFun derived = field.apply(quot);
                if (derived.is_zero() || derived.num().terms().size() <= exact_term_budget) {
                    if (!gf->reduce(derived).is_zero()) exact_failed = true;
                    continue;
                }
                numeric_used = true;
                if (samples.empty()) {
                    Rng rng(20260822u);
                    while (samples.size() < static_cast<size_t>(kNumericSamples))
                        samples.push_back(random_graph_point(f.source(), rng));
                }
                for (const PointAssignment& s : samples) {
                    try {
                        std::complex<double> v = to_complex(derived.evaluate(s));
                        rep.cr_max_residual = std::max(rep.cr_max_residual, std::abs(v));
                        if (std::abs(v) > kNumericTol) numeric_ok = false;
                    } catch (const input_error&) {
                        // Denominator vanished at the sample; skip it.
                    }
                }
            }
        }
    }
    rep.cr_exact = !numeric_used && !exact_failed;
    rep.cr_numeric = numeric_used && numeric_ok && !exact_failed;
    rep.pass = !exact_failed && (!numeric_used || numeric_ok) && rep.reconstruction_ok;
    return rep;
}

}  // namespace crlab
