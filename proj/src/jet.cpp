#include "crlab/jet.hpp"

#include <algorithm>
#include <sstream>

namespace crlab {

unsigned mi_degree(const MultiIndex& a) {
    unsigned s = 0;
    for (unsigned x : a) s += x;
    return s;
}

std::string mi_str(const MultiIndex& a) {
    std::ostringstream os;
    os << "(";
    for (size_t i = 0; i < a.size(); ++i) {
        if (i) os << ",";
        os << a[i];
    }
    os << ")";
    return os.str();
}

namespace {

void compositions_of(int n, unsigned deg, int slot, MultiIndex& cur,
                     std::vector<MultiIndex>& out) {
    if (slot == n - 1) {
        cur[static_cast<size_t>(slot)] = deg;
        out.push_back(cur);
        return;
    }
    for (unsigned t = deg + 1; t-- > 0;) {
        cur[static_cast<size_t>(slot)] = t;
        compositions_of(n, deg - t, slot + 1, cur, out);
    }
}

}  // namespace

std::vector<MultiIndex> multiindices_up_to(int n, unsigned l) {
    if (n < 1) throw input_error("multiindices need at least one slot");
    std::vector<MultiIndex> out;
    MultiIndex cur(static_cast<size_t>(n), 0);
    for (unsigned deg = 0; deg <= l; ++deg) compositions_of(n, deg, 0, cur, out);
    return out;
}

JetTable::JetTable(CRMap f, const PointAssignment& base) : map_(std::move(f)) {
    fields_ = cr_basis(map_.source(), base);
    grad_ = target_gradient_pullback(map_);
}

JetTable::JetTable(CRMap f, std::vector<VectorField> fields)
    : map_(std::move(f)), fields_(std::move(fields)) {
    if (fields_.size() != static_cast<size_t>(map_.source().cr_dim()))
        throw input_error("a CR basis needs exactly one field per CR dimension");
    grad_ = target_gradient_pullback(map_);
}

const std::vector<RatFun>& JetTable::row(size_t mu, const MultiIndex& alpha) {
    if (mu >= grad_.size()) throw input_error("gradient family index out of range");
    if (alpha.size() != static_cast<size_t>(n()))
        throw input_error("multiindex length does not match the number of CR fields");
    auto key = std::make_pair(mu, alpha);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;

    std::vector<RatFun> result;
    size_t first = 0;
    while (first < alpha.size() && alpha[first] == 0) ++first;
    if (first == alpha.size()) {
        result.reserve(grad_[mu].size());
        for (const Poly& g : grad_[mu]) result.emplace_back(g);
    } else {
        MultiIndex prev_idx = alpha;
        --prev_idx[first];
        const std::vector<RatFun>& prev = row(mu, prev_idx);
        result.reserve(prev.size());
        for (const RatFun& entry : prev) result.push_back(fields_[first].apply(entry));
    }
    return memo_.emplace(std::move(key), std::move(result)).first->second;
}

void JetTable::require_usable_at(const PointAssignment& p) {
    const EmbeddedManifold& m = map_.source();
    m.require_on_manifold(p);
    m.require_generic(p);
    QMat coeffs(n(), m.ambient_dim());
    for (int i = 0; i < n(); ++i) {
        for (const auto& [var, c] : fields_[static_cast<size_t>(i)].coeffs()) {
            if (!is_antiholomorphic(var.kind))
                throw internal_error("embedded CR field with a non-(0,1) component");
            coeffs(i, var.index - 1) = c.evaluate(p);
        }
    }
    if (rank_of(coeffs) != static_cast<size_t>(n()))
        throw input_error(
            "CR basis built at the base point degenerates here; rebuild the jet table at this "
            "point");
}

QMat JetTable::rows_at(const PointAssignment& p, unsigned l) {
    require_usable_at(p);
    const auto mis = multiindices_up_to(n(), l);
    QMat out(static_cast<int>(families() * mis.size()), width());
    int r = 0;
    for (size_t mu = 0; mu < families(); ++mu) {
        for (const MultiIndex& alpha : mis) {
            const std::vector<RatFun>& rw = row(mu, alpha);
            for (int j = 0; j < width(); ++j) out(r, j) = rw[static_cast<size_t>(j)].evaluate(p);
            ++r;
        }
    }
    return out;
}

size_t JetTable::rank_at(const PointAssignment& p, unsigned l) { return rank_of(rows_at(p, l)); }

size_t JetTable::mixed_rank_at(const PointAssignment& p, unsigned l) {
    require_usable_at(p);
    std::vector<std::vector<GaussianRational>> rows;
    for (size_t mu = 0; mu < families(); ++mu) {
        std::vector<std::vector<RatFun>> frontier;
        {
            std::vector<RatFun> base;
            base.reserve(grad_[mu].size());
            for (const Poly& g : grad_[mu]) base.emplace_back(g);
            frontier.push_back(std::move(base));
        }
        auto push_values = [&](const std::vector<RatFun>& rw) {
            std::vector<GaussianRational> vals(rw.size());
            for (size_t j = 0; j < rw.size(); ++j) vals[j] = rw[j].evaluate(p);
            rows.push_back(std::move(vals));
        };
        push_values(frontier.front());
        for (unsigned r = 1; r <= l; ++r) {
            std::vector<std::vector<RatFun>> next;
            for (const auto& rw : frontier) {
                for (int i = 0; i < n(); ++i) {
                    std::vector<RatFun> applied(rw.size());
                    for (size_t j = 0; j < rw.size(); ++j)
                        applied[j] = fields_[static_cast<size_t>(i)].apply(rw[j]);
                    push_values(applied);
                    next.push_back(std::move(applied));
                }
            }
            frontier = std::move(next);
        }
    }
    QMat m(static_cast<int>(rows.size()), width());
    for (size_t r = 0; r < rows.size(); ++r)
        for (int j = 0; j < width(); ++j) m(static_cast<int>(r), j) = rows[r][static_cast<size_t>(j)];
    return rank_of(m);
}

size_t JetTable::generic_rank(unsigned l) {
    auto it = generic_memo_.find(l);
    if (it != generic_memo_.end()) return it->second;
    auto gf = map_.source().graph_form();
    if (!gf) throw input_error("generic rank needs the source manifold in graph form");

    const auto mis = multiindices_up_to(n(), l);
    PolyMat m(static_cast<int>(families() * mis.size()), width());
    int r = 0;
    for (size_t mu = 0; mu < families(); ++mu) {
        for (const MultiIndex& alpha : mis) {
            const std::vector<RatFun>& rw = row(mu, alpha);
            std::vector<RatFun> reduced(rw.size());
            bool all_poly = true;
            for (size_t j = 0; j < rw.size(); ++j) {
                reduced[j] = gf->reduce(rw[j]);
                all_poly = all_poly && reduced[j].is_polynomial();
            }
            for (int j = 0; j < width(); ++j) {
                if (all_poly) {
                    m(r, j) = reduced[static_cast<size_t>(j)].num();
                } else {
                    // Clear the row's denominators: a nonzero scalar multiple
                    // of a row does not change the rank over the field.
                    Poly cleared = reduced[static_cast<size_t>(j)].num();
                    for (size_t k = 0; k < reduced.size(); ++k)
                        if (k != static_cast<size_t>(j)) cleared = cleared * reduced[k].den();
                    m(r, j) = cleared;
                }
            }
            ++r;
        }
    }
    size_t rank = bareiss_reduce(m).rank;
    generic_memo_[l] = rank;
    return rank;
}

JetSpanReport jet_span_report(JetTable& table, const PointAssignment& p, unsigned max_l,
                              bool with_mixed_diagnostic) {
    JetSpanReport rep;
    rep.width = static_cast<size_t>(table.width());
    size_t prev = 0;
    for (unsigned l = 0; l <= max_l; ++l) {
        size_t rank = table.rank_at(p, l);
        rep.ranks.push_back(rank);
        rep.grew.push_back(rank > prev);
        if (!rep.nondegeneracy_order && rank == rep.width) rep.nondegeneracy_order = l;
        prev = rank;
    }
    if (with_mixed_diagnostic) rep.mixed_rank = table.mixed_rank_at(p, max_l);
    return rep;
}

std::optional<unsigned> nondegeneracy_order(JetTable& table, const PointAssignment& p,
                                            unsigned max_l) {
    const size_t full = static_cast<size_t>(table.width());
    for (unsigned l = 0; l <= max_l; ++l)
        if (table.rank_at(p, l) == full) return l;
    return std::nullopt;
}

DegeneracyReport degeneracy_degree(JetTable& table, const PointAssignment& p) {
    const int k = table.map().k_index();
    if (k < 1)
        throw input_error("degeneracy degree needs the target dimension to exceed the CR dimension");
    const size_t n = static_cast<size_t>(table.n());
    DegeneracyReport rep;
    rep.k = static_cast<unsigned>(k);
    for (unsigned l = 1; l <= rep.k; ++l) {
        rep.generic_ranks.push_back(table.generic_rank(l));
        rep.pointwise_ranks.push_back(table.rank_at(p, l));
    }
    rep.in_degenerate_class = rep.generic_ranks.back() <= n + rep.k - 1;
    if (rep.in_degenerate_class) {
        for (unsigned l = 1; l <= rep.k; ++l) {
            if (rep.generic_ranks[l - 1] <= n + l - 1) {
                rep.degree = l;
                break;
            }
        }
    }
    for (unsigned l = 1; l <= rep.k; ++l)
        if (rep.pointwise_ranks[l - 1] < rep.generic_ranks[l - 1]) rep.exceptional_locus = true;
    try {
        rep.hypotheses_certified = check_reflection_hypotheses(table, p).all_pass;
    } catch (const input_error&) {
        rep.hypotheses_certified = false;
    }
    return rep;
}

InjectivityDevice differential_injectivity(JetTable& table, const PointAssignment& p) {
    table.require_usable_at(p);
    const int n = table.n();
    const int np = table.width();
    QMat m(n, np);
    const auto& comps = table.map().components();
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < np; ++j) {
            RatFun entry = table.fields()[static_cast<size_t>(i)].apply(
                comps[static_cast<size_t>(j)].conj());
            m(i, j) = entry.evaluate(p);
        }
    }
    InjectivityDevice dev;
    dev.rank = rank_of(m);
    dev.injective = dev.rank == static_cast<size_t>(n);
    return dev;
}

HypothesisReport check_reflection_hypotheses(JetTable& table, const PointAssignment& p) {
    const CRMap& f = table.map();
    HypothesisReport rep;
    rep.map_verified = verify_map_into_target(f).pass;

    auto sigmas = characteristic_space(f.source(), p);
    rep.source_levi_nonzero = !sigmas.empty();
    for (const Covector& sigma : sigmas) {
        Inertia in = signature(levi_form(f.source(), p, sigma));
        if (in.positive + in.negative == 0) rep.source_levi_nonzero = false;
    }

    if (f.target().codim() != 1)
        throw input_error("hypothesis check expects a hypersurface target");
    PointAssignment q = f.image_point(p);
    if (f.target().contains(q) && f.target().is_generic_at(q)) {
        auto tsig = characteristic_space(f.target(), q);
        if (tsig.size() == 1) {
            Inertia ti = signature(levi_form(f.target(), q, tsig.front()));
            rep.target_definite = ti.zero == 0 && (ti.positive == 0 || ti.negative == 0);
            rep.target_positive_at_plus = ti.zero == 0 && ti.negative == 0;
        }
    }

    rep.injectivity = differential_injectivity(table, p);
    rep.rank0 = table.rank_at(p, 0);
    rep.rank1 = table.rank_at(p, 1);
    rep.jet_counts_match = rep.rank0 == 1 && rep.rank1 == static_cast<size_t>(table.n()) + 1;
    rep.all_pass = rep.map_verified && rep.source_levi_nonzero && rep.target_definite &&
                   rep.injectivity.injective && rep.jet_counts_match;
    return rep;
}

QuadricFeasibility quadric_embedding_obstruction(int big_n, int big_np, const Rational& lambda,
                                                 const QMat& a) {
    if (big_n < 1 || big_np < 1) throw input_error("quadric dimensions must be positive");
    if (lambda == 0) throw input_error("the quadric coefficient lambda must be nonzero");
    if (a.rows() != big_n - 1 || a.cols() != big_np - 1)
        throw input_error("coefficient matrix must be (N-1) x (N'-1)");

    QuadricFeasibility out;
    if (big_np < big_n) {
        out.structural_rank_deficit = true;
        out.feasible = false;
        std::ostringstream os;
        os << "lambda * I has rank " << (big_n - 1) << " but A A^* has rank at most "
           << (big_np - 1);
        out.detail = os.str();
        return out;
    }
    if (big_n == 1) {
        out.feasible = true;
        out.detail = "no rows to constrain";
        return out;
    }
    QMat prod = mat_mul(a, conj_transpose(a));
    for (int i = 0; i < prod.rows(); ++i) {
        for (int j = 0; j < prod.cols(); ++j) {
            GaussianRational expect =
                i == j ? GaussianRational(lambda) : GaussianRational();
            if (!(prod(i, j) == expect)) {
                out.feasible = false;
                std::ostringstream os;
                os << "entry (" << (i + 1) << "," << (j + 1) << ") of A A^* is "
                   << prod(i, j).str() << ", expected " << expect.str();
                out.detail = os.str();
                return out;
            }
        }
    }
    out.feasible = true;
    out.detail = "A A^* equals lambda * I exactly";
    return out;
}

PointAssignment random_graph_point(const EmbeddedManifold& m, Rng& rng) {
    auto gf = m.graph_form();
    if (!gf) throw input_error("random sampling needs the manifold in graph form");
    PointAssignment partial;
    for (int j = 1; j <= m.ambient_dim(); ++j) {
        if (j == gf->normal_index()) continue;
        partial.set(holo_var(m.letter(), j), rng.gaussian(4, 4));
    }
    partial.set(var_u(), GaussianRational(rng.rational(4, 4)));
    return gf->complete_point(partial);
}

std::optional<PointAssignment> find_point_with_rank(JetTable& table, unsigned l, size_t want,
                                                    int budget, uint64_t seed) {
    Rng rng(seed);
    for (int trial = 0; trial < budget; ++trial) {
        PointAssignment p = random_graph_point(table.map().source(), rng);
        try {
            if (table.rank_at(p, l) == want) return p;
        } catch (const input_error&) {
            // Basis or genericity degenerates at this sample; try another.
        }
    }
    return std::nullopt;
}

}  // namespace crlab
