#pragma once

#include <map>
#include <optional>
#include <vector>

#include "crlab/crmap.hpp"
#include "crlab/levi.hpp"
#include "crlab/rng.hpp"

namespace crlab {

// Multiindex alpha = (alpha_1, ..., alpha_n) for the ordered composition
// L^alpha = L_1^{alpha_1} ... L_n^{alpha_n} (L_1 outermost).
using MultiIndex = std::vector<unsigned>;

unsigned mi_degree(const MultiIndex& a);
std::string mi_str(const MultiIndex& a);

// All multiindices with n slots and degree <= l, enumerated by ascending
// degree and, within a degree, with larger powers on earlier slots first.
std::vector<MultiIndex> multiindices_up_to(int n, unsigned l);

// Memoized table of the rows L^alpha applied entrywise to the pulled-back
// target gradient(s). Rows are exact symbolic vectors; every rank below is a
// rank of their values at a point (or over the function field).
class JetTable {
public:
    JetTable(CRMap f, const PointAssignment& base);

    // Same table over a caller-supplied CR basis of the source; used to test
    // that the ranks do not depend on the basis choice. The fields must span
    // the same distribution as cr_basis at every point of interest.
    JetTable(CRMap f, std::vector<VectorField> fields);

    const CRMap& map() const { return map_; }
    const std::vector<VectorField>& fields() const { return fields_; }
    int n() const { return static_cast<int>(fields_.size()); }
    int width() const { return map_.target_ambient_dim(); }
    size_t families() const { return grad_.size(); }

    const std::vector<RatFun>& row(size_t mu, const MultiIndex& alpha);

    // Stacked values of all rows with |alpha| <= l at p (all families).
    QMat rows_at(const PointAssignment& p, unsigned l);

    size_t rank_at(const PointAssignment& p, unsigned l);

    // Diagnostic span over arbitrary-order words L_{i_1} ... L_{i_r}, r <= l.
    size_t mixed_rank_at(const PointAssignment& p, unsigned l);

    // Rank of the symbolic row matrix over the field of rational functions in
    // the free graph coordinates; agrees with rank_at off a proper algebraic
    // subset. Requires the source in graph form.
    size_t generic_rank(unsigned l);

    // Rejects points where the stored basis stops being a basis: p must lie
    // on the source, the source must be generic there, and the field
    // coefficients must evaluate to an independent set.
    void require_usable_at(const PointAssignment& p);

private:
    CRMap map_;
    std::vector<VectorField> fields_;
    std::vector<std::vector<Poly>> grad_;
    std::map<std::pair<size_t, MultiIndex>, std::vector<RatFun>> memo_;
    std::map<unsigned, size_t> generic_memo_;
};

struct JetSpanReport {
    size_t width = 0;                 // N'
    std::vector<size_t> ranks;        // index l = 0..max_level
    std::vector<bool> grew;           // grew[l]: rank strictly increased at l
    std::optional<unsigned> nondegeneracy_order;  // least l with rank_l = N'
    std::optional<size_t> mixed_rank; // optional diagnostic at max_level
};

JetSpanReport jet_span_report(JetTable& table, const PointAssignment& p, unsigned max_l,
                              bool with_mixed_diagnostic = false);

// Least l <= max_l with full rank N', if any.
std::optional<unsigned> nondegeneracy_order(JetTable& table, const PointAssignment& p,
                                            unsigned max_l);

struct DegeneracyReport {
    unsigned k = 0;                    // levels examined: 1..k
    std::vector<size_t> generic_ranks; // generic_ranks[l-1] for level l
    bool in_degenerate_class = false;  // generic rank at level k is <= n+k-1
    std::optional<unsigned> degree;    // least l with generic rank <= n+l-1
    bool exceptional_locus = false;    // pointwise rank < generic rank at some level
    std::vector<size_t> pointwise_ranks;
    // Whether the full hypothesis report passed at p; a failed certificate is
    // a warning on this report, not an error.
    bool hypotheses_certified = false;
};

// Degeneracy degree at p with the generic (symbolic) rank as the
// neighborhood proxy; points where the pointwise rank drops below the
// generic one are flagged, never silently classified.
DegeneracyReport degeneracy_degree(JetTable& table, const PointAssignment& p);

struct InjectivityDevice {
    size_t rank = 0;  // rank of (L_i conj(H_l))(p)
    bool injective = false;
};

// Differential injectivity via the rank of the n x N' matrix with entries
// L_i applied to the conjugated map components, evaluated at p.
InjectivityDevice differential_injectivity(JetTable& table, const PointAssignment& p);

struct HypothesisReport {
    bool map_verified = false;
    // Source Levi form has a nonzero eigenvalue (equivalently for sigma and
    // -sigma) at each characteristic direction.
    bool source_levi_nonzero = false;
    // Target Levi form is definite at its characteristic direction; the
    // orientation records for which sign of sigma' it is positive.
    bool target_definite = false;
    bool target_positive_at_plus = false;
    InjectivityDevice injectivity;
    size_t rank0 = 0, rank1 = 0;
    // Wherever the differential is injective: rank0 = 1 and rank1 = n+1.
    bool jet_counts_match = false;
    bool all_pass = false;
};

HypothesisReport check_reflection_hypotheses(JetTable& table, const PointAssignment& p);

struct QuadricFeasibility {
    bool feasible = false;
    bool structural_rank_deficit = false;  // N' < N forces infeasibility
    std::string detail;
};

// Exact feasibility of lambda * I_{N-1} = A A^* for a positive rational
// lambda and an (N-1) x (N'-1) exact matrix A; when N' < N the left side has
// rank N-1 but the right side at most N'-1, so the identity cannot hold.
QuadricFeasibility quadric_embedding_obstruction(int big_n, int big_np, const Rational& lambda,
                                                 const QMat& a);

// Random rational point on the manifold: random rational values for the
// tangential coordinates and u, completed through the graph.
PointAssignment random_graph_point(const EmbeddedManifold& m, Rng& rng);

// Rational-point search: the first random graph point whose pointwise rank
// at level l equals `want`; empty when the budget runs out. A run that finds
// nothing is reported as "not found within budget", never as nonexistence.
std::optional<PointAssignment> find_point_with_rank(JetTable& table, unsigned l, size_t want,
                                                    int budget, uint64_t seed);

}  // namespace crlab
