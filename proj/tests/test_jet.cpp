#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "crlab/jet.hpp"

using namespace crlab;

namespace {

EmbeddedManifold heisenberg_src() {
    VarSpace sp = VarSpace::source(2);
    return EmbeddedManifold(Letter::Z, 2,
                            {parse_poly("-(z2 - conj(z2))/(2*i) + z1*conj(z1)", sp)});
}

EmbeddedManifold power_model_src(int m) {
    VarSpace sp = VarSpace::source(2);
    return EmbeddedManifold(
        Letter::Z, 2, {parse_poly("-(z2 - conj(z2))/(2*i) + (z1*conj(z1))^" + std::to_string(m), sp)});
}

EmbeddedManifold heisenberg_tgt() {
    VarSpace sp = VarSpace::target(2);
    return EmbeddedManifold(Letter::W, 2,
                            {parse_poly("-(w2 - conj(w2))/(2*i) + w1*conj(w1)", sp)});
}

EmbeddedManifold sphere3_tgt() {
    VarSpace sp = VarSpace::target(3);
    return EmbeddedManifold(
        Letter::W, 3,
        {parse_poly("-(w3 - conj(w3))/(2*i) + w1*conj(w1) + w2*conj(w2)", sp)});
}

EmbeddedManifold mixed3_tgt() {
    VarSpace sp = VarSpace::target(3);
    return EmbeddedManifold(
        Letter::W, 3,
        {parse_poly("-(w3 - conj(w3))/(2*i) + w1*conj(w1) - w2*conj(w2)", sp)});
}

CRMap make_map(const EmbeddedManifold& src, const EmbeddedManifold& tgt,
               std::vector<std::string> comps) {
    VarSpace sp = VarSpace::source(src.ambient_dim());
    std::vector<Poly> polys;
    for (const auto& c : comps) polys.push_back(parse_poly(c, sp));
    return CRMap(src, tgt, std::move(polys));
}

PointAssignment origin(int n) {
    PointAssignment p;
    for (int k = 1; k <= n; ++k)
        p.set(Variable{VarKind::Z, static_cast<uint16_t>(k)}, GaussianRational());
    return p;
}

// (1/2, i * (1/2)^{2m}): on the power model for the given m.
PointAssignment half_point(int m) {
    PointAssignment p;
    p.set(Variable{VarKind::Z, 1}, GaussianRational(Rational(1, 2)));
    Rational im(1);
    for (int k = 0; k < 2 * m; ++k) im /= 2;
    p.set(Variable{VarKind::Z, 2}, GaussianRational(Rational(0), im));
    return p;
}

RatFun rf(const std::string& text, int nz) {
    return RatFun(parse_poly(text, VarSpace::source(nz)));
}

}  // namespace

TEST_CASE("multiindex enumeration is graded with earlier slots dominant") {
    auto two = multiindices_up_to(2, 2);
    std::vector<MultiIndex> expect = {{0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}};
    CHECK(two == expect);
    auto one = multiindices_up_to(1, 3);
    std::vector<MultiIndex> expect1 = {{0}, {1}, {2}, {3}};
    CHECK(one == expect1);
    CHECK(mi_degree({2, 1, 0}) == 3);
    CHECK(mi_str({1, 0}) == "(1,0)");
    CHECK_THROWS_AS(multiindices_up_to(0, 1), input_error);
}

TEST_CASE("gradient pullback rows match the hand computation") {
    {
        CRMap f = make_map(power_model_src(2), heisenberg_tgt(), {"z1^2", "z2"});
        auto rows = target_gradient_pullback(f);
        REQUIRE(rows.size() == 1);
        REQUIRE(rows[0].size() == 2);
        CHECK(rows[0][0] == parse_poly("conj(z1)^2", VarSpace::source(2)));
        CHECK(rows[0][1] == parse_poly("i/2", VarSpace::source(2)));
    }
    {
        CRMap f = make_map(heisenberg_src(), heisenberg_tgt(), {"z1", "z2"});
        auto rows = target_gradient_pullback(f);
        CHECK(rows[0][0] == parse_poly("conj(z1)", VarSpace::source(2)));
        CHECK(rows[0][1] == parse_poly("i/2", VarSpace::source(2)));
    }
    {
        CRMap f = make_map(heisenberg_src(), mixed3_tgt(), {"z1", "z1", "z2"});
        auto rows = target_gradient_pullback(f);
        REQUIRE(rows[0].size() == 3);
        CHECK(rows[0][0] == parse_poly("conj(z1)", VarSpace::source(2)));
        CHECK(rows[0][1] == parse_poly("-conj(z1)", VarSpace::source(2)));
        CHECK(rows[0][2] == parse_poly("i/2", VarSpace::source(2)));
    }
}

TEST_CASE("ordered jet rows apply the first field outermost") {
    CRMap f = make_map(power_model_src(2), heisenberg_tgt(), {"z1^2", "z2"});
    JetTable table(f, origin(2));
    REQUIRE(table.n() == 1);
    REQUIRE(table.width() == 2);

    const auto& r0 = table.row(0, {0});
    CHECK(r0[0] == rf("conj(z1)^2", 2));
    CHECK(r0[1] == rf("i/2", 2));

    const auto& r1 = table.row(0, {1});
    CHECK(r1[0] == rf("-i*conj(z1)", 2));
    CHECK(r1[1] == RatFun());

    const auto& r2 = table.row(0, {2});
    CHECK(r2[0] == rf("-1/2", 2));
    CHECK(r2[1] == RatFun());

    CHECK_THROWS_AS(table.row(1, {0}), input_error);
    CHECK_THROWS_AS(table.row(0, {0, 0}), input_error);
}

TEST_CASE("pointwise ranks and the nondegeneracy order on the power models") {
    SUBCASE("square model at the origin needs two derivatives") {
        CRMap f = make_map(power_model_src(2), heisenberg_tgt(), {"z1^2", "z2"});
        JetTable table(f, origin(2));
        auto rep = jet_span_report(table, origin(2), 2);
        CHECK(rep.width == 2);
        CHECK(rep.ranks == std::vector<size_t>{1, 1, 2});
        CHECK(rep.grew == std::vector<bool>{true, false, true});
        REQUIRE(rep.nondegeneracy_order.has_value());
        CHECK(*rep.nondegeneracy_order == 2);
        CHECK(!rep.mixed_rank.has_value());
        auto k0 = nondegeneracy_order(table, origin(2), 5);
        REQUIRE(k0.has_value());
        CHECK(*k0 == 2);
    }
    SUBCASE("square model away from the circle drops to one derivative") {
        CRMap f = make_map(power_model_src(2), heisenberg_tgt(), {"z1^2", "z2"});
        JetTable table(f, origin(2));
        auto k0 = nondegeneracy_order(table, half_point(2), 5);
        REQUIRE(k0.has_value());
        CHECK(*k0 == 1);
        auto rep = jet_span_report(table, half_point(2), 2);
        CHECK(rep.ranks == std::vector<size_t>{1, 2, 2});
    }
    SUBCASE("cubic model needs three derivatives at the origin") {
        CRMap f = make_map(power_model_src(3), heisenberg_tgt(), {"z1^3", "z2"});
        CHECK(verify_map_into_target(f).pass);
        JetTable table(f, origin(2));
        auto rep = jet_span_report(table, origin(2), 3);
        CHECK(rep.ranks == std::vector<size_t>{1, 1, 1, 2});
        REQUIRE(rep.nondegeneracy_order.has_value());
        CHECK(*rep.nondegeneracy_order == 3);
        auto k1 = nondegeneracy_order(table, half_point(3), 5);
        REQUIRE(k1.has_value());
        CHECK(*k1 == 1);
    }
    SUBCASE("a degenerate map never reaches full rank") {
        CRMap f = make_map(heisenberg_src(), mixed3_tgt(), {"z1", "z1", "0"});
        CHECK(verify_map_into_target(f).pass);
        JetTable table(f, origin(2));
        CHECK(!nondegeneracy_order(table, origin(2), 6).has_value());
        for (unsigned l = 1; l <= 6; ++l) CHECK(table.rank_at(origin(2), l) == 2);
    }
    SUBCASE("ranks never decrease with the order") {
        CRMap f = make_map(heisenberg_src(), sphere3_tgt(), {"3/5*z1", "4/5*z1", "z2"});
        JetTable table(f, origin(2));
        size_t prev = 0;
        for (unsigned l = 0; l <= 3; ++l) {
            size_t r = table.rank_at(origin(2), l);
            CHECK(r >= prev);
            prev = r;
        }
    }
}

TEST_CASE("a Levi-nondegenerate identity embedding is determined by one jet") {
    VarSpace sp = VarSpace::source(3);
    EmbeddedManifold src(
        Letter::Z, 3,
        {parse_poly("-(z3 - conj(z3))/(2*i) + z1*conj(z1) + z2*conj(z2)", sp)});
    VarSpace tw = VarSpace::target(3);
    EmbeddedManifold tgt(
        Letter::W, 3,
        {parse_poly("-(w3 - conj(w3))/(2*i) + w1*conj(w1) + w2*conj(w2)", tw)});
    CRMap f = make_map(src, tgt, {"z1", "z2", "z3"});
    CHECK(verify_map_into_target(f).pass);
    JetTable table(f, origin(3));
    REQUIRE(table.n() == 2);
    auto rep = jet_span_report(table, origin(3), 2, /*with_mixed_diagnostic=*/true);
    CHECK(rep.ranks == std::vector<size_t>{1, 3, 3});
    REQUIRE(rep.nondegeneracy_order.has_value());
    CHECK(*rep.nondegeneracy_order == 1);
    REQUIRE(rep.mixed_rank.has_value());
    CHECK(*rep.mixed_rank == 3);
}

TEST_CASE("mixed-order diagnostic agrees with the ordered span on the examples") {
    CRMap f = make_map(heisenberg_src(), sphere3_tgt(), {"3/5*z1", "4/5*z1", "z2"});
    JetTable table(f, origin(2));
    CHECK(table.mixed_rank_at(origin(2), 2) == table.rank_at(origin(2), 2));

    CRMap g = make_map(power_model_src(2), heisenberg_tgt(), {"z1^2", "z2"});
    JetTable tg(g, origin(2));
    CHECK(tg.mixed_rank_at(origin(2), 2) == tg.rank_at(origin(2), 2));
    CHECK(tg.mixed_rank_at(half_point(2), 1) == tg.rank_at(half_point(2), 1));
}

TEST_CASE("generic ranks and the degeneracy report") {
    SUBCASE("square model: generically one derivative suffices, the origin is exceptional") {
        CRMap f = make_map(power_model_src(2), heisenberg_tgt(), {"z1^2", "z2"});
        JetTable table(f, origin(2));
        CHECK(table.generic_rank(0) == 1);
        CHECK(table.generic_rank(1) == 2);
        auto rep = degeneracy_degree(table, origin(2));
        CHECK(rep.k == 1);
        CHECK(rep.generic_ranks == std::vector<size_t>{2});
        CHECK(rep.pointwise_ranks == std::vector<size_t>{1});
        CHECK(!rep.in_degenerate_class);
        CHECK(!rep.degree.has_value());
        CHECK(rep.exceptional_locus);

        auto away = degeneracy_degree(table, half_point(2));
        CHECK(!away.exceptional_locus);
        CHECK(!away.in_degenerate_class);
    }
    SUBCASE("maps that waste a target direction have degree two") {
        for (auto comps : std::vector<std::vector<std::string>>{
                 {"3/5*z1", "4/5*z1", "z2"}, {"z1", "0", "z2"}, {"z1", "z1", "0"}}) {
            // The last component set only lands in the mixed-sign target.
            const EmbeddedManifold tgt = comps[2] == "0" ? mixed3_tgt() : sphere3_tgt();
            CRMap f = make_map(heisenberg_src(), tgt, comps);
            CHECK(verify_map_into_target(f).pass);
            JetTable table(f, origin(2));
            auto rep = degeneracy_degree(table, origin(2));
            CHECK(rep.k == 2);
            CHECK(rep.generic_ranks == std::vector<size_t>{2, 2});
            CHECK(rep.in_degenerate_class);
            REQUIRE(rep.degree.has_value());
            CHECK(*rep.degree == 2);
            CHECK(!rep.exceptional_locus);
            // The mixed-sign target fails the hypothesis certificate; the
            // positive ones pass it.
            CHECK(rep.hypotheses_certified == (comps[2] != "0"));
        }
    }
    SUBCASE("tables with no spare target directions refuse a degeneracy degree") {
        VarSpace sp = VarSpace::source(3);
        EmbeddedManifold src(
            Letter::Z, 3,
            {parse_poly("-(z3 - conj(z3))/(2*i) + z1*conj(z1) + z2*conj(z2)", sp)});
        CRMap f(src, heisenberg_tgt(), {parse_poly("z1", sp), parse_poly("z3", sp)});
        JetTable table(f, origin(3));
        CHECK(f.k_index() == 0);
        CHECK_THROWS_AS(degeneracy_degree(table, origin(3)), input_error);
    }
}

TEST_CASE("differential injectivity device") {
    {
        CRMap f = make_map(heisenberg_src(), sphere3_tgt(), {"3/5*z1", "4/5*z1", "z2"});
        JetTable table(f, origin(2));
        auto dev = differential_injectivity(table, origin(2));
        CHECK(dev.rank == 1);
        CHECK(dev.injective);
    }
    {
        CRMap f = make_map(heisenberg_src(), heisenberg_tgt(), {"z1^2", "z2"});
        JetTable table(f, origin(2));
        CHECK(!differential_injectivity(table, origin(2)).injective);
        PointAssignment q;
        q.set(Variable{VarKind::Z, 1}, GaussianRational(Rational(1, 2)));
        q.set(Variable{VarKind::Z, 2}, GaussianRational(Rational(0), Rational(1, 4)));
        auto dev = differential_injectivity(table, q);
        CHECK(dev.rank == 1);
        CHECK(dev.injective);
    }
}

TEST_CASE("hypothesis report for the positive and mixed targets") {
    {
        CRMap f = make_map(heisenberg_src(), sphere3_tgt(), {"3/5*z1", "4/5*z1", "z2"});
        JetTable table(f, origin(2));
        auto rep = check_reflection_hypotheses(table, origin(2));
        CHECK(rep.map_verified);
        CHECK(rep.source_levi_nonzero);
        CHECK(rep.target_definite);
        CHECK(rep.target_positive_at_plus);
        CHECK(rep.injectivity.injective);
        CHECK(rep.rank0 == 1);
        CHECK(rep.rank1 == 2);
        CHECK(rep.jet_counts_match);
        CHECK(rep.all_pass);
    }
    {
        CRMap f = make_map(heisenberg_src(), mixed3_tgt(), {"z1", "z1", "0"});
        JetTable table(f, origin(2));
        auto rep = check_reflection_hypotheses(table, origin(2));
        CHECK(rep.map_verified);
        CHECK(rep.source_levi_nonzero);
        CHECK(!rep.target_definite);
        CHECK(rep.jet_counts_match);
        CHECK(!rep.all_pass);
    }
    {
        // Degenerate Levi on the source: the certificate names every failure.
        CRMap f = make_map(power_model_src(2), heisenberg_tgt(), {"z1^2", "z2"});
        JetTable table(f, origin(2));
        auto rep = check_reflection_hypotheses(table, origin(2));
        CHECK(rep.map_verified);
        CHECK(!rep.source_levi_nonzero);
        CHECK(rep.target_definite);
        CHECK(!rep.injectivity.injective);
        CHECK(rep.rank1 == 1);
        CHECK(!rep.jet_counts_match);
        CHECK(!rep.all_pass);
    }
    {
        VarSpace sp = VarSpace::source(2);
        VarSpace tw = VarSpace::target(4);
        EmbeddedManifold tgt(
            Letter::W, 4,
            {parse_poly("-(w3 - conj(w3))/(2*i) + w1*conj(w1) + w2*conj(w2)", tw),
             parse_poly("-(w4 - conj(w4))/(2*i) + w1*conj(w1) - w2*conj(w2)", tw)});
        CRMap f(heisenberg_src(), tgt,
                {parse_poly("z1", sp), parse_poly("0", sp), parse_poly("z2", sp),
                 parse_poly("z2", sp)});
        JetTable table(f, origin(2));
        CHECK_THROWS_AS(check_reflection_hypotheses(table, origin(2)), input_error);
    }
}

TEST_CASE("ranks are invariant under the allowed changes of presentation") {
    CRMap base = make_map(heisenberg_src(), sphere3_tgt(), {"3/5*z1", "4/5*z1", "z2"});
    JetTable tb(base, origin(2));
    std::vector<size_t> base_ranks;
    for (unsigned l = 0; l <= 2; ++l) base_ranks.push_back(tb.rank_at(origin(2), l));

    SUBCASE("target coordinates swapped or rescaled") {
        CRMap swapped = make_map(heisenberg_src(), sphere3_tgt(), {"4/5*z1", "3/5*z1", "z2"});
        JetTable ts(swapped, origin(2));
        VarSpace tw = VarSpace::target(3);
        EmbeddedManifold scaled_tgt(
            Letter::W, 3,
            {parse_poly("-(w3 - conj(w3))/(2*i) + 1/4*w1*conj(w1) + w2*conj(w2)", tw)});
        CRMap scaled = make_map(heisenberg_src(), scaled_tgt, {"6/5*z1", "4/5*z1", "z2"});
        CHECK(verify_map_into_target(scaled).pass);
        JetTable tc(scaled, origin(2));
        for (unsigned l = 0; l <= 2; ++l) {
            CHECK(ts.rank_at(origin(2), l) == base_ranks[l]);
            CHECK(tc.rank_at(origin(2), l) == base_ranks[l]);
        }
    }
    SUBCASE("defining polynomial multiplied by a unit") {
        VarSpace tw = VarSpace::target(3);
        EmbeddedManifold unit_tgt(
            Letter::W, 3,
            {parse_poly("(-(w3 - conj(w3))/(2*i) + w1*conj(w1) + w2*conj(w2))"
                        "*(1 + (w1 + conj(w1))/10)",
                        tw)});
        CRMap g = make_map(heisenberg_src(), unit_tgt, {"3/5*z1", "4/5*z1", "z2"});
        CHECK(verify_map_into_target(g).pass);
        JetTable tg(g, origin(2));
        for (unsigned l = 0; l <= 2; ++l) CHECK(tg.rank_at(origin(2), l) == base_ranks[l]);
    }
    SUBCASE("CR basis rescaled and recombined") {
        auto fields = cr_basis(heisenberg_src(), origin(2));
        VectorField scaled;
        for (const auto& [v, c] : fields[0].coeffs())
            scaled.set_coeff(v, c * RatFun::constant(GaussianRational(5)));
        JetTable tg(base, {scaled});
        for (unsigned l = 0; l <= 2; ++l) CHECK(tg.rank_at(origin(2), l) == base_ranks[l]);

        VarSpace sp = VarSpace::source(3);
        EmbeddedManifold src3(
            Letter::Z, 3,
            {parse_poly("-(z3 - conj(z3))/(2*i) + z1*conj(z1) + z2*conj(z2)", sp)});
        VarSpace tw = VarSpace::target(3);
        EmbeddedManifold tgt3(
            Letter::W, 3,
            {parse_poly("-(w3 - conj(w3))/(2*i) + w1*conj(w1) + w2*conj(w2)", tw)});
        CRMap id3(src3, tgt3,
                  {parse_poly("z1", sp), parse_poly("z2", sp), parse_poly("z3", sp)});
        JetTable plain(id3, origin(3));
        auto f3 = cr_basis(src3, origin(3));
        // Triangular recombination: {2 L1, L2 + 3 L1}.
        VectorField g1, g2;
        for (const auto& [v, c] : f3[0].coeffs())
            g1.set_coeff(v, c * RatFun::constant(GaussianRational(2)));
        g2 = f3[1];
        for (const auto& [v, c] : f3[0].coeffs())
            g2.set_coeff(v, g2.coeff(v) + c * RatFun::constant(GaussianRational(3)));
        JetTable recombined(id3, {g1, g2});
        for (unsigned l = 0; l <= 2; ++l)
            CHECK(recombined.rank_at(origin(3), l) == plain.rank_at(origin(3), l));
    }
}

TEST_CASE("generic rank dominates the pointwise rank and usually equals it") {
    CRMap f = make_map(power_model_src(2), heisenberg_tgt(), {"z1^2", "z2"});
    JetTable table(f, origin(2));
    const size_t generic1 = table.generic_rank(1);
    Rng rng(7);
    int equal = 0;
    const int trials = 50;
    for (int t = 0; t < trials; ++t) {
        PointAssignment p = random_graph_point(power_model_src(2), rng);
        size_t pw = table.rank_at(p, 1);
        CHECK(pw <= generic1);
        if (pw == generic1) ++equal;
    }
    CHECK(equal >= trials * 9 / 10);
}

TEST_CASE("rational point search reports found and not-found honestly") {
    {
        CRMap f = make_map(power_model_src(2), heisenberg_tgt(), {"z1^2", "z2"});
        JetTable table(f, origin(2));
        auto hit = find_point_with_rank(table, 1, 2, 50, 11);
        REQUIRE(hit.has_value());
        CHECK(table.rank_at(*hit, 1) == 2);
        CHECK(power_model_src(2).contains(*hit));
    }
    {
        CRMap f = make_map(heisenberg_src(), mixed3_tgt(), {"z1", "z1", "0"});
        JetTable table(f, origin(2));
        CHECK(!find_point_with_rank(table, 1, 3, 30, 11).has_value());
    }
}

TEST_CASE("quadric embedding feasibility is decided exactly") {
    {
        QMat a(2, 1);
        a(0, 0) = GaussianRational(1);
        a(1, 0) = GaussianRational();
        auto res = quadric_embedding_obstruction(3, 2, Rational(1), a);
        CHECK(!res.feasible);
        CHECK(res.structural_rank_deficit);
    }
    {
        QMat a(1, 1);
        a(0, 0) = GaussianRational(1);
        auto res = quadric_embedding_obstruction(2, 2, Rational(1), a);
        CHECK(res.feasible);
        CHECK(!res.structural_rank_deficit);
    }
    {
        QMat a(1, 2);
        a(0, 0) = GaussianRational(Rational(5, 3));
        a(0, 1) = GaussianRational();
        auto res = quadric_embedding_obstruction(2, 3, Rational(25, 9), a);
        CHECK(res.feasible);
    }
    {
        QMat a(2, 2);
        a(0, 0) = GaussianRational(1);
        a(0, 1) = GaussianRational(1);
        a(1, 0) = GaussianRational(1);
        a(1, 1) = GaussianRational(-1);
        CHECK(quadric_embedding_obstruction(3, 3, Rational(2), a).feasible);
        CHECK(!quadric_embedding_obstruction(3, 3, Rational(3), a).feasible);
        CHECK(quadric_embedding_obstruction(3, 3, Rational(3), a).detail.find("entry") !=
              std::string::npos);
    }
    {
        QMat a(1, 1);
        a(0, 0) = GaussianRational(1);
        CHECK_THROWS_AS(quadric_embedding_obstruction(2, 2, Rational(0), a), input_error);
        CHECK_THROWS_AS(quadric_embedding_obstruction(3, 3, Rational(1), a), input_error);
    }
}

TEST_CASE("off-manifold points and graphless sources are rejected") {
    CRMap f = make_map(power_model_src(2), heisenberg_tgt(), {"z1^2", "z2"});
    JetTable table(f, origin(2));
    PointAssignment off;
    off.set(Variable{VarKind::Z, 1}, GaussianRational(1));
    off.set(Variable{VarKind::Z, 2}, GaussianRational(1));
    CHECK_THROWS_AS(table.rank_at(off, 1), input_error);

    VarSpace sp = VarSpace::source(2);
    EmbeddedManifold sphere(Letter::Z, 2,
                            {parse_poly("z1*conj(z1) + z2*conj(z2) - 1", sp)});
    PointAssignment pole;
    pole.set(Variable{VarKind::Z, 1}, GaussianRational(1));
    pole.set(Variable{VarKind::Z, 2}, GaussianRational());
    CRMap g(sphere, heisenberg_tgt(), {parse_poly("z1", sp), parse_poly("z2", sp)});
    JetTable tg(g, pole);
    CHECK_THROWS_AS(tg.generic_rank(1), input_error);
}

TEST_CASE("failed verification reports the reduced residual") {
    CRMap f = make_map(power_model_src(2), heisenberg_tgt(), {"z1", "z2"});
    auto res = verify_map_into_target(f);
    CHECK(!res.pass);
    CHECK(res.failing_target_index == 0);
    CHECK(res.residual ==
          parse_poly("z1*conj(z1) - z1^2*conj(z1)^2", VarSpace::source(2)));
}
