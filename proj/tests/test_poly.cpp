#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>

#include "crlab/parser.hpp"
#include "crlab/point.hpp"
#include "crlab/poly.hpp"
#include "crlab/rng.hpp"

using namespace crlab;

namespace {

// Small deterministic polynomial generator for property tests.
Poly random_poly(Rng& rng, const std::vector<Variable>& vars, int max_terms = 4,
                 unsigned max_exp = 3) {
    Poly p;
    const int terms = static_cast<int>(rng.int_in(1, max_terms));
    for (int t = 0; t < terms; ++t) {
        Poly mono = Poly::constant(rng.gaussian(5, 3));
        for (const Variable& v : vars) {
            unsigned e = static_cast<unsigned>(rng.int_in(0, max_exp));
            if (e > 0) mono = mono * Poly::variable(v).pow(e);
        }
        p = p + mono;
    }
    return p;
}

}  // namespace

TEST_CASE("construction and basic queries") {
    Poly z1 = Poly::variable(var_z(1));
    Poly zb1 = Poly::variable(var_zbar(1));
    Poly p = z1 * zb1 + Poly::constant(GaussianRational(Rational(1, 2)));
    CHECK(p.total_degree() == 2);
    CHECK(p.degree_in(var_z(1)) == 1);
    CHECK(p.degree_in(var_z(2)) == 0);
    CHECK(!p.is_zero());
    CHECK(!p.is_constant());
    CHECK((p - p).is_zero());
    CHECK(Poly().is_constant());
    CHECK(Poly().constant_value() == GaussianRational(0));
}

TEST_CASE("wirtinger derivative treats a variable and its conjugate independently") {
    // rho = -(z2 - conj(z2))/(2i) + z1*conj(z1) = Im z2 ... sign fixed: -(z2-z2bar)/(2i)
    VarSpace sp = VarSpace::source(2);
    Poly rho = parse_poly("-(z2 - conj(z2))/(2*i) + z1*conj(z1)", sp);

    Poly d_z1 = rho.derivative(var_z(1));
    Poly d_zb1 = rho.derivative(var_zbar(1));
    Poly d_z2 = rho.derivative(var_z(2));
    Poly d_zb2 = rho.derivative(var_zbar(2));

    CHECK(d_z1 == Poly::variable(var_zbar(1)));
    CHECK(d_zb1 == Poly::variable(var_z(1)));
    // -1/(2i) = i/2
    CHECK(d_z2 == Poly::constant(GaussianRational(Rational(0), Rational(1, 2))));
    CHECK(d_zb2 == Poly::constant(GaussianRational(Rational(0), Rational(-1, 2))));
}

TEST_CASE("derivative satisfies linearity and the product rule") {
    Rng rng(7);
    std::vector<Variable> vars = {var_z(1), var_zbar(1), var_z(2), var_zbar(2)};
    for (int trial = 0; trial < 40; ++trial) {
        Poly f = random_poly(rng, vars);
        Poly g = random_poly(rng, vars);
        for (const Variable& v : vars) {
            CHECK((f + g).derivative(v) == f.derivative(v) + g.derivative(v));
            CHECK((f * g).derivative(v) == f.derivative(v) * g + f * g.derivative(v));
        }
    }
}

TEST_CASE("conjugation is an involutive ring antihomomorphism fixing real polys") {
    Rng rng(11);
    std::vector<Variable> vars = {var_z(1), var_zbar(1), var_u(), var_s(1)};
    for (int trial = 0; trial < 40; ++trial) {
        Poly f = random_poly(rng, vars);
        Poly g = random_poly(rng, vars);
        CHECK(f.conj().conj() == f);
        CHECK((f * g).conj() == f.conj() * g.conj());
        CHECK((f + g).conj() == f.conj() + g.conj());
        // f * conj(f) is always real-valued.
        CHECK(is_real_valued(f * f.conj()));
    }
    // conj swaps z and conj(z) but fixes real variables.
    Poly mixed = Poly::variable(var_z(1)) + Poly::variable(var_u());
    Poly expected = Poly::variable(var_zbar(1)) + Poly::variable(var_u());
    CHECK(mixed.conj() == expected);
}

TEST_CASE("conjugation commutes with differentiation through the swapped variable") {
    Rng rng(13);
    std::vector<Variable> vars = {var_z(1), var_zbar(1), var_z(2), var_zbar(2)};
    for (int trial = 0; trial < 25; ++trial) {
        Poly f = random_poly(rng, vars);
        for (const Variable& v : vars) {
            CHECK(f.derivative(v).conj() == f.conj().derivative(conjugate(v)));
        }
    }
}

TEST_CASE("substitution composes with evaluation") {
    VarSpace sp = VarSpace::source(2);
    Poly f = parse_poly("z1^2*conj(z2) + 3*z2", sp);
    std::map<Variable, Poly> repl;
    repl[var_z(1)] = parse_poly("z2 + 1", sp);
    repl[var_zbar(1)] = parse_poly("conj(z2) + 1", sp);
    Poly g = f.substitute(repl);

    PointAssignment at;
    at.set(var_z(2), GaussianRational(Rational(2), Rational(1)));  // z2 = 2 + i

    PointAssignment at_f;
    at_f.set(var_z(1), GaussianRational(Rational(3), Rational(1)));  // z1 = (2+i)+1
    at_f.set(var_z(2), GaussianRational(Rational(2), Rational(1)));

    CHECK(at.evaluate(g) == at_f.evaluate(f));
}

TEST_CASE("exact division recovers factors") {
    Rng rng(17);
    std::vector<Variable> vars = {var_z(1), var_zbar(1), var_z(2)};
    for (int trial = 0; trial < 30; ++trial) {
        Poly a = random_poly(rng, vars);
        Poly b = random_poly(rng, vars);
        if (b.is_zero()) continue;
        CHECK(divide_exact(a * b, b) == a);
    }
    Poly z1 = Poly::variable(var_z(1));
    CHECK_THROWS_AS(divide_exact(z1 + Poly::constant(GaussianRational(1)), z1),
                    internal_error);
}

TEST_CASE("evaluation requires derived conjugates to stay consistent") {
    PointAssignment at;
    at.set(var_z(1), GaussianRational(Rational(1, 2), Rational(-1, 3)));
    Poly f = Poly::variable(var_z(1)) * Poly::variable(var_zbar(1));
    GaussianRational v = at.evaluate(f);
    CHECK(v.im() == 0);
    CHECK(v.re() == Rational(1, 4) + Rational(1, 9));
    CHECK_THROWS_AS(at.set(var_zbar(1), GaussianRational(0)), input_error);
    CHECK_THROWS_AS(at.set(var_u(), GaussianRational::i()), input_error);
}

TEST_CASE("term order lists higher total degree first, then earlier variables") {
    VarSpace sp = VarSpace::source(2);
    Poly p = parse_poly("1 + z2 + z1 + z1*z2 + z1^2 + conj(z1)", sp);
    CHECK(to_string(p) == "z1^2 + z1*z2 + z1 + z2 + conj(z1) + 1");
}
