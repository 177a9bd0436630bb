#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "crlab/fbi.hpp"

#include <cmath>

using namespace crlab;

namespace {

const std::vector<double> kScales = {4, 8, 16, 32, 64, 128, 256};
const double kPi = 3.14159265358979323846;

SampledFunction heaviside_2d(size_t pts = 257) {
    return make_builtin("heaviside", {}, {{-1, 1, pts}, {-1, 1, pts}});
}

SampledFunction bump_2d(size_t pts = 257) {
    return make_builtin("bump", {0.4}, {{-1, 1, pts}, {-1, 1, pts}});
}

SampledFunction heisenberg_3d(size_t pts = 161) {
    return make_builtin("heisenberg_sqrt", {},
                        {{-0.6, 0.6, pts}, {-0.6, 0.6, pts}, {-0.6, 0.6, pts}});
}

}  // namespace

TEST_CASE("cutoff profile") {
    Cutoff eta{0.5};
    CHECK(eta.value(0.0) == 1.0);
    CHECK(eta.value(0.25) == 1.0);        // rho = r
    CHECK(eta.value(0.5) == 0.0);         // rho = sqrt(2) r
    CHECK(eta.value(10.0) == 0.0);
    const double mid = eta.value(0.375);  // halfway in rho^2
    CHECK(mid > 0.0);
    CHECK(mid < 1.0);
    double prev = 1.0;
    for (int i = 0; i <= 20; ++i) {
        double v = eta.value(0.25 + 0.25 * i / 20.0);
        CHECK(v <= prev + 1e-15);
        prev = v;
    }
}

TEST_CASE("grid validation") {
    CHECK_THROWS_AS(SampledFunction({{0, 1, 1}}, SampledFunction::Generator(
                                                     [](const std::vector<double>&) {
                                                         return std::complex<double>{};
                                                     })),
                    input_error);
    CHECK_THROWS_AS(SampledFunction({{1, 0, 5}}, std::vector<std::complex<double>>(5)),
                    input_error);
    CHECK_THROWS_AS(SampledFunction({{0, 1, 5}}, std::vector<std::complex<double>>(4)),
                    input_error);
    CHECK_THROWS_AS(make_builtin("no_such_function", {}, {{0, 1, 5}}), input_error);

    SampledFunction u = make_builtin("zero", {}, {{-1, 1, 33}});
    Cutoff eta{0.5};
    CHECK_THROWS_AS(fbi_transform(u, eta, {2.0}, {1.0}, 1.0), input_error);  // probe outside
    CHECK_THROWS_AS(fbi_transform(u, eta, {0.0}, {1.0}, 0.0), input_error);  // bad damping
    CHECK_THROWS_AS(fbi_transform(u, eta, {0.0, 0.0}, {1.0}, 1.0), input_error);
    CHECK_THROWS_AS(fbi_transform(u, Cutoff{-1.0}, {0.0}, {1.0}, 1.0), input_error);
}

TEST_CASE("zero samples transform to zero exactly") {
    SampledFunction u = make_builtin("zero", {}, {{-1, 1, 65}, {-1, 1, 65}});
    auto v = fbi_transform(u, Cutoff{0.5}, {0.1, -0.2}, {3.0, 4.0}, 1.0);
    CHECK(v == std::complex<double>(0.0, 0.0));
}

TEST_CASE("zero frequency recovers the cut-off mass") {
    Cutoff eta{0.4};
    SampledFunction coarse = make_builtin("gaussian", {0.25}, {{-1, 1, 101}, {-1, 1, 101}});
    SampledFunction fine = make_builtin("gaussian", {0.25}, {{-1, 1, 201}, {-1, 1, 201}});
    auto a = fbi_transform(coarse, eta, {0, 0}, {0, 0}, 1.0);
    auto b = fbi_transform(fine, eta, {0, 0}, {0, 0}, 1.0);
    CHECK(a.real() > 0.0);
    CHECK(std::abs(a.imag()) < 1e-14);
    CHECK(std::abs(a - b) / std::abs(b) < 1e-3);
}

TEST_CASE("plane wave magnitudes peak at the carrier frequency") {
    SampledFunction u = make_builtin("plane_wave", {3.0}, {{-1, 1, 257}});
    Cutoff eta{0.5};
    double best = -1.0;
    int best_l = 0;
    for (int l = 1; l <= 6; ++l) {
        double m = std::abs(fbi_transform(u, eta, {0}, {static_cast<double>(l)}, 0.25));
        if (m > best) {
            best = m;
            best_l = l;
        }
    }
    CHECK(best_l == 3);
}

TEST_CASE("transform is linear in the samples") {
    std::vector<GridAxis> axes = {{-1, 1, 129}};
    std::vector<std::complex<double>> su(129), sv(129);
    for (size_t i = 0; i < 129; ++i) {
        double x = -1.0 + 2.0 * i / 128.0;
        su[i] = {std::sin(3 * x), std::cos(2 * x)};
        sv[i] = {std::exp(-x * x), x};
    }
    SampledFunction u(axes, su), v(axes, sv);
    const std::complex<double> al(2.0, -1.0), be(-0.5, 3.0);
    std::vector<std::complex<double>> sc(129);
    for (size_t i = 0; i < 129; ++i) sc[i] = al * su[i] + be * sv[i];
    SampledFunction combo(axes, sc);

    Cutoff eta{0.5};
    auto fu = fbi_transform(u, eta, {0.1}, {5.0}, 1.0);
    auto fv = fbi_transform(v, eta, {0.1}, {5.0}, 1.0);
    auto fc = fbi_transform(combo, eta, {0.1}, {5.0}, 1.0);
    CHECK(std::abs(fc - (al * fu + be * fv)) <=
          1e-12 * std::max(1.0, std::abs(al * fu + be * fv)));
}

TEST_CASE("shifting samples and probe together leaves the transform unchanged") {
    std::vector<GridAxis> axes = {{-1, 1, 201}};
    const double h = 0.01;
    auto g = [](double x) { return std::exp(-x * x / (0.25 * 0.25)); };
    std::vector<std::complex<double>> base(201), shifted(201);
    for (size_t i = 0; i < 201; ++i) {
        double x = -1.0 + h * i;
        base[i] = g(x);
        shifted[i] = g(x - 0.2);
    }
    SampledFunction u(axes, base), us(axes, shifted);
    Cutoff eta{0.2};
    auto f0 = fbi_transform(u, eta, {0.0}, {7.0}, 1.0);
    auto f1 = fbi_transform(us, eta, {0.2}, {7.0}, 1.0);
    CHECK(std::abs(f1 - f0) <= 1e-10 * std::abs(f0));
    CHECK(std::abs(std::abs(f1) - std::abs(f0)) <= 1e-10 * std::abs(f0));
}

TEST_CASE("scale sweep matches per-frequency transforms") {
    SampledFunction u = make_builtin("gaussian", {0.3}, {{-1, 1, 129}, {-1, 1, 129}});
    Cutoff eta{0.5};
    auto mags = fbi_scale_sweep(u, eta, {0, 0}, {0.6, 0.8}, kScales, 1.0);
    double peak = 0.0;
    for (double m : mags) peak = std::max(peak, m);
    for (size_t j = 0; j < kScales.size(); ++j) {
        double single = std::abs(
            fbi_transform(u, eta, {0, 0}, {0.6 * kScales[j], 0.8 * kScales[j]}, 1.0));
        CHECK(std::abs(mags[j] - single) <= 1e-10 * peak);
    }
}

TEST_CASE("classification of synthetic magnitude sequences") {
    auto mk = [](double (*f)(double)) {
        std::vector<double> m;
        for (double s : kScales) m.push_back(f(s));
        return m;
    };

    SUBCASE("first-order power decay is slow") {
        auto p = classify_decay({0, 1}, kScales, mk([](double s) { return 1.0 / s; }));
        CHECK(p.classification == Decay::slow);
        CHECK(p.poly_order == doctest::Approx(1.0).epsilon(1e-9));
        CHECK_FALSE(p.exponential_fit_preferred);
        CHECK(p.used_samples == 7);
    }

    SUBCASE("high-order power decay is rapid through the order threshold") {
        // Order 6.5 drops below the relative floor after three scales, so the
        // fit runs on the three usable points and still lands above rapid_min.
        auto p = classify_decay({0, 1}, kScales,
                                mk([](double s) { return std::pow(s / 4.0, -6.5); }));
        CHECK(p.classification == Decay::rapid);
        CHECK(p.poly_order == doctest::Approx(6.5).epsilon(1e-6));
        CHECK_FALSE(p.exponential_fit_preferred);
        CHECK_FALSE(p.floor_flag);
        CHECK(p.used_samples == 3);
    }

    SUBCASE("steep power decay falls through the floor and is rapid with a flag") {
        auto p = classify_decay({0, 1}, kScales,
                                mk([](double s) { return std::pow(s, -8.0); }));
        CHECK(p.classification == Decay::rapid);
        CHECK(p.floor_flag);
    }

    SUBCASE("exponential decay is rapid through the residual comparison") {
        auto p = classify_decay({0, 1}, kScales,
                                mk([](double s) { return std::exp(-0.1 * s); }));
        CHECK(p.classification == Decay::rapid);
        CHECK(p.exponential_fit_preferred);
        CHECK(p.exp_rate == doctest::Approx(0.1).epsilon(1e-6));
    }

    SUBCASE("intermediate order is inconclusive") {
        auto p = classify_decay({0, 1}, kScales,
                                mk([](double s) { return std::pow(s, -4.5); }));
        CHECK(p.classification == Decay::inconclusive);
        CHECK(p.poly_order == doctest::Approx(4.5).epsilon(1e-6));
    }

    SUBCASE("no decay at all is slow") {
        auto p = classify_decay({0, 1}, kScales, std::vector<double>(7, 5.0));
        CHECK(p.classification == Decay::slow);
        CHECK(p.poly_order == doctest::Approx(0.0));
    }

    SUBCASE("all magnitudes at the hard floor give rapid with a flag") {
        auto p = classify_decay({0, 1}, kScales, std::vector<double>(7, 1e-310));
        CHECK(p.classification == Decay::rapid);
        CHECK(p.floor_flag);
    }

    SUBCASE("too few usable magnitudes give rapid with a flag") {
        std::vector<double> m = {1.0, 1e-3, 1e-10, 1e-11, 1e-12, 1e-12, 1e-13};
        auto p = classify_decay({0, 1}, kScales, m);
        CHECK(p.classification == Decay::rapid);
        CHECK(p.floor_flag);
        CHECK(p.used_samples == 2);
    }

    SUBCASE("thresholds are recorded in the profile") {
        auto p = classify_decay({0, 1}, kScales, mk([](double s) { return 1.0 / s; }));
        CHECK(p.thresholds.rel_floor == 3e-5);
        CHECK(p.thresholds.slow_max == 3.0);
        CHECK(p.thresholds.rapid_min == 6.0);
    }
}

TEST_CASE("decay profile input validation") {
    SampledFunction u = make_builtin("zero", {}, {{-1, 1, 33}});
    Cutoff eta{0.5};
    CHECK_THROWS_AS(decay_profile(u, eta, {0}, {1}, {4, 8, 16, 32, 64}, 1.0), input_error);
    CHECK_THROWS_AS(decay_profile(u, eta, {0}, {1}, {4, 8, 16, 16, 64, 128}, 1.0),
                    input_error);
    CHECK_THROWS_AS(decay_profile(u, eta, {0}, {0}, kScales, 1.0), input_error);
}

TEST_CASE("jump discontinuity is slow in both normal directions") {
    SampledFunction u = heaviside_2d();
    Cutoff eta{0.5};
    for (double s : {1.0, -1.0}) {
        auto p = decay_profile(u, eta, {0, 0}, {0, s}, kScales, 1.0);
        CHECK(p.classification == Decay::slow);
        CHECK(p.poly_order > 0.8);
        CHECK(p.poly_order < 2.5);
        CHECK_FALSE(p.exponential_fit_preferred);
    }

    SUBCASE("the tangential direction is smooth and decays rapidly") {
        auto p = decay_profile(u, eta, {0, 0}, {1, 0}, kScales, 1.0);
        CHECK(p.classification == Decay::rapid);
    }

    SUBCASE("classification is stable under grid doubling") {
        SampledFunction fine = heaviside_2d(513);
        for (double s : {1.0, -1.0}) {
            auto p = decay_profile(fine, eta, {0, 0}, {0, s}, kScales, 1.0);
            CHECK(p.classification == Decay::slow);
        }
    }
}

TEST_CASE("smooth bump decays rapidly in sampled directions") {
    SampledFunction u = bump_2d();
    Cutoff eta{0.5};
    for (int k : {0, 5, 16, 23, 32, 47}) {
        double th = 2 * kPi * k / 64;
        auto p = decay_profile(u, eta, {0, 0}, {std::cos(th), std::sin(th)}, kScales, 1.0);
        CHECK(p.classification == Decay::rapid);
    }

    SUBCASE("stronger damping never demotes the verdict") {
        for (double k_damp : {1.0, 2.0, 4.0}) {
            auto p = decay_profile(u, eta, {0, 0}, {1, 0}, kScales, k_damp);
            CHECK(p.classification == Decay::rapid);
        }
    }
}

TEST_CASE("square-root edge function separates the two normal directions") {
    SampledFunction u = heisenberg_3d();
    Cutoff eta{0.3};
    auto plus = decay_profile(u, eta, {0, 0, 0}, {0, 0, 1}, kScales, 1.0);
    CHECK(plus.classification == Decay::slow);
    CHECK(plus.poly_order > 1.5);
    CHECK(plus.poly_order < 3.0);

    auto minus = decay_profile(u, eta, {0, 0, 0}, {0, 0, -1}, kScales, 1.0);
    CHECK(minus.classification == Decay::rapid);
    CHECK(minus.exponential_fit_preferred);

    SUBCASE("stable under grid doubling") {
        SampledFunction fine = heisenberg_3d(321);
        CHECK(decay_profile(fine, eta, {0, 0, 0}, {0, 0, 1}, kScales, 1.0).classification ==
              Decay::slow);
        CHECK(decay_profile(fine, eta, {0, 0, 0}, {0, 0, -1}, kScales, 1.0).classification ==
              Decay::rapid);
    }
}

TEST_CASE("cone membership by nonnegative combination") {
    std::vector<std::vector<double>> gens = {{0, 1}, {0, -1}};
    CHECK(cone_contains(gens, {0, 1}));
    CHECK(cone_contains(gens, {0, -1}));
    CHECK(cone_contains(gens, {0, 0.3}));
    CHECK(cone_contains(gens, {0, 0}));
    CHECK_FALSE(cone_contains(gens, {1, 0}));
    CHECK_FALSE(cone_contains(gens, {0.7, 0.7}));
    CHECK(cone_contains({}, {0, 0}));
    CHECK_FALSE(cone_contains({}, {0, 1e-3}));
}

TEST_CASE("cone report") {
    Cutoff eta{0.5};
    const std::vector<std::vector<double>> dirs = {{0, 1}, {0, -1}, {1, 0}, {-1, 0}};

    SUBCASE("smooth samples give an empty cone") {
        SampledFunction u = bump_2d(129);
        auto rep = cone_report(u, eta, {0, 0}, dirs, kScales, 1.0);
        CHECK(rep.cone_generators.empty());
        CHECK_FALSE(rep.levi_checked);
        for (const auto& p : rep.profiles) CHECK(p.classification == Decay::rapid);
    }

    SUBCASE("jump gives both normal directions and respects a prediction") {
        SampledFunction u = heaviside_2d();
        auto rep = cone_report(u, eta, {0, 0}, dirs, kScales, 1.0);
        REQUIRE(rep.cone_generators.size() == 2);
        CHECK(cone_contains(rep.cone_generators, {0, 1}));
        CHECK(cone_contains(rep.cone_generators, {0, -1}));
        CHECK_FALSE(cone_contains(rep.cone_generators, {1, 0}));

        LeviSides both{true, true};
        auto ok = cone_report(u, eta, {0, 0}, dirs, kScales, 1.0, &both);
        CHECK(ok.levi_checked);
        CHECK(ok.levi_consistent);

        LeviSides plus_banned{false, true};
        auto bad = cone_report(u, eta, {0, 0}, dirs, kScales, 1.0, &plus_banned);
        CHECK(bad.levi_checked);
        CHECK_FALSE(bad.levi_consistent);
    }

    SUBCASE("one-sided edge keeps only the positive normal direction") {
        SampledFunction u = heisenberg_3d();
        Cutoff small{0.3};
        const std::vector<std::vector<double>> d3 = {{0, 0, 1}, {0, 0, -1}};
        LeviSides pred{true, false};
        auto rep = cone_report(u, small, {0, 0, 0}, d3, kScales, 1.0, &pred);
        REQUIRE(rep.cone_generators.size() == 1);
        CHECK(rep.cone_generators[0][2] == doctest::Approx(1.0));
        CHECK(rep.levi_consistent);
    }
}
