#include "crlab/fbi.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <thread>

namespace crlab {

namespace {

size_t product_of_counts(const std::vector<GridAxis>& axes) {
    size_t p = 1;
    for (const auto& a : axes) p *= a.count;
    return p;
}

void validate_axes(const std::vector<GridAxis>& axes) {
    if (axes.empty()) throw input_error("a sample grid needs at least one axis");
    for (const auto& a : axes) {
        if (a.count < 2) throw input_error("each grid axis needs at least two samples");
        if (!(a.hi > a.lo)) throw input_error("each grid axis needs hi > lo");
    }
}

}  // namespace

SampledFunction::SampledFunction(std::vector<GridAxis> axes,
                                 std::vector<std::complex<double>> samples)
    : axes_(std::move(axes)), samples_(std::move(samples)) {
    validate_axes(axes_);
    if (samples_.size() != product_of_counts(axes_))
        throw input_error("sample array size does not match the grid");
}

SampledFunction::SampledFunction(std::vector<GridAxis> axes, Generator generator)
    : axes_(std::move(axes)), generator_(std::move(generator)) {
    validate_axes(axes_);
    if (!generator_) throw input_error("sample generator must be callable");
}

double SampledFunction::spacing(size_t axis) const {
    const GridAxis& a = axes_.at(axis);
    return (a.hi - a.lo) / static_cast<double>(a.count - 1);
}

double SampledFunction::coord(size_t axis, size_t i) const {
    return axes_.at(axis).lo + spacing(axis) * static_cast<double>(i);
}

std::complex<double> SampledFunction::value(size_t flat,
                                            const std::vector<double>& coords) const {
    if (stored()) return samples_[flat];
    return generator_(coords);
}

double Cutoff::value(double rho2) const {
    const double r2_in = r * r;
    const double r2_out = 2.0 * r * r;
    const double s = (rho2 - r2_in) / (r2_out - r2_in);
    if (s <= 0.0) return 1.0;
    if (s >= 1.0) return 0.0;
    auto h = [](double x) { return std::exp(-1.0 / x); };
    return h(1.0 - s) / (h(s) + h(1.0 - s));
}

unsigned probe_thread_count() {
    if (const char* env = std::getenv("CRLAB_THREADS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && v >= 1) return static_cast<unsigned>(std::min(v, 64L));
        return 1;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

namespace {

// One pass over the grid accumulating every scale at once.  Slabs along the
// first axis are independent; partial sums are merged in slab order, so the
// result does not depend on how slabs are assigned to threads.
std::vector<std::complex<double>> sweep_engine(const SampledFunction& u, const Cutoff& eta,
                                               const std::vector<double>& probe,
                                               const std::vector<double>& direction,
                                               const std::vector<double>& scales,
                                               double k_damp) {
    if (k_damp <= 0.0) throw input_error("damping constant must be positive");
    if (eta.r <= 0.0) throw input_error("cutoff radius must be positive");
    const size_t d = u.dim();
    if (probe.size() != d) throw input_error("probe point dimension does not match the grid");
    if (direction.size() != d)
        throw input_error("frequency dimension does not match the grid");
    if (scales.empty()) throw input_error("at least one scale is required");
    for (size_t a = 0; a < d; ++a)
        if (probe[a] < u.axes()[a].lo || probe[a] > u.axes()[a].hi)
            throw input_error("probe point outside the sample grid");

    double dir_norm2 = 0.0;
    for (double c : direction) dir_norm2 += c * c;
    const double dir_norm = std::sqrt(dir_norm2);

    // Per-axis coordinate and trapezoid-weight tables.
    std::vector<std::vector<double>> xs(d), ws(d);
    for (size_t a = 0; a < d; ++a) {
        const size_t c = u.axes()[a].count;
        xs[a].resize(c);
        ws[a].assign(c, 1.0);
        ws[a].front() = ws[a].back() = 0.5;
        for (size_t i = 0; i < c; ++i) xs[a][i] = u.coord(a, i);
    }
    const double supp2 = 2.0 * eta.r * eta.r;

    size_t inner = 1;
    for (size_t a = 1; a < d; ++a) inner *= u.axes()[a].count;
    const size_t slabs = u.axes()[0].count;
    const size_t ns = scales.size();

    auto run_slab = [&](size_t i0, std::vector<std::complex<double>>& acc) {
        acc.assign(ns, {0.0, 0.0});
        const double dx0 = xs[0][i0] - probe[0];
        const double dx0_2 = dx0 * dx0;
        if (dx0_2 > supp2) return;

        std::vector<size_t> idx(d, 0);
        idx[0] = i0;
        std::vector<double> coords(d);
        coords[0] = xs[0][i0];
        for (size_t a = 1; a < d; ++a) coords[a] = xs[a][0];
        size_t flat = i0 * inner;

        for (size_t step = 0; step < inner; ++step, ++flat) {
            double rho2 = dx0_2;
            double dot = direction[0] * (-dx0);
            double w = ws[0][i0];
            for (size_t a = 1; a < d; ++a) {
                const double dx = coords[a] - probe[a];
                rho2 += dx * dx;
                dot += direction[a] * (-dx);
                w *= ws[a][idx[a]];
            }
            if (rho2 <= supp2) {
                const double etav = eta.value(rho2);
                if (etav != 0.0) {
                    const std::complex<double> uv = u.value(flat, coords);
                    if (uv != std::complex<double>(0.0, 0.0)) {
                        // exponent per unit scale; doubling scales reuse the
                        // previous factor by squaring.
                        const std::complex<double> q(-k_damp * dir_norm * rho2, dot);
                        const std::complex<double> wu = (w * etav) * uv;
                        std::complex<double> e = std::exp(scales[0] * q);
                        acc[0] += wu * e;
                        for (size_t j = 1; j < ns; ++j) {
                            if (scales[j] == 2.0 * scales[j - 1])
                                e *= e;
                            else
                                e = std::exp(scales[j] * q);
                            acc[j] += wu * e;
                        }
                    }
                }
            }
            // Odometer over axes 1..d-1, last axis fastest.
            for (size_t a = d; a-- > 1;) {
                if (++idx[a] < u.axes()[a].count) {
                    coords[a] = xs[a][idx[a]];
                    break;
                }
                idx[a] = 0;
                coords[a] = xs[a][0];
            }
        }
    };

    std::vector<std::vector<std::complex<double>>> partial(slabs);
    const unsigned want = std::min<unsigned>(probe_thread_count(),
                                             static_cast<unsigned>(slabs));
    if (want <= 1) {
        for (size_t i0 = 0; i0 < slabs; ++i0) run_slab(i0, partial[i0]);
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < want; ++t)
            pool.emplace_back([&, t] {
                for (size_t i0 = t; i0 < slabs; i0 += want) run_slab(i0, partial[i0]);
            });
        for (auto& th : pool) th.join();
    }

    double cell = 1.0;
    for (size_t a = 0; a < d; ++a) cell *= u.spacing(a);
    std::vector<std::complex<double>> out(ns, {0.0, 0.0});
    for (size_t i0 = 0; i0 < slabs; ++i0)
        for (size_t j = 0; j < ns; ++j) out[j] += partial[i0][j];
    for (auto& v : out) v *= cell;
    return out;
}

}  // namespace

std::complex<double> fbi_transform(const SampledFunction& u, const Cutoff& eta,
                                   const std::vector<double>& probe,
                                   const std::vector<double>& frequency, double k_damp) {
    return sweep_engine(u, eta, probe, frequency, {1.0}, k_damp)[0];
}

std::vector<double> fbi_scale_sweep(const SampledFunction& u, const Cutoff& eta,
                                    const std::vector<double>& probe,
                                    const std::vector<double>& direction,
                                    const std::vector<double>& scales, double k_damp) {
    auto vals = sweep_engine(u, eta, probe, direction, scales, k_damp);
    std::vector<double> mags(vals.size());
    for (size_t j = 0; j < vals.size(); ++j) mags[j] = std::abs(vals[j]);
    return mags;
}

const char* to_string(Decay d) {
    switch (d) {
        case Decay::rapid: return "rapid";
        case Decay::slow: return "slow";
        default: return "inconclusive";
    }
}

namespace {

// Least squares y = a + b x; returns {b, sum of squared residuals}.
std::pair<double, double> ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    const double b = sxx > 0.0 ? sxy / sxx : 0.0;
    const double a = my - b * mx;
    double resid = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        const double e = y[i] - a - b * x[i];
        resid += e * e;
    }
    return {b, resid};
}

}  // namespace

DecayProfile classify_decay(std::vector<double> direction, std::vector<double> scales,
                            std::vector<double> magnitudes, DecayThresholds th) {
    if (scales.size() != magnitudes.size())
        throw input_error("one magnitude per scale is required");
    DecayProfile p;
    p.direction = std::move(direction);
    p.scales = std::move(scales);
    p.magnitudes = std::move(magnitudes);
    p.thresholds = th;

    double mx = 0.0;
    for (double m : p.magnitudes) mx = std::max(mx, m);
    if (mx <= 1e-300) {
        p.floor_flag = true;
        p.classification = Decay::rapid;
        return p;
    }

    std::vector<double> xs_poly, xs_exp, ys;
    for (size_t i = 0; i < p.magnitudes.size(); ++i) {
        if (p.magnitudes[i] < th.rel_floor * mx) continue;
        xs_poly.push_back(-std::log(p.scales[i]));
        xs_exp.push_back(-p.scales[i]);
        ys.push_back(std::log(p.magnitudes[i]));
    }
    p.used_samples = ys.size();
    if (p.used_samples <= 2) {
        p.floor_flag = true;
        p.classification = Decay::rapid;
        return p;
    }

    auto [b_poly, r_poly] = ls_slope(xs_poly, ys);
    auto [b_exp, r_exp] = ls_slope(xs_exp, ys);
    p.poly_order = b_poly;
    p.exp_rate = b_exp;
    p.resid_poly = r_poly;
    p.resid_exp = r_exp;
    p.exponential_fit_preferred = r_exp < r_poly;

    if (p.exponential_fit_preferred || p.poly_order >= th.rapid_min)
        p.classification = Decay::rapid;
    else if (p.poly_order <= th.slow_max)
        p.classification = Decay::slow;
    else
        p.classification = Decay::inconclusive;
    return p;
}

DecayProfile decay_profile(const SampledFunction& u, const Cutoff& eta,
                           const std::vector<double>& probe,
                           const std::vector<double>& direction,
                           const std::vector<double>& scales, double k_damp,
                           DecayThresholds th) {
    if (scales.size() < 6)
        throw input_error("a decay profile needs at least six scales");
    for (size_t i = 1; i < scales.size(); ++i)
        if (!(scales[i] > scales[i - 1]))
            throw input_error("scales must be strictly increasing");
    double n2 = 0.0;
    for (double c : direction) n2 += c * c;
    if (n2 <= 0.0) throw input_error("direction must be nonzero");
    std::vector<double> unit(direction);
    const double inv = 1.0 / std::sqrt(n2);
    for (double& c : unit) c *= inv;

    auto mags = fbi_scale_sweep(u, eta, probe, unit, scales, k_damp);
    return classify_decay(std::move(unit), scales, std::move(mags), th);
}

ConeReport cone_report(const SampledFunction& u, const Cutoff& eta,
                       const std::vector<double>& probe,
                       const std::vector<std::vector<double>>& directions,
                       const std::vector<double>& scales, double k_damp,
                       const LeviSides* levi, DecayThresholds th) {
    ConeReport rep;
    for (const auto& dir : directions) {
        rep.profiles.push_back(decay_profile(u, eta, probe, dir, scales, k_damp, th));
        if (rep.profiles.back().classification != Decay::rapid)
            rep.cone_generators.push_back(rep.profiles.back().direction);
    }
    if (levi != nullptr) {
        rep.levi_checked = true;
        for (const auto& prof : rep.profiles) {
            if (prof.classification != Decay::slow) continue;
            bool pure_last = true;
            for (size_t a = 0; a + 1 < prof.direction.size(); ++a)
                if (std::abs(prof.direction[a]) > 1e-12) pure_last = false;
            if (!pure_last) continue;
            const double tau = prof.direction.back();
            if (tau > 0.0 && !levi->plus_allowed) rep.levi_consistent = false;
            if (tau < 0.0 && !levi->minus_allowed) rep.levi_consistent = false;
        }
    }
    return rep;
}

bool cone_contains(const std::vector<std::vector<double>>& generators,
                   const std::vector<double>& v, double tol) {
    double vn2 = 0.0;
    for (double c : v) vn2 += c * c;
    if (generators.empty()) return std::sqrt(vn2) <= tol;
    const size_t d = v.size();
    const size_t m = generators.size();
    for (const auto& g : generators)
        if (g.size() != d) throw input_error("cone generators must match the vector dimension");

    // Projected-gradient nonnegative least squares on the generator weights.
    double lip = 0.0;
    for (const auto& g : generators)
        for (double c : g) lip += c * c;
    if (lip <= 0.0) return std::sqrt(vn2) <= tol;
    const double step = 1.0 / lip;

    std::vector<double> c(m, 0.0), res(d, 0.0);
    for (int it = 0; it < 20000; ++it) {
        for (size_t a = 0; a < d; ++a) {
            res[a] = -v[a];
            for (size_t j = 0; j < m; ++j) res[a] += generators[j][a] * c[j];
        }
        for (size_t j = 0; j < m; ++j) {
            double g = 0.0;
            for (size_t a = 0; a < d; ++a) g += generators[j][a] * res[a];
            c[j] = std::max(0.0, c[j] - step * g);
        }
    }
    double r2 = 0.0;
    for (size_t a = 0; a < d; ++a) {
        res[a] = -v[a];
        for (size_t j = 0; j < m; ++j) res[a] += generators[j][a] * c[j];
        r2 += res[a] * res[a];
    }
    return std::sqrt(r2) <= tol * std::max(1.0, std::sqrt(vn2));
}

std::complex<double> builtin_sample(const std::string& name,
                                    const std::vector<double>& params,
                                    const std::vector<double>& x) {
    if (name == "zero") return {0.0, 0.0};
    if (name == "gaussian") {
        const double s = params.empty() ? 0.25 : params[0];
        double r2 = 0.0;
        for (size_t a = 0; a < x.size(); ++a) {
            const double c = a + 1 < params.size() ? params[a + 1] : 0.0;
            r2 += (x[a] - c) * (x[a] - c);
        }
        return {std::exp(-r2 / (s * s)), 0.0};
    }
    if (name == "bump") {
        const double big_r = params.empty() ? 0.4 : params[0];
        double r2 = 0.0;
        for (double c : x) r2 += c * c;
        const double s = r2 / (big_r * big_r);
        if (s >= 1.0) return {0.0, 0.0};
        return {std::exp(-1.0 / (1.0 - s)), 0.0};
    }
    if (name == "heaviside") return {x.back() > 0.0 ? 1.0 : 0.0, 0.0};
    if (name == "plane_wave") {
        double dot = 0.0;
        for (size_t a = 0; a < x.size() && a < params.size(); ++a) dot += params[a] * x[a];
        return std::exp(std::complex<double>(0.0, dot));
    }
    if (name == "heisenberg_sqrt") {
        double q = 0.0;
        for (size_t a = 0; a + 1 < x.size(); ++a) q += x[a] * x[a];
        return std::sqrt(std::complex<double>(x.back(), q));
    }
    throw input_error("unknown built-in sample function: " + name);
}

SampledFunction make_builtin(const std::string& name, std::vector<double> params,
                             std::vector<GridAxis> axes) {
    // Validate the name eagerly so bad manifests fail at parse time.
    builtin_sample(name, params, std::vector<double>(axes.empty() ? 1 : axes.size(), 0.0));
    return SampledFunction(std::move(axes),
                           [name, params](const std::vector<double>& x) {
                               return builtin_sample(name, params, x);
                           });
}

}  // namespace crlab
