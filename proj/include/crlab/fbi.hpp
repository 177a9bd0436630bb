#pragma once

// Numerical directional-decay probe on gridded functions over R^{n0+1}: a
// Gaussian-damped directional transform evaluated on a uniform tensor grid,
// a scale sweep along a frequency ray, least-squares classification of the
// magnitude decay (rapid / slow / inconclusive), and a per-direction cone
// report.  All quadrature is plain trapezoid; sums run in fixed grid order,
// so results are deterministic and independent of the thread count.

#include "crlab/rational.hpp"

#include <complex>
#include <functional>
#include <string>
#include <vector>

namespace crlab {

struct GridAxis {
    double lo = -1.0;
    double hi = 1.0;
    size_t count = 2;  // uniform samples including both endpoints
};

// Complex samples on a uniform grid; either stored (row-major, last axis
// fastest) or produced on demand by a generator, which keeps refinement runs
// at large resolutions out of memory.
class SampledFunction {
public:
    using Generator = std::function<std::complex<double>(const std::vector<double>&)>;

    SampledFunction(std::vector<GridAxis> axes, std::vector<std::complex<double>> samples);
    SampledFunction(std::vector<GridAxis> axes, Generator generator);

    size_t dim() const { return axes_.size(); }
    const std::vector<GridAxis>& axes() const { return axes_; }
    double spacing(size_t axis) const;
    double coord(size_t axis, size_t i) const;
    bool stored() const { return !samples_.empty(); }
    const std::vector<std::complex<double>>& samples() const { return samples_; }

    // Value at a grid point; `flat` is the row-major index of `coords`.
    std::complex<double> value(size_t flat, const std::vector<double>& coords) const;

private:
    std::vector<GridAxis> axes_;
    std::vector<std::complex<double>> samples_;
    Generator generator_;
};

// Smooth radial cutoff: 1 for rho <= r, 0 for rho >= sqrt(2) r, a smooth
// monotone bridge in between.
struct Cutoff {
    double r = 0.5;
    double value(double rho2) const;
};

// Trapezoid quadrature of  eta(|x'-p|) u(x') exp(i f.(p-x') - K|f| |x'-p|^2)
// over the grid, for probe point p and frequency vector f.  Deterministic for
// a fixed grid; K must be positive and the probe must lie inside the grid box.
std::complex<double> fbi_transform(const SampledFunction& u, const Cutoff& eta,
                                   const std::vector<double>& probe,
                                   const std::vector<double>& frequency, double k_damp);

// Magnitudes |F| along the ray frequency = scale * direction, one entry per
// scale.  Shares one grid pass across all scales.
std::vector<double> fbi_scale_sweep(const SampledFunction& u, const Cutoff& eta,
                                    const std::vector<double>& probe,
                                    const std::vector<double>& direction,
                                    const std::vector<double>& scales, double k_damp);

enum class Decay { rapid, slow, inconclusive };
const char* to_string(Decay d);

struct DecayThresholds {
    double rel_floor = 3e-5;  // usable-magnitude floor, relative to the max
    double slow_max = 3.0;    // fitted order at or below this: slow
    double rapid_min = 6.0;   // fitted order at or above this: rapid
};

struct DecayProfile {
    std::vector<double> direction;   // unit vector
    std::vector<double> scales;
    std::vector<double> magnitudes;
    double poly_order = 0.0;         // fitted m in |F| ~ scale^-m
    double exp_rate = 0.0;           // fitted c in |F| ~ e^{-c scale}
    double resid_poly = 0.0;         // sum-of-squares fit residuals in log space
    double resid_exp = 0.0;
    size_t used_samples = 0;         // magnitudes above the relative floor
    bool exponential_fit_preferred = false;
    bool floor_flag = false;         // too few usable magnitudes to fit
    Decay classification = Decay::inconclusive;
    DecayThresholds thresholds;      // recorded with every profile
};

// Pure classification of a magnitude sequence; the fit and thresholds are
// the whole contract, so synthetic sequences make exact oracles.
DecayProfile classify_decay(std::vector<double> direction, std::vector<double> scales,
                            std::vector<double> magnitudes, DecayThresholds th = {});

// Sweep + classify along one unit direction.  Scales must be strictly
// increasing with at least 6 entries.
DecayProfile decay_profile(const SampledFunction& u, const Cutoff& eta,
                           const std::vector<double>& probe,
                           const std::vector<double>& direction,
                           const std::vector<double>& scales, double k_damp,
                           DecayThresholds th = {});

// Levi-form prediction for the two signs of the characteristic direction:
// a sign is allowed (may carry wave-front) only when the Levi form at the
// corresponding covector has no negative eigenvalue.
struct LeviSides {
    bool plus_allowed = true;
    bool minus_allowed = true;
};

struct ConeReport {
    std::vector<DecayProfile> profiles;
    // Generators of the convex cone of non-excluded (slow or inconclusive)
    // directions; the conical hull of these is the reported cone.
    std::vector<std::vector<double>> cone_generators;
    bool levi_checked = false;
    bool levi_consistent = true;
};

// Per-direction profiles plus the cone of non-excluded directions.  When a
// Levi prediction is supplied, the pure last-coordinate directions are
// checked against it: a slow direction on a disallowed side flips
// levi_consistent.
ConeReport cone_report(const SampledFunction& u, const Cutoff& eta,
                       const std::vector<double>& probe,
                       const std::vector<std::vector<double>>& directions,
                       const std::vector<double>& scales, double k_damp,
                       const LeviSides* levi = nullptr, DecayThresholds th = {});

// Membership in the conical hull of the generators, decided by a projected
// nonnegative least-squares fit.
bool cone_contains(const std::vector<std::vector<double>>& generators,
                   const std::vector<double>& v, double tol = 1e-9);

// Built-in sample functions for tests and manifest-driven runs:
//   zero            ()                 identically 0
//   gaussian        (s, c...)          exp(-|x-c|^2 / s^2), default center 0
//   bump            (R)                radial smooth bump, support |x| < R
//   heaviside       ()                 1 where the last coordinate is > 0
//   plane_wave      (w...)             exp(i w.x)
//   heisenberg_sqrt ()                 sqrt(x_last + i sum of other coords^2)
std::complex<double> builtin_sample(const std::string& name,
                                    const std::vector<double>& params,
                                    const std::vector<double>& x);
SampledFunction make_builtin(const std::string& name, std::vector<double> params,
                             std::vector<GridAxis> axes);

// Worker count for grid slabs: CRLAB_THREADS when set (clamped to [1,64]),
// else the hardware concurrency.  Results never depend on it.
unsigned probe_thread_count();

}  // namespace crlab
