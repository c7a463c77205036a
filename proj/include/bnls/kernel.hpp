#pragma once

#include "bnls/bipolar.hpp"
#include "bnls/oscillatory.hpp"
#include "bnls/report.hpp"

#include <vector>

namespace bnls {

/// Two-time pairing kernel configuration: times t' < t0 < t'', focus offset
/// |z| > 0, spatial cutoff, dimension. After normalization the first focus
/// sits at the origin and a = (t0 - t') / (t'' - t0) >= 1.
struct KernelConfig {
    double t_prime = 0.0;
    double t0 = 1.0;
    double t_dprime = 2.0;
    double z_norm = 4.0;
    int n = 5;
    SmoothCutoff cutoff;          // the concentration cutoff chi
    bool cutoff_on_far_focus = false; // measure the cutoff from the z-focus

    double tau1() const { return t0 - t_prime; }
    double tau2() const { return t_dprime - t0; }
    double a_ratio() const { return tau1() / tau2(); }
    void validate() const;
};

/// Swap the two time gaps (and the cutoff focus) to enforce a >= 1; the
/// kernel magnitude is invariant under this relabeling.
KernelConfig normalized(KernelConfig cfg);

/// Reduce a collinear two-focus configuration (foci at radii y and z on a
/// common axis, cutoff centers measured from y) to the origin-focus form:
/// only the separation |z - y| enters.
KernelConfig reduce_translation(double t_prime, double t0, double t_dprime, double y, double z,
                                int n, SmoothCutoff cutoff);

struct KernelValue {
    cplx value{0.0, 0.0};
    double table_error = 0.0; // interpolation error bound carried by the tables
};

/// K = (tau1 tau2)^{-n/4} int I((x)/tau1^{1/4}) I((x-z)/tau2^{1/4})
///       (1 - (1-chi)^2)(x) dx, evaluated in two-focus coordinates with the
/// fundamental-solution phases handled analytically and the smooth amplitude
/// pulled from the table. Identically zero when the cutoff vanishes.
KernelValue eval_K(const KernelConfig& cfg, const FundSolTable& table,
                   const BipolarQuadratureOptions& opt = {});

struct KernelDecayOptions {
    BipolarQuadratureOptions quadrature;
    int workers = 0;
};

/// |K| against the separation |t'' - t'| over a dyadic list, t0 bisecting;
/// fits the decay exponent c > 0 (reported, existence asserted only).
ExperimentReport kernel_decay_fit(const KernelConfig& base,
                                  const std::vector<double>& separations,
                                  const FundSolTable& table,
                                  const KernelDecayOptions& opt = {});

} // namespace bnls
