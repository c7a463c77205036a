#pragma once

#include "bnls/field.hpp"
#include "bnls/littlewood_paley.hpp"
#include "bnls/report.hpp"

#include <complex>
#include <functional>
#include <utility>
#include <vector>

namespace bnls {

/// Free biharmonic flow: frequency multiplier e^{i t k^4} (the convention in
/// which i u_t + Lap^2 u = 0 evolves spectra by e^{+i t k^4}).
SpectralField free_evolve(const SpectralField& fhat, double t);
RadialField free_evolve(const RadialField& f, double t, bool* truncation_warned = nullptr);

/// Smooth frequency envelope g(k) on [k_lo, k_hi]; the driver for the
/// grid-free evaluation of e^{i t Lap^2} data at large times.
struct SpectrumProfile {
    std::function<std::complex<double>(double)> g;
    double k_lo = 0.0;
    double k_hi = 0.0;
};

/// Envelope interpolated from a sampled field's spectrum.
SpectrumProfile profile_from_field(const RadialField& f);

/// Pointwise value of (d/dr)^alpha e^{i t Lap^2} f at radius r from the
/// 1-d frequency integral; grid-free, valid for any t > 0. Bessel kernels are
/// split into wave envelopes so the cost is set by the stationary-phase
/// structure, not by the cycle count.
std::complex<double> evolved_value(const SpectrumProfile& prof, int n, double t, double r, int alpha = 0,
                                   double* err_out = nullptr);

/// Sup-norm of the evolved field over a radius scan adapted to the dispersive
/// ray geometry; returns the located maximum (and its radius if requested).
double evolved_sup(const SpectrumProfile& prof, int n, double t, int alpha = 0,
                   double* argmax_r = nullptr, int workers = 0);

struct PropagatorJob {
    RadialField data;
    std::vector<double> times; // positive, sorted
    int derivative_order = 0;
};

/// Sup-norm decay fit against t^{-(n+alpha)/4}.
ExperimentReport dispersive_fit(const PropagatorJob& job, int workers = 0);

/// Band-localized decay: per-K time slope (target -n/2) and cross-K prefactor
/// ratios (target K^{-n}); data is the band projection of `f`, L1-normalized.
ExperimentReport localized_dispersive_check(const RadialField& f, const std::vector<Dyadic>& Ks,
                                            const std::vector<double>& t_list, int workers = 0);

/// Space-time norm (int ||u(t)||_r^q dt)^{1/q} over a sampled trajectory by
/// composite trapezoid; q = inf gives the max. Throws unless (q,r) is
/// B-admissible in dimension n.
double strichartz_norm(const std::vector<std::pair<double, RadialField>>& traj, Exponent q,
                       Exponent r);

} // namespace bnls
