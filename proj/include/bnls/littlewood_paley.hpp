#pragma once

#include "bnls/field.hpp"
#include "bnls/report.hpp"

#include <vector>

namespace bnls {

/// Dyadic scale 2^e with e clamped to [-30, 30]; beyond double's useful
/// dynamic range the projectors are numerically trivial.
struct Dyadic {
    int log2 = 0;
    Dyadic() = default;
    explicit Dyadic(int e);
    double value() const;
};

/// Smooth bump pair: phi = 1 on [0,1], 0 on [2,inf), monotone in between via
/// the standard C-infinity transition; psi(xi) = phi(xi) - phi(2 xi) is
/// supported in [1/2, 2] and tiles dyadically.
struct BumpPair {
    double phi(double xi) const;
    double psi(double xi) const;
};

enum class ProjectorKind { leq, band, gt };

struct DyadicProjector {
    BumpPair bump;
    Dyadic N;
    ProjectorKind kind = ProjectorKind::leq;

    double multiplier(double k) const;
};

SpectralField apply_projector(const DyadicProjector& P, const SpectralField& fhat);
RadialField apply_projector(const DyadicProjector& P, const RadialField& f);

/// Band restriction P_{1/N <= |k| <= N} used by the concentration machinery.
RadialField band_restrict(const RadialField& v, Dyadic N);
SpectralField band_restrict(const SpectralField& vhat, Dyadic N);

/// Table of ||P_{>=N} v||_{H^2} for N >= 1 and ||P_{<=N} v||_{H^2} for N <= 1,
/// with a power-law fit of the high tail. Throws fit_error below 4 scales.
ExperimentReport frequency_profile(const RadialField& v, const std::vector<Dyadic>& scales);

} // namespace bnls
