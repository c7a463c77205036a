#include "bnls/littlewood_paley.hpp"

#include "bnls/errors.hpp"

#include <algorithm>
#include <cmath>

namespace bnls {

Dyadic::Dyadic(int e)
{
    log2 = std::clamp(e, -30, 30);
}

double Dyadic::value() const
{
    return std::ldexp(1.0, log2);
}

namespace {
// C-infinity step: 0 for t <= 0, 1 for t >= 1
double smooth_step(double t)
{
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    const double a = std::exp(-1.0 / t);
    const double b = std::exp(-1.0 / (1.0 - t));
    return a / (a + b);
}
} // namespace

double BumpPair::phi(double xi) const
{
    xi = std::abs(xi);
    if (xi <= 1.0) return 1.0;
    if (xi >= 2.0) return 0.0;
    return 1.0 - smooth_step(xi - 1.0);
}

double BumpPair::psi(double xi) const
{
    return phi(xi) - phi(2.0 * xi);
}

double DyadicProjector::multiplier(double k) const
{
    const double xi = k / N.value();
    switch (kind) {
    case ProjectorKind::leq: return bump.phi(xi);
    case ProjectorKind::band: return bump.psi(xi);
    case ProjectorKind::gt: return 1.0 - bump.phi(xi);
    }
    return 0.0;
}

SpectralField apply_projector(const DyadicProjector& P, const SpectralField& fhat)
{
    SpectralField out = fhat;
    const auto& k = fhat.plan->frequency_grid().nodes;
    for (int i = 0; i < fhat.plan->size(); ++i) out.values[i] *= P.multiplier(k[i]);
    return out;
}

RadialField apply_projector(const DyadicProjector& P, const RadialField& f)
{
    return inverse_radial_fourier(apply_projector(P, radial_fourier(f)));
}

SpectralField band_restrict(const SpectralField& vhat, Dyadic N)
{
    // phi(k/N) - phi(2Nk): passes [1/(2N)-ish, 2N], flat on [1/N, N]
    SpectralField out = vhat;
    BumpPair bump;
    const double Nv = N.value();
    const auto& k = vhat.plan->frequency_grid().nodes;
    for (int i = 0; i < vhat.plan->size(); ++i)
        out.values[i] *= bump.phi(k[i] / Nv) - bump.phi(2.0 * Nv * k[i]);
    return out;
}

RadialField band_restrict(const RadialField& v, Dyadic N)
{
    return inverse_radial_fourier(band_restrict(radial_fourier(v), N));
}

ExperimentReport frequency_profile(const RadialField& v, const std::vector<Dyadic>& scales)
{
    if (scales.size() < 4) throw fit_error("frequency_profile: need at least 4 scales");
    for (size_t i = 1; i < scales.size(); ++i)
        if (scales[i].log2 <= scales[i - 1].log2)
            throw fit_error("frequency_profile: scales must be sorted increasing");

    SpectralField vhat = radial_fourier(v);
    ExperimentReport rep;
    rep.experiment = "frequency-profile";
    rep.columns = {"N", "low_norm", "high_norm"};

    std::vector<double> hi_n, hi_norm;
    for (const Dyadic& N : scales) {
        DyadicProjector low{BumpPair{}, N, ProjectorKind::leq};
        // P_{>=N}: kill everything below N/2, keep everything above N
        DyadicProjector high{BumpPair{}, Dyadic(N.log2 - 1), ProjectorKind::gt};
        const double low_norm = sobolev_norm(apply_projector(low, vhat), 2.0);
        const double high_norm = sobolev_norm(apply_projector(high, vhat), 2.0);
        rep.add_row({N.value(), low_norm, high_norm});
        if (N.log2 >= 0 && high_norm > 0.0) {
            hi_n.push_back(N.value());
            hi_norm.push_back(high_norm);
        }
    }

    if (hi_n.size() >= 4) {
        LineFit fit = fit_loglog(hi_n, hi_norm);
        rep.scalars["eta_fitted"] = -fit.slope;
        rep.scalars["high_tail_r2"] = fit.r_squared;
    }
    rep.notes["definition"] = "high_norm = ||P_{>=N} v||_{H2}, low_norm = ||P_{<=N} v||_{H2}";
    return rep;
}

} // namespace bnls
