#pragma once

#include "bnls/grid.hpp"
#include "bnls/params.hpp"

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <string>

namespace bnls {

/// Complex radial profile f(r) sampled on a plan's spatial nodes.
struct RadialField {
    PlanPtr plan;
    Eigen::VectorXcd values;

    int dimension() const { return plan->dimension(); }
    const RadialGrid& grid() const { return plan->spatial_grid(); }
    RadialField with_values(Eigen::VectorXcd v) const { return {plan, std::move(v)}; }
};

/// Radial Fourier side: fhat(k) on the plan's frequency nodes.
struct SpectralField {
    PlanPtr plan;
    Eigen::VectorXcd values;

    int dimension() const { return plan->dimension(); }
    const RadialGrid& grid() const { return plan->frequency_grid(); }
};

RadialField sample_field(const PlanPtr& plan, const std::function<std::complex<double>(double)>& f);
SpectralField sample_spectrum(const PlanPtr& plan,
                              const std::function<std::complex<double>(double)>& fhat);

/// Unitary radial Fourier transform (Hankel realization); Plancherel holds to
/// machine precision by plan construction.
SpectralField radial_fourier(const RadialField& f);
RadialField inverse_radial_fourier(const SpectralField& fhat);

/// L^q norm with the full R^n measure: (sigma_{n-1} int |f|^q r^{n-1} dr)^{1/q};
/// q = inf gives the max sampled magnitude.
double lq_norm(const RadialField& f, Exponent q);

enum class SobolevKind { inhomogeneous, homogeneous };

/// H^s norm ||<k>^s fhat||_2 (or ||k^s fhat||_2 for the homogeneous variant).
double sobolev_norm(const RadialField& f, double s,
                    SobolevKind kind = SobolevKind::inhomogeneous);
double sobolev_norm(const SpectralField& fhat, double s,
                    SobolevKind kind = SobolevKind::inhomogeneous);

/// Fraction of the squared mass stored beyond the given radius.
double mass_fraction_beyond(const RadialField& f, double radius);

/// True if more than `threshold` of the mass sits in r > 0.9 r_max.
bool truncation_warning(const RadialField& f, double threshold = 1e-8);

/// CSV snapshot (columns r, Re f, Im f) with a JSON side file (n, r_max, m).
void save_field_csv(const RadialField& f, const std::string& path);
RadialField load_field_csv(const std::string& path);

void require_same_plan(const PlanPtr& a, const PlanPtr& b, const char* where);

} // namespace bnls
