#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace bnls {

using cplx = std::complex<double>;

/// A point in the two-focus coordinate plane: rho = |x|, sigma = |x - z|.
struct BipolarPoint {
    double rho = 0.0;
    double sigma = 0.0;
};

/// Triangle area from the side lengths (rho, sigma, |z|); exactly zero on the
/// collinear boundary, tiny negative radicands (>= -1e-14 relative) clamped.
/// Throws outside the triangle-inequality region.
double heron_area(double rho, double sigma, double z_norm);

enum class Region { Ra, Rb, boundary_side1, boundary_side2, boundary_side3, outside };

struct RegionOptions {
    double threshold = 10.0;     // "much larger than |z|" factor for Ra
    double boundary_tol = 1e-9;  // absolute tolerance picking out the sides
};

/// Region of the (rho, sigma) plane: Ra (both radii >> |z|), Rb (the rest of
/// the admissible region), one of the three boundary sides, or outside.
Region classify_region(const BipolarPoint& p, double z_norm, const RegionOptions& opt = {});

struct BipolarQuadratureOptions {
    double tol = 1e-9;      // absolute tolerance on the outer integral
    int angular_order = 48; // Gauss order across the strip
    int max_depth = 30;
};

struct BipolarResult {
    cplx value{0.0, 0.0};
    bool converged = true;
};

/// Integral of f(rho, sigma) over R^n against the bipolar measure:
///   int_{R^n} f(|x|, |x-z|) dx
///     = 2^{n-3} |S^{n-2}| int int f (rho sigma / |z|) (A/|z|)^{n-3} drho dsigma,
/// taken over u = rho + sigma - |z| in [0, u_max]. The substitutions u = tau^2
/// and v = sin^2(chi) absorb the (n-3)/2-power vanishing of the Heron factor
/// at the boundary, so plain Gauss panels keep their nominal order.
BipolarResult bipolar_integral(const std::function<cplx(double, double)>& f, double z_norm,
                               int n, double u_max, const BipolarQuadratureOptions& opt = {});

/// Smooth radial cutoff: 1 within distance mu^{-1} of a center radius, 0 past
/// 2 mu^{-1}, monotone C-infinity in between; multi-center via the min
/// distance. Derivatives scale like mu^k on the transition band.
struct SmoothCutoff {
    double mu = 1.0;
    std::vector<double> centers{0.0};

    double operator()(double rho) const;
    double distance(double rho) const; // min over centers of |rho - c|
};

} // namespace bnls
