#include "bnls/bipolar.hpp"

#include "bnls/bessel.hpp"
#include "bnls/errors.hpp"
#include "bnls/quadrature.hpp"

#include <cmath>
#include <limits>

namespace bnls {

double heron_area(double rho, double sigma, double z_norm)
{
    const double a = rho + sigma + z_norm;
    const double b = rho + sigma - z_norm;
    const double c = rho - sigma + z_norm;
    const double d = -rho + sigma + z_norm;
    const double scale = std::max({1.0, a * a * a * a});
    double rad = a * b * c * d;
    if (rad < 0.0) {
        if (rad < -1e-14 * scale)
            throw std::domain_error("heron_area: point outside the admissible region");
        rad = 0.0;
    }
    return 0.25 * std::sqrt(rad);
}

Region classify_region(const BipolarPoint& p, double z_norm, const RegionOptions& opt)
{
    const double z = z_norm;
    const double s1 = p.rho - p.sigma - z;  // side 1: rho - sigma = |z|
    const double s2 = p.rho + p.sigma - z;  // side 2: rho + sigma = |z|
    const double s3 = p.sigma - p.rho - z;  // side 3: sigma - rho = |z|
    const double tol = opt.boundary_tol * std::max(1.0, z);
    if (std::abs(s1) <= tol) return Region::boundary_side1;
    if (std::abs(s2) <= tol) return Region::boundary_side2;
    if (std::abs(s3) <= tol) return Region::boundary_side3;
    if (s1 > 0.0 || s2 < 0.0 || s3 > 0.0) return Region::outside;
    if (p.rho >= opt.threshold * z && p.sigma >= opt.threshold * z) return Region::Ra;
    return Region::Rb;
}

BipolarResult bipolar_integral(const std::function<cplx(double, double)>& f, double z_norm,
                               int n, double u_max, const BipolarQuadratureOptions& opt)
{
    if (n < 3) throw std::invalid_argument("bipolar_integral: n >= 3 required");
    if (!(z_norm > 0.0)) throw std::invalid_argument("bipolar_integral: |z| > 0 required");
    if (!(u_max > 0.0)) return {};

    const double z = z_norm;
    const double half_pow = 0.5 * (n - 3); // Heron factor exponent
    // measure: |S^{n-2}| (rho sigma / z) (2A/z)^{n-3} drho dsigma with
    // 2A/z = sqrt(u (u + 2z) v (1-v)) in the coordinates
    //   rho = u/2 + v z, sigma = u/2 + (1-v) z,  drho dsigma = z du dv,
    // so the z factors cancel and the constant is |S^{n-2}| alone.
    const GaussRule& ang = gauss_legendre(opt.angular_order);

    // inner integral across the strip at fixed u, in v = sin^2(chi)
    auto strip = [&](double u) {
        cplx acc(0.0, 0.0);
        for (int i = 0; i < ang.nodes.size(); ++i) {
            const double chi = 0.25 * M_PI * (ang.nodes[i] + 1.0); // chi in [0, pi/2]
            const double s = std::sin(chi), c = std::cos(chi);
            const double v = s * s;
            const double rho = 0.5 * u + v * z;
            const double sigma = 0.5 * u + (1.0 - v) * z;
            // (v(1-v))^{(n-3)/2} dv = 2 (s c)^{n-2} dchi
            const double vw = 2.0 * std::pow(s * c, n - 2);
            acc += ang.weights[i] * 0.25 * M_PI * vw * f(rho, sigma) * rho * sigma;
        }
        const double ufac = std::pow(u * (u + 2.0 * z), half_pow);
        return acc * ufac;
    };

    // outer in u with the sqrt grading u = tau^2
    auto outer = [&](double tau) { return strip(tau * tau) * 2.0 * tau; };
    bool exhausted = false;
    cplx val =
        integrate_adaptive(outer, 0.0, std::sqrt(u_max), opt.tol, opt.max_depth, &exhausted);

    BipolarResult out;
    out.value = sphere_area(n - 1) * val;
    out.converged = !exhausted;
    return out;
}

namespace {
// C-infinity step: 0 for t <= 0, 1 for t >= 1 (same transition as the
// frequency bumps)
double smooth_step(double t)
{
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    const double a = std::exp(-1.0 / t);
    const double b = std::exp(-1.0 / (1.0 - t));
    return a / (a + b);
}
} // namespace

double SmoothCutoff::distance(double rho) const
{
    double d = std::numeric_limits<double>::infinity();
    for (double c : centers) d = std::min(d, std::abs(rho - c));
    return d;
}

double SmoothCutoff::operator()(double rho) const
{
    if (centers.empty()) return 0.0;
    const double d = distance(rho);
    // 1 for d <= 1/mu, 0 for d >= 2/mu
    return 1.0 - smooth_step(d * mu - 1.0);
}

} // namespace bnls
