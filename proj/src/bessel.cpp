#include "bnls/bessel.hpp"

#include <cmath>
#include <stdexcept>

namespace bnls {

namespace {

// Power series of b_nu(x) = sum_m (-1)^m (x/2)^{2m} / (2^nu m! Gamma(nu+m+1)).
// Converges fast for |x| <~ nu + 6; used where J_nu/x^nu would lose digits.
double scaled_series(double nu, double x)
{
    const double q = 0.25 * x * x;
    double term = std::pow(0.5, nu) / std::tgamma(nu + 1.0);
    double sum = term;
    for (int m = 1; m < 60; ++m) {
        term *= -q / (static_cast<double>(m) * (nu + m));
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum) + 1e-300) break;
    }
    return sum;
}

} // namespace

double scaled_bessel_j(double nu, double x)
{
    x = std::abs(x); // b_nu is even
    if (nu == -0.5) return std::sqrt(2.0 / M_PI) * std::cos(x);
    if (x < nu + 6.0 || x < 8.0) return scaled_series(nu, x);
    if (is_half_integer(nu) && nu < 12.0) {
        // closed form via the outgoing-wave envelope; much faster than the
        // library call and uniformly accurate at large argument
        const int l = static_cast<int>(std::llround(nu - 0.5));
        const cplx R = spherical_hankel_envelope(l, x);
        const double jl = R.real() * std::cos(x) - R.imag() * std::sin(x);
        return std::sqrt(2.0 / M_PI) * jl / std::pow(x, static_cast<double>(l));
    }
    return std::cyl_bessel_j(nu, x) / std::pow(x, nu);
}

double scaled_bessel_j_deriv(double nu, double x)
{
    return -x * scaled_bessel_j(nu + 1.0, x);
}

bool is_half_integer(double nu)
{
    const double l = nu - 0.5;
    return l >= -0.25 && std::abs(l - std::round(l)) < 1e-12;
}

cplx spherical_hankel_envelope(int l, double x)
{
    return spherical_hankel_envelope(l, cplx(x, 0.0));
}

cplx spherical_hankel_envelope(int l, cplx z)
{
    // R_l(z) = h_l^{(1)}(z) e^{-iz}; R_0 = -i/z, R_1 = -(z+i)/z^2,
    // R_{l+1} = (2l+1)/z R_l - R_{l-1} (stable upward, |h_l| grows with l).
    const cplx R0 = cplx(0.0, -1.0) / z;
    if (l == 0) return R0;
    const cplx R1 = -(z + cplx(0.0, 1.0)) / (z * z);
    if (l == 1) return R1;
    cplx prev = R0, cur = R1;
    for (int k = 1; k < l; ++k) {
        cplx next = (2.0 * k + 1.0) / z * cur - prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

cplx spherical_hankel_envelope2(int l, cplx z)
{
    // mirror recurrence for h^{(2)}: R2_0 = i/z, R2_1 = (i - z)/z^2
    const cplx R0 = cplx(0.0, 1.0) / z;
    if (l == 0) return R0;
    const cplx R1 = (cplx(0.0, 1.0) - z) / (z * z);
    if (l == 1) return R1;
    cplx prev = R0, cur = R1;
    for (int k = 1; k < l; ++k) {
        cplx next = (2.0 * k + 1.0) / z * cur - prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

cplx scaled_bessel_j_cplx(double nu, cplx z)
{
    if (std::abs(z) <= 12.0) {
        // power series, safe from cancellation inside this radius
        const cplx q = 0.25 * z * z;
        cplx term = std::pow(0.5, nu) / std::tgamma(nu + 1.0);
        cplx sum = term;
        for (int m = 1; m < 80; ++m) {
            term *= -q / (static_cast<double>(m) * (nu + m));
            sum += term;
            if (std::abs(term) < 1e-18 * std::abs(sum) + 1e-300) break;
        }
        return sum;
    }
    if (!is_half_integer(nu) || nu >= 12.0)
        throw std::invalid_argument("scaled_bessel_j_cplx: large complex argument needs half-integer order");
    const int l = static_cast<int>(std::llround(nu - 0.5));
    const cplx eiz = std::exp(cplx(0.0, 1.0) * z);
    const cplx jl = 0.5 * (spherical_hankel_envelope(l, z) * eiz +
                           spherical_hankel_envelope2(l, z) / eiz);
    return std::sqrt(2.0 / M_PI) * jl / std::pow(z, static_cast<double>(l));
}

double bessel_j(double nu, double x)
{
    return scaled_bessel_j(nu, x) * std::pow(x, nu);
}

std::vector<double> bessel_j_zeros(double nu, int count)
{
    if (count < 1) throw std::invalid_argument("bessel_j_zeros: count < 1");
    std::vector<double> zeros;
    zeros.reserve(count);

    auto J = [nu](double x) { return bessel_j(nu, x); };
    auto dJ = [nu](double x) {
        // J_nu' = (nu/x) J_nu - J_{nu+1}
        return (nu / x) * bessel_j(nu, x) - bessel_j(nu + 1.0, x);
    };

    // Scan for sign changes starting past the turning point x ~ nu; bisect
    // each bracket, then polish with a couple of clamped Newton steps.
    double x = std::max(nu + 1e-3, 0.25);
    double fx = J(x);
    const double step = 0.5;
    int guard = 0;
    while (static_cast<int>(zeros.size()) < count && guard++ < 400000) {
        const double x2 = x + step;
        const double f2 = J(x2);
        if (fx * f2 < 0.0) {
            double a = x, b = x2, fa = fx;
            for (int it = 0; it < 70; ++it) {
                const double mid = 0.5 * (a + b);
                const double fm = J(mid);
                if (fa * fm <= 0.0) {
                    b = mid;
                } else {
                    a = mid;
                    fa = fm;
                }
            }
            double root = 0.5 * (a + b);
            for (int it = 0; it < 3; ++it) {
                const double d = dJ(root);
                if (d == 0.0) break;
                const double nxt = root - J(root) / d;
                if (nxt > x && nxt < x2) root = nxt;
            }
            zeros.push_back(root);
        }
        x = x2;
        fx = f2;
    }
    if (static_cast<int>(zeros.size()) < count)
        throw std::runtime_error("bessel_j_zeros: zero scan failed");
    return zeros;
}

double sphere_area(int n)
{
    return 2.0 * std::pow(M_PI, 0.5 * n) / std::tgamma(0.5 * n);
}

} // namespace bnls
