#pragma once

#include <complex>
#include <vector>

namespace bnls {

using cplx = std::complex<double>;

/// Scaled Bessel function b_nu(x) = J_nu(x) / x^nu, entire and even in x.
/// This is the radial plane-wave average in R^n for nu = (n-2)/2 (up to a
/// constant), and the natural kernel for radial Fourier work: all transforms
/// in this project consume this form so the dimension enters only through nu.
double scaled_bessel_j(double nu, double x);

/// d/dx of b_nu(x); uses d/dx [x^{-nu} J_nu] = -x^{-nu} J_{nu+1}, i.e.
/// b_nu'(x) = -x * b_{nu+1}(x).
double scaled_bessel_j_deriv(double nu, double x);

/// J_nu(x) for x > 0, nu >= -1/2; dispatches to closed forms for half-integer
/// orders and to the library implementation otherwise.
double bessel_j(double nu, double x);

/// First `count` positive zeros of J_nu (nu >= -1/2), strictly increasing.
std::vector<double> bessel_j_zeros(double nu, int count);

/// Surface measure of the unit (n-1)-sphere in R^n: 2 pi^{n/2} / Gamma(n/2).
double sphere_area(int n);

/// Outgoing-wave envelope for half-integer orders: for nu = l + 1/2,
///   b_nu(x) = Re[ hankel_envelope(l, x) * exp(i x) ]  (real x >= split threshold),
/// i.e. the smooth (non-oscillatory) coefficient R(x) with
///   h_l^{(1)}(x) = R(x) exp(i x),   b_nu(x) = sqrt(2/pi) * j_l(x) / x^l,
/// so b_nu = sqrt(2/pi) x^{-l} (R e^{ix} + conj(R) e^{-ix})/2.
/// Computed by the stable upward three-term recurrence.
cplx spherical_hankel_envelope(int l, double x);

/// True if nu is (numerically) a half-integer l + 1/2 with integer l >= 0.
bool is_half_integer(double nu);

/// Incoming-wave envelope: h_l^{(2)}(z) = R2(z) exp(-i z); same recurrence as
/// the outgoing one. Valid for complex z away from 0.
cplx spherical_hankel_envelope2(int l, cplx z);
cplx spherical_hankel_envelope(int l, cplx z);

/// b_nu at complex argument (half-integer nu only for |z| beyond the series
/// radius); used on rotated integration contours.
cplx scaled_bessel_j_cplx(double nu, cplx z);

} // namespace bnls
