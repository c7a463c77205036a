#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <vector>

namespace bnls {

using cplx = std::complex<double>;

/// Gauss-Legendre rule on [-1,1]; cached per order.
struct GaussRule {
    Eigen::VectorXd nodes;
    Eigen::VectorXd weights;
};
const GaussRule& gauss_legendre(int order);

/// Adaptive Gauss-Legendre for smooth complex integrands (GL15/GL31 pair).
/// If depth_exhausted is given it is set when any panel hit the subdivision
/// cap before meeting the tolerance.
cplx integrate_adaptive(const std::function<cplx(double)>& f, double a, double b,
                        double tol_abs, int max_depth = 36, bool* depth_exhausted = nullptr);
double integrate_adaptive_real(const std::function<double(double)>& f, double a, double b,
                               double tol_abs, int max_depth = 36);

struct OscResult {
    cplx value{0.0, 0.0};
    double err_est = 0.0;
    long amp_evals = 0; // amplitude evaluations, for cost diagnostics
};

/// Integral of A(x) e^{i phi(x)} over [a,b] with explicit phase.
///
/// Panels where the phase turns few cycles use Gauss-Legendre; long
/// monotone-phase stretches use Levin collocation (oscillation handled
/// analytically, cost independent of cycle count). Stationary points of the
/// phase must be passed in `stat_pts`; a few-cycle neighborhood around each is
/// carved out and resolved directly.
OscResult oscillatory_integral(const std::function<cplx(double)>& amplitude,
                               const std::function<double(double)>& phase,
                               const std::function<double(double)>& dphase,
                               double a, double b,
                               const std::vector<double>& stat_pts,
                               double tol_abs);

/// Single Levin collocation panel for \int_a^b A e^{i phi}: solves
/// p' + i phi' p = A at Chebyshev points, returns boundary evaluation.
cplx levin_panel(const std::function<cplx(double)>& amplitude,
                 const std::function<double(double)>& phase,
                 const std::function<double(double)>& dphase,
                 double a, double b, int ncoll);

} // namespace bnls
