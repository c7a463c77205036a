#pragma once

#include "bnls/report.hpp"
#include "bnls/spline.hpp"

#include <complex>
#include <memory>
#include <string>
#include <vector>

namespace bnls {

using cplx = std::complex<double>;

/// Phase |xi|^4 + xi . x of the biharmonic fundamental solution at radius
/// |x| = x_norm in dimension n.
struct QuarticPhase {
    double x_norm = 0.0;
    int n = 5;
};

/// Signed component along x-hat of the stationary frequency of the phase:
/// xi_st = -x (4|x|^2)^{-1/3} / ... i.e. component -(x_norm/4)^{1/3}.
double stationary_point(double x_norm);

/// |4 |xi_st|^2 xi_st + x| — identically zero in exact arithmetic.
double stationary_gradient_residual(double x_norm);

struct FundSolValue {
    cplx value{0.0, 0.0};
    double err_est = 0.0;
};

/// I(x) = int_{R^n} exp(i(|xi|^4 + xi.x)) dxi, by a ladder of quartically
/// damped integrals extrapolated to zero damping (primary route).
FundSolValue eval_I(double x_norm, int n);

/// Independent evaluation along a rotated contour past the last stationary
/// point (cross-check oracle for eval_I). Odd n only.
FundSolValue eval_I_contour(double x_norm, int n);

/// Modified fundamental solution: I~ = exp(-i xi_st.x) I, i.e. the phase
/// 4^{-1/3}|x|^{4/3} is added to arg I.
FundSolValue eval_I_tilde(double x_norm, int n);

/// Leading stationary-phase amplitude (2pi)^{n/2} |det Hess phi(xi_st)|^{-1/2}
/// with Hessian eigenvalues 12|xi_st|^2 (radial) and 4|xi_st|^2 (tangential).
double stationary_phase_amplitude(double x_norm, int n);

/// Decay-rate measurement of the radial derivatives of I~ over a log grid of
/// |x|. The beta-th derivative is taken along the ray with the stationary
/// phase frozen at the base point (the quotient of I(|x|+h) against the
/// base-point linear phase), which is the object the kernel bounds control;
/// beta = 1 also records the plain derivative of I for contrast.
ExperimentReport radial_derivative_decay(int beta, double x_lo, double x_hi, int n,
                                         int points = 28, int workers = 0);

/// Log-grid table of the fundamental solution with the stationary phase
/// handled analytically: stores the detrended amplitude A = I e^{-i phi_st}
/// (smooth), so interpolation never chases the oscillation.
class FundSolTable {
public:
    FundSolTable(int n, double x_max, int tail_per_decade = 96, int head_points = 120,
                 int workers = 0);

    int dimension() const { return n_; }
    double x_max() const { return x_max_; }
    double table_error() const { return err_; }

    cplx amplitude(double x) const; // A(x), smooth
    cplx I(double x) const;
    cplx I_tilde(double x) const;

    void save_csv(const std::string& path) const;
    static FundSolTable load_csv(const std::string& path);

private:
    FundSolTable() = default;
    void build_splines(const std::vector<double>& xs, const std::vector<cplx>& amps);

    int n_ = 0;
    double x_max_ = 0.0;
    double x_head_ = 1.0;
    double err_ = 0.0;
    cplx at_zero_{0.0, 0.0};
    CubicSplineC head_; // A vs q = x^{4/3} on [0, 1]
    CubicSplineC tail_; // A vs log x on [1, x_max]
    std::vector<double> xs_;
    std::vector<cplx> table_I_, table_It_;
    std::vector<double> errs_;
};

using FundSolTablePtr = std::shared_ptr<const FundSolTable>;

/// Cached shared tables keyed by (n, x_max).
FundSolTablePtr get_fundsol_table(int n, double x_max);

} // namespace bnls
