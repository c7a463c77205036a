#pragma once

#include <Eigen/Dense>
#include <complex>

namespace bnls {

/// Natural cubic spline on strictly increasing nodes; O(h^4) in the interior.
class CubicSpline {
public:
    CubicSpline() = default;
    CubicSpline(Eigen::VectorXd x, Eigen::VectorXd y);

    double operator()(double xq) const;
    double derivative(double xq) const;
    double x_min() const { return x_.size() ? x_[0] : 0.0; }
    double x_max() const { return x_.size() ? x_[x_.size() - 1] : 0.0; }

private:
    Eigen::VectorXd x_, y_, m_; // m_ = second derivatives at nodes
    int locate(double xq) const;
};

/// Complex-valued spline as two real splines.
class CubicSplineC {
public:
    CubicSplineC() = default;
    CubicSplineC(const Eigen::VectorXd& x, const Eigen::VectorXcd& y);
    std::complex<double> operator()(double xq) const { return {re_(xq), im_(xq)}; }

private:
    CubicSpline re_, im_;
};

} // namespace bnls
