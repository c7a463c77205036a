#include "bnls/spline.hpp"

#include <stdexcept>

namespace bnls {

CubicSpline::CubicSpline(Eigen::VectorXd x, Eigen::VectorXd y) : x_(std::move(x)), y_(std::move(y))
{
    const int n = static_cast<int>(x_.size());
    if (n < 3 || y_.size() != n) throw std::invalid_argument("CubicSpline: need >= 3 nodes");
    // tridiagonal solve for natural second derivatives
    Eigen::VectorXd a(n), b(n), c(n), d(n);
    m_.setZero(n);
    a[0] = 0;
    b[0] = 1;
    c[0] = 0;
    d[0] = 0;
    for (int i = 1; i + 1 < n; ++i) {
        const double h0 = x_[i] - x_[i - 1], h1 = x_[i + 1] - x_[i];
        a[i] = h0 / 6.0;
        b[i] = (h0 + h1) / 3.0;
        c[i] = h1 / 6.0;
        d[i] = (y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0;
    }
    a[n - 1] = 0;
    b[n - 1] = 1;
    c[n - 1] = 0;
    d[n - 1] = 0;
    // Thomas algorithm
    for (int i = 1; i < n; ++i) {
        const double w = a[i] / b[i - 1];
        b[i] -= w * c[i - 1];
        d[i] -= w * d[i - 1];
    }
    m_[n - 1] = d[n - 1] / b[n - 1];
    for (int i = n - 2; i >= 0; --i) m_[i] = (d[i] - c[i] * m_[i + 1]) / b[i];
}

int CubicSpline::locate(double xq) const
{
    const int n = static_cast<int>(x_.size());
    if (xq <= x_[0]) return 0;
    if (xq >= x_[n - 1]) return n - 2;
    int lo = 0, hi = n - 1;
    while (hi - lo > 1) {
        const int mid = (lo + hi) / 2;
        (x_[mid] <= xq ? lo : hi) = mid;
    }
    return lo;
}

double CubicSpline::operator()(double xq) const
{
    const int i = locate(xq);
    const double h = x_[i + 1] - x_[i];
    const double A = (x_[i + 1] - xq) / h, B = (xq - x_[i]) / h;
    return A * y_[i] + B * y_[i + 1] +
           ((A * A * A - A) * m_[i] + (B * B * B - B) * m_[i + 1]) * h * h / 6.0;
}

double CubicSpline::derivative(double xq) const
{
    const int i = locate(xq);
    const double h = x_[i + 1] - x_[i];
    const double A = (x_[i + 1] - xq) / h, B = (xq - x_[i]) / h;
    return (y_[i + 1] - y_[i]) / h +
           ((3 * B * B - 1) * m_[i + 1] - (3 * A * A - 1) * m_[i]) * h / 6.0;
}

CubicSplineC::CubicSplineC(const Eigen::VectorXd& x, const Eigen::VectorXcd& y)
    : re_(x, y.real()), im_(x, y.imag())
{
}

} // namespace bnls
