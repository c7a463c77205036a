#include "bnls/grid.hpp"

#include "bnls/bessel.hpp"
#include "bnls/errors.hpp"
#include "bnls/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

namespace bnls {

double RadialGrid::spacing_near(double r) const
{
    const int m = size();
    if (m < 2) return r_max;
    int lo = 0, hi = m - 1;
    while (hi - lo > 1) {
        int mid = (lo + hi) / 2;
        (nodes[mid] < r ? lo : hi) = mid;
    }
    return nodes[hi] - nodes[lo];
}

HankelPlan::HankelPlan(int n, int m, double r_max)
{
    if (n < 1) throw grid_mismatch_error("HankelPlan: n < 1");
    if (m < 64) throw grid_mismatch_error("HankelPlan: m < 64");
    if (!(r_max > 0.0)) throw grid_mismatch_error("HankelPlan: r_max <= 0");

    n_ = n;
    m_ = m;
    nu_ = 0.5 * (n - 2);
    r_max_ = r_max;
    sphere_ = sphere_area(n);

    const std::vector<double> zeros = bessel_j_zeros(nu_, m);
    k_max_ = zeros[m - 1] / r_max;

    frequency_.n = n;
    frequency_.r_max = k_max_;
    frequency_.nodes.resize(m);
    Eigen::VectorXd eta(m); // mode normalizations
    w_frequency_.resize(m);
    spec_scale_.resize(m);
    for (int i = 0; i < m; ++i) {
        const double ki = zeros[i] / r_max;
        frequency_.nodes[i] = ki;
        const double jn = std::abs(bessel_j(nu_ + 1.0, zeros[i]));
        eta[i] = std::sqrt(2.0) / (r_max * jn);
        const double ek = eta[i] * std::pow(ki, nu_);
        w_frequency_[i] = ek * ek;
        spec_scale_[i] = 1.0 / ek;
    }

    // composite Gauss-Legendre spatial nodes: panels sized so products of the
    // two fastest modes are integrated far below 1e-13
    const int gl_order = 64;
    const double prod_cycles = zeros[m - 1] / M_PI; // cycles of J_k_max^2 on [0,R]
    const int panels = std::max(4, static_cast<int>(std::ceil(prod_cycles / 18.0)));
    mq_ = panels * gl_order;
    spatial_.n = n;
    spatial_.r_max = r_max;
    spatial_.nodes.resize(mq_);
    w_radial_.resize(mq_);
    const GaussRule& rule = gauss_legendre(gl_order);
    for (int p = 0; p < panels; ++p) {
        const double a = r_max * p / panels, b = r_max * (p + 1) / panels;
        for (int g = 0; g < gl_order; ++g) {
            const int j = p * gl_order + g;
            const double r = 0.5 * (a + b) + 0.5 * (b - a) * rule.nodes[g];
            spatial_.nodes[j] = r;
            w_radial_[j] = 0.5 * (b - a) * rule.weights[g] * std::pow(r, n - 1);
        }
    }

    // synthesis matrix B_ji = phi_i(r_j), phi_i = eta_i k_i^nu b_nu(k_i r)
    Eigen::MatrixXd B(mq_, m);
    for (int i = 0; i < m; ++i) {
        const double ki = frequency_.nodes[i];
        const double scale = eta[i] * std::pow(ki, nu_);
        for (int j = 0; j < mq_; ++j)
            B(j, i) = scale * scaled_bessel_j(nu_, ki * spatial_.nodes[j]);
    }

    // Gram in the discrete r^{n-1} inner product; continuous orthonormality
    // makes it identity up to quadrature roundoff
    Eigen::MatrixXd G(m, m);
    G.noalias() = B.transpose() * w_radial_.asDiagonal() * B;
    defect_ = (G - Eigen::MatrixXd::Identity(m, m)).cwiseAbs().maxCoeff();
    if (defect_ > 1e-6)
        throw convergence_error("HankelPlan: mode quadrature defect too large");

    // Loewdin: L = G^{-1/2} by Newton-Schulz (G ~ I so this converges fast);
    // synth = B L has exactly orthonormal columns in the discrete product.
    Eigen::MatrixXd L = Eigen::MatrixXd::Identity(m, m);
    for (int it = 0; it < 6; ++it) {
        Eigen::MatrixXd L2 = L * L;
        Eigen::MatrixXd corr = 3.0 * Eigen::MatrixXd::Identity(m, m) - G * L2;
        L = 0.5 * L * corr;
        const double resid = (L * G * L - Eigen::MatrixXd::Identity(m, m)).cwiseAbs().maxCoeff();
        if (resid < 1e-14) break;
        if (it == 5 && resid > 1e-12)
            throw convergence_error("HankelPlan: orthonormalization stalled");
    }
    synth_.noalias() = B * L;
    anal_.noalias() = synth_.transpose() * w_radial_.asDiagonal();
}

Eigen::VectorXcd HankelPlan::to_coeff(const Eigen::VectorXcd& samples) const
{
    Eigen::VectorXcd c(m_);
    c.real() = anal_ * samples.real();
    c.imag() = anal_ * samples.imag();
    return c;
}

Eigen::VectorXcd HankelPlan::to_samples(const Eigen::VectorXcd& coeff) const
{
    Eigen::VectorXcd s(mq_);
    s.real() = synth_ * coeff.real();
    s.imag() = synth_ * coeff.imag();
    return s;
}

Eigen::VectorXcd HankelPlan::forward(const Eigen::VectorXcd& f) const
{
    if (f.size() != mq_) throw grid_mismatch_error("forward: sample count mismatch");
    Eigen::VectorXcd fhat = to_coeff(f);
    fhat.array() *= spec_scale_.array();
    return fhat;
}

Eigen::VectorXcd HankelPlan::inverse(const Eigen::VectorXcd& fhat) const
{
    if (fhat.size() != m_) throw grid_mismatch_error("inverse: mode count mismatch");
    Eigen::VectorXcd c = fhat;
    c.array() /= spec_scale_.array();
    return to_samples(c);
}

std::complex<double> HankelPlan::eval_from_spectrum(const Eigen::VectorXcd& fhat, double r) const
{
    // f(r) = sum_i w_i fhat_i b_nu(k_i r), the band-limited synthesis
    std::complex<double> acc(0.0, 0.0);
    for (int i = 0; i < m_; ++i)
        acc += w_frequency_[i] * scaled_bessel_j(nu_, frequency_.nodes[i] * r) * fhat[i];
    return acc;
}

namespace {
std::map<std::tuple<int, int, long long>, PlanPtr> g_plan_cache;
std::mutex g_plan_mutex;
} // namespace

PlanPtr get_plan(int n, int m, double r_max)
{
    const long long key_r = static_cast<long long>(std::llround(r_max * 1048576.0));
    std::lock_guard<std::mutex> lock(g_plan_mutex);
    auto key = std::make_tuple(n, m, key_r);
    auto it = g_plan_cache.find(key);
    if (it != g_plan_cache.end()) return it->second;
    auto plan = std::make_shared<const HankelPlan>(n, m, r_max);
    g_plan_cache.emplace(key, plan);
    return plan;
}

} // namespace bnls
