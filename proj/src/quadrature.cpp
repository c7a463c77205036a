#include "bnls/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace bnls {

namespace {

GaussRule make_gauss_legendre(int n)
{
    // Newton on P_n with the Chebyshev-angle initial guess.
    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            pp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        rule.nodes[n - 1 - i] = x;
        rule.weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * pp * pp);
    }
    return rule;
}

std::map<int, GaussRule> g_rules;
std::mutex g_rules_mutex;

cplx gl_apply(const std::function<cplx(double)>& f, double a, double b, const GaussRule& r)
{
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    cplx acc(0.0, 0.0);
    for (int i = 0; i < r.nodes.size(); ++i)
        acc += r.weights[i] * f(mid + half * r.nodes[i]);
    return half * acc;
}

struct AdaptiveCtx {
    const std::function<cplx(double)>* f;
    double tol;
    int max_depth;
    const GaussRule* lo;
    const GaussRule* hi;
    bool* exhausted = nullptr;
};

cplx adaptive_rec(const AdaptiveCtx& ctx, double a, double b, int depth)
{
    cplx coarse = gl_apply(*ctx.f, a, b, *ctx.lo);
    cplx fine = gl_apply(*ctx.f, a, b, *ctx.hi);
    const double err = std::abs(fine - coarse);
    if (err <= ctx.tol || err <= 1e-14 * std::abs(fine)) return fine;
    if (depth >= ctx.max_depth) {
        if (ctx.exhausted) *ctx.exhausted = true;
        return fine;
    }
    double mid = 0.5 * (a + b);
    return adaptive_rec(ctx, a, mid, depth + 1) + adaptive_rec(ctx, mid, b, depth + 1);
}

// Chebyshev-Lobatto differentiation matrix on [-1,1], nodes descending.
Eigen::MatrixXd cheb_diff_matrix(int n, Eigen::VectorXd& nodes)
{
    nodes.resize(n + 1);
    for (int j = 0; j <= n; ++j) nodes[j] = std::cos(M_PI * j / n);
    Eigen::MatrixXd D(n + 1, n + 1);
    auto c = [n](int i) { return (i == 0 || i == n) ? 2.0 : 1.0; };
    for (int i = 0; i <= n; ++i) {
        double rowsum = 0.0;
        for (int j = 0; j <= n; ++j) {
            if (i == j) continue;
            double v = (c(i) / c(j)) * ((i + j) % 2 == 0 ? 1.0 : -1.0) / (nodes[i] - nodes[j]);
            D(i, j) = v;
            rowsum += v;
        }
        D(i, i) = -rowsum;
    }
    return D;
}

} // namespace

const GaussRule& gauss_legendre(int order)
{
    std::lock_guard<std::mutex> lock(g_rules_mutex);
    auto it = g_rules.find(order);
    if (it == g_rules.end()) it = g_rules.emplace(order, make_gauss_legendre(order)).first;
    return it->second;
}

cplx integrate_adaptive(const std::function<cplx(double)>& f, double a, double b,
                        double tol_abs, int max_depth, bool* depth_exhausted)
{
    if (depth_exhausted) *depth_exhausted = false;
    if (a == b) return {0.0, 0.0};
    AdaptiveCtx ctx{&f, tol_abs, max_depth, &gauss_legendre(15), &gauss_legendre(31),
                    depth_exhausted};
    return adaptive_rec(ctx, a, b, 0);
}

double integrate_adaptive_real(const std::function<double(double)>& f, double a, double b,
                               double tol_abs, int max_depth)
{
    return integrate_adaptive([&f](double x) { return cplx(f(x), 0.0); }, a, b, tol_abs, max_depth)
        .real();
}

cplx levin_panel(const std::function<cplx(double)>& amplitude,
                 const std::function<double(double)>& phase,
                 const std::function<double(double)>& dphase,
                 double a, double b, int ncoll)
{
    Eigen::VectorXd xc;
    Eigen::MatrixXd D = cheb_diff_matrix(ncoll, xc);
    const double half = 0.5 * (b - a);

    Eigen::MatrixXcd M(ncoll + 1, ncoll + 1);
    Eigen::VectorXcd rhs(ncoll + 1);
    for (int i = 0; i <= ncoll; ++i) {
        double x = 0.5 * (a + b) + half * xc[i];
        for (int j = 0; j <= ncoll; ++j) M(i, j) = D(i, j) / half;
        M(i, i) += cplx(0.0, 1.0) * dphase(x);
        rhs[i] = amplitude(x);
    }
    Eigen::VectorXcd p = M.colPivHouseholderQr().solve(rhs);
    // node 0 is x = b, node ncoll is x = a
    return p[0] * std::exp(cplx(0.0, phase(b))) - p[ncoll] * std::exp(cplx(0.0, phase(a)));
}

namespace {

struct OscCtx {
    const std::function<cplx(double)>* amp;
    const std::function<double(double)>* phase;
    const std::function<double(double)>* dphase;
    double tol;
    OscResult* out;
};

// Estimated number of phase cycles across the panel from endpoint/midpoint
// samples of phi' (|phi'| integrated by 5-point Simpson-ish sample).
double cycle_estimate(const OscCtx& ctx, double a, double b)
{
    double acc = 0.0;
    const int ns = 8;
    double prev = std::abs((*ctx.dphase)(a));
    for (int i = 1; i <= ns; ++i) {
        double x = a + (b - a) * i / ns;
        double cur = std::abs((*ctx.dphase)(x));
        acc += 0.5 * (prev + cur) * (b - a) / ns;
        prev = cur;
    }
    return acc / (2.0 * M_PI);
}

void osc_rec(const OscCtx& ctx, double a, double b, int depth)
{
    if (b - a <= 0.0) return;
    const double cyc = cycle_estimate(ctx, a, b);
    const GaussRule& lo = gauss_legendre(15);
    const GaussRule& hi = gauss_legendre(31);

    auto f = [&](double x) {
        ctx.out->amp_evals++;
        return (*ctx.amp)(x) * std::exp(cplx(0.0, (*ctx.phase)(x)));
    };

    if (cyc <= 3.0 || depth >= 48) {
        // few-cycle panel: direct GL with embedded error estimate; the
        // relative floor stops subdivision once a panel is resolved to
        // roundoff relative to its own magnitude
        cplx coarse = gl_apply(f, a, b, lo);
        cplx fine = gl_apply(f, a, b, hi);
        double err = std::abs(fine - coarse);
        const bool ok = err <= ctx.tol || err <= 1e-13 * std::abs(fine);
        if (ok || depth >= 48 || (b - a) < 1e-14 * (std::abs(a) + std::abs(b))) {
            ctx.out->value += fine;
            ctx.out->err_est += err;
            return;
        }
        double mid = 0.5 * (a + b);
        osc_rec(ctx, a, mid, depth + 1);
        osc_rec(ctx, mid, b, depth + 1);
        return;
    }

    // many cycles: check the phase derivative is single-signed and bounded away
    // from zero, then hand the panel to Levin collocation
    double d_a = (*ctx.dphase)(a), d_b = (*ctx.dphase)(b);
    double d_m = (*ctx.dphase)(0.5 * (a + b));
    bool monotone_ok = (d_a > 0) == (d_b > 0) && (d_a > 0) == (d_m > 0);
    double min_abs = std::min({std::abs(d_a), std::abs(d_b), std::abs(d_m)});
    if (monotone_ok && min_abs * (b - a) > 4.0 * M_PI) {
        ctx.out->amp_evals += 36;
        cplx v1 = levin_panel(*ctx.amp, *ctx.phase, *ctx.dphase, a, b, 14);
        cplx v2 = levin_panel(*ctx.amp, *ctx.phase, *ctx.dphase, a, b, 22);
        double err = std::abs(v2 - v1);
        if (err <= ctx.tol || err <= 1e-13 * std::abs(v2)) {
            ctx.out->value += v2;
            ctx.out->err_est += err;
            return;
        }
    }
    double mid = 0.5 * (a + b);
    osc_rec(ctx, a, mid, depth + 1);
    osc_rec(ctx, mid, b, depth + 1);
}

} // namespace

OscResult oscillatory_integral(const std::function<cplx(double)>& amplitude,
                               const std::function<double(double)>& phase,
                               const std::function<double(double)>& dphase,
                               double a, double b,
                               const std::vector<double>& stat_pts,
                               double tol_abs)
{
    OscResult res;
    if (!(b > a)) return res;

    // Carve a few-cycle window around each stationary point so the Levin
    // branch never sees a vanishing phase derivative.
    std::vector<double> cuts{a, b};
    for (double s : stat_pts) {
        if (s <= a || s >= b) continue;
        const double budget = 10.0 * 2.0 * M_PI;
        double ps = phase(s);
        auto window_edge = [&](double sign_dir, double limit) {
            double low = 0.0, high = std::abs(limit - s);
            if (high <= 0.0) return s;
            // find w with |phase(s + dir w) - phase(s)| = budget, if reached
            if (std::abs(phase(s + sign_dir * high) - ps) < budget) return limit;
            for (int it = 0; it < 60; ++it) {
                double w = 0.5 * (low + high);
                if (std::abs(phase(s + sign_dir * w) - ps) < budget) low = w; else high = w;
            }
            return s + sign_dir * 0.5 * (low + high);
        };
        cuts.push_back(window_edge(-1.0, a));
        cuts.push_back(s);
        cuts.push_back(window_edge(+1.0, b));
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    const double tol_panel = tol_abs / std::max<size_t>(1, cuts.size() - 1);
    OscCtx pctx{&amplitude, &phase, &dphase, tol_panel, &res};
    for (size_t i = 0; i + 1 < cuts.size(); ++i) osc_rec(pctx, cuts[i], cuts[i + 1], 0);
    return res;
}

} // namespace bnls
