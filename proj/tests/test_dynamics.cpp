#include "doctest.h"

#include "bnls/dynamics.hpp"
#include "bnls/errors.hpp"
#include "bnls/ground_state.hpp"
#include "bnls/propagator.hpp"

#include <cmath>

using namespace bnls;
using std::complex;

namespace {

ModelParams params53()
{
    ModelParams mp;
    mp.n = 5;
    mp.p = 3.0;
    mp.sign = Sign::focusing;
    return mp;
}

RadialField gaussian_field(const PlanPtr& plan, double amp = 1.0)
{
    return sample_field(plan, [amp](double r) {
        return complex<double>(amp * std::exp(-r * r / 2), 0.0);
    });
}

} // namespace

TEST_CASE("petviashvili: convergence, multipliers, dual residual")
{
    auto plan = get_plan(5, 256, 30.0);
    auto res = petviashvili_solve(params53(), plan, default_seed(plan));
    CHECK(res.residual <= 1e-10);
    CHECK(std::abs(res.multiplier_history.back() - 1.0) <= 1e-10);
    CHECK(dual_residual(res.Q, 3.0) <= 1e-9);
    // residual decreases monotonically over the last 10 iterations
    const auto& hist = res.residual_history;
    REQUIRE(hist.size() >= 11);
    for (size_t i = hist.size() - 10; i < hist.size(); ++i) CHECK(hist[i] < hist[i - 1]);

    CHECK_THROWS_AS(
        petviashvili_solve(params53(), plan, RadialField{plan, Eigen::VectorXcd::Zero(plan->spatial_size())}),
        std::invalid_argument);
}

TEST_CASE("ground state: grid refinement stability and oscillatory tail")
{
    auto coarse = petviashvili_solve(params53(), get_plan(5, 256, 30.0), default_seed(get_plan(5, 256, 30.0)));
    auto fine = petviashvili_solve(params53(), get_plan(5, 384, 30.0), default_seed(get_plan(5, 384, 30.0)));
    const double nc = lq_norm(coarse.Q, Exponent(2.0));
    const double nf = lq_norm(fine.Q, Exponent(2.0));
    CHECK(std::abs(nc - nf) <= 1e-6 * nf);

    // sign change in the tail
    const auto& r = fine.Q.plan->spatial_grid().nodes;
    bool sign_change = false;
    double peak = fine.Q.values.cwiseAbs().maxCoeff();
    for (int j = 1; j < fine.Q.plan->spatial_size(); ++j) {
        if (r[j] < 2.0) continue;
        if (fine.Q.values[j].real() * fine.Q.values[j - 1].real() < 0.0) sign_change = true;
    }
    CHECK(sign_change);

    // exponential envelope: fit log of local maxima of |Q| in the tail
    std::vector<double> xr, xv;
    for (int j = 2; j + 2 < fine.Q.plan->spatial_size(); ++j) {
        if (r[j] < 3.5 || r[j] > 26.0) continue;
        const double a = std::abs(fine.Q.values[j - 1].real());
        const double b = std::abs(fine.Q.values[j].real());
        const double c = std::abs(fine.Q.values[j + 1].real());
        if (b > a && b > c && b > 1e-13 * peak) {
            xr.push_back(r[j]);
            xv.push_back(b);
        }
    }
    REQUIRE(xr.size() >= 4);
    Eigen::VectorXd vx(xr.size()), vy(xr.size());
    for (size_t i = 0; i < xr.size(); ++i) {
        vx[i] = xr[i];
        vy[i] = std::log(xv[i]);
    }
    auto fit = fit_line(vx, vy);
    CHECK(fit.slope < -0.4);
    CHECK(fit.slope > -1.1);
    CHECK(fit.r_squared > 0.98);
}

TEST_CASE("soliton orbit identities")
{
    auto plan = get_plan(5, 256, 30.0);
    auto gs = petviashvili_solve(params53(), plan, default_seed(plan));
    auto u = soliton_orbit(gs.Q, 1.37);
    CHECK((u.values.cwiseAbs() - gs.Q.values.cwiseAbs()).cwiseAbs().maxCoeff() < 1e-14);
    auto back = soliton_orbit(gs.Q, 2.0 * M_PI);
    CHECK((back.values - gs.Q.values).cwiseAbs().maxCoeff() <
          1e-12 * gs.Q.values.cwiseAbs().maxCoeff());

    // orbit satisfies the equation: i u_t + Lap^2 u - |u|^{p-1} u = e^{-it} (Lap^2 Q + Q - Q^3)
    const auto& k = plan->frequency_grid().nodes;
    SpectralField Qhat = radial_fourier(gs.Q);
    Eigen::VectorXcd resid(plan->size());
    Eigen::VectorXcd cube_hat = plan->forward(
        gs.Q.values.array().pow(3).matrix());
    for (int i = 0; i < plan->size(); ++i)
        resid[i] = (std::pow(k[i], 4) + 1.0) * Qhat.values[i] - cube_hat[i];
    double acc = 0.0;
    const auto& wk = plan->frequency_weights();
    for (int i = 0; i < plan->size(); ++i) acc += wk[i] * std::norm(resid[i]);
    // equals the solver residual up to the k^4-amplified re-analysis noise
    CHECK(std::sqrt(plan->sphere() * acc) <= gs.residual + 1e-8);
}

TEST_CASE("evolve: free path matches the propagator exactly")
{
    auto plan = get_plan(5, 256, 24.0);
    auto u0 = gaussian_field(plan);
    EvolveOptions opt;
    opt.disable_nonlinearity = true;
    opt.store_stride = 100;
    auto traj = evolve(u0, params53(), 0.5, 5e-3, opt);
    auto direct = free_evolve(u0, 0.5);
    CHECK((traj.states.back().values - direct.values).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("evolve: mass conservation and strang self-convergence")
{
    auto plan = get_plan(5, 256, 24.0);
    auto u0 = gaussian_field(plan);
    auto mp = params53();

    EvolveOptions opt;
    opt.store_stride = 1000000;
    auto traj = evolve(u0, mp, 0.5, 1e-3, opt);
    const double m0 = lq_norm(u0, Exponent(2.0));
    const double m1 = lq_norm(traj.states.back(), Exponent(2.0));
    CHECK(std::abs(m1 - m0) <= 1e-10 * m0);

    // self-convergence order 2 over dt in {4h, 2h, h}
    const double h = 2.5e-4;
    auto at = [&](double dt) {
        EvolveOptions o;
        o.store_stride = 1 << 30;
        return evolve(u0, mp, 0.2, dt, o).states.back().values;
    };
    auto u4 = at(4 * h), u2 = at(2 * h), u1 = at(h);
    const double d1 = (u4 - u2).norm();
    const double d2 = (u2 - u1).norm();
    const double order = std::log2(d1 / d2);
    CHECK(order == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("evolve guards")
{
    auto plan = get_plan(5, 128, 16.0);
    auto u0 = gaussian_field(plan);
    CHECK_THROWS_AS(evolve(u0, params53(), 1.0, -0.1, {}), std::invalid_argument);

    // focusing run with a hair-trigger guard trips the blow-up detector
    auto big = gaussian_field(plan, 10.0);
    EvolveOptions opt;
    opt.blowup_factor = 1.05;
    opt.store_stride = 1 << 30;
    CHECK_THROWS_AS(evolve(big, params53(), 0.5, 1e-3, opt), blowup_error);
}

TEST_CASE("duhamel residual: free flow is exact, quadrature order in checkpoints")
{
    auto plan = get_plan(5, 256, 24.0);
    auto u0 = gaussian_field(plan);
    auto mp = params53();

    EvolveOptions lin;
    lin.disable_nonlinearity = true;
    lin.store_stride = 50;
    auto ltraj = evolve(u0, mp, 0.5, 1e-3, lin);
    CHECK(duhamel_residual(ltraj) <= 1e-10);

    EvolveOptions coarse;
    coarse.store_stride = 100;
    auto tcoarse = evolve(u0, mp, 0.5, 1e-3, coarse);
    EvolveOptions fine;
    fine.store_stride = 50;
    auto tfine = evolve(u0, mp, 0.5, 1e-3, fine);
    const double rc = duhamel_residual(tcoarse);
    const double rf = duhamel_residual(tfine);
    CHECK(rc / rf == doctest::Approx(4.0).epsilon(0.5)); // trapezoid order 2
}

TEST_CASE("duhamel residual bounded by the splitting error estimate")
{
    auto plan = get_plan(5, 256, 24.0);
    auto u0 = gaussian_field(plan);
    auto mp = params53();
    EvolveOptions dense;
    dense.store_stride = 1;
    const double resid = duhamel_residual(evolve(u0, mp, 0.25, 1e-3, dense));
    EvolveOptions none;
    none.store_stride = 1 << 30;
    auto a = evolve(u0, mp, 0.25, 1e-3, none).states.back();
    auto b = evolve(u0, mp, 0.25, 5e-4, none).states.back();
    const double split_est = lq_norm({plan, a.values - b.values}, Exponent(2.0));
    CHECK(resid <= 10.0 * split_est);
}

TEST_CASE("radiation split: linear trajectory is purely radiative")
{
    auto plan = get_plan(5, 256, 24.0);
    auto u0 = gaussian_field(plan);
    EvolveOptions opt;
    opt.disable_nonlinearity = true;
    opt.store_stride = 10;
    auto traj = evolve(u0, params53(), 1.0, 1e-2, opt);
    auto dec = radiation_split(traj, 0.0, 1.0);
    CHECK(lq_norm(dec.u_plus, Exponent(2.0)) ==
          doctest::Approx(lq_norm(u0, Exponent(2.0))).epsilon(1e-8));
    CHECK((dec.u_plus.values - u0.values).cwiseAbs().maxCoeff() < 1e-8);
    for (const auto& v : dec.v_states) CHECK(lq_norm(v, Exponent(2.0)) <= 1e-8);
    CHECK(dec.identity_defect <= 1e-12);
    CHECK(dec.window_sensitivity <= 1e-8);

    CHECK_THROWS_AS(radiation_split(traj, 0.5, 2.0), window_error);
}

TEST_CASE("radiation split: soliton orbit is nonradiative")
{
    auto plan = get_plan(5, 256, 30.0);
    auto gs = petviashvili_solve(params53(), plan, default_seed(plan));

    Trajectory traj;
    traj.params = params53();
    traj.dt = 0.05;
    const double T = 20.0;
    for (int j = 0; j <= std::lround(T / traj.dt); ++j) {
        const double t = j * traj.dt;
        traj.times.push_back(t);
        traj.states.push_back(soliton_orbit(gs.Q, t));
    }
    auto dec = radiation_split(traj, 0.0, T);
    CHECK(lq_norm(dec.u_plus, Exponent(2.0)) <= 0.1 * lq_norm(gs.Q, Exponent(2.0)));
    // window sensitivity is reported and small relative to the soliton mass
    CHECK(dec.window_sensitivity < lq_norm(gs.Q, Exponent(2.0)));
}

TEST_CASE("concentration points: empty, single bump, two bumps, cap")
{
    auto plan = get_plan(5, 384, 40.0);
    const double mu3 = 0.2, c_exp = 1.0;
    const Dyadic N(4); // band [1/16, 16]

    RadialField zero{plan, Eigen::VectorXcd::Zero(plan->spatial_size())};
    auto none = concentration_points(zero, N, mu3, c_exp);
    CHECK(none.J == 0);

    const double thr = std::pow(mu3, c_exp);
    auto bump = [&](double center) {
        return [center, thr](double r) {
            return complex<double>(2.0 * thr * std::exp(-(r - center) * (r - center) / 0.18), 0.0);
        };
    };
    auto single = sample_field(plan, bump(5.0));
    auto set1 = concentration_points(single, N, mu3, c_exp);
    CHECK(set1.J == 1);
    CHECK(std::abs(set1.points[0] - 5.0) <= plan->spatial_grid().spacing_near(5.0) + 1e-9);
    CHECK(concentration_maximality(band_restrict(single, N), set1));

    auto two = sample_field(plan, [&](double r) {
        return bump(5.0)(r) + bump(5.0 + 3.0 / mu3)(r);
    });
    auto set2 = concentration_points(two, N, mu3, c_exp);
    CHECK(set2.J == 2);
    CHECK(std::abs(set2.points[0] - set2.points[1]) >= 0.5 / mu3);
    double d1 = std::min(std::abs(set2.points[0] - 5.0), std::abs(set2.points[1] - 5.0));
    double d2 = std::min(std::abs(set2.points[0] - 20.0), std::abs(set2.points[1] - 20.0));
    CHECK(d1 <= plan->spatial_grid().spacing_near(5.0) + 1e-9);
    CHECK(d2 <= plan->spatial_grid().spacing_near(20.0) + 1e-9);
    CHECK(concentration_maximality(band_restrict(two, N), set2));

    // tight cap triggers the guard: three clear peaks, cap of two
    const double mu_cap = 0.5, thr_cap = 0.5;
    auto tall = [&](double center) {
        return [center, thr_cap](double r) {
            return complex<double>(2.0 * thr_cap * std::exp(-(r - center) * (r - center) / 0.18),
                                   0.0);
        };
    };
    auto three = sample_field(plan, [&](double r) {
        return tall(4.0)(r) + tall(14.0)(r) + tall(24.0)(r);
    });
    CHECK_THROWS_AS(concentration_points(three, Dyadic(4), mu_cap, 1.0, 0.5), cap_error);
}

TEST_CASE("spatial localization: compact support, gaussian tail oracle, monotone")
{
    auto plan = get_plan(5, 384, 40.0);
    auto v = sample_field(plan, [](double r) {
        return complex<double>(std::exp(-(r - 5.0) * (r - 5.0) / 2.0), 0.0);
    });
    ConcentrationSet set;
    set.points = {5.0};
    set.mu3 = 0.2;
    set.J = 1;

    std::vector<double> radii{0.5, 1.0, 1.5, 2.0, 3.0, 4.0};
    auto rep = spatial_localization_report(v, set, radii);
    double prev = 1e300;
    for (const auto& row : rep.rows) {
        CHECK(row[1] <= prev * (1.0 + 1e-12));
        prev = row[1];
    }

    // oracle: sigma_4 int_{|u| >= R} e^{-u^2} (u+5)^4 du (boundary tails negligible)
    auto oracle = [](double R) {
        auto I0 = [](double R) { return 0.5 * std::sqrt(M_PI) * std::erfc(R); };
        auto I2 = [&](double R) { return 0.5 * R * std::exp(-R * R) + 0.5 * I0(R); };
        auto I4 = [&](double R) {
            return 0.5 * R * R * R * std::exp(-R * R) + 1.5 * I2(R);
        };
        const double c5 = 5.0;
        // expand (u+5)^4, odd powers cancel over the symmetric domain
        const double val = 2.0 * (I4(R) + 6.0 * c5 * c5 * I2(R) + c5 * c5 * c5 * c5 * I0(R));
        return val * (8.0 * M_PI * M_PI / 3.0);
    };
    for (size_t i = 0; i < radii.size(); ++i) {
        CHECK(rep.rows[i][1] == doctest::Approx(oracle(radii[i])).epsilon(1e-6));
    }

    // beyond the support the exterior mass is numerically zero
    auto repFar = spatial_localization_report(v, set, {12.0});
    CHECK(repFar.rows[0][1] <= 1e-10 * oracle(0.5));
}
