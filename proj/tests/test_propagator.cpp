#include "doctest.h"

#include "bnls/errors.hpp"
#include "bnls/propagator.hpp"

#include "bnls/bessel.hpp"

#include <cmath>
#include <random>

using namespace bnls;
using std::complex;

namespace {

RadialField gaussian_field(const PlanPtr& plan)
{
    return sample_field(plan, [](double r) { return complex<double>(std::exp(-r * r / 2), 0.0); });
}

RadialField random_band_limited(const PlanPtr& plan, unsigned seed)
{
    std::mt19937 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    Eigen::VectorXcd spec = Eigen::VectorXcd::Zero(plan->size());
    const auto& k = plan->frequency_grid().nodes;
    for (int i = 0; i < plan->size(); ++i)
        if (k[i] < plan->k_max() / 3.0) spec[i] = complex<double>(g(rng), g(rng)) * std::exp(-k[i]);
    return inverse_radial_fourier({plan, spec});
}

} // namespace

TEST_CASE("free flow: identity at t=0, unitarity, group law")
{
    auto plan = get_plan(5, 256, 24.0);
    auto f = gaussian_field(plan);
    auto same = free_evolve(f, 0.0);
    CHECK((same.values - f.values).cwiseAbs().maxCoeff() < 1e-13);

    std::mt19937 rng(23);
    for (int trial = 0; trial < 100; ++trial) {
        auto g = random_band_limited(plan, 100 + trial);
        const double l2 = lq_norm(g, Exponent(2.0));
        for (double t : {0.1, 1.0, 10.0}) {
            CHECK(lq_norm(free_evolve(g, t), Exponent(2.0)) ==
                  doctest::Approx(l2).epsilon(1e-10));
        }
    }

    auto one = free_evolve(free_evolve(f, 0.7), 2.3);
    auto two = free_evolve(f, 3.0);
    CHECK((one.values - two.values).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("free flow commutes with dyadic projectors")
{
    auto plan = get_plan(5, 256, 24.0);
    auto f = random_band_limited(plan, 7);
    BumpPair bump;
    for (auto kind : {ProjectorKind::leq, ProjectorKind::band, ProjectorKind::gt}) {
        DyadicProjector P{bump, Dyadic(1), kind};
        auto a = free_evolve(apply_projector(P, f), 2.5);
        auto b = apply_projector(P, free_evolve(f, 2.5));
        CHECK((a.values - b.values).cwiseAbs().maxCoeff() <
              1e-12 * std::max(1.0, f.values.cwiseAbs().maxCoeff()));
    }
}

TEST_CASE("grid-free evaluation matches the grid propagator at early time")
{
    // domain large enough that no relevant ray reaches the boundary
    auto plan = get_plan(5, 768, 200.0);
    auto f = gaussian_field(plan);
    auto prof = profile_from_field(f);
    for (double t : {0.05, 0.15}) {
        auto evolved = radial_fourier(free_evolve(f, t));
        for (double r : {0.0, 1.7, 5.2}) {
            const complex<double> grid_val = plan->eval_from_spectrum(evolved.values, r);
            const complex<double> osc_val = evolved_value(prof, 5, t, r, 0);
            CHECK(std::abs(grid_val - osc_val) < 1e-8);
        }
    }
}

TEST_CASE("grid-free evaluation matches brute force at later time")
{
    // independent check: phase-resolving trapezoid of the 1-d frequency integral
    SpectrumProfile prof;
    prof.k_lo = 0.0;
    prof.k_hi = 9.0;
    prof.g = [](double k) { return cplx(std::exp(-k * k / 2.0), 0.0); };
    const int n = 5;
    const double nu = 1.5;
    for (double t : {2.0, 20.0}) {
        for (double r : {0.0, 5.0, 3.0 * std::pow(t, 0.25)}) {
            const long N = 3000000;
            cplx acc(0.0, 0.0);
            for (long i = 0; i <= N; ++i) {
                const double k = 9.0 * i / N;
                const double w = (i == 0 || i == N) ? 0.5 : 1.0;
                acc += w * std::exp(-k * k / 2.0) * scaled_bessel_j(nu, k * r) *
                       std::pow(k, n - 1) * std::exp(cplx(0.0, t * k * k * k * k));
            }
            acc *= 9.0 / N;
            const cplx osc_val = evolved_value(prof, n, t, r, 0);
            CHECK(std::abs(osc_val - acc) < 1e-8 + 1e-8 * std::abs(acc));
        }
    }
}

TEST_CASE("sup-norm decay slopes for gaussian data")
{
    auto plan = get_plan(5, 256, 24.0);
    PropagatorJob job;
    job.data = sample_field(plan, [](double r) {
        return complex<double>(std::exp(-r * r / (2.0 * 0.7 * 0.7)), 0.0);
    });
    job.times.clear();
    for (int i = 0; i < 10; ++i) job.times.push_back(std::pow(10.0, 3.0 * i / 9.0));

    job.derivative_order = 0;
    auto rep = dispersive_fit(job);
    CHECK(rep.scalars.at("fitted_slope") == doctest::Approx(-1.25).epsilon(0.04));

    job.derivative_order = 1;
    auto rep1 = dispersive_fit(job);
    CHECK(rep1.scalars.at("fitted_slope") == doctest::Approx(-1.5).epsilon(0.04));

    job.derivative_order = 2;
    auto rep2 = dispersive_fit(job);
    CHECK(rep2.scalars.at("fitted_slope") == doctest::Approx(-1.75).epsilon(0.04));
}

TEST_CASE("sup-norm decay slope in dimension seven")
{
    auto plan = get_plan(7, 256, 24.0);
    PropagatorJob job;
    job.data = sample_field(plan, [](double r) {
        return complex<double>(std::exp(-r * r / (2.0 * 0.7 * 0.7)), 0.0);
    });
    for (int i = 0; i < 10; ++i) job.times.push_back(std::pow(10.0, 3.0 * i / 9.0));
    auto rep = dispersive_fit(job);
    CHECK(rep.scalars.at("fitted_slope") == doctest::Approx(-1.75).epsilon(0.04));
}

TEST_CASE("dispersive fit input validation")
{
    auto plan = get_plan(5, 128, 16.0);
    PropagatorJob job;
    job.data = gaussian_field(plan);
    job.times = {1.0, 2.0, 5.0, 10.0}; // < 2 decades
    CHECK_THROWS_AS(dispersive_fit(job), fit_error);
}

TEST_CASE("localized dispersive: per-band slopes near -n/2 and prefactor law")
{
    auto plan = get_plan(5, 384, 24.0);
    // spectrally wide data so every band carries comparable weight
    auto f = sample_field(plan, [](double r) { return complex<double>(std::exp(-18.0 * r * r), 0.0); });
    std::vector<Dyadic> Ks{Dyadic(0), Dyadic(1), Dyadic(2), Dyadic(3)};
    // start inside the localized regime for the slowest band: K^4 t >> 1
    std::vector<double> ts;
    for (int i = 0; i < 7; ++i) ts.push_back(300.0 * std::pow(10.0, 2.0 * i / 6.0));
    auto rep = localized_dispersive_check(f, Ks, ts);
    for (int e = 0; e <= 3; ++e) {
        CHECK(rep.scalars.at("slope_K" + std::to_string(e)) ==
              doctest::Approx(-2.5).epsilon(0.05));
    }
    CHECK(rep.scalars.at("prefactor_ratio_worst_factor") < 2.0);
}

TEST_CASE("strichartz norm: conservation endpoint, homogeneity, admissibility")
{
    auto plan = get_plan(8, 256, 40.0);
    auto f = sample_field(plan, [](double r) { return complex<double>(std::exp(-r * r), 0.0); });
    std::vector<std::pair<double, RadialField>> traj;
    for (int i = 0; i <= 20; ++i) {
        const double t = 2.0 * i / 20.0;
        traj.emplace_back(t, free_evolve(f, t));
    }
    const double linf_l2 = strichartz_norm(traj, Exponent::infinity(), Exponent(2.0));
    CHECK(linf_l2 == doctest::Approx(lq_norm(f, Exponent(2.0))).epsilon(1e-8));

    // admissible finite pair at n=8: (q,r) = (2,4)
    const double base = strichartz_norm(traj, Exponent(2.0), Exponent(4.0));
    auto scaled = traj;
    for (auto& [t, state] : scaled) state.values *= complex<double>(0.0, -3.0);
    CHECK(strichartz_norm(scaled, Exponent(2.0), Exponent(4.0)) ==
          doctest::Approx(3.0 * base).epsilon(1e-12));

    CHECK_THROWS_AS(strichartz_norm(traj, Exponent(2.0), Exponent::infinity()), regime_error);
    CHECK(strichartz_norm(traj, Exponent(3.0), Exponent(3.0)) > 0.0); // (3,3) admissible at n=8
    CHECK_THROWS_AS(strichartz_norm(traj, Exponent(4.0), Exponent(3.0)), regime_error);
}

TEST_CASE("critical rescaling leaves the strichartz ratio put")
{
    // free flow of f(r) and f(2r) with B-admissible (q0, r0) at n = 8:
    // ratio ||u||_{q,r} / ||u0||_2 is scale invariant
    const int n = 8;
    auto norm_ratio = [&](double lam) {
        auto plan = get_plan(n, 256, 36.0 / lam);
        auto f = sample_field(plan, [lam](double r) {
            return complex<double>(std::exp(-lam * lam * r * r), 0.0);
        });
        std::vector<std::pair<double, RadialField>> traj;
        const double Tmax = 1.0 / std::pow(lam, 4);
        for (int i = 0; i <= 24; ++i) {
            const double t = Tmax * i / 24.0;
            traj.emplace_back(t, free_evolve(f, t));
        }
        return strichartz_norm(traj, Exponent(2.0), Exponent(4.0)) / lq_norm(f, Exponent(2.0));
    };
    const double a = norm_ratio(1.0), b = norm_ratio(2.0);
    CHECK(a / b == doctest::Approx(1.0).epsilon(0.1));
}

TEST_CASE("band data at t=0 keeps its sup norm")
{
    auto plan = get_plan(5, 256, 24.0);
    auto f = gaussian_field(plan);
    BumpPair bump;
    auto banded = apply_projector(DyadicProjector{bump, Dyadic(2), ProjectorKind::band}, f);
    auto frozen = free_evolve(banded, 0.0);
    CHECK(lq_norm(frozen, Exponent::infinity()) ==
          doctest::Approx(lq_norm(banded, Exponent::infinity())).epsilon(1e-14));
}
