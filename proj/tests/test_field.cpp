#include "doctest.h"

#include "bnls/bessel.hpp"
#include "bnls/errors.hpp"
#include "bnls/field.hpp"

#include <cmath>
#include <random>

using namespace bnls;
using std::complex;

namespace {

RadialField gaussian_field(const PlanPtr& plan, double width = 1.0)
{
    return sample_field(plan,
                        [width](double r) { return complex<double>(std::exp(-r * r / (2 * width * width)), 0.0); });
}

// random band-limited field: spectrum supported on the lower third of the band
RadialField random_band_limited(const PlanPtr& plan, std::mt19937& rng)
{
    std::normal_distribution<double> g(0.0, 1.0);
    Eigen::VectorXcd spec = Eigen::VectorXcd::Zero(plan->size());
    const auto& k = plan->frequency_grid().nodes;
    const double k_cut = plan->k_max() / 3.0;
    for (int i = 0; i < plan->size(); ++i) {
        if (k[i] < k_cut) spec[i] = complex<double>(g(rng), g(rng)) * std::exp(-k[i]);
    }
    return inverse_radial_fourier({plan, spec});
}

} // namespace

TEST_CASE("gaussian is self-reciprocal under the radial transform")
{
    for (int n : {1, 2, 5, 9}) {
        auto plan = get_plan(n, 256, 24.0);
        auto f = gaussian_field(plan);
        auto fhat = radial_fourier(f);
        const auto& k = plan->frequency_grid().nodes;
        double worst_rel = 0.0, worst_abs = 0.0;
        for (int i = 0; i < plan->size(); ++i) {
            const double expect = std::exp(-k[i] * k[i] / 2.0);
            const double err = std::abs(fhat.values[i].real() - expect);
            if (expect >= 1e-6)
                worst_rel = std::max(worst_rel, err / expect);
            else
                worst_abs = std::max(worst_abs, err);
        }
        CHECK(worst_rel < 1e-8);
        CHECK(worst_abs < 1e-12);
    }
}

TEST_CASE("round trip and plancherel are machine exact")
{
    auto plan = get_plan(5, 256, 20.0);
    std::mt19937 rng(7);
    for (int trial = 0; trial < 100; ++trial) {
        auto f = random_band_limited(plan, rng);
        auto fhat = radial_fourier(f);
        auto back = inverse_radial_fourier(fhat);
        const double scale = f.values.cwiseAbs().maxCoeff();
        CHECK((back.values - f.values).cwiseAbs().maxCoeff() < 1e-10 * scale);
        const double a = lq_norm(f, Exponent(2.0));
        const double b = sobolev_norm(fhat, 0.0);
        CHECK(a == doctest::Approx(b).epsilon(1e-10));
    }
}

TEST_CASE("transform linearity")
{
    auto plan = get_plan(5, 128, 16.0);
    std::mt19937 rng(11);
    auto f = random_band_limited(plan, rng);
    auto g = random_band_limited(plan, rng);
    const complex<double> a(1.3, -0.4), b(-0.2, 2.2);
    RadialField combo{plan, a * f.values + b * g.values};
    Eigen::VectorXcd lhs = radial_fourier(combo).values;
    Eigen::VectorXcd rhs = a * radial_fourier(f).values + b * radial_fourier(g).values;
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12 * lhs.cwiseAbs().maxCoeff());
}

TEST_CASE("grid refinement slashes the gaussian band-truncation error")
{
    // coarse bandwidth first (K ~ 5) so the spectral tail is the error floor;
    // doubling m doubles the bandwidth and the error collapses
    auto err_for = [](int m) {
        auto plan = get_plan(5, m, 40.0);
        auto f = gaussian_field(plan);
        auto back = inverse_radial_fourier(radial_fourier(f));
        return (back.values - f.values).cwiseAbs().maxCoeff();
    };
    const double coarse = err_for(64);
    const double fine = err_for(128);
    CHECK(coarse > 1e-12); // measurable at the coarse resolution
    CHECK(fine * 4.0 <= coarse);
}

TEST_CASE("transform cross-validated by uniform-grid trapezoid quadrature")
{
    // independent realization of the same integral: f_hat(k) =
    // int f(r) b_nu(kr) r^{n-1} dr on a fine uniform grid
    auto plan = get_plan(5, 192, 18.0);
    auto f = sample_field(plan, [](double r) {
        return complex<double>((1.0 + 0.3 * r * r) * std::exp(-0.7 * r * r), 0.0);
    });
    auto fhat = radial_fourier(f);
    const double nu = plan->nu();
    const auto& k = plan->frequency_grid().nodes;
    for (int idx : {3, 40, 90}) {
        const long N = 400000;
        double acc = 0.0;
        for (long j = 0; j <= N; ++j) {
            const double r = 18.0 * j / N;
            const double w = (j == 0 || j == N) ? 0.5 : 1.0;
            acc += w * (1.0 + 0.3 * r * r) * std::exp(-0.7 * r * r) *
                   scaled_bessel_j(nu, k[idx] * r) * std::pow(r, 4);
        }
        acc *= 18.0 / N;
        CHECK(fhat.values[idx].real() == doctest::Approx(acc).epsilon(1e-9));
    }
}

TEST_CASE("lq norms: plateau, sup, homogeneity")
{
    auto plan = get_plan(5, 1024, 8.0);
    auto f = sample_field(plan, [](double r) { return complex<double>(r < 1.0 ? 1.0 : 0.0, 0.0); });
    const double sigma4 = 8.0 * M_PI * M_PI / 3.0;
    CHECK(lq_norm(f, Exponent(2.0)) ==
          doctest::Approx(std::sqrt(sigma4 / 5.0)).epsilon(2e-2));
    CHECK(lq_norm(f, Exponent::infinity()) == doctest::Approx(1.0));

    auto g = gaussian_field(plan);
    const double n1 = lq_norm(g, Exponent(3.0));
    RadialField g2{plan, complex<double>(0.0, -2.5) * g.values};
    CHECK(lq_norm(g2, Exponent(3.0)) == doctest::Approx(2.5 * n1).epsilon(1e-12));
}

TEST_CASE("sobolev norm: s=0 is l2, gaussian s=2 matches quadrature oracle")
{
    auto plan = get_plan(5, 512, 24.0);
    auto f = gaussian_field(plan);
    CHECK(sobolev_norm(f, 0.0) == doctest::Approx(lq_norm(f, Exponent(2.0))).epsilon(1e-10));

    // oracle: ||<k>^2 fhat||_2^2 = sigma_4 int (1+k^2)^2 e^{-k^2} k^4 dk by direct
    // 1d quadrature (trapezoid, fine uniform grid, independent of the plan)
    const int N = 400000;
    const double K = 30.0;
    double acc = 0.0;
    for (int i = 0; i <= N; ++i) {
        const double k = K * i / N;
        const double w = (i == 0 || i == N) ? 0.5 : 1.0;
        const double t = (1.0 + k * k);
        acc += w * t * t * std::exp(-k * k) * std::pow(k, 4);
    }
    acc *= K / N * (8.0 * M_PI * M_PI / 3.0);
    CHECK(sobolev_norm(f, 2.0) == doctest::Approx(std::sqrt(acc)).epsilon(1e-8));
}

TEST_CASE("homogeneous vs inhomogeneous agree on a high band")
{
    auto plan = get_plan(5, 512, 24.0);
    // bump supported near k ~ 12:  <k>^s / k^s - 1 = O(1/k^2)
    auto spec = sample_spectrum(plan, [](double k) {
        return complex<double>(std::exp(-8.0 * (k - 12.0) * (k - 12.0)), 0.0);
    });
    auto f = inverse_radial_fourier(spec);
    const double hom = sobolev_norm(f, 2.0, SobolevKind::homogeneous);
    const double inhom = sobolev_norm(f, 2.0, SobolevKind::inhomogeneous);
    CHECK(std::abs(hom / inhom - 1.0) < 0.01);
}

TEST_CASE("csv round trip")
{
    auto plan = get_plan(5, 128, 10.0);
    auto f = sample_field(plan, [](double r) { return complex<double>(std::exp(-r), 0.3 * r); });
    save_field_csv(f, "field_roundtrip_test.csv");
    auto g = load_field_csv("field_roundtrip_test.csv");
    CHECK(g.plan->dimension() == 5);
    CHECK((g.values - f.values).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("truncation guard flags mass near the boundary")
{
    auto plan = get_plan(5, 128, 10.0);
    CHECK_FALSE(truncation_warning(gaussian_field(plan)));
    auto edge = sample_field(plan, [](double r) {
        return complex<double>(std::exp(-(r - 9.7) * (r - 9.7)), 0.0);
    });
    CHECK(truncation_warning(edge));
}

TEST_CASE("plan mismatch raises")
{
    auto p1 = get_plan(5, 128, 10.0);
    auto p2 = get_plan(5, 128, 12.0);
    CHECK_THROWS_AS(require_same_plan(p1, p2, "test"), grid_mismatch_error);
}
