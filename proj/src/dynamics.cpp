#include "bnls/dynamics.hpp"

#include "bnls/errors.hpp"
#include "bnls/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace bnls {

const RadialField& Trajectory::state_at(double t, double tol) const
{
    for (size_t i = 0; i < times.size(); ++i)
        if (std::abs(times[i] - t) <= tol) return states[i];
    throw std::invalid_argument("Trajectory::state_at: no stored state at requested time");
}

Trajectory evolve(const RadialField& u0, const ModelParams& params, double T, double dt,
                  const EvolveOptions& opt)
{
    params.validate();
    if (!(dt > 0.0) || T < dt) throw std::invalid_argument("evolve: need 0 < dt <= T");
    const auto& plan = u0.plan;
    const long steps = std::lround(T / dt);
    if (std::abs(steps * dt - T) > 1e-9 * T)
        throw std::invalid_argument("evolve: T must be an integer number of steps");

    const int m = plan->size();
    const auto& k = plan->frequency_grid().nodes;
    Eigen::VectorXcd lin(m);
    for (int i = 0; i < m; ++i) lin[i] = std::exp(std::complex<double>(0.0, dt * std::pow(k[i], 4)));

    const double s = params.nonlinearity_sign();
    const double pm1 = params.p - 1.0;
    const double half = 0.5 * dt;
    auto nonlinear_half = [&](Eigen::VectorXcd& u) {
        if (opt.disable_nonlinearity) return;
        for (int j = 0; j < u.size(); ++j) {
            const double a = std::abs(u[j]);
            const double rot = -s * half * (pm1 == 2.0 ? a * a : std::pow(a, pm1));
            u[j] *= std::complex<double>(std::cos(rot), std::sin(rot));
        }
    };

    Trajectory traj;
    traj.params = params;
    traj.dt = dt;
    traj.nonlinearity_disabled = opt.disable_nonlinearity;
    traj.times.push_back(0.0);
    traj.states.push_back(u0);

    const double sup0 = u0.values.cwiseAbs().maxCoeff();
    Eigen::VectorXcd u = u0.values;
    for (long step = 1; step <= steps; ++step) {
        nonlinear_half(u);
        Eigen::VectorXcd uhat = plan->forward(u);
        uhat.array() *= lin.array();
        u = plan->inverse(uhat);
        nonlinear_half(u);

        const double t = step * dt;
        const double sup = u.cwiseAbs().maxCoeff();
        if (sup > opt.blowup_factor * sup0)
            throw blowup_error("evolve: sup norm grew past the blow-up guard");
        if (opt.observer) {
            RadialField snap{plan, u};
            opt.observer(t, snap);
        }
        if (step % std::max(1, opt.store_stride) == 0 || step == steps) {
            traj.times.push_back(t);
            traj.states.push_back({plan, u});
        }
    }
    traj.truncation_warned = truncation_warning(traj.states.back());
    return traj;
}

namespace {

Eigen::VectorXcd nonlinearity_hat(const RadialField& state, const ModelParams& params,
                                  bool disabled)
{
    const auto& plan = state.plan;
    if (disabled) return Eigen::VectorXcd::Zero(plan->size());
    Eigen::VectorXcd F(state.values.size());
    const double s = params.nonlinearity_sign();
    const double pm1 = params.p - 1.0;
    for (int j = 0; j < F.size(); ++j) {
        const double a = std::abs(state.values[j]);
        F[j] = s * (pm1 == 2.0 ? a * a : std::pow(a, pm1)) * state.values[j];
    }
    return plan->forward(F);
}

double spectral_l2(const PlanPtr& plan, const Eigen::VectorXcd& vhat)
{
    const auto& w = plan->frequency_weights();
    double acc = 0.0;
    for (int i = 0; i < plan->size(); ++i) acc += w[i] * std::norm(vhat[i]);
    return std::sqrt(plan->sphere() * acc);
}

} // namespace

double duhamel_residual(const Trajectory& traj)
{
    if (traj.states.size() < 3)
        throw std::invalid_argument("duhamel_residual: need >= 3 stored states");
    const auto& plan = traj.states.front().plan;
    const int m = plan->size();
    const auto& k = plan->frequency_grid().nodes;
    Eigen::VectorXd k4(m);
    for (int i = 0; i < m; ++i) k4[i] = std::pow(k[i], 4);

    const size_t C = traj.states.size();
    std::vector<Eigen::VectorXcd> Fhat(C);
    for (size_t j = 0; j < C; ++j)
        Fhat[j] = nonlinearity_hat(traj.states[j], traj.params, traj.nonlinearity_disabled);
    std::vector<Eigen::VectorXcd> uhat(C);
    for (size_t j = 0; j < C; ++j) uhat[j] = plan->forward(traj.states[j].values);

    const double t0 = traj.times.front();
    double worst = 0.0;
    for (size_t c = 2; c < C; ++c) {
        const double tc = traj.times[c];
        // trapezoid of e^{i(tc - s) k^4} Fhat(s) over stored s in [t0, tc]
        Eigen::VectorXcd integral = Eigen::VectorXcd::Zero(m);
        for (size_t j = 0; j + 1 <= c; ++j) {
            const double h = traj.times[j + 1] - traj.times[j];
            for (int i = 0; i < m; ++i) {
                const std::complex<double> e0 =
                    std::exp(std::complex<double>(0.0, (tc - traj.times[j]) * k4[i]));
                const std::complex<double> e1 =
                    std::exp(std::complex<double>(0.0, (tc - traj.times[j + 1]) * k4[i]));
                integral[i] += 0.5 * h * (e0 * Fhat[j][i] + e1 * Fhat[j + 1][i]);
            }
        }
        Eigen::VectorXcd resid(m);
        for (int i = 0; i < m; ++i) {
            const std::complex<double> free =
                std::exp(std::complex<double>(0.0, (tc - t0) * k4[i])) * uhat[0][i];
            resid[i] = uhat[c][i] - free + std::complex<double>(0.0, 1.0) * integral[i];
        }
        worst = std::max(worst, spectral_l2(plan, resid));
    }
    return worst;
}

DecompositionResult radiation_split(const Trajectory& traj, double w0, double w1,
                                    const std::vector<double>& probe_times)
{
    if (!(w0 < w1) || w0 < traj.times.front() - 1e-12 || w1 > traj.times.back() + 1e-12)
        throw window_error("radiation_split: window outside the trajectory span");
    if (w1 - w0 < 10.0 * traj.dt - 1e-12)
        throw window_error("radiation_split: window shorter than 10 dt");

    const auto& plan = traj.states.front().plan;
    const int m = plan->size();
    const auto& k = plan->frequency_grid().nodes;
    Eigen::VectorXd k4(m);
    for (int i = 0; i < m; ++i) k4[i] = std::pow(k[i], 4);

    std::vector<size_t> idx;
    for (size_t j = 0; j < traj.times.size(); ++j)
        if (traj.times[j] >= w0 - 1e-12 && traj.times[j] <= w1 + 1e-12) idx.push_back(j);
    if (idx.size() < 3) throw window_error("radiation_split: too few stored states in window");

    auto pullback_average = [&](size_t lo, size_t hi) {
        Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(m);
        double total = 0.0;
        for (size_t q = lo; q + 1 <= hi; ++q) {
            const size_t j0 = idx[q], j1 = idx[q + 1];
            const double h = traj.times[j1] - traj.times[j0];
            Eigen::VectorXcd g0 = plan->forward(traj.states[j0].values);
            Eigen::VectorXcd g1 = plan->forward(traj.states[j1].values);
            for (int i = 0; i < m; ++i) {
                g0[i] *= std::exp(std::complex<double>(0.0, -traj.times[j0] * k4[i]));
                g1[i] *= std::exp(std::complex<double>(0.0, -traj.times[j1] * k4[i]));
                acc[i] += 0.5 * h * (g0[i] + g1[i]);
            }
            total += h;
        }
        acc /= total;
        return acc;
    };

    const size_t last = idx.size() - 1;
    Eigen::VectorXcd uplus_hat = pullback_average(0, last);
    // sensitivity: same-length sub-windows offset by a quarter of the span
    const size_t quarter = std::max<size_t>(1, idx.size() / 4);
    Eigen::VectorXcd early = pullback_average(0, last - quarter);
    Eigen::VectorXcd late = pullback_average(quarter, last);

    DecompositionResult out;
    out.u_plus = inverse_radial_fourier({plan, uplus_hat});
    Eigen::VectorXcd diff = early - late;
    out.window_sensitivity = spectral_l2(plan, diff);

    std::vector<size_t> probe_idx;
    if (probe_times.empty()) {
        probe_idx = idx;
    } else {
        for (double t : probe_times) {
            bool found = false;
            for (size_t j : idx) {
                if (std::abs(traj.times[j] - t) <= 1e-9) {
                    probe_idx.push_back(j);
                    found = true;
                    break;
                }
            }
            if (!found) throw window_error("radiation_split: probe time not stored in window");
        }
    }
    for (size_t q = 0; q < probe_idx.size(); ++q) {
        const size_t j = probe_idx[q];
        const double t = traj.times[j];
        Eigen::VectorXcd fw(m);
        for (int i = 0; i < m; ++i)
            fw[i] = std::exp(std::complex<double>(0.0, t * k4[i])) * uplus_hat[i];
        RadialField free_part = inverse_radial_fourier({plan, fw});
        RadialField v{plan, traj.states[j].values - free_part.values};
        // construction check
        Eigen::VectorXcd defect = traj.states[j].values - free_part.values - v.values;
        out.identity_defect = std::max(out.identity_defect, defect.cwiseAbs().maxCoeff());
        out.probe_times.push_back(t);
        out.v_states.push_back(std::move(v));
    }
    return out;
}

ConcentrationSet concentration_points(const RadialField& v, Dyadic N, double mu3, double c_exp,
                                      double C_cap)
{
    if (!(mu3 > 0.0 && mu3 < 1.0))
        throw std::invalid_argument("concentration_points: mu3 in (0,1) required");
    if (!(c_exp > 0.0)) throw std::invalid_argument("concentration_points: c_exp > 0 required");

    RadialField vN = band_restrict(v, N);
    const auto& r = v.plan->spatial_grid().nodes;
    const int mq = v.plan->spatial_size();

    ConcentrationSet set;
    set.mu3 = mu3;
    set.threshold = std::pow(mu3, c_exp);
    const double ball = 0.5 / mu3;
    const long cap = std::lround(std::ceil(std::pow(mu3, -C_cap)));

    std::vector<char> excluded(mq, 0);
    while (true) {
        int best = -1;
        double best_mag = set.threshold;
        for (int j = 0; j < mq; ++j) {
            if (excluded[j]) continue;
            const double mag = std::abs(vN.values[j]);
            if (mag >= best_mag) {
                best = j;
                best_mag = mag;
            }
        }
        if (best < 0) break;
        if (static_cast<long>(set.points.size()) + 1 > cap)
            throw cap_error("concentration_points: count exceeded mu3^{-C_cap}");
        set.points.push_back(r[best]);
        for (int j = 0; j < mq; ++j)
            if (std::abs(r[j] - r[best]) < ball) excluded[j] = 1;
    }
    set.J = static_cast<int>(set.points.size());
    return set;
}

bool concentration_maximality(const RadialField& v_N, const ConcentrationSet& set)
{
    const auto& r = v_N.plan->spatial_grid().nodes;
    const double ball = 0.5 / set.mu3;
    for (size_t a = 0; a < set.points.size(); ++a)
        for (size_t b = a + 1; b < set.points.size(); ++b)
            if (std::abs(set.points[a] - set.points[b]) < ball) return false;
    for (int j = 0; j < v_N.plan->spatial_size(); ++j) {
        double dist = std::numeric_limits<double>::infinity();
        for (double p : set.points) dist = std::min(dist, std::abs(r[j] - p));
        if (dist >= ball && std::abs(v_N.values[j]) >= set.threshold) return false;
    }
    return true;
}

ExperimentReport spatial_localization_report(const RadialField& v, const ConcentrationSet& set,
                                             const std::vector<double>& radii)
{
    if (!std::is_sorted(radii.begin(), radii.end()))
        throw std::invalid_argument("spatial_localization_report: radii must increase");
    const auto& plan = v.plan;
    Eigen::VectorXcd vhat = plan->forward(v.values);
    const double r_max = plan->r_max();
    const double k2 = 2.0 * plan->k_max(); // |v|^2 oscillates at twice the bandwidth
    const GaussRule& rule = gauss_legendre(32);

    auto exterior_mass = [&](double R) {
        // complement of the union of (p - R, p + R) within [0, r_max]
        std::vector<std::pair<double, double>> keep;
        double cursor = 0.0;
        std::vector<std::pair<double, double>> balls;
        for (double p : set.points) balls.emplace_back(std::max(0.0, p - R), p + R);
        std::sort(balls.begin(), balls.end());
        for (auto& [a, b] : balls) {
            if (a > cursor) keep.emplace_back(cursor, std::min(a, r_max));
            cursor = std::max(cursor, b);
            if (cursor >= r_max) break;
        }
        if (cursor < r_max) keep.emplace_back(cursor, r_max);

        double acc = 0.0;
        for (auto& [a, b] : keep) {
            if (b <= a) continue;
            const int panels = std::max(1, static_cast<int>(std::ceil((b - a) * k2 / (4.0 * M_PI))));
            for (int p = 0; p < panels; ++p) {
                const double pa = a + (b - a) * p / panels;
                const double pb = a + (b - a) * (p + 1) / panels;
                const double mid = 0.5 * (pa + pb), half = 0.5 * (pb - pa);
                for (int i = 0; i < rule.nodes.size(); ++i) {
                    const double rr = mid + half * rule.nodes[i];
                    const double mag = std::abs(plan->eval_from_spectrum(vhat, rr));
                    acc += half * rule.weights[i] * mag * mag * std::pow(rr, plan->dimension() - 1);
                }
            }
        }
        return plan->sphere() * acc;
    };

    ExperimentReport rep;
    rep.experiment = "spatial-localization";
    rep.columns = {"R", "exterior_mass"};
    for (double R : radii) rep.add_row({R, exterior_mass(R)});
    rep.scalars["J"] = set.J;
    rep.scalars["mu3"] = set.mu3;
    return rep;
}

} // namespace bnls
