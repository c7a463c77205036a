#include "bnls/ground_state.hpp"

#include "bnls/errors.hpp"

#include <cmath>
#include <limits>

namespace bnls {

namespace {

Eigen::VectorXcd power_nonlinearity(const Eigen::VectorXcd& q, double p)
{
    Eigen::VectorXcd out(q.size());
    for (int j = 0; j < q.size(); ++j) {
        const double v = q[j].real();
        out[j] = std::copysign(std::pow(std::abs(v), p), v);
    }
    return out;
}

} // namespace

RadialField default_seed(const PlanPtr& plan)
{
    RadialField s = sample_field(plan, [](double r) {
        return std::complex<double>(std::exp(-r * r), 0.0);
    });
    const double l2 = lq_norm(s, Exponent(2.0));
    s.values /= l2;
    return s;
}

GroundStateResult petviashvili_solve(const ModelParams& params, const PlanPtr& plan,
                                     const RadialField& seed, const PetviashviliOptions& opt)
{
    params.validate();
    require_same_plan(plan, seed.plan, "petviashvili_solve");
    if (seed.values.cwiseAbs().maxCoeff() == 0.0)
        throw std::invalid_argument("petviashvili_solve: zero seed");
    const double p = params.p;
    const double gamma = p / (p - 1.0);

    const auto& k = plan->frequency_grid().nodes;
    const auto& wk = plan->frequency_weights();
    const int m = plan->size();
    Eigen::VectorXd sym(m); // k^4 + 1
    for (int i = 0; i < m; ++i) sym[i] = std::pow(k[i], 4) + 1.0;

    GroundStateResult res;
    RadialField Q = seed;
    // keep the iterate real
    for (int j = 0; j < Q.values.size(); ++j) Q.values[j] = Q.values[j].real();


    // the spectral coefficients are the primary iterate: (k^4+1) Qhat then
    // reproduces the previous nonlinear transform exactly instead of
    // amplifying fresh transform roundoff by k^4
    Eigen::VectorXcd Qhat = plan->forward(Q.values);
    double residual = std::numeric_limits<double>::infinity();
    for (int it = 0; it < opt.max_iter; ++it) {
        Eigen::VectorXcd q_spatial = plan->inverse(Qhat);
        for (int j = 0; j < q_spatial.size(); ++j) q_spatial[j] = q_spatial[j].real();
        Eigen::VectorXcd What = plan->forward(power_nonlinearity(q_spatial, p));

        double num = 0.0, den = 0.0;
        for (int i = 0; i < m; ++i) {
            num += wk[i] * sym[i] * std::norm(Qhat[i]);
            den += wk[i] * (What[i] * std::conj(Qhat[i])).real();
        }
        if (den == 0.0) throw convergence_error("petviashvili_solve: degenerate multiplier");
        const double M = num / den;
        res.multiplier_history.push_back(M);
        // the first couple of multipliers only rescale the seed amplitude;
        // the divergence guard watches the settled iteration
        if (it >= 3 && !(M > 0.1 && M < 10.0))
            throw convergence_error("petviashvili_solve: multiplier left [1/10, 10]");

        // residual of the current iterate: ||(k^4+1) Qhat - What||_2
        double r2 = 0.0;
        for (int i = 0; i < m; ++i) r2 += wk[i] * std::norm(sym[i] * Qhat[i] - What[i]);
        residual = std::sqrt(plan->sphere() * r2);
        res.residual_history.push_back(residual);
        res.iterations = it;
        if (residual <= opt.tol) {
            Q.values = q_spatial;
            break;
        }

        const double boost = std::pow(M, gamma);
        for (int i = 0; i < m; ++i) Qhat[i] = boost * What[i] / sym[i];
    }
    if (residual > opt.tol)
        throw convergence_error("petviashvili_solve: max iterations without convergence");
    res.Q = Q;
    res.residual = residual;
    return res;
}

RadialField soliton_orbit(const RadialField& Q, double t)
{
    RadialField out = Q;
    out.values *= std::exp(std::complex<double>(0.0, -t));
    return out;
}

double dual_residual(const RadialField& Q, double p)
{
    const auto& plan = Q.plan;
    const auto& k = plan->frequency_grid().nodes;
    const auto& wk = plan->frequency_weights();
    SpectralField Qhat = radial_fourier(Q);
    Eigen::VectorXcd What = plan->forward(power_nonlinearity(Q.values, p));
    double acc = 0.0;
    for (int i = 0; i < plan->size(); ++i) {
        const double sym = std::pow(k[i], 4) + 1.0;
        acc += wk[i] * std::norm(Qhat.values[i] - What[i] / sym);
    }
    return std::sqrt(plan->sphere() * acc);
}

} // namespace bnls
