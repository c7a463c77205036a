#pragma once

#include "bnls/field.hpp"
#include "bnls/params.hpp"

#include <vector>

namespace bnls {

struct GroundStateResult {
    RadialField Q;                          // real-valued stationary profile
    double residual = 0.0;                  // L2 norm of Lap^2 Q + Q - |Q|^{p-1} Q
    std::vector<double> multiplier_history; // Petviashvili factors M_k
    std::vector<double> residual_history;
    int iterations = 0;
};

struct PetviashviliOptions {
    double tol = 1e-11;
    int max_iter = 600;
};

/// Spectral fixed-point iteration for Lap^2 Q + Q = |Q|^{p-1} Q:
///   Qhat_{k+1} = M_k^gamma (k^4+1)^{-1} (|Q_k|^{p-1} Q_k)^hat,
///   M_k = <(k^4+1) Qhat, Qhat> / <(|Q|^{p-1}Q)^hat, Qhat>,  gamma = p/(p-1).
/// Throws on divergence (M outside [1/10, 10]) or when max_iter is exhausted.
GroundStateResult petviashvili_solve(const ModelParams& params, const PlanPtr& plan,
                                     const RadialField& seed,
                                     const PetviashviliOptions& opt = {});

/// Default deterministic seed: e^{-r^2} scaled to unit L2.
RadialField default_seed(const PlanPtr& plan);

/// Stationary orbit u(t) = e^{-i t} Q.
RadialField soliton_orbit(const RadialField& Q, double t);

/// Independent frequency-domain residual: || Qhat - (|Q|^{p-1}Q)^hat / (k^4+1) ||_2.
double dual_residual(const RadialField& Q, double p);

} // namespace bnls
