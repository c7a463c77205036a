#pragma once

#include <Eigen/Dense>
#include <complex>
#include <memory>

namespace bnls {

/// Sampled radial grid in R^n: strictly increasing nodes in (0, r_max).
struct RadialGrid {
    int n = 5;
    double r_max = 0.0;
    Eigen::VectorXd nodes;

    int size() const { return static_cast<int>(nodes.size()); }
    double spacing_near(double r) const; // local node spacing around radius r
};

/// Radial Fourier plan of order nu = (n-2)/2 on a Fourier-Bessel (Dini) basis.
///
/// Modes phi_i(r) ~ J_nu(k_i r)/r^nu with k_i = a_i / R (a_i the J_nu zeros)
/// are orthogonal on [0,R] in the r^{n-1} measure, and their continuous radial
/// Fourier transform is supported exactly on the frequency nodes k_i, so the
/// spectral side is diagonal. The spatial side lives on composite
/// Gauss-Legendre nodes fine enough to integrate products of the top modes to
/// near machine precision; the synthesis matrix is then Loewdin-orthonormalized
/// against the discrete inner product, which makes the round trip and the
/// Plancherel identity exact by construction (so every unimodular frequency
/// multiplier built on the plan conserves the discrete mass exactly).
///
/// Plans are immutable after construction and safe to share across threads.
class HankelPlan {
public:
    HankelPlan(int n, int m, double r_max);

    int dimension() const { return n_; }
    int size() const { return m_; }          // spectral mode count
    int spatial_size() const { return mq_; } // spatial node count
    double nu() const { return nu_; }
    double r_max() const { return r_max_; }
    double k_max() const { return k_max_; }
    double sphere() const { return sphere_; }

    const RadialGrid& spatial_grid() const { return spatial_; }
    const RadialGrid& frequency_grid() const { return frequency_; }

    /// Quadrature weights for int_0^R g(r) r^{n-1} dr over spatial nodes.
    const Eigen::VectorXd& radial_weights() const { return w_radial_; }
    /// Weights making sum_i w_i |fhat(k_i)|^2 = int |fhat|^2 k^{n-1} dk exact
    /// on the mode basis.
    const Eigen::VectorXd& frequency_weights() const { return w_frequency_; }

    /// forward: samples f(r_j) -> samples fhat(k_i) (unitary convention,
    /// Gaussian e^{-r^2/2} maps to e^{-k^2/2}).
    Eigen::VectorXcd forward(const Eigen::VectorXcd& f) const;
    Eigen::VectorXcd inverse(const Eigen::VectorXcd& fhat) const;

    /// Synthesis of the band-limited field at an arbitrary radius.
    std::complex<double> eval_from_spectrum(const Eigen::VectorXcd& fhat, double r) const;

    /// max-norm departure of the raw Gram matrix from identity before the
    /// orthonormalization (quadrature quality diagnostic).
    double gram_defect() const { return defect_; }

private:
    int n_ = 0;
    int m_ = 0;
    int mq_ = 0;
    double nu_ = 0.0;
    double r_max_ = 0.0;
    double k_max_ = 0.0;
    double sphere_ = 0.0;
    double defect_ = 0.0;
    RadialGrid spatial_;
    RadialGrid frequency_;
    Eigen::VectorXd w_radial_;    // GL weights times r^{n-1}
    Eigen::VectorXd w_frequency_; // eta_i^2 k_i^{n-2}
    Eigen::VectorXd spec_scale_;  // fhat_i = c_i * spec_scale_i for mode coeff c
    Eigen::MatrixXd synth_;       // mq x m: samples = synth * c
    Eigen::MatrixXd anal_;        // m x mq: c = anal * samples

    Eigen::VectorXcd to_coeff(const Eigen::VectorXcd& samples) const;
    Eigen::VectorXcd to_samples(const Eigen::VectorXcd& coeff) const;
};

using PlanPtr = std::shared_ptr<const HankelPlan>;

/// Shared plan cache keyed by (n, m, r_max).
PlanPtr get_plan(int n, int m, double r_max);

} // namespace bnls
