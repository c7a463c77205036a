#pragma once

#include <cmath>
#include <string>

namespace bnls {

/// Lebesgue exponent in [1, inf], with infinity kept symbolic so that
/// admissibility arithmetic is exact (1/inf == 0, no float sentinels).
class Exponent {
public:
    constexpr Exponent() : value_(2.0), inf_(false) {}
    constexpr Exponent(double v) : value_(v), inf_(false) {}
    static constexpr Exponent infinity()
    {
        Exponent e;
        e.inf_ = true;
        e.value_ = 0.0;
        return e;
    }
    constexpr bool is_inf() const { return inf_; }
    constexpr double reciprocal() const { return inf_ ? 0.0 : 1.0 / value_; }
    constexpr double finite_value() const { return value_; }
    constexpr bool operator==(const Exponent& o) const
    {
        return inf_ == o.inf_ && (inf_ || value_ == o.value_);
    }

private:
    double value_;
    bool inf_;
};

enum class Sign { focusing, defocusing };

/// Model parameters of i u_t + Lap^2 u = sign |u|^{p-1} u on R^n.
struct ModelParams {
    int n = 5;
    double p = 3.0;
    Sign sign = Sign::focusing;
    double epsilon_r0 = 1e-3; // realizes the open endpoint in r0 = 2n/(n-4) - eps
    bool strict_regime = true; // enforce the mass-supercritical / energy-subcritical window

    void validate() const;
    double nonlinearity_sign() const { return sign == Sign::focusing ? +1.0 : -1.0; }
};

struct DerivedExponents {
    double s_c = 0.0;
    double r0 = 0.0;
    double r0_tilde = 0.0;
    double q0 = 0.0;
    double Q = 0.0;
    double p_tilde = 0.0;
};

/// s_c = n/2 - 4/(p-1); rejects p <= 1.
double critical_exponent(int n, double p);

/// B-admissibility: 1/q + n/(4r) = n/8 (to 1e-12), 2 <= q,r <= inf, (q,r) != (2,inf).
bool is_B_admissible(Exponent q, Exponent r, int n);

/// Exponent family derived from (n, p, epsilon_r0); throws regime_error if the
/// computed Q leaves [2, 2n/(n-4)).
DerivedExponents derived_exponents(const ModelParams& params);

} // namespace bnls
