#include "bnls/params.hpp"

#include "bnls/errors.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace bnls {

void ModelParams::validate() const
{
    if (n < 1) throw regime_error("ModelParams: n must be >= 1");
    if (p <= 1.0) throw regime_error("ModelParams: p must be > 1");
    if (!(epsilon_r0 > 0.0 && epsilon_r0 <= 0.1))
        throw regime_error("ModelParams: epsilon_r0 must lie in (0, 0.1]");
    if (strict_regime) {
        if (n < 5) throw regime_error("ModelParams: regime requires n >= 5");
        const double lo = 1.0 + 8.0 / n;
        const double hi = 1.0 + 8.0 / (n - 4);
        if (!(p > lo && p < hi)) {
            std::ostringstream os;
            os << "ModelParams: p=" << p << " outside (" << lo << ", " << hi << ") for n=" << n;
            throw regime_error(os.str());
        }
    }
}

double critical_exponent(int n, double p)
{
    if (n < 1) throw regime_error("critical_exponent: n must be >= 1");
    if (p <= 1.0) throw regime_error("critical_exponent: p must be > 1");
    return 0.5 * n - 4.0 / (p - 1.0);
}

bool is_B_admissible(Exponent q, Exponent r, int n)
{
    auto in_range = [](Exponent e) { return e.is_inf() || e.finite_value() >= 2.0; };
    if (!in_range(q) || !in_range(r)) return false;
    if (!q.is_inf() && q.finite_value() == 2.0 && r.is_inf()) return false; // excluded endpoint
    const double lhs = q.reciprocal() + (n / 4.0) * r.reciprocal();
    return std::abs(lhs - n / 8.0) <= 1e-12;
}

DerivedExponents derived_exponents(const ModelParams& params)
{
    params.validate();
    const int n = params.n;
    if (n <= 4) throw regime_error("derived_exponents: requires n >= 5");
    DerivedExponents d;
    d.s_c = critical_exponent(n, params.p);
    d.r0 = 2.0 * n / (n - 4.0) - params.epsilon_r0;
    // 1/r0_tilde = 1/r0 - 1/n can vanish or go negative for n <= 6; the value
    // is bookkeeping feeding the Q identity and is kept as-is.
    const double inv_r0t = 1.0 / d.r0 - 1.0 / n;
    d.r0_tilde = inv_r0t != 0.0 ? 1.0 / inv_r0t : std::numeric_limits<double>::infinity();
    const double inv_q0 = n / 8.0 - (n / 4.0) / d.r0;
    if (inv_q0 <= 0.0) throw regime_error("derived_exponents: q0 undefined");
    d.q0 = 1.0 / inv_q0;
    const double inv_Q = ((n + 2.0) / (2.0 * n) - inv_r0t) / (params.p - 1.0);
    if (inv_Q <= 0.0) throw regime_error("derived_exponents: Q undefined");
    d.Q = 1.0 / inv_Q;
    const double q_hi = 2.0 * n / (n - 4.0);
    if (params.strict_regime && !(d.Q >= 2.0 && d.Q < q_hi)) {
        std::ostringstream os;
        os << "derived_exponents: Q=" << d.Q << " outside [2, " << q_hi << ")";
        throw regime_error(os.str());
    }
    d.p_tilde = params.p <= 2.0 ? 2.0 / params.p : 1.0;
    return d;
}

} // namespace bnls
