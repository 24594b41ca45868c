#include "qlattice/approx.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qlattice/dist.hpp"
#include "qlattice/limit.hpp"

namespace qlattice::approx {

using qnum::KahanSum;

namespace {

TailApprox edgeworth_core(std::int64_t n, double m_effective, double theta, const QValue& q) {
    KahanSum mean_acc;
    KahanSum var_acc;
    KahanSum skew_acc;
    for (std::int64_t k = 1; k <= n; ++k) {
        const double p = dist::switch_prob(k, theta, q);
        const double c = dist::complement_prob(k, theta, q);
        mean_acc.add(p);
        var_acc.add(p * c);
        skew_acc.add(p * p * c);
    }
    const double sigma2 = var_acc.value();
    if (!(sigma2 > 0.0)) {
        throw std::invalid_argument("edgeworth_tail: degenerate schedule, Var[Z_n] = 0");
    }
    const double sigma_n = std::sqrt(sigma2);
    const double z = (m_effective - mean_acc.value() - 0.5) / sigma_n;
    // Multiply before dividing: for p_k = 1/2 the numerator equals sigma2
    // bitwise and the correction is exactly zero.
    const double correction = 1.0 - (2.0 * skew_acc.value()) / sigma2;
    const double raw = limit::norm_cdf(-z) +
                       (1.0 - z * z) / (6.0 * sigma_n) * limit::norm_pdf(z) * correction;
    TailApprox out;
    out.z_cutoff = z;
    out.sigma2 = sigma2;
    out.skew_correction = correction;
    out.value = std::clamp(raw, 0.0, 1.0);
    return out;
}

} // namespace

TailApprox edgeworth_tail(std::int64_t n, std::int64_t m, double theta, const QValue& q) {
    if (n < 1) throw std::invalid_argument("edgeworth_tail: n must be >= 1");
    if (m < 1 || m > n) throw std::invalid_argument("edgeworth_tail: m must lie in 1..n");
    return edgeworth_core(n, static_cast<double>(m), theta, q);
}

TailApprox edgeworth_market_tail(const lattice::StepSchedule& sched, double spot, double strike,
                                 double theta_measure) {
    const std::int64_t m = lattice::call_cutoff_index(sched, spot, strike);
    TailApprox out = edgeworth_core(sched.steps(), static_cast<double>(m), theta_measure,
                                    sched.trend);
    out.eps = lattice::cutoff_fraction(sched, spot, strike, m);
    return out;
}

double price_call_edgeworth(const lattice::ModelParams& params) {
    if (!(params.strike > 0.0)) {
        throw std::invalid_argument("price_call_edgeworth: strike must be positive");
    }
    const lattice::StepSchedule sched = lattice::build_schedule(params);
    const TailApprox up = edgeworth_market_tail(sched, params.spot, params.strike,
                                                sched.theta_up());
    const TailApprox spot_measure = edgeworth_market_tail(sched, params.spot, params.strike,
                                                          params.theta);
    return params.spot * up.value -
           params.strike * lattice::discount_factor(sched) * spot_measure.value;
}

ConvergenceRate predict_rate(const lattice::ModelParams& params) {
    const bool unit_stretch = std::abs(params.theta - 1.0) <= 1e-12;
    const bool unit_tilt = std::abs(params.zeta - 1.0) <= 1e-12;
    return (unit_stretch && unit_tilt) ? ConvergenceRate::order_one_over_n
                                       : ConvergenceRate::order_one_over_sqrt_n;
}

} // namespace qlattice::approx
