#include "qlattice/limit.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qlattice::limit {

double norm_cdf(double x) { return 0.5 * std::erfc(-x * std::numbers::sqrt2 / 2.0); }

double norm_pdf(double x) {
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

double trend_drift(double t, const lattice::ModelParams& params) {
    const double scale = std::pow(params.tq(), 1.5) / std::pow(params.maturity, 1.5);
    return params.sigma * params.eta * std::sqrt(params.theta) * scale * t * t /
           (2.0 * (1.0 + params.theta));
}

double short_rate(double t, const lattice::ModelParams& params) {
    if (t < 0.0) throw std::invalid_argument("short_rate: t must be nonnegative");
    const double scale = std::pow(params.tq(), 1.5) / std::pow(params.maturity, 1.5);
    return 0.5 * params.zeta * params.sigma * params.sigma +
           params.sigma * params.eta * std::sqrt(params.theta) * scale * t /
               (1.0 + params.theta);
}

LimitLaw limit_log_law(double t, const lattice::ModelParams& params) {
    if (t < 0.0 || t > params.maturity) {
        throw std::invalid_argument("limit_log_law: t must lie in [0, T]");
    }
    const double mean = std::log(params.spot) + trend_drift(t, params) -
                        0.5 * (1.0 - params.zeta) * params.sigma * params.sigma * t;
    return {mean, params.sigma * params.sigma * t, t};
}

double limit_discount(const lattice::ModelParams& params) {
    return std::exp(-0.5 * params.zeta * params.sigma * params.sigma * params.maturity -
                    trend_drift(params.maturity, params));
}

double bs_call_limit(const lattice::ModelParams& params) {
    params.validate();
    if (!(params.strike > 0.0)) {
        throw std::invalid_argument("bs_call_limit: strike must be positive");
    }
    const double sig_sqrt_t = params.sigma * std::sqrt(params.maturity);
    const double d1 = (std::log(params.spot / params.strike) +
                       0.5 * (1.0 + params.zeta) * params.sigma * params.sigma * params.maturity +
                       trend_drift(params.maturity, params)) /
                      sig_sqrt_t;
    const double d2 = d1 - sig_sqrt_t;
    return params.spot * norm_cdf(d1) - params.strike * limit_discount(params) * norm_cdf(d2);
}

} // namespace qlattice::limit
