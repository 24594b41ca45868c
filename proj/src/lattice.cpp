#include "qlattice/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "qlattice/dist.hpp"

namespace qlattice::lattice {

using qnum::KahanSum;

void ModelParams::validate() const {
    if (!(spot > 0.0)) throw std::invalid_argument("ModelParams: spot must be positive");
    if (!(strike >= 0.0)) throw std::invalid_argument("ModelParams: strike must be nonnegative");
    if (!(sigma > 0.0)) throw std::invalid_argument("ModelParams: sigma must be positive");
    if (!(maturity > 0.0)) throw std::invalid_argument("ModelParams: maturity must be positive");
    if (!(theta > 0.0)) throw std::invalid_argument("ModelParams: theta must be positive");
    if (steps < 1) throw std::invalid_argument("ModelParams: steps must be >= 1");
    if (!(tq() > 0.0)) throw std::invalid_argument("ModelParams: trend timescale must be positive");
    if (!std::isfinite(zeta) || !std::isfinite(eta)) {
        throw std::invalid_argument("ModelParams: zeta and eta must be finite");
    }
}

StepSchedule build_schedule(const ModelParams& params) {
    params.validate();
    const auto n = params.steps;
    const double dt = params.maturity / static_cast<double>(n);
    const double down_exponent = params.sigma * std::sqrt(params.theta * dt);
    const double up_exponent = params.sigma * std::sqrt(dt / params.theta);

    StepSchedule sched;
    sched.dt = dt;
    sched.theta = params.theta;
    if (params.mode == ScheduleMode::exponential) {
        sched.log_down = -down_exponent;
        sched.log_up = up_exponent;
        sched.down = std::exp(sched.log_down);
        sched.up = std::exp(sched.log_up);
        sched.down_m1 = std::expm1(sched.log_down);
        sched.up_m1 = std::expm1(sched.log_up);
    } else {
        sched.down_m1 = -down_exponent + 0.5 * params.zeta * params.sigma * params.sigma *
                                             params.theta * dt;
        sched.up_m1 = up_exponent + 0.5 * params.zeta * params.sigma * params.sigma * dt /
                                        params.theta;
        sched.down = 1.0 + sched.down_m1;
        sched.up = 1.0 + sched.up_m1;
        if (!(sched.down > 0.0)) {
            throw std::invalid_argument(
                "build_schedule: down factor a = " + std::to_string(sched.down) +
                " <= 0; polynomial mode requires sigma*sqrt(theta*dt) < 1");
        }
        sched.log_down = std::log1p(sched.down_m1);
        sched.log_up = std::log1p(sched.up_m1);
    }
    if (!(sched.down < 1.0 && sched.up > 1.0)) {
        throw std::invalid_argument("build_schedule: returns must satisfy a < 1 < b, got a = " +
                                    std::to_string(sched.down) +
                                    ", b = " + std::to_string(sched.up));
    }

    const double trend_delta =
        params.eta * std::pow(params.tq() / static_cast<double>(n), 1.5);
    if (!(1.0 + trend_delta > 0.0)) {
        throw std::invalid_argument(
            "build_schedule: trend base q_N = 1 + eta (Tq/N)^{3/2} = " +
            std::to_string(1.0 + trend_delta) + " must be positive");
    }
    sched.trend = QValue::one_plus(trend_delta);

    sched.rates.resize(static_cast<std::size_t>(n));
    sched.switch_probs.resize(static_cast<std::size_t>(n));
    for (std::int64_t k = 0; k < n; ++k) {
        const double p = dist::switch_prob(k + 1, params.theta, sched.trend);
        const double c = 1.0 - p; // exact complement by construction
        // r_k as the convex combination of a-1 and b-1 keeps precision when
        // the rate is orders below either return increment.
        sched.rates[static_cast<std::size_t>(k)] = c * sched.down_m1 + p * sched.up_m1;
        sched.switch_probs[static_cast<std::size_t>(k)] = p;
    }
    return sched;
}

double account_value(const StepSchedule& sched) {
    KahanSum acc;
    for (double r : sched.rates) acc.add(std::log1p(r));
    return std::exp(acc.value());
}

double discount_factor(const StepSchedule& sched) {
    KahanSum acc;
    for (double r : sched.rates) acc.add(std::log1p(r));
    return std::exp(-acc.value());
}

StepMoments one_step_moments(const StepSchedule& sched, double theta, std::int64_t k) {
    if (k < 1 || k > sched.steps()) {
        throw std::out_of_range("one_step_moments: step index out of 1..N");
    }
    const double w = theta * sched.trend.pow(static_cast<double>(k - 1));
    const double mean = (sched.down + sched.up * w) / (1.0 + w);
    const double spread = sched.up - sched.down;
    const double variance = spread * spread * w / ((1.0 + w) * (1.0 + w));
    return {mean, variance};
}

Payoff call_payoff(double strike) {
    return [strike](double s) { return std::max(s - strike, 0.0); };
}

Payoff put_payoff(double strike) {
    return [strike](double s) { return std::max(strike - s, 0.0); };
}

namespace {

/// Shared core of the closed-form sums: value at time n of a payoff paid
/// after the remaining N - n steps, with the node spot given.
double closed_sum(const ModelParams& params, const StepSchedule& sched, std::int64_t n,
                  double spot_n, const Payoff& payoff) {
    const std::int64_t remaining = params.steps - n;
    const double log_theta = std::log(params.theta);
    const double lq = sched.trend.log_q();
    const double theta_b = params.theta * sched.up;

    // log prod_{l=n..N-1} (a + theta b q^l)
    KahanSum denom;
    for (std::int64_t l = n; l < params.steps; ++l) {
        denom.add(std::log(sched.down + theta_b * sched.trend.pow(static_cast<double>(l))));
    }

    const double log_spot = std::log(spot_n);
    KahanSum total;
    double log_qbinom = 0.0; // (remaining choose 0)_q
    for (std::int64_t k = 0; k <= remaining; ++k) {
        if (k > 0) {
            log_qbinom += qnum::log_q_integer(remaining - k + 1, sched.trend) -
                          qnum::log_q_integer(k, sched.trend);
        }
        const double kd = static_cast<double>(k);
        const double exponent = kd * static_cast<double>(n) +
                                static_cast<double>(k * (k - 1) / 2);
        const double log_weight =
            kd * log_theta + exponent * lq + log_qbinom - denom.value();
        const double log_terminal = log_spot + kd * sched.log_up +
                                    static_cast<double>(remaining - k) * sched.log_down;
        total.add(std::exp(log_weight) * payoff(std::exp(log_terminal)));
    }
    return total.value();
}

} // namespace

double price_european_closed(const ModelParams& params, const Payoff& payoff) {
    const StepSchedule sched = build_schedule(params);
    return closed_sum(params, sched, 0, params.spot, payoff);
}

double price_at(const ModelParams& params, std::int64_t n, double spot_n, const Payoff& payoff) {
    if (n < 0 || n > params.steps) {
        throw std::out_of_range("price_at: time index n must lie in 0..N");
    }
    if (!(spot_n > 0.0)) throw std::invalid_argument("price_at: spot must be positive");
    if (n == params.steps) return payoff(spot_n);
    const StepSchedule sched = build_schedule(params);
    return closed_sum(params, sched, n, spot_n, payoff);
}

double price_backward(const ModelParams& params, const Payoff& payoff) {
    const StepSchedule sched = build_schedule(params);
    const std::int64_t n = params.steps;
    const double log_spot = std::log(params.spot);
    std::vector<double> values(static_cast<std::size_t>(n) + 1);
    for (std::int64_t i = 0; i <= n; ++i) {
        const double log_terminal = log_spot + static_cast<double>(i) * sched.log_up +
                                    static_cast<double>(n - i) * sched.log_down;
        values[static_cast<std::size_t>(i)] = payoff(std::exp(log_terminal));
    }
    // One level kept in place; ascending i uses the old pair (i, i+1).
    for (std::int64_t j = n - 1; j >= 0; --j) {
        const double p = sched.switch_probs[static_cast<std::size_t>(j)];
        const double c = 1.0 - p;
        const double disc = 1.0 + sched.rates[static_cast<std::size_t>(j)];
        for (std::int64_t i = 0; i <= j; ++i) {
            values[static_cast<std::size_t>(i)] =
                (p * values[static_cast<std::size_t>(i + 1)] +
                 c * values[static_cast<std::size_t>(i)]) /
                disc;
        }
    }
    return values[0];
}

std::int64_t call_cutoff_index(const StepSchedule& sched, double spot, double strike) {
    if (!(strike > 0.0)) throw std::invalid_argument("call_cutoff_index: strike must be positive");
    const std::int64_t n = sched.steps();
    const double log_ratio = sched.log_up - sched.log_down;
    const double crossing =
        (std::log(strike) - std::log(spot) - static_cast<double>(n) * sched.log_down) / log_ratio;
    const double tol = 1e-12 * strike;
    auto strictly_above = [&](std::int64_t m) {
        const double terminal = spot * std::exp(static_cast<double>(m) * sched.log_up +
                                                static_cast<double>(n - m) * sched.log_down);
        return terminal > strike + tol;
    };
    std::int64_t m = static_cast<std::int64_t>(std::floor(crossing)) + 1;
    m = std::clamp<std::int64_t>(m, 0, n + 1);
    while (m <= n && !strictly_above(m)) ++m;
    while (m > 0 && strictly_above(m - 1)) --m;
    return m;
}

double cutoff_fraction(const StepSchedule& sched, double spot, double strike,
                       std::int64_t cutoff) {
    const std::int64_t n = sched.steps();
    const double log_ratio = sched.log_up - sched.log_down;
    const double crossing =
        (std::log(strike) - std::log(spot) - static_cast<double>(n) * sched.log_down) / log_ratio;
    return std::clamp(static_cast<double>(cutoff) - crossing, 0.0, 1.0);
}

double price_call_dual(const ModelParams& params) {
    if (!(params.strike > 0.0)) {
        throw std::invalid_argument("price_call_dual: strike must be positive");
    }
    const StepSchedule sched = build_schedule(params);
    const std::int64_t m = call_cutoff_index(sched, params.spot, params.strike);
    const dist::KempParams up_measure{params.steps, sched.theta_up(), sched.trend};
    const dist::KempParams spot_measure{params.steps, params.theta, sched.trend};
    return params.spot * dist::kemp_tail(up_measure, m) -
           params.strike * discount_factor(sched) * dist::kemp_tail(spot_measure, m);
}

double martingale_residual(const ModelParams& params) {
    const StepSchedule sched = build_schedule(params);
    const std::int64_t n = params.steps;
    const double ratio = std::exp(sched.log_up - sched.log_down);

    std::vector<double> probs(static_cast<std::size_t>(n) + 1, 0.0);
    probs[0] = 1.0;
    KahanSum log_account;
    double worst = 0.0;
    for (std::int64_t j = 1; j <= n; ++j) {
        const double p = sched.switch_probs[static_cast<std::size_t>(j - 1)];
        const double c = 1.0 - p;
        for (std::int64_t k = j; k >= 1; --k) {
            probs[static_cast<std::size_t>(k)] =
                std::fma(c, probs[static_cast<std::size_t>(k)],
                         p * probs[static_cast<std::size_t>(k - 1)]);
        }
        probs[0] *= c;
        log_account.add(std::log1p(sched.rates[static_cast<std::size_t>(j - 1)]));

        // E[S_j / S0] = a^j sum_k P(Z_j = k) (b/a)^k
        KahanSum expectation;
        double ratio_pow = 1.0;
        for (std::int64_t k = 0; k <= j; ++k) {
            expectation.add(probs[static_cast<std::size_t>(k)] * ratio_pow);
            ratio_pow *= ratio;
        }
        const double discounted = expectation.value() *
                                  std::exp(static_cast<double>(j) * sched.log_down -
                                           log_account.value());
        worst = std::max(worst, std::abs(discounted - 1.0));
    }
    return worst;
}

} // namespace qlattice::lattice
