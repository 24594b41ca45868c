#ifndef QLATTICE_LATTICE_HPP
#define QLATTICE_LATTICE_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "qlattice/qnum.hpp"

namespace qlattice::lattice {

using qnum::QValue;

enum class ScheduleMode {
    /// Gross returns truncated at the displayed second-order terms:
    /// a = 1 - sigma sqrt(theta dt) + zeta sigma^2 theta dt / 2,
    /// b = 1 + sigma sqrt(dt/theta) + zeta sigma^2 dt / (2 theta).
    polynomial,
    /// a = exp(-sigma sqrt(theta dt)), b = exp(sigma sqrt(dt/theta));
    /// equivalent to the polynomial form with zeta = 1 up to O(dt^{3/2}).
    exponential,
};

/// One market configuration. trend_timescale (Tq) is the timescale inside
/// the trend base q_N = 1 + eta (Tq/N)^{3/2}; it defaults to the maturity.
struct ModelParams {
    double spot = 100.0;
    double strike = 100.0;
    double sigma = 0.2;
    double maturity = 1.0;
    double theta = 1.0;
    double zeta = 1.0;
    double eta = 0.0;
    std::int64_t steps = 100;
    std::optional<double> trend_timescale{};
    ScheduleMode mode = ScheduleMode::exponential;

    double tq() const { return trend_timescale.value_or(maturity); }

    /// Throws std::invalid_argument naming the offending field.
    void validate() const;
};

/// Per-step derived quantities of one schedule. rates[k] and
/// switch_probs[k] correspond to step k+1 (k = 0..N-1).
struct StepSchedule {
    double down;       // a, in (0, 1)
    double up;         // b, > 1
    double log_down;   // log a, exact in exponential mode
    double log_up;     // log b
    double down_m1;    // a - 1 without forming a first
    double up_m1;      // b - 1
    QValue trend{1.0}; // q_N
    double dt;
    double theta;
    std::vector<double> rates;
    std::vector<double> switch_probs;

    std::int64_t steps() const { return static_cast<std::int64_t>(rates.size()); }
    /// theta_N = theta * b / a, the tilted stretch of the spot-measure tail.
    double theta_up() const { return theta * up / down; }
};

StepSchedule build_schedule(const ModelParams& params);

/// Price of the riskless account at maturity, prod (1 + r_k).
double account_value(const StepSchedule& sched);
/// Zero-coupon bond price prod (1 + r_k)^{-1}.
double discount_factor(const StepSchedule& sched);

struct StepMoments {
    double mean;
    double variance;
};

/// Mean and variance of the one-step gross return S_k / S_{k-1}, 1 <= k <= N.
StepMoments one_step_moments(const StepSchedule& sched, double theta, std::int64_t k);

using Payoff = std::function<double(double)>;

Payoff call_payoff(double strike);
Payoff put_payoff(double strike);

/// Time-0 price by the closed q-binomial sum, O(N) plus payoff calls.
/// Terminal prices are formed on log scale.
double price_european_closed(const ModelParams& params, const Payoff& payoff);

/// Price at time n given the spot at that node; n = N returns the payoff,
/// n = 0 with spot_n = S0 coincides with price_european_closed.
double price_at(const ModelParams& params, std::int64_t n, double spot_n, const Payoff& payoff);

/// Backward induction over the recombining lattice; O(N^2) time, O(N) memory.
double price_backward(const ModelParams& params, const Payoff& payoff);

/// Smallest integer m in [0, N+1] with S0 b^m a^{N-m} > K; ties on the
/// boundary are resolved with an absolute tolerance of 1e-12 K.
std::int64_t call_cutoff_index(const StepSchedule& sched, double spot, double strike);

/// Fractional part eps of the cutoff, m - log(K/(S0 a^N)) / log(b/a), in [0, 1].
double cutoff_fraction(const StepSchedule& sched, double spot, double strike,
                       std::int64_t cutoff);

/// European call priced as S0 P_up(Z_N >= m) - K disc P(Z_N >= m), where the
/// first tail uses the tilted stretch theta_N = theta b/a.
double price_call_dual(const ModelParams& params);

/// max_n | E[S_n] prod_{k<=n} (1+r_k)^{-1} - S0 | / S0, with the expectation
/// taken through the count distribution table, not the per-step identity.
double martingale_residual(const ModelParams& params);

} // namespace qlattice::lattice

#endif
