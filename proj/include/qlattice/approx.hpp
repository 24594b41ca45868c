#ifndef QLATTICE_APPROX_HPP
#define QLATTICE_APPROX_HPP

#include <cstdint>
#include <optional>

#include "qlattice/lattice.hpp"

namespace qlattice::approx {

using qnum::QValue;

/// Edgeworth-corrected normal approximation of P(Z_n >= m):
///   Phi(-z_m) + (1 - z_m^2)/(6 sigma_n) phi(z_m) (1 - (2/sigma_n^2) sum p_k^2 (1-p_k)),
/// with the continuity-corrected standardized cutoff
///   z_m = (m - sum p_k - 1/2) / sigma_n.
struct TailApprox {
    double z_cutoff;        // z_m
    double sigma2;          // Var[Z_n] under the schedule
    double skew_correction; // the bracketed factor; exactly 0 for p_k = 1/2
    double value;           // clamped to [0, 1]
    std::optional<double> eps; // cutoff fractional part, set by the market builder
};

TailApprox edgeworth_tail(std::int64_t n, std::int64_t m, double theta, const QValue& q);

/// Same expansion with the cutoff and its fractional part taken from a
/// market schedule and strike; theta_measure selects the tail measure
/// (the spot-measure stretch or the tilted theta_N).
TailApprox edgeworth_market_tail(const lattice::StepSchedule& sched, double spot, double strike,
                                 double theta_measure);

/// Fast approximate call price S0 E_up - K disc E, with both tails replaced
/// by their Edgeworth approximations.
double price_call_edgeworth(const lattice::ModelParams& params);

enum class ConvergenceRate {
    order_one_over_n,
    order_one_over_sqrt_n,
};

/// O(1/N) exactly when theta = 1 and zeta = 1 (within 1e-12), else O(1/sqrt(N)).
ConvergenceRate predict_rate(const lattice::ModelParams& params);

} // namespace qlattice::approx

#endif
