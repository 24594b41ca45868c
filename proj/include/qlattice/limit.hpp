#ifndef QLATTICE_LIMIT_HPP
#define QLATTICE_LIMIT_HPP

#include "qlattice/lattice.hpp"

namespace qlattice::limit {

/// Standard normal cdf via the complementary error function; absolute
/// error below 1e-14 across the real line.
double norm_cdf(double x);
double norm_pdf(double x);

/// Gaussian law of log S_t in the continuous-time limit.
struct LimitLaw {
    double mean_log;
    double var_log; // sigma^2 t
    double t;
};

/// Accumulated trend drift up to time t:
///   sigma eta sqrt(theta) Tq^{3/2} t^2 / (2 (1+theta) T^{3/2}),
/// which at t = T and Tq = T is the familiar sigma eta sqrt(theta) T^2 /
/// (2 (1+theta)).
double trend_drift(double t, const lattice::ModelParams& params);

/// Instantaneous short rate r_t = zeta sigma^2/2 + sigma eta sqrt(theta)
/// (Tq/T)^{3/2} t / (1+theta); constant in t iff eta = 0.
double short_rate(double t, const lattice::ModelParams& params);

LimitLaw limit_log_law(double t, const lattice::ModelParams& params);

/// exp(-integral of r_t over [0, T]) = exp(-zeta sigma^2 T/2 - trend_drift(T)).
double limit_discount(const lattice::ModelParams& params);

/// Limiting European call price S0 Phi(d1) - K disc Phi(d2).
double bs_call_limit(const lattice::ModelParams& params);

} // namespace qlattice::limit

#endif
