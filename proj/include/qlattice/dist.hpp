#ifndef QLATTICE_DIST_HPP
#define QLATTICE_DIST_HPP

#include <cstdint>
#include <vector>

#include "qlattice/qnum.hpp"

namespace qlattice::dist {

using qnum::QValue;

/// Parameters of the count distribution of Z_n = X_1 + ... + X_n where the
/// X_k are independent Bernoulli steps with odds theta * q^{k-1}.
struct KempParams {
    std::int64_t n;
    double theta;
    QValue q;

    KempParams(std::int64_t n_, double theta_, QValue q_);
};

/// Full table of log P(Z_n = k), k = 0..n.
struct PmfTable {
    KempParams params;
    std::vector<double> log_probs;
};

/// P(X_k = 1) = theta q^{k-1} / (1 + theta q^{k-1}), k >= 1.
/// switch_prob and complement_prob of the same step sum to 1 exactly as
/// computed (the smaller one is derived from the other by an exact
/// subtraction).
double switch_prob(std::int64_t k, double theta, const QValue& q);
double complement_prob(std::int64_t k, double theta, const QValue& q);

/// log P(Z_n = k); qnum::log_zero outside 0..n.
double kemp_log_pmf(const KempParams& params, std::int64_t k);

/// Builds the pmf by the forward one-step recurrence in linear scale.
/// Throws std::length_error above the cap (the recurrence is O(n^2)).
PmfTable kemp_pmf_table(const KempParams& params, std::int64_t cap = 20000);

/// P(Z_n >= m), exact via log-sum-exp over the closed form in O(n).
double kemp_tail(const KempParams& params, std::int64_t m);

struct Moments {
    double mean;
    double variance;
};

/// Exact mean and variance from the Bernoulli schedule sums.
Moments kemp_moments(const KempParams& params);

/// Probability generating function E[t^{Z_n}] for t in [0, 1].
double kemp_pgf(const KempParams& params, double t);

/// P(tau >= k) for the first-failure time tau, k >= 1.
double qgeom_survival(std::int64_t k, double theta, const QValue& q);

/// P(tau = k | tau >= k) = 1/(1 + theta q^{k-1}): constant when q = 1,
/// increasing when q < 1, decreasing when q > 1.
double failure_rate(std::int64_t k, double theta, const QValue& q);

} // namespace qlattice::dist

#endif
