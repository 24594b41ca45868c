#include "qlattice/dist.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <stdexcept>
#include <string>

namespace qlattice::dist {

using qnum::KahanSum;
using qnum::log_zero;

KempParams::KempParams(std::int64_t n_, double theta_, QValue q_) : n(n_), theta(theta_), q(q_) {
    if (n < 0) throw std::invalid_argument("KempParams: n must be nonnegative");
    if (!(theta > 0.0)) throw std::invalid_argument("KempParams: theta must be positive");
}

namespace {

double step_odds(std::int64_t k, double theta, const QValue& q) {
    // theta * q^{k-1}
    return theta * q.pow(static_cast<double>(k - 1));
}

} // namespace

double switch_prob(std::int64_t k, double theta, const QValue& q) {
    if (k < 1) throw std::invalid_argument("switch_prob: k must be >= 1");
    const double w = step_odds(k, theta, q);
    if (w <= 1.0) return 1.0 - 1.0 / (1.0 + w);
    return w / (1.0 + w);
}

double complement_prob(std::int64_t k, double theta, const QValue& q) {
    if (k < 1) throw std::invalid_argument("complement_prob: k must be >= 1");
    const double w = step_odds(k, theta, q);
    if (w <= 1.0) return 1.0 / (1.0 + w);
    return 1.0 - w / (1.0 + w);
}

double kemp_log_pmf(const KempParams& params, std::int64_t k) {
    if (k < 0 || k > params.n) return log_zero;
    const double kd = static_cast<double>(k);
    const double half_pairs = static_cast<double>(k * (k - 1) / 2);
    return kd * std::log(params.theta) + half_pairs * params.q.log_q() +
           qnum::log_q_binomial(params.n, k, params.q) -
           qnum::log_rising_product(params.n, params.theta, params.q);
}

PmfTable kemp_pmf_table(const KempParams& params, std::int64_t cap) {
    if (params.n > cap) {
        throw std::length_error("kemp_pmf_table: n = " + std::to_string(params.n) +
                                " exceeds cap " + std::to_string(cap));
    }
    const std::int64_t n = params.n;
    std::vector<double> probs(static_cast<std::size_t>(n) + 1, 0.0);
    probs[0] = 1.0;
    // P_{j}(k) = P_{j-1}(k) (1 - p_j) + P_{j-1}(k-1) p_j; all terms positive,
    // so the linear recurrence is cancellation free.
    for (std::int64_t j = 1; j <= n; ++j) {
        const double up = switch_prob(j, params.theta, params.q);
        const double down = 1.0 - up;
        for (std::int64_t k = j; k >= 1; --k) {
            probs[static_cast<std::size_t>(k)] =
                std::fma(down, probs[static_cast<std::size_t>(k)],
                         up * probs[static_cast<std::size_t>(k - 1)]);
        }
        probs[0] *= down;
    }
    PmfTable table{params, std::vector<double>(static_cast<std::size_t>(n) + 1)};
    for (std::int64_t k = 0; k <= n; ++k) {
        const double p = probs[static_cast<std::size_t>(k)];
        // Tail classes underflow the linear scale around 1e-308; fall back
        // to the closed form there so that every log entry stays finite.
        table.log_probs[static_cast<std::size_t>(k)] =
            (p >= DBL_MIN) ? std::log(p) : kemp_log_pmf(params, k);
    }
    return table;
}

double kemp_tail(const KempParams& params, std::int64_t m) {
    const std::int64_t n = params.n;
    if (m <= 0) return 1.0;
    if (m > n) return 0.0;
    const double log_theta = std::log(params.theta);
    const double lq = params.q.log_q();
    std::vector<double> lp(static_cast<std::size_t>(n - m) + 1);
    lp[0] = kemp_log_pmf(params, m);
    // Ratio identity: log pmf(k+1) - log pmf(k)
    //   = log theta + k log q + log [n-k]_q - log [k+1]_q,
    // which makes the whole tail O(n) log evaluations.
    for (std::int64_t k = m; k < n; ++k) {
        lp[static_cast<std::size_t>(k - m + 1)] =
            lp[static_cast<std::size_t>(k - m)] + log_theta + static_cast<double>(k) * lq +
            qnum::log_q_integer(n - k, params.q) - qnum::log_q_integer(k + 1, params.q);
    }
    const double mx = *std::max_element(lp.begin(), lp.end());
    if (mx == log_zero) return 0.0;
    KahanSum acc;
    for (double v : lp) acc.add(std::exp(v - mx));
    return std::min(1.0, std::exp(mx) * acc.value());
}

Moments kemp_moments(const KempParams& params) {
    KahanSum mean;
    KahanSum var;
    for (std::int64_t k = 1; k <= params.n; ++k) {
        const double p = switch_prob(k, params.theta, params.q);
        const double c = complement_prob(k, params.theta, params.q);
        mean.add(p);
        var.add(p * c);
    }
    return {mean.value(), var.value()};
}

double kemp_pgf(const KempParams& params, double t) {
    if (t < 0.0 || t > 1.0) throw std::invalid_argument("kemp_pgf: t must lie in [0, 1]");
    const double denom = qnum::log_rising_product(params.n, params.theta, params.q);
    if (t == 0.0) return std::exp(-denom); // pgf at zero is the mass of the empty class
    const double numer = qnum::log_rising_product(params.n, params.theta * t, params.q);
    return std::exp(numer - denom);
}

double qgeom_survival(std::int64_t k, double theta, const QValue& q) {
    if (k < 1) throw std::invalid_argument("qgeom_survival: k must be >= 1");
    double prod = 1.0;
    for (std::int64_t l = 1; l < k; ++l) prod *= switch_prob(l, theta, q);
    return prod;
}

double failure_rate(std::int64_t k, double theta, const QValue& q) {
    if (k < 1) throw std::invalid_argument("failure_rate: k must be >= 1");
    return complement_prob(k, theta, q);
}

} // namespace qlattice::dist
