#include "qlattice/qnum.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qlattice::qnum {

QValue::QValue(double q) : q_(q) {
    if (!(q > 0.0)) {
        throw std::invalid_argument("QValue: q must be positive, got " + std::to_string(q));
    }
    // For q in [0.5, 2] the subtraction q - 1 is exact (Sterbenz), so
    // log1p keeps full precision near 1; elsewhere plain log is fine.
    log_q_ = (q >= 0.5 && q <= 2.0) ? std::log1p(q - 1.0) : std::log(q);
}

QValue QValue::one_plus(double delta) {
    if (!(delta > -1.0)) {
        throw std::invalid_argument("QValue: 1 + delta must be positive, got delta = " +
                                    std::to_string(delta));
    }
    return QValue(1.0 + delta, std::log1p(delta));
}

double QValue::pow(double e) const {
    if (is_one()) return 1.0;
    return std::exp(e * log_q_);
}

double log1p_exp(double x) {
    if (x > 0.0) return x + std::log1p(std::exp(-x));
    return std::log1p(std::exp(x));
}

double log_abs_expm1(double x) {
    if (x > 709.0) return x + std::log1p(-std::exp(-x));
    return std::log(std::abs(std::expm1(x)));
}

double q_integer(std::int64_t m, const QValue& q) {
    if (m < 0) throw std::invalid_argument("q_integer: m must be nonnegative");
    if (m == 0) return 0.0;
    if (q.is_one()) return static_cast<double>(m);
    // (1 - q^m)/(1 - q) = expm1(m log q)/expm1(log q); numerator and
    // denominator share the sign of log q, so the ratio is positive.
    return std::expm1(static_cast<double>(m) * q.log_q()) / std::expm1(q.log_q());
}

double log_q_integer(std::int64_t m, const QValue& q) {
    if (m < 0) throw std::invalid_argument("log_q_integer: m must be nonnegative");
    if (m == 0) return log_zero;
    if (q.is_one()) return std::log(static_cast<double>(m));
    return log_abs_expm1(static_cast<double>(m) * q.log_q()) - log_abs_expm1(q.log_q());
}

double log_q_binomial(std::int64_t n, std::int64_t k, const QValue& q) {
    if (n < 0) throw std::invalid_argument("log_q_binomial: n must be nonnegative");
    if (k < 0 || k > n) return log_zero;
    if (k > n - k) k = n - k;
    if (k == 0) return 0.0;
    KahanSum acc;
    for (std::int64_t i = 1; i <= k; ++i) {
        acc.add(log_q_integer(n - k + i, q));
        acc.add(-log_q_integer(i, q));
    }
    return acc.value();
}

double q_binomial(std::int64_t n, std::int64_t k, const QValue& q) {
    if (n > 60) {
        throw std::domain_error("q_binomial: linear scale limited to n <= 60, use log_q_binomial");
    }
    if (k < 0 || k > n) return 0.0;
    return std::exp(log_q_binomial(n, k, q));
}

double log_rising_product(std::int64_t n, double theta, const QValue& q) {
    if (n < 0) throw std::invalid_argument("log_rising_product: n must be nonnegative");
    if (!(theta > 0.0)) throw std::invalid_argument("log_rising_product: theta must be positive");
    const double log_theta = std::log(theta);
    KahanSum acc;
    for (std::int64_t l = 0; l < n; ++l) {
        acc.add(log1p_exp(log_theta + static_cast<double>(l) * q.log_q()));
    }
    return acc.value();
}

} // namespace qlattice::qnum
