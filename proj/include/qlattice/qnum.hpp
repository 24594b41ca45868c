#ifndef QLATTICE_QNUM_HPP
#define QLATTICE_QNUM_HPP

#include <cstdint>
#include <limits>

namespace qlattice::qnum {

/// Trend base q > 0 together with log(q) kept in log1p form, so that
/// schedules with q - 1 of order 1e-6 keep full relative precision.
/// log_q() is exactly 0.0 when q is exactly 1, which selects the exact
/// classical branches everywhere downstream.
class QValue {
  public:
    explicit QValue(double q);

    /// Build q = 1 + delta without the rounding loss of forming 1 + delta
    /// first. This is the constructor used by step schedules.
    static QValue one_plus(double delta);

    double value() const { return q_; }
    double log_q() const { return log_q_; }
    bool is_one() const { return log_q_ == 0.0; }

    /// q^e evaluated through the stored log, exact 1.0 when q == 1.
    double pow(double e) const;

  private:
    QValue(double q, double log_q) : q_(q), log_q_(log_q) {}
    double q_;
    double log_q_;
};

inline constexpr double log_zero = -std::numeric_limits<double>::infinity();

/// Compensated (Kahan) accumulator for long sums of like-signed or
/// near-cancelling terms; keeps 1e-12 relative accuracy over 1e4 terms.
class KahanSum {
  public:
    void add(double x) {
        double y = x - carry_;
        double t = sum_ + y;
        carry_ = (t - sum_) - y;
        sum_ = t;
    }
    double value() const { return sum_; }

  private:
    double sum_ = 0.0;
    double carry_ = 0.0;
};

/// log(1 + e^x), stable for x of any magnitude and sign.
double log1p_exp(double x);

/// log|expm1(x)| without overflow for large x or underflow for tiny x.
double log_abs_expm1(double x);

/// The q-integer [m]_q = 1 + q + ... + q^{m-1} = (1 - q^m)/(1 - q).
/// Exactly m when q == 1; 0 when m == 0.
double q_integer(std::int64_t m, const QValue& q);

/// log [m]_q; log_zero for m == 0.
double log_q_integer(std::int64_t m, const QValue& q);

/// log of the Gaussian binomial coefficient (n choose k)_q, computed as
/// the product of q-integer ratios over the shorter side of the symmetry
/// k <-> n-k. Returns log_zero for k outside [0, n].
double log_q_binomial(std::int64_t n, std::int64_t k, const QValue& q);

/// Linear-scale Gaussian binomial coefficient; guarded to n <= 60 because
/// larger coefficients are carried in log scale only.
double q_binomial(std::int64_t n, std::int64_t k, const QValue& q);

/// log of (1 + theta)(1 + theta q) ... (1 + theta q^{n-1}), accumulated
/// with compensated summation.
double log_rising_product(std::int64_t n, double theta, const QValue& q);

} // namespace qlattice::qnum

#endif
