#ifndef QLATTICE_CONVERGE_HPP
#define QLATTICE_CONVERGE_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qlattice/approx.hpp"
#include "qlattice/lattice.hpp"

namespace qlattice::converge {

enum class Method {
    closed,
    backward,
    dual,
    edgeworth,
};

Method method_from_string(const std::string& name);
std::string to_string(Method method);

/// One point of a convergence sweep. local_order is
/// log(err(N_i)/err(N_{i+1})) / log(N_{i+1}/N_i), absent on the last row or
/// when either error vanishes.
struct ConvergenceRow {
    std::int64_t steps;
    double price;
    double abs_err;
    std::optional<double> local_order;
};

/// Prices the call at every N in n_list (increasing) with the chosen method
/// and measures |price - bs_call_limit|. Rows are computed concurrently and
/// assembled in order; pricer errors are rethrown with the offending N named.
std::vector<ConvergenceRow> sweep(const lattice::ModelParams& params,
                                  std::span<const std::int64_t> n_list, Method method);

struct OrderFit {
    double slope;
    double r2;
};

/// Least-squares slope of log(abs_err) against log(N) after averaging the
/// errors of adjacent rows (even/odd lattice oscillation smoothing); each
/// averaged point sits at the geometric midpoint of its pair.
/// Requires at least 4 rows with positive error.
OrderFit fit_order(std::span<const ConvergenceRow> rows);

/// Slope acceptance windows for the two predicted rates.
bool slope_in_window(double slope, approx::ConvergenceRate rate);

/// One cell of the reference-table comparison.
struct Table1Cell {
    double eta;
    double theta;
    std::int64_t steps;     // 0 marks the closed-form limit column
    double price;
    double reference;       // published value
    double deviation;       // |price - reference|
    double tolerance;
    bool reproducible;      // false for the configurations whose published
                            // values are inconsistent with the displayed limit
    bool within_tolerance;
};

struct Table1Report {
    std::vector<Table1Cell> cells;
    bool all_reproducible_within_tolerance;
};

/// Reference configuration behind the table: S0 = 100, K = 95, sigma = 0.2,
/// maturity 0.5, zeta = 1, trend timescale 1.
lattice::ModelParams table1_params(double eta, double theta, std::int64_t steps);

/// Runs the six (eta, theta) configurations at N in {100, 1000, 10000} plus
/// the closed-form limit column and compares against the published values.
Table1Report table1_report();

} // namespace qlattice::converge

#endif
