#include "qlattice/mc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "qlattice/dist.hpp"
#include "parallel.hpp"

namespace qlattice::mc {

using qnum::KahanSum;

SampleBatch sample(const lattice::ModelParams& params, std::span<const double> grid,
                   std::int64_t n_paths, std::uint64_t seed) {
    if (n_paths < 1) throw std::invalid_argument("sample: n_paths must be >= 1");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (grid[i] < 0.0 || grid[i] > params.maturity) {
            throw std::invalid_argument("sample: grid times must lie in [0, T]");
        }
        if (i > 0 && grid[i] < grid[i - 1]) {
            throw std::invalid_argument("sample: grid times must be sorted");
        }
    }
    const lattice::StepSchedule sched = lattice::build_schedule(params);
    const std::int64_t n = params.steps;

    // Record step index for each grid time: floor(N t / T).
    std::vector<std::int64_t> record_steps(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        record_steps[i] = std::min<std::int64_t>(
            n, static_cast<std::int64_t>(std::floor(static_cast<double>(n) * grid[i] /
                                                    params.maturity)));
    }

    SampleBatch batch;
    batch.seed = seed;
    batch.n_paths = n_paths;
    batch.grid_times.assign(grid.begin(), grid.end());
    batch.terminal_counts.resize(static_cast<std::size_t>(n_paths));
    batch.log_prices_at.assign(grid.size(),
                               std::vector<double>(static_cast<std::size_t>(n_paths)));

    const double log_spot = std::log(params.spot);
    const double log_up = sched.log_up;
    const double log_down = sched.log_down;

    detail::parallel_for(static_cast<std::size_t>(n_paths), [&](std::size_t path) {
        SplitMix64 rng = SplitMix64::for_path(seed, static_cast<std::uint64_t>(path));
        std::int64_t ups = 0;
        std::size_t next_record = 0;
        while (next_record < record_steps.size() && record_steps[next_record] == 0) {
            batch.log_prices_at[next_record][path] = log_spot;
            ++next_record;
        }
        for (std::int64_t k = 0; k < n; ++k) {
            if (rng.next_uniform() < sched.switch_probs[static_cast<std::size_t>(k)]) ++ups;
            while (next_record < record_steps.size() && record_steps[next_record] == k + 1) {
                batch.log_prices_at[next_record][path] =
                    log_spot + static_cast<double>(ups) * log_up +
                    static_cast<double>(k + 1 - ups) * log_down;
                ++next_record;
            }
        }
        batch.terminal_counts[path] = ups;
    });
    return batch;
}

namespace {

struct MeanVar {
    double mean;
    double var; // unbiased
};

MeanVar mean_var(std::span<const double> xs) {
    const double n = static_cast<double>(xs.size());
    KahanSum sum;
    for (double x : xs) sum.add(x);
    const double mean = sum.value() / n;
    KahanSum sq;
    for (double x : xs) sq.add((x - mean) * (x - mean));
    return {mean, xs.size() > 1 ? sq.value() / (n - 1.0) : 0.0};
}

} // namespace

CltReport clt_check(const SampleBatch& batch, const lattice::ModelParams& params) {
    const lattice::StepSchedule sched = lattice::build_schedule(params);
    const dist::KempParams kemp{params.steps, params.theta, sched.trend};
    const dist::Moments exact = dist::kemp_moments(kemp);
    const double sqrt_n = std::sqrt(static_cast<double>(params.steps));

    std::vector<double> normalized(batch.terminal_counts.size());
    for (std::size_t i = 0; i < normalized.size(); ++i) {
        normalized[i] = (static_cast<double>(batch.terminal_counts[i]) - exact.mean) / sqrt_n;
    }
    const MeanVar stats = mean_var(normalized);
    const double paths = static_cast<double>(batch.n_paths);
    const double target = params.theta / ((1.0 + params.theta) * (1.0 + params.theta));

    CltReport report;
    report.theta = params.theta;
    report.exact_mean = exact.mean;
    report.target_variance = target;
    report.empirical_mean = stats.mean;
    report.empirical_variance = stats.var;
    report.relative_var_deviation = std::abs(stats.var - target) / target;
    report.mean_z = stats.mean / std::sqrt(stats.var / paths);
    report.var_z = (stats.var - target) / (stats.var * std::sqrt(2.0 / (paths - 1.0)));
    return report;
}

std::vector<FddPoint> fdd_check(const SampleBatch& batch, const lattice::ModelParams& params) {
    std::vector<FddPoint> points;
    points.reserve(batch.grid_times.size());
    const double paths = static_cast<double>(batch.n_paths);
    for (std::size_t i = 0; i < batch.grid_times.size(); ++i) {
        const double t = batch.grid_times[i];
        const limit::LimitLaw law = limit::limit_log_law(t, params);
        const MeanVar stats = mean_var(batch.log_prices_at[i]);
        FddPoint point;
        point.t = t;
        point.limit_mean = law.mean_log;
        point.limit_var = law.var_log;
        point.empirical_mean = stats.mean;
        point.empirical_var = stats.var;
        if (stats.var > 0.0) {
            point.mean_z = (stats.mean - law.mean_log) / std::sqrt(stats.var / paths);
            point.var_z =
                (stats.var - law.var_log) / (stats.var * std::sqrt(2.0 / (paths - 1.0)));
        } else {
            point.mean_z = (stats.mean == law.mean_log) ? 0.0 : std::numeric_limits<double>::infinity();
            point.var_z = (law.var_log == 0.0) ? 0.0 : std::numeric_limits<double>::infinity();
        }
        points.push_back(point);
    }
    return points;
}

} // namespace qlattice::mc
