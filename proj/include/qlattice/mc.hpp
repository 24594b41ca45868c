#ifndef QLATTICE_MC_HPP
#define QLATTICE_MC_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "qlattice/lattice.hpp"
#include "qlattice/limit.hpp"

namespace qlattice::mc {

/// SplitMix64: a 64-bit mixing generator with period 2^64. Each path owns
/// its own stream whose state is derived from (seed, path index), so path
/// generation is order independent and batches are bitwise reproducible
/// for any worker count.
class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t state) : state_(state) {}

    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t next() {
        state_ += 0x9E3779B97F4A7C15ULL;
        return mix(state_);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double next_uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    static SplitMix64 for_path(std::uint64_t seed, std::uint64_t path) {
        return SplitMix64(mix(seed ^ (0x9E3779B97F4A7C15ULL * (path + 1))));
    }

  private:
    std::uint64_t state_;
};

struct SampleBatch {
    std::uint64_t seed = 0;
    std::int64_t n_paths = 0;
    std::vector<double> grid_times;
    std::vector<std::int64_t> terminal_counts;        // Z_N per path
    std::vector<std::vector<double>> log_prices_at;   // [grid index][path]
};

/// Draws n_paths independent walks of the Bernoulli schedule and records
/// log S at every requested grid time (step floor(N t / T)) plus Z_N.
SampleBatch sample(const lattice::ModelParams& params, std::span<const double> grid,
                   std::int64_t n_paths, std::uint64_t seed);

struct CltReport {
    double theta;
    double exact_mean;          // E[Z_N] from the schedule sums
    double target_variance;     // theta / (1 + theta)^2
    double empirical_mean;      // mean of (Z_N - E[Z_N]) / sqrt(N)
    double empirical_variance;  // variance of the same
    double relative_var_deviation;
    double mean_z;              // deviation in standard errors
    double var_z;
};

CltReport clt_check(const SampleBatch& batch, const lattice::ModelParams& params);

struct FddPoint {
    double t;
    double limit_mean;
    double limit_var;
    double empirical_mean;
    double empirical_var;
    double mean_z;
    double var_z;
};

/// Per grid time: empirical mean/variance of log S against the limiting
/// Gaussian law, with deviations expressed in standard errors.
std::vector<FddPoint> fdd_check(const SampleBatch& batch, const lattice::ModelParams& params);

} // namespace qlattice::mc

#endif
