#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "isowalk/graph.hpp"
#include "isowalk/numeric.hpp"
#include "isowalk/rng.hpp"

namespace isowalk {

struct WalkConfig {
    std::int64_t length = 0;
    std::int64_t trials = 1;
    std::uint64_t seed = 0;
    std::vector<std::size_t> targets;  // W
};

/// Each step picks one of the k edge slots uniformly, so multi-edges and
/// self-loops count with multiplicity.
std::size_t random_walk(const RegularGraph& g, std::size_t start, std::int64_t length, Rng& rng);
/// The visited vertices, start included (length + 1 entries).
std::vector<std::size_t> random_trajectory(const RegularGraph& g, std::size_t start, std::int64_t length, Rng& rng);

/// ceil(ln(2n / sqrt(|W|)) / ln(k / c)), at least 1. c is the second largest
/// absolute eigenvalue. Throws PreconditionError when c >= k.
std::int64_t mixing_length(std::size_t vertex_count, std::size_t degree, double c, std::size_t target_size);
/// ln(2n / sqrt(|W|)), the length quoted without the spectral factor.
double unscaled_mixing_length(std::size_t vertex_count, std::size_t target_size);

/// Exact end-vertex distribution after `length` steps from start.
std::vector<double> walk_distribution(const RegularGraph& g, std::size_t start, std::int64_t length);

inline constexpr std::size_t kExactDistributionLimit = 64;

struct MixingReport {
    WalkConfig config;
    std::size_t start = 0;
    std::size_t vertex_count = 0;
    std::int64_t mixing_length = 0;
    double unscaled_length = 0.0;
    double c = 0.0;

    std::int64_t hits = 0;
    double frequency = 0.0;
    Interval interval;  // Wilson 99%
    Interval band;      // [|W|/(2n), 3|W|/(2n)]
    bool pass = false;

    /// Present when n <= kExactDistributionLimit.
    std::optional<double> exact_probability;
    std::optional<double> total_variation;
    std::optional<double> tv_noise;  // sigma of the multinomial TV estimate
    std::optional<bool> tv_pass;     // TV <= 3 sigma
};

/// Runs cfg.trials walks; trial i draws from Rng::stream(cfg.seed, i).
/// Throws PreconditionError if cfg.length is below mixing_length, and
/// InputError for an invalid config.
MixingReport mixing_experiment(const RegularGraph& g, double c, std::size_t start, const WalkConfig& cfg);

}  // namespace isowalk
