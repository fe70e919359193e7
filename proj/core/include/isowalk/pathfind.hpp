#pragma once

// Two-phase meet-in-the-middle search. Phase one walks from A until ceil(sqrt h)
// distinct endpoints are known; phase two walks from B until it lands on one.

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "isowalk/graph.hpp"

namespace isowalk {

struct PathCertificate {
    std::size_t start = 0;
    std::size_t end = 0;
    std::vector<Step> steps;

    std::size_t length() const { return steps.size(); }
};

/// Replays the steps from start and compares with end.
bool verify_certificate(const RegularGraph& g, const PathCertificate& c);

struct SearchStats {
    std::int64_t step1_trials = 0;
    std::int64_t step2_trials = 0;
    std::int64_t distinct_neighbors = 0;
    std::int64_t h = 0;
    std::int64_t walk_length = 0;
};

struct PathConfig {
    /// Overrides ceil(ln(2h)).
    std::optional<std::int64_t> walk_length;
    /// Each phase gives up after cap_factor * h trials.
    std::int64_t trial_cap_factor = 100;
};

inline constexpr std::int64_t kMinSearchOrder = 9;

std::int64_t search_walk_length(std::int64_t h);
/// ceil(sqrt(h)).
std::int64_t neighbor_target(std::int64_t h);

using NeighborMap = std::map<std::size_t, PathCertificate>;

/// Phase one from a. Trial i uses Rng::stream(Rng::derive(seed, 1), i); a
/// repeated endpoint is discarded but still counted. Throws PreconditionError
/// for h < 9 or when the trial cap is reached.
NeighborMap collect_neighbors(const RegularGraph& g, std::size_t a, std::uint64_t seed, SearchStats& stats,
                              const PathConfig& cfg = {});

/// Phase two from b, streams derived with tag 2. The certificate runs from b to
/// a key of neighbors.
PathCertificate meet_from_target(const RegularGraph& g, std::size_t b, const NeighborMap& neighbors,
                                 std::uint64_t seed, SearchStats& stats, const PathConfig& cfg = {});

struct PathResult {
    PathCertificate certificate;
    SearchStats stats;
};

/// A -> X followed by the inverse of B -> X. Throws ConsistencyError if the
/// result fails to replay.
PathResult find_path(const RegularGraph& g, std::size_t a, std::size_t b, std::uint64_t seed,
                     const PathConfig& cfg = {});

/// Shortest path by breadth-first search; the fallback for small or
/// non-expanding graphs. Nullopt when b is unreachable.
std::optional<PathCertificate> bfs_path(const RegularGraph& g, std::size_t a, std::size_t b);

/// 4 n h^2 / (2h - 3n)^2. Throws PreconditionError unless 3n < 2h.
boost::multiprecision::cpp_rational expected_trials_bound(std::int64_t h, std::int64_t n);

}  // namespace isowalk
