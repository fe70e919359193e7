#include "isowalk/pathfind.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <string>

#include "isowalk/errors.hpp"
#include "isowalk/rng.hpp"

namespace isowalk {

namespace {

PathCertificate walk_recorded(const RegularGraph& g, std::size_t start, std::int64_t length, Rng& rng) {
    PathCertificate c{start, start, {}};
    for (std::int64_t i = 0; i < length; ++i) {
        const std::size_t slot = rng.below(g.degree());
        c.steps.push_back(g.label(slot));
        c.end = g.neighbor(c.end, slot);
    }
    return c;
}

std::int64_t resolve_length(const PathConfig& cfg, std::int64_t h) {
    if (cfg.walk_length) {
        if (*cfg.walk_length < 0) throw InputError("walk length must be non-negative");
        return *cfg.walk_length;
    }
    return search_walk_length(h);
}

void check_searchable(const RegularGraph& g) {
    const auto h = static_cast<std::int64_t>(g.vertex_count());
    if (h < kMinSearchOrder)
        throw PreconditionError("h = " + std::to_string(h) +
                                " is below 9; use the exhaustive search (bfs_path) instead");
    if (g.degree() == 0) throw PreconditionError("the graph has no edges");
}

}  // namespace

bool verify_certificate(const RegularGraph& g, const PathCertificate& c) {
    if (c.start >= g.vertex_count() || c.end >= g.vertex_count()) return false;
    const auto end = g.replay(c.start, c.steps);
    return end && *end == c.end;
}

std::int64_t search_walk_length(std::int64_t h) {
    if (h < 1) throw InputError("group order must be positive");
    return static_cast<std::int64_t>(std::ceil(std::log(2.0 * static_cast<double>(h))));
}

std::int64_t neighbor_target(std::int64_t h) {
    if (h < 0) throw InputError("group order must be non-negative");
    std::int64_t r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(h)));
    while (r * r > h) --r;
    while (r * r < h) ++r;
    return r;
}

NeighborMap collect_neighbors(const RegularGraph& g, std::size_t a, std::uint64_t seed, SearchStats& stats,
                              const PathConfig& cfg) {
    check_searchable(g);
    if (a >= g.vertex_count()) throw InputError("start vertex is not in the graph");
    const auto h = static_cast<std::int64_t>(g.vertex_count());
    const std::int64_t length = resolve_length(cfg, h);
    const std::int64_t want = neighbor_target(h);
    const std::int64_t cap = cfg.trial_cap_factor * h;
    const std::uint64_t family = Rng::derive(seed, 1);

    stats.h = h;
    stats.walk_length = length;
    stats.step1_trials = 0;
    NeighborMap out;
    while (static_cast<std::int64_t>(out.size()) < want) {
        if (stats.step1_trials >= cap)
            throw PreconditionError("step 1 reached its cap of " + std::to_string(cap) +
                                    " trials; the graph is not an expander on this component");
        Rng rng = Rng::stream(family, static_cast<std::uint64_t>(stats.step1_trials));
        ++stats.step1_trials;
        PathCertificate c = walk_recorded(g, a, length, rng);
        out.try_emplace(c.end, std::move(c));
    }
    stats.distinct_neighbors = static_cast<std::int64_t>(out.size());
    return out;
}

PathCertificate meet_from_target(const RegularGraph& g, std::size_t b, const NeighborMap& neighbors,
                                 std::uint64_t seed, SearchStats& stats, const PathConfig& cfg) {
    if (neighbors.empty()) throw PreconditionError("the neighbor map is empty");
    if (b >= g.vertex_count()) throw InputError("target vertex is not in the graph");
    const auto h = static_cast<std::int64_t>(g.vertex_count());
    const std::int64_t length = resolve_length(cfg, h);
    const std::int64_t cap = cfg.trial_cap_factor * h;
    const std::uint64_t family = Rng::derive(seed, 2);

    stats.h = h;
    stats.walk_length = length;
    stats.step2_trials = 0;
    for (;;) {
        if (stats.step2_trials >= cap)
            throw PreconditionError("step 2 reached its cap of " + std::to_string(cap) +
                                    " trials without meeting a neighbor of the start");
        Rng rng = Rng::stream(family, static_cast<std::uint64_t>(stats.step2_trials));
        ++stats.step2_trials;
        PathCertificate c = g.degree() == 0 ? PathCertificate{b, b, {}} : walk_recorded(g, b, length, rng);
        if (neighbors.contains(c.end)) return c;
    }
}

PathResult find_path(const RegularGraph& g, std::size_t a, std::size_t b, std::uint64_t seed,
                     const PathConfig& cfg) {
    if (a >= g.vertex_count() || b >= g.vertex_count()) throw InputError("path endpoint is not in the graph");
    PathResult r;
    r.certificate = PathCertificate{a, b, {}};
    r.stats.h = static_cast<std::int64_t>(g.vertex_count());
    if (a == b) return r;

    const NeighborMap neighbors = collect_neighbors(g, a, seed, r.stats, cfg);
    const PathCertificate back = meet_from_target(g, b, neighbors, seed, r.stats, cfg);
    const PathCertificate& forward = neighbors.at(back.end);

    r.certificate.steps = forward.steps;
    // Invert through the graph: a self-inverse slot is its own inverse label.
    for (auto it = back.steps.rbegin(); it != back.steps.rend(); ++it)
        r.certificate.steps.push_back(g.label(g.inverse_slot(*g.slot_of(*it))));
    if (!verify_certificate(g, r.certificate))
        throw ConsistencyError("assembled path does not replay from " + g.name(a) + " to " + g.name(b));
    return r;
}

std::optional<PathCertificate> bfs_path(const RegularGraph& g, std::size_t a, std::size_t b) {
    const std::size_t n = g.vertex_count();
    if (a >= n || b >= n) throw InputError("path endpoint is not in the graph");
    constexpr std::size_t none = static_cast<std::size_t>(-1);
    std::vector<std::size_t> parent(n, none), via(n, none);
    parent[a] = a;
    std::deque<std::size_t> queue{a};
    while (!queue.empty() && parent[b] == none) {
        const std::size_t v = queue.front();
        queue.pop_front();
        for (std::size_t j = 0; j < g.degree(); ++j) {
            const std::size_t w = g.neighbor(v, j);
            if (parent[w] != none) continue;
            parent[w] = v;
            via[w] = j;
            queue.push_back(w);
        }
    }
    if (parent[b] == none) return std::nullopt;
    PathCertificate c{a, b, {}};
    for (std::size_t v = b; v != a; v = parent[v]) c.steps.push_back(g.label(via[v]));
    std::reverse(c.steps.begin(), c.steps.end());
    return c;
}

boost::multiprecision::cpp_rational expected_trials_bound(std::int64_t h, std::int64_t n) {
    if (h < 1 || n < 0) throw InputError("expected_trials_bound needs h >= 1 and n >= 0");
    if (3 * n >= 2 * h) throw PreconditionError("expected_trials_bound needs 3n < 2h");
    using boost::multiprecision::cpp_int;
    const cpp_int hh = h, nn = n;
    const cpp_int denom = (2 * hh - 3 * nn) * (2 * hh - 3 * nn);
    return boost::multiprecision::cpp_rational(4 * nn * hh * hh, denom);
}

}  // namespace isowalk
