#include <gtest/gtest.h>

#include <cmath>
#include <deque>

#include "isowalk/cayley.hpp"
#include "isowalk/errors.hpp"
#include "isowalk/pathfind.hpp"

using namespace isowalk;
using boost::multiprecision::cpp_rational;

namespace {

CayleyGraph cyclic_cayley(std::int64_t n, std::vector<std::int64_t> steps) {
    FiniteAbelianGroup g({n});
    std::vector<GroupElement> els;
    std::vector<std::string> labels;
    for (auto s : steps) {
        els.push_back(g.element({s}));
        labels.push_back("s" + std::to_string(s));
    }
    return build_cayley(Subgroup(g, {g.element({1})}), symmetric_generators(g, els, labels));
}

std::vector<int> bfs_distances(const RegularGraph& g, std::size_t a) {
    std::vector<int> dist(g.vertex_count(), -1);
    std::deque<std::size_t> q{a};
    dist[a] = 0;
    while (!q.empty()) {
        const auto v = q.front();
        q.pop_front();
        for (std::size_t j = 0; j < g.degree(); ++j) {
            const auto w = g.neighbor(v, j);
            if (dist[w] < 0) {
                dist[w] = dist[v] + 1;
                q.push_back(w);
            }
        }
    }
    return dist;
}

}  // namespace

TEST(Bound, Examples) {
    EXPECT_EQ(expected_trials_bound(9, 3), cpp_rational(12));
    EXPECT_EQ(expected_trials_bound(9, 0), cpp_rational(0));
    EXPECT_EQ(expected_trials_bound(100, 10), cpp_rational(400000, 28900));
    EXPECT_THROW(expected_trials_bound(9, 6), PreconditionError);
    EXPECT_THROW(expected_trials_bound(0, 0), InputError);
}

TEST(Bound, DominatesPerStepSum) {
    // Summing 4h^2/(2h-3i)^2 over i < n is at most n times its largest term, the closed form.
    for (std::int64_t h : {9, 25, 100, 400, 1000}) {
        const std::int64_t n = neighbor_target(h);
        cpp_rational sum = 0;
        for (std::int64_t i = 0; i < n; ++i) sum += cpp_rational(4 * h * h, (2 * h - 3 * i) * (2 * h - 3 * i));
        const cpp_rational closed = expected_trials_bound(h, n);
        EXPECT_LE(sum, closed) << h;
        EXPECT_GE(sum, cpp_rational(n));
    }
    EXPECT_EQ(neighbor_target(9), 3);
    EXPECT_EQ(neighbor_target(10), 4);
    EXPECT_EQ(search_walk_length(9), 3);
    EXPECT_EQ(search_walk_length(100), static_cast<std::int64_t>(std::ceil(std::log(200.0))));
}

TEST(FindPath, AllPairsOnSmallGraphs) {
    for (const auto& g : {cyclic_cayley(9, {1, 2}), cyclic_cayley(25, {1, 7, 11})}) {
        const auto& rg = g.graph();
        std::uint64_t seed = 0;
        for (std::size_t a = 0; a < rg.vertex_count(); ++a)
            for (std::size_t b = 0; b < rg.vertex_count(); ++b) {
                const auto r = find_path(rg, a, b, ++seed);
                EXPECT_EQ(r.certificate.start, a);
                EXPECT_EQ(r.certificate.end, b);
                EXPECT_TRUE(verify_certificate(rg, r.certificate));
                if (a == b) {
                    EXPECT_EQ(r.certificate.length(), 0u);
                    continue;
                }
                EXPECT_EQ(r.stats.distinct_neighbors, neighbor_target(rg.vertex_count()));
                EXPECT_GE(r.stats.step1_trials, r.stats.distinct_neighbors);
                EXPECT_GE(r.stats.step2_trials, 1);
                EXPECT_EQ(r.certificate.length(), static_cast<std::size_t>(2 * r.stats.walk_length));
            }
    }
}

TEST(FindPath, SelfInverseLabels) {
    // Z/14 with the involution 7: the reversed half must reuse the single "s7" slot.
    const auto g = cyclic_cayley(14, {1, 2, 7});
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const auto r = find_path(g.graph(), 0, 9, seed);
        EXPECT_TRUE(verify_certificate(g.graph(), r.certificate));
    }
}

TEST(FindPath, Deterministic) {
    const auto g = cyclic_cayley(25, {1, 7, 11});
    const auto x = find_path(g.graph(), 0, 13, 99);
    const auto y = find_path(g.graph(), 0, 13, 99);
    EXPECT_EQ(x.certificate.steps, y.certificate.steps);
    EXPECT_EQ(x.stats.step1_trials, y.stats.step1_trials);
    EXPECT_EQ(x.stats.step2_trials, y.stats.step2_trials);
}

TEST(FindPath, Rejections) {
    const auto small = cyclic_cayley(5, {1});
    EXPECT_THROW(find_path(small.graph(), 0, 1, 1), PreconditionError);
    EXPECT_EQ(find_path(small.graph(), 2, 2, 1).certificate.length(), 0u);
    EXPECT_THROW(find_path(small.graph(), 0, 9, 1), InputError);
    const auto split = cyclic_cayley(18, {2});
    EXPECT_THROW(find_path(split.graph(), 0, 1, 1), PreconditionError);
    PathConfig bad;
    bad.walk_length = -1;
    const auto g = cyclic_cayley(9, {1, 2});
    EXPECT_THROW(find_path(g.graph(), 0, 1, 1, bad), InputError);
}

TEST(Phases, DegenerateImmediateHit) {
    const auto g = cyclic_cayley(9, {1, 2});
    NeighborMap nb;
    nb[4] = PathCertificate{0, 4, {}};
    SearchStats stats;
    PathConfig zero;
    zero.walk_length = 0;
    const auto c = meet_from_target(g.graph(), 4, nb, 1, stats, zero);
    EXPECT_EQ(c.end, 4u);
    EXPECT_EQ(c.length(), 0u);
    EXPECT_EQ(stats.step2_trials, 1);
}

TEST(Phases, UnreachableKeysHitTheCap) {
    const auto split = cyclic_cayley(18, {2});
    NeighborMap nb;
    nb[1] = PathCertificate{1, 1, {}};
    nb[3] = PathCertificate{1, 3, {}};
    SearchStats stats;
    EXPECT_THROW(meet_from_target(split.graph(), 0, nb, 1, stats), PreconditionError);
    EXPECT_EQ(stats.step2_trials, 100 * 18);
    EXPECT_THROW(meet_from_target(split.graph(), 0, {}, 1, stats), PreconditionError);
}

TEST(Phases, CollectNeighborsCountsAndReplays) {
    const auto g = cyclic_cayley(25, {1, 7, 11});
    SearchStats stats;
    const auto nb = collect_neighbors(g.graph(), 7, 5, stats);
    EXPECT_EQ(nb.size(), 5u);  // ceil(sqrt 25)
    EXPECT_EQ(stats.distinct_neighbors, 5);
    for (const auto& [v, cert] : nb) {
        EXPECT_EQ(cert.start, 7u);
        EXPECT_EQ(cert.end, v);
        EXPECT_EQ(cert.length(), static_cast<std::size_t>(stats.walk_length));
        EXPECT_TRUE(verify_certificate(g.graph(), cert));
    }
}

TEST(Phases, MeanTrialsWithinBoundAtNine) {
    // Monte Carlo against the expectation bound 4 h^{1/2} = 12 at h = 9.
    const auto g = cyclic_cayley(9, {1, 2});
    const int runs = 200;
    double sum1 = 0, sq1 = 0, sum2 = 0, sq2 = 0;
    for (int r = 0; r < runs; ++r) {
        const auto res = find_path(g.graph(), 0, 4, 1000 + r);
        sum1 += res.stats.step1_trials;
        sq1 += double(res.stats.step1_trials) * res.stats.step1_trials;
        sum2 += res.stats.step2_trials;
        sq2 += double(res.stats.step2_trials) * res.stats.step2_trials;
    }
    const double m1 = sum1 / runs, m2 = sum2 / runs;
    const double se1 = std::sqrt((sq1 / runs - m1 * m1) / runs), se2 = std::sqrt((sq2 / runs - m2 * m2) / runs);
    EXPECT_LE(m1, 12 + 3 * se1);
    EXPECT_LE(m2, 12 + 3 * se2);
}

TEST(Bfs, ShortestPaths) {
    const auto g = cyclic_cayley(25, {1, 7, 11});
    const auto dist = bfs_distances(g.graph(), 0);
    for (std::size_t b = 0; b < 25; ++b) {
        const auto p = bfs_path(g.graph(), 0, b);
        ASSERT_TRUE(p);
        EXPECT_EQ(static_cast<int>(p->length()), dist[b]);
        EXPECT_TRUE(verify_certificate(g.graph(), *p));
    }
    const auto split = cyclic_cayley(18, {2});
    EXPECT_FALSE(bfs_path(split.graph(), 0, 1));
}

TEST(Certificate, TamperingIsDetected) {
    const auto g = cyclic_cayley(25, {1, 7, 11});
    auto r = find_path(g.graph(), 0, 13, 4).certificate;
    ASSERT_GT(r.length(), 0u);
    auto flipped = r;
    flipped.steps[0].inverted = !flipped.steps[0].inverted;
    EXPECT_FALSE(verify_certificate(g.graph(), flipped));
    auto unknown = r;
    unknown.steps[0].label = "nope";
    EXPECT_FALSE(verify_certificate(g.graph(), unknown));
    auto moved = r;
    moved.end = 14;
    EXPECT_FALSE(verify_certificate(g.graph(), moved));
}
