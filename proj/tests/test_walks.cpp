#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>

#include "isowalk/cayley.hpp"
#include "isowalk/errors.hpp"
#include "isowalk/rng.hpp"
#include "isowalk/walks.hpp"

using namespace isowalk;

namespace {

CayleyGraph cyclic_cayley(std::int64_t n, std::vector<std::int64_t> steps, std::int64_t gen = 1) {
    FiniteAbelianGroup g({n});
    std::vector<GroupElement> els;
    std::vector<std::string> labels;
    for (auto s : steps) {
        els.push_back(g.element({s}));
        labels.push_back("s" + std::to_string(s));
    }
    return build_cayley(Subgroup(g, {g.element({gen})}), symmetric_generators(g, els, labels));
}

}  // namespace

TEST(RandomWalk, LengthZero) {
    const auto g = cyclic_cayley(3, {1});
    Rng rng(1);
    EXPECT_EQ(random_walk(g.graph(), 2, 0, rng), 2u);
    EXPECT_EQ(random_trajectory(g.graph(), 2, 0, rng), (std::vector<std::size_t>{2}));
    EXPECT_THROW(random_walk(g.graph(), 3, 1, rng), InputError);
    EXPECT_THROW(random_walk(g.graph(), 0, -1, rng), InputError);
}

TEST(RandomWalk, OneStepOnTriangleIsUniform) {
    const auto g = cyclic_cayley(3, {1});
    Rng rng(5);
    std::vector<int> counts(3, 0);
    const int n = 10000;
    for (int i = 0; i < n; ++i) ++counts[random_walk(g.graph(), 0, 1, rng)];
    EXPECT_EQ(counts[0], 0);
    const double e = n / 2.0;
    const double chi2 = (counts[1] - e) * (counts[1] - e) / e + (counts[2] - e) * (counts[2] - e) / e;
    EXPECT_LT(chi2, 10.83);  // 0.999 quantile, one degree of freedom
}

TEST(RandomWalk, Deterministic) {
    const auto g = cyclic_cayley(35, {1, 5, 7});
    Rng a(42), b(42);
    EXPECT_EQ(random_walk(g.graph(), 0, 50, a), random_walk(g.graph(), 0, 50, b));
    Rng c(42), d(42);
    const auto traj = random_trajectory(g.graph(), 3, 20, c);
    EXPECT_EQ(traj.size(), 21u);
    EXPECT_EQ(traj.back(), random_walk(g.graph(), 3, 20, d));
    for (std::size_t i = 0; i + 1 < traj.size(); ++i) {
        bool adjacent = false;
        for (std::size_t j = 0; j < g.degree(); ++j) adjacent = adjacent || g.graph().neighbor(traj[i], j) == traj[i + 1];
        EXPECT_TRUE(adjacent);
    }
}

TEST(MixingLength, Examples) {
    EXPECT_EQ(mixing_length(3, 2, 1.0, 1), 3);
    EXPECT_NEAR(unscaled_mixing_length(3, 1), std::log(6.0), 1e-12);
    EXPECT_GE(mixing_length(100, 4, 2.0, 100), 1);
    EXPECT_EQ(mixing_length(100, 4, 2.0, 100), static_cast<std::int64_t>(std::ceil(std::log(20.0) / std::log(2.0))));
    EXPECT_EQ(mixing_length(100, 4, 0.0, 1), 1);
    EXPECT_THROW(mixing_length(4, 2, 2.0, 1), PreconditionError);
    EXPECT_THROW(mixing_length(4, 2, 1.0, 0), InputError);
    EXPECT_THROW(mixing_length(4, 2, 1.0, 5), InputError);
}

TEST(MixingLength, MonotoneInC) {
    for (double c = 0.1; c < 3.9; c += 0.3)
        EXPECT_LE(mixing_length(1000, 4, c, 10), mixing_length(1000, 4, c + 0.1, 10));
}

TEST(Distribution, MatchesMatrixPower) {
    for (const auto& g : {cyclic_cayley(3, {1}), cyclic_cayley(12, {1, 5}), cyclic_cayley(20, {3}), cyclic_cayley(8, {4})}) {
        const auto& rg = g.graph();
        const Eigen::MatrixXd m = rg.adjacency() / static_cast<double>(g.degree());
        Eigen::VectorXd v = Eigen::VectorXd::Zero(rg.vertex_count());
        v[1] = 1.0;
        for (int len = 0; len <= 9; ++len) {
            const auto p = walk_distribution(rg, 1, len);
            double sum = 0.0;
            for (std::size_t i = 0; i < p.size(); ++i) {
                EXPECT_NEAR(p[i], v[i], 1e-12);
                sum += p[i];
            }
            EXPECT_NEAR(sum, 1.0, 1e-12);
            v = m * v;
        }
    }
}

TEST(Experiment, WholeVertexSet) {
    const auto g = cyclic_cayley(3, {1});
    WalkConfig cfg;
    cfg.length = 3;
    cfg.trials = 1000;
    cfg.seed = 1;
    cfg.targets = {0, 1, 2};
    const auto r = mixing_experiment(g.graph(), 1.0, 0, cfg);
    EXPECT_EQ(r.hits, 1000);
    EXPECT_DOUBLE_EQ(r.frequency, 1.0);
    EXPECT_TRUE(r.pass);
}

TEST(Experiment, TriangleSingleTarget) {
    const auto g = cyclic_cayley(3, {1});
    WalkConfig cfg;
    cfg.length = 3;
    cfg.trials = 100000;
    cfg.seed = 42;
    cfg.targets = {0};
    const auto r = mixing_experiment(g.graph(), 1.0, 0, cfg);
    EXPECT_EQ(r.mixing_length, 3);
    EXPECT_TRUE(r.pass);
    EXPECT_GE(r.frequency, 1.0 / 6);
    EXPECT_LE(r.frequency, 1.0 / 2);
    // Return probability after three steps: 1/3 + (2/3)(-1/2)^3 = 1/4.
    ASSERT_TRUE(r.exact_probability);
    EXPECT_NEAR(*r.exact_probability, 0.25, 1e-12);
    EXPECT_NEAR(r.frequency, 0.25, 0.006);
    ASSERT_TRUE(r.tv_pass);
    EXPECT_TRUE(*r.tv_pass);
    EXPECT_NEAR(r.band.lo, 1.0 / 6, 1e-12);
    EXPECT_NEAR(r.band.hi, 0.5, 1e-12);
}

TEST(Experiment, TrialStreamsArePure) {
    const auto g = cyclic_cayley(35, {1, 5});
    const double c = expansion(g).c;
    WalkConfig cfg;
    cfg.length = mixing_length(35, g.degree(), c, 4);
    cfg.trials = 3000;
    cfg.seed = 77;
    cfg.targets = {0, 1, 2, 3};
    const auto r = mixing_experiment(g.graph(), c, 6, cfg);
    // Recompute each trial in reverse order from its own stream.
    std::int64_t hits = 0;
    for (std::int64_t t = cfg.trials - 1; t >= 0; --t) {
        Rng rng = Rng::stream(cfg.seed, static_cast<std::uint64_t>(t));
        hits += random_walk(g.graph(), 6, cfg.length, rng) <= 3;
    }
    EXPECT_EQ(r.hits, hits);
    EXPECT_EQ(mixing_experiment(g.graph(), c, 6, cfg).hits, r.hits);
}

TEST(Experiment, Rejections) {
    const auto split = cyclic_cayley(8, {2});  // two components of four vertices
    const double c = expansion(split).c;
    EXPECT_DOUBLE_EQ(c, 2.0);
    WalkConfig cfg;
    cfg.length = 10;
    cfg.trials = 100;
    cfg.targets = {1};
    EXPECT_THROW(mixing_experiment(split.graph(), c, 0, cfg), PreconditionError);

    const auto g = cyclic_cayley(3, {1});
    cfg.targets = {0};
    cfg.length = 2;
    EXPECT_THROW(mixing_experiment(g.graph(), 1.0, 0, cfg), PreconditionError);
    cfg.length = 3;
    cfg.trials = 0;
    EXPECT_THROW(mixing_experiment(g.graph(), 1.0, 0, cfg), InputError);
    cfg.trials = 10;
    cfg.targets = {0, 0};
    EXPECT_THROW(mixing_experiment(g.graph(), 1.0, 0, cfg), InputError);
    cfg.targets = {5};
    EXPECT_THROW(mixing_experiment(g.graph(), 1.0, 0, cfg), InputError);
    cfg.targets = {};
    EXPECT_THROW(mixing_experiment(g.graph(), 1.0, 0, cfg), InputError);
}

TEST(Experiment, ClassGroupGraphsLandInBand) {
    for (std::int64_t d : {-47, -71, -115, -231}) {
        const ClassGroup cl = class_group(Discriminant(d));
        const Subgroup full = full_subgroup(cl);
        const auto g = class_group_cayley(cl, full, generating_multiset(cl, 40, full));
        const double c = expansion(g).c;
        WalkConfig cfg;
        cfg.trials = 20000;
        cfg.seed = static_cast<std::uint64_t>(-d);
        cfg.targets = {0};
        cfg.length = mixing_length(g.graph().vertex_count(), g.degree(), c, 1);
        const auto r = mixing_experiment(g.graph(), c, 1 % g.graph().vertex_count(), cfg);
        EXPECT_TRUE(r.pass) << d;
        ASSERT_TRUE(r.tv_pass);
        EXPECT_TRUE(*r.tv_pass) << d;
        // The exact hit probability itself lies in the band.
        EXPECT_GE(*r.exact_probability, r.band.lo);
        EXPECT_LE(*r.exact_probability, r.band.hi);
    }
}
