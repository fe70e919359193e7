#include "isowalk/walks.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "isowalk/errors.hpp"

namespace isowalk {

std::size_t random_walk(const RegularGraph& g, std::size_t start, std::int64_t length, Rng& rng) {
    if (start >= g.vertex_count()) throw InputError("walk start is not a vertex");
    if (length < 0) throw InputError("walk length must be non-negative");
    std::size_t v = start;
    if (g.degree() == 0) return v;
    for (std::int64_t i = 0; i < length; ++i) v = g.neighbor(v, rng.below(g.degree()));
    return v;
}

std::vector<std::size_t> random_trajectory(const RegularGraph& g, std::size_t start, std::int64_t length,
                                           Rng& rng) {
    if (start >= g.vertex_count()) throw InputError("walk start is not a vertex");
    if (length < 0) throw InputError("walk length must be non-negative");
    std::vector<std::size_t> out{start};
    if (g.degree() == 0) return out;
    for (std::int64_t i = 0; i < length; ++i) out.push_back(g.neighbor(out.back(), rng.below(g.degree())));
    return out;
}

std::int64_t mixing_length(std::size_t vertex_count, std::size_t degree, double c, std::size_t target_size) {
    if (vertex_count == 0 || target_size == 0 || target_size > vertex_count)
        throw InputError("target set size must lie in [1, |G|]");
    if (degree == 0) throw PreconditionError("mixing length needs a nonempty generator set");
    const double k = static_cast<double>(degree);
    if (c >= k * (1.0 - 1e-12))
        throw PreconditionError("c = " + std::to_string(c) + " reaches k = " + std::to_string(degree) +
                                ": the graph is disconnected or bipartite");
    if (c <= 0.0) return 1;
    const double value = unscaled_mixing_length(vertex_count, target_size) / std::log(k / c);
    return std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(value)));
}

double unscaled_mixing_length(std::size_t vertex_count, std::size_t target_size) {
    return std::log(2.0 * static_cast<double>(vertex_count) / std::sqrt(static_cast<double>(target_size)));
}

std::vector<double> walk_distribution(const RegularGraph& g, std::size_t start, std::int64_t length) {
    const std::size_t n = g.vertex_count();
    if (start >= n) throw InputError("walk start is not a vertex");
    std::vector<double> p(n, 0.0), next(n);
    p[start] = 1.0;
    const std::size_t k = g.degree();
    if (k == 0) return p;
    const double w = 1.0 / static_cast<double>(k);
    for (std::int64_t step = 0; step < length; ++step) {
        std::fill(next.begin(), next.end(), 0.0);
        for (std::size_t v = 0; v < n; ++v) {
            if (p[v] == 0.0) continue;
            for (std::size_t j = 0; j < k; ++j) next[g.neighbor(v, j)] += p[v] * w;
        }
        p.swap(next);
    }
    return p;
}

MixingReport mixing_experiment(const RegularGraph& g, double c, std::size_t start, const WalkConfig& cfg) {
    const std::size_t n = g.vertex_count();
    if (start >= n) throw InputError("walk start is not a vertex");
    if (cfg.length < 0) throw InputError("walk length must be non-negative");
    if (cfg.trials < 1) throw InputError("at least one trial is required");
    if (cfg.targets.empty()) throw InputError("target set W must be nonempty");
    std::set<std::size_t> w(cfg.targets.begin(), cfg.targets.end());
    if (w.size() != cfg.targets.size()) throw InputError("target set W has repeated vertices");
    if (*w.rbegin() >= n) throw InputError("target set W leaves the vertex set");

    MixingReport r;
    r.config = cfg;
    r.start = start;
    r.vertex_count = n;
    r.c = c;
    r.mixing_length = mixing_length(n, g.degree(), c, w.size());
    r.unscaled_length = unscaled_mixing_length(n, w.size());
    if (cfg.length < r.mixing_length)
        throw PreconditionError("walk length " + std::to_string(cfg.length) + " is below the mixing length " +
                                std::to_string(r.mixing_length));

    std::vector<char> in_w(n, 0);
    for (std::size_t v : w) in_w[v] = 1;
    const bool exact = n <= kExactDistributionLimit;
    std::vector<std::int64_t> counts(exact ? n : 0, 0);
    for (std::int64_t t = 0; t < cfg.trials; ++t) {
        Rng rng = Rng::stream(cfg.seed, static_cast<std::uint64_t>(t));
        const std::size_t end = random_walk(g, start, cfg.length, rng);
        if (in_w[end]) ++r.hits;
        if (exact) ++counts[end];
    }
    const double trials = static_cast<double>(cfg.trials);
    r.frequency = static_cast<double>(r.hits) / trials;
    r.interval = wilson_interval(r.hits, cfg.trials);
    const double share = static_cast<double>(w.size()) / static_cast<double>(n);
    r.band = Interval{share / 2.0, 1.5 * share};
    r.pass = r.interval.intersects(r.band);

    if (exact) {
        const auto p = walk_distribution(g, start, cfg.length);
        double hit = 0.0, tv = 0.0, noise = 0.0;
        for (std::size_t v = 0; v < n; ++v) {
            if (in_w[v]) hit += p[v];
            tv += std::abs(static_cast<double>(counts[v]) / trials - p[v]);
            noise += std::sqrt(p[v] * (1.0 - p[v]) / trials);
        }
        r.exact_probability = hit;
        r.total_variation = tv / 2.0;
        r.tv_noise = noise / 2.0;
        r.tv_pass = *r.total_variation <= 3.0 * *r.tv_noise;
    }
    return r;
}

}  // namespace isowalk
