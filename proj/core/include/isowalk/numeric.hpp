#pragma once

#include <cstdint>

namespace isowalk {

/// Logarithmic integral with lower limit 2: the integral of 1/ln t over [2, x].
/// Throws PreconditionError for x < 2.
double li(double x);

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    bool intersects(const Interval& other) const { return lo <= other.hi && other.lo <= hi; }
};

/// Two-sided z quantile for 99% coverage.
inline constexpr double kZ99 = 2.5758293035489004;

/// Wilson score interval for a binomial proportion.
Interval wilson_interval(std::int64_t successes, std::int64_t trials, double z = kZ99);

}  // namespace isowalk
