#include "isowalk/numeric.hpp"

#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "isowalk/errors.hpp"

namespace isowalk {

double li(double x) {
    if (!(x >= 2.0)) throw PreconditionError("li(x) is defined here for x >= 2");
    if (x == 2.0) return 0.0;
    using boost::math::quadrature::gauss_kronrod;
    // Integrate in u = ln t so the integrand e^u / u stays smooth on long ranges.
    auto f = [](double u) { return std::exp(u) / u; };
    return gauss_kronrod<double, 61>::integrate(f, std::log(2.0), std::log(x), 20, 1e-14);
}

Interval wilson_interval(std::int64_t successes, std::int64_t trials, double z) {
    if (trials <= 0) throw PreconditionError("Wilson interval needs at least one trial");
    if (successes < 0 || successes > trials) throw InputError("successes must lie in [0, trials]");
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double centre = (p + z2 / (2 * n)) / (1 + z2 / n);
    const double half = z / (1 + z2 / n) * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n));
    return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

}  // namespace isowalk
