#include "isowalk/ecgraph.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include <Eigen/Dense>

#include "isowalk/cayley.hpp"
#include "isowalk/errors.hpp"
#include "isowalk/quadform.hpp"

namespace isowalk {

namespace {

std::int64_t md(std::int64_t a, std::int64_t p) { return fp_reduce(a, p); }

std::vector<signed char> legendre_table(std::int64_t p) {
    std::vector<signed char> chi(static_cast<std::size_t>(p), -1);
    chi[0] = 0;
    for (std::int64_t y = 1; y < p; ++y) chi[static_cast<std::size_t>(y * y % p)] = 1;
    return chi;
}

std::int64_t trace_with(const std::vector<signed char>& chi, std::int64_t p, std::int64_t a, std::int64_t b) {
    std::int64_t sum = 0;
    for (std::int64_t x = 0; x < p; ++x) {
        const std::int64_t v = ((x * x % p + a) % p * x + b) % p;
        sum += chi[static_cast<std::size_t>(v)];
    }
    return -sum;
}

}  // namespace

std::string to_string(const Point& pt) {
    if (pt.infinity) return "O";
    return "(" + std::to_string(pt.x) + "," + std::to_string(pt.y) + ")";
}

Curve::Curve(std::int64_t p, std::int64_t a, std::int64_t b) : p_(p), a_(0), b_(0) {
    if (p < 3 || p > kMaxFieldPrime || !is_prime(p))
        throw InputError("field characteristic must be an odd prime at most " + std::to_string(kMaxFieldPrime));
    a_ = md(a, p);
    b_ = md(b, p);
    if (md(4 * fp_pow(a_, 3, p) + 27 * fp_mul(b_, b_, p), p) == 0)
        throw InputError("singular curve: 4a^3 + 27b^2 = 0 mod p");
}

std::int64_t Curve::j() const {
    const std::int64_t a3 = md(4 * fp_pow(a_, 3, p_), p_);
    const std::int64_t den = md(a3 + 27 * fp_mul(b_, b_, p_), p_);
    return fp_mul(fp_mul(1728, a3, p_), fp_inv(den, p_), p_);
}

std::int64_t Curve::rhs(std::int64_t x) const {
    x = md(x, p_);
    return md(fp_mul(fp_mul(x, x, p_) + a_, x, p_) + b_, p_);
}

bool Curve::contains(const Point& pt) const {
    if (pt.infinity) return true;
    if (pt.x < 0 || pt.x >= p_ || pt.y < 0 || pt.y >= p_) return false;
    return fp_mul(pt.y, pt.y, p_) == rhs(pt.x);
}

Point Curve::negate(const Point& u) const {
    if (u.infinity) return u;
    return Point::affine(u.x, md(-u.y, p_));
}

Point Curve::add(const Point& u, const Point& v) const {
    if (u.infinity) return v;
    if (v.infinity) return u;
    std::int64_t lambda;
    if (u.x == v.x) {
        if (md(u.y + v.y, p_) == 0) return Point::at_infinity();
        lambda = fp_mul(md(3 * fp_mul(u.x, u.x, p_) + a_, p_), fp_inv(2 * u.y, p_), p_);
    } else {
        lambda = fp_mul(md(v.y - u.y, p_), fp_inv(md(v.x - u.x, p_), p_), p_);
    }
    const std::int64_t x = md(fp_mul(lambda, lambda, p_) - u.x - v.x, p_);
    const std::int64_t y = md(fp_mul(lambda, u.x - x, p_) - u.y, p_);
    return Point::affine(x, y);
}

Point Curve::multiply(const Point& u, std::int64_t k) const {
    Point base = k < 0 ? negate(u) : u;
    std::uint64_t e = k < 0 ? static_cast<std::uint64_t>(-(k + 1)) + 1 : static_cast<std::uint64_t>(k);
    Point acc = Point::at_infinity();
    while (e > 0) {
        if (e & 1) acc = add(acc, base);
        base = add(base, base);
        e >>= 1;
    }
    return acc;
}

Point Curve::random_point(Rng& rng) const {
    for (;;) {
        const auto x = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(p_)));
        const auto root = fp_sqrt(rhs(x), p_);
        if (!root) continue;
        const std::int64_t y = rng.below(2) == 0 ? *root : md(-*root, p_);
        return Point::affine(x, y);
    }
}

std::string to_string(const Curve& c) {
    return std::to_string(c.p()) + "," + std::to_string(c.a()) + "," + std::to_string(c.b());
}

Curve parse_curve(const std::string& text) {
    std::vector<std::int64_t> parts;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        try {
            std::size_t used = 0;
            parts.push_back(std::stoll(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::logic_error&) {
            throw InputError("curve '" + text + "' must be three integers p,a,b");
        }
    }
    if (parts.size() != 3) throw InputError("curve '" + text + "' must be three integers p,a,b");
    return Curve(parts[0], parts[1], parts[2]);
}

PointCount point_count(const Curve& c) {
    const std::int64_t p = c.p();
    PointCount out;
    out.trace = trace_with(legendre_table(p), p, c.a(), c.b());
    out.order = p + 1 - out.trace;
    if (static_cast<double>(out.trace) * static_cast<double>(out.trace) > 4.0 * static_cast<double>(p))
        throw ConsistencyError("point count violates the Hasse bound");
    out.ordinary = md(out.trace, p) != 0;
    return out;
}

std::int64_t point_order(const Curve& c, const Point& pt, std::int64_t multiple) {
    if (!c.multiply(pt, multiple).infinity) throw InputError("the given multiple does not kill the point");
    std::int64_t n = multiple;
    std::int64_t m = multiple;
    for (std::int64_t q = 2; q * q <= m; ++q) {
        if (m % q != 0) continue;
        while (m % q == 0) m /= q;
        while (n % q == 0 && c.multiply(pt, n / q).infinity) n /= q;
    }
    if (m > 1 && n % m == 0 && c.multiply(pt, n / m).infinity) n /= m;
    return n;
}

std::optional<std::int64_t> fp_sqrt(std::int64_t a, std::int64_t p) {
    a = md(a, p);
    if (a == 0) return 0;
    if (fp_pow(a, static_cast<std::uint64_t>((p - 1) / 2), p) != 1) return std::nullopt;
    // Tonelli-Shanks.
    std::int64_t q = p - 1, s = 0;
    while (q % 2 == 0) {
        q /= 2;
        ++s;
    }
    std::int64_t z = 2;
    while (fp_pow(z, static_cast<std::uint64_t>((p - 1) / 2), p) != p - 1) ++z;
    std::int64_t m = s, c = fp_pow(z, static_cast<std::uint64_t>(q), p);
    std::int64_t t = fp_pow(a, static_cast<std::uint64_t>(q), p);
    std::int64_t r = fp_pow(a, static_cast<std::uint64_t>((q + 1) / 2), p);
    while (t != 1) {
        std::int64_t i = 0, tt = t;
        while (tt != 1) {
            tt = fp_mul(tt, tt, p);
            ++i;
        }
        std::int64_t b = c;
        for (std::int64_t k = 0; k < m - i - 1; ++k) b = fp_mul(b, b, p);
        m = i;
        c = fp_mul(b, b, p);
        t = fp_mul(t, c, p);
        r = fp_mul(r, b, p);
    }
    return std::min(r, p - r);
}

std::vector<Poly> division_polynomials(const Curve& c, int n) {
    const std::int64_t p = c.p(), a = c.a(), b = c.b();
    const Poly F{b, a, 0, 1};
    const Poly F2 = poly_mul(F, F, p);
    std::vector<Poly> f(static_cast<std::size_t>(std::max(n, 4)) + 1);
    f[0] = {};
    f[1] = {1};
    f[2] = {2};
    f[3] = Poly{md(-a * a, p), md(12 * b, p), md(6 * a, p), 0, 3};
    poly_trim(f[3]);
    f[4] = poly_scale(Poly{md(-8 * b * b - a * a % p * a, p), md(-4 * a * b, p), md(-5 * a * a, p), md(20 * b, p),
                           md(5 * a, p), 0, 1},
                      4, p);
    auto cube = [&](const Poly& x) { return poly_mul(poly_mul(x, x, p), x, p); };
    auto sq = [&](const Poly& x) { return poly_mul(x, x, p); };
    const std::int64_t half = fp_inv(2, p);
    for (int k = 5; k <= n; ++k) {
        const auto m = static_cast<std::size_t>(k / 2);
        if (k % 2 == 1) {
            Poly left = poly_mul(f[m + 2], cube(f[m]), p);
            Poly right = poly_mul(f[m - 1], cube(f[m + 1]), p);
            if (m % 2 == 0) left = poly_mul(left, F2, p);
            else right = poly_mul(right, F2, p);
            f[static_cast<std::size_t>(k)] = poly_sub(left, right, p);
        } else {
            const Poly inner = poly_sub(poly_mul(f[m + 2], sq(f[m - 1]), p), poly_mul(f[m - 2], sq(f[m + 1]), p), p);
            f[static_cast<std::size_t>(k)] = poly_scale(poly_mul(f[m], inner, p), half, p);
        }
    }
    f.resize(static_cast<std::size_t>(n) + 1);
    return f;
}

namespace {

struct PowerSums {
    std::int64_t p1 = 0, p2 = 0, p3 = 0;
};

PowerSums power_sums(const Poly& kernel, std::int64_t p) {
    const int d = poly_degree(kernel);
    auto coeff = [&](int i) { return i >= 0 && i <= d ? kernel[static_cast<std::size_t>(i)] : 0; };
    const std::int64_t e1 = md(-coeff(d - 1), p), e2 = coeff(d - 2), e3 = md(-coeff(d - 3), p);
    PowerSums s;
    s.p1 = e1;
    s.p2 = md(fp_mul(e1, e1, p) - 2 * e2, p);
    s.p3 = md(fp_pow(e1, 3, p) - 3 * fp_mul(e1, e2, p) + 3 * e3, p);
    return s;
}

}  // namespace

VeluIsogeny velu_isogeny(const Curve& domain, std::int64_t ell, const Poly& kernel) {
    const std::int64_t p = domain.p(), a = domain.a(), b = domain.b();
    if (ell < 3 || ell % 2 == 0 || !is_prime(ell)) throw InputError("isogeny degree must be an odd prime");
    const std::int64_t d = (ell - 1) / 2;
    if (poly_degree(kernel) != d || kernel.back() != 1)
        throw InputError("kernel polynomial must be monic of degree (l - 1) / 2");
    const PowerSums s = power_sums(kernel, p);
    const std::int64_t v = md(6 * s.p2 + 2 * fp_mul(a, d, p), p);
    const std::int64_t w = md(10 * s.p3 + 6 * fp_mul(a, s.p1, p) + 4 * fp_mul(b, d, p), p);
    return VeluIsogeny{ell, domain, Curve(p, a - 5 * v, b - 7 * w), kernel};
}

Point VeluIsogeny::eval(const Point& pt) const {
    if (!domain.contains(pt)) throw InputError("point " + to_string(pt) + " is not on the domain curve");
    if (pt.infinity) return pt;
    const std::int64_t p = domain.p(), x = pt.x;
    const Poly h1 = poly_derivative(kernel, p), h2 = poly_derivative(h1, p), h3 = poly_derivative(h2, p);
    const std::int64_t h = poly_eval(kernel, x, p);
    if (h == 0) return Point::at_infinity();
    const std::int64_t hi = fp_inv(h, p);
    const std::int64_t d1 = poly_eval(h1, x, p), d2 = poly_eval(h2, x, p), d3 = poly_eval(h3, x, p);
    const std::int64_t L = fp_mul(d1, hi, p);
    const std::int64_t L1 = md(fp_mul(d2, hi, p) - fp_mul(L, L, p), p);
    const std::int64_t L2 = md(fp_mul(d3, hi, p) - 3 * fp_mul(L, fp_mul(d2, hi, p), p) + 2 * fp_pow(L, 3, p), p);
    const std::int64_t F = domain.rhs(x);
    const std::int64_t F1 = md(3 * fp_mul(x, x, p) + domain.a(), p);
    const PowerSums s = power_sums(kernel, p);
    const std::int64_t X =
        md(fp_mul(ell, x, p) - 2 * s.p1 - 2 * fp_mul(F1, L, p) - 4 * fp_mul(F, L1, p), p);
    const std::int64_t dX = md(ell - 12 * fp_mul(x, L, p) - 6 * fp_mul(F1, L1, p) - 4 * fp_mul(F, L2, p), p);
    const Point out = Point::affine(X, fp_mul(pt.y, dX, p));
    if (!codomain.contains(out)) throw ConsistencyError("Velu image " + to_string(out) + " misses the codomain");
    return out;
}

std::vector<VeluIsogeny> rational_l_isogenies(const Curve& c, std::int64_t ell, std::uint64_t seed) {
    const std::int64_t p = c.p();
    if (ell < 3 || ell % 2 == 0 || !is_prime(ell)) throw InputError("l must be an odd prime");
    if (ell == p) throw InputError("l must differ from the characteristic");
    if (p < 5) throw InputError("isogenies need p >= 5 in the short Weierstrass model");
    const int d = static_cast<int>((ell - 1) / 2);
    const auto psi = division_polynomials(c, static_cast<int>(ell));
    const Poly F{c.b(), c.a(), 0, 1};

    std::set<Poly> kernels;
    for (const Poly& g : irreducible_factors(psi.back(), p, d, seed)) {
        if (d % poly_degree(g) != 0) continue;
        // Work in K = F_p[z]/(g) with z = x(P) for a point P of order l.
        auto red = [&](const Poly& f) { return poly_mod(f, g, p); };
        auto at = [&](const Poly& f) {  // f(z) in K
            Poly acc;
            for (std::size_t i = f.size(); i-- > 0;) acc = red(poly_add(poly_mul(acc, Poly{0, 1}, p), Poly{f[i]}, p));
            return acc;
        };
        const Poly Fz = at(F);
        std::vector<Poly> fz(static_cast<std::size_t>(d) + 2);
        for (int i = 0; i <= d + 1; ++i) fz[static_cast<std::size_t>(i)] = at(psi[static_cast<std::size_t>(i)]);
        // h(X) = prod (X - x([i]P)), coefficients in K, low degree first.
        std::vector<Poly> h{Poly{1}};
        for (int i = 1; i <= d; ++i) {
            const auto k = static_cast<std::size_t>(i);
            Poly num = poly_mulmod(fz[k - 1], fz[k + 1], g, p);
            Poly den = poly_mulmod(fz[k], fz[k], g, p);
            if (i % 2 == 0) den = poly_mulmod(den, Fz, g, p);
            else num = poly_mulmod(num, Fz, g, p);
            const Poly xi = poly_sub(red(Poly{0, 1}), poly_mulmod(num, poly_inv_mod(den, g, p), g, p), p);
            std::vector<Poly> next(h.size() + 1);
            for (std::size_t m = 0; m < h.size(); ++m) {
                next[m + 1] = poly_add(next[m + 1], h[m], p);
                next[m] = poly_sub(next[m], poly_mulmod(h[m], xi, g, p), p);
            }
            h = std::move(next);
        }
        Poly kernel;
        bool rational = true;
        for (const auto& coeff : h) {
            if (poly_degree(coeff) > 0) {
                rational = false;
                break;
            }
            kernel.push_back(coeff.empty() ? 0 : coeff[0]);
        }
        if (!rational) continue;
        poly_trim(kernel);
        if (!poly_mod(psi.back(), kernel, p).empty())
            throw ConsistencyError("kernel polynomial does not divide the division polynomial");
        kernels.insert(kernel);
    }
    std::vector<VeluIsogeny> out;
    for (const auto& k : kernels) out.push_back(velu_isogeny(c, ell, k));
    return out;
}

std::vector<IsogenyVertex> enumerate_isogeny_class(std::int64_t p, std::int64_t t) {
    if (p < 5 || p > kMaxFieldPrime || !is_prime(p))
        throw InputError("p must be a prime in [5, " + std::to_string(kMaxFieldPrime) + "]");
    if (md(t, p) == 0) throw InputError("t = 0 mod p: the class is supersingular");
    if (t * t >= 4 * p) throw InputError("|t| must be below 2 sqrt(p)");
    const Discriminant disc(t * t - 4 * p);
    if (!disc.is_fundamental())
        throw InputError("t^2 - 4p = " + std::to_string(disc.value()) +
                         " is not fundamental; only maximal-order classes are supported");

    const auto chi = legendre_table(p);
    std::int64_t nonresidue = 2;
    while (chi[static_cast<std::size_t>(nonresidue)] != -1) ++nonresidue;

    std::vector<IsogenyVertex> out;
    auto try_special = [&](bool zero_j) {
        for (std::int64_t k = 1; k < p; ++k) {
            const std::int64_t a = zero_j ? 0 : k, b = zero_j ? k : 0;
            if (trace_with(chi, p, a, b) == t) {
                Curve c(p, a, b);
                out.push_back(IsogenyVertex{c.j(), c});
                return;
            }
        }
    };
    if (disc.value() == -3) try_special(true);
    if (disc.value() == -4) try_special(false);
    for (std::int64_t j = 1; j < p; ++j) {
        const std::int64_t m = md(1728 - j, p);
        if (m == 0) continue;
        std::int64_t a = md(3 * fp_mul(j, m, p), p);
        std::int64_t b = md(2 * fp_mul(j, fp_mul(m, m, p), p), p);
        const std::int64_t tr = trace_with(chi, p, a, b);
        if (tr == -t) {
            a = fp_mul(a, fp_mul(nonresidue, nonresidue, p), p);
            b = fp_mul(b, fp_pow(nonresidue, 3, p), p);
        } else if (tr != t) {
            continue;
        }
        out.push_back(IsogenyVertex{j, Curve(p, a, b)});
    }
    std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.j < y.j; });
    return out;
}

Point IsogenyEdge::map(const Point& pt) const {
    const Point img = isogeny.eval(pt);
    if (img.infinity) return img;
    const std::int64_t p = isogeny.codomain.p();
    const std::int64_t u2 = fp_mul(iso_u, iso_u, p);
    return Point::affine(fp_mul(u2, img.x, p), fp_mul(fp_mul(u2, iso_u, p), img.y, p));
}

IsogenyGraph build_isogeny_graph(std::int64_t p, std::int64_t t, std::vector<std::int64_t> primes,
                                 std::uint64_t seed) {
    std::sort(primes.begin(), primes.end());
    primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
    for (std::int64_t ell : primes) {
        if (ell == 2) throw InputError("l = 2 is not supported");
        if (ell < 3 || !is_prime(ell)) throw InputError(std::to_string(ell) + " is not an odd prime");
        if (ell == p) throw InputError("l must differ from p");
    }
    IsogenyGraph ig;
    ig.p = p;
    ig.t = t;
    ig.discriminant = t * t - 4 * p;
    ig.primes = primes;
    ig.vertices = enumerate_isogeny_class(p, t);
    const auto h = class_group(Discriminant(ig.discriminant)).order();
    if (static_cast<std::int64_t>(ig.vertices.size()) != h)
        throw ConsistencyError("found " + std::to_string(ig.vertices.size()) + " curves but h(" +
                               std::to_string(ig.discriminant) + ") = " + std::to_string(h));

    std::map<std::int64_t, std::size_t> by_j;
    for (std::size_t v = 0; v < ig.vertices.size(); ++v) by_j[ig.vertices[v].j] = v;

    for (std::size_t v = 0; v < ig.vertices.size(); ++v) {
        const Curve& src = ig.vertices[v].curve;
        for (std::int64_t ell : primes) {
            for (auto& iso : rational_l_isogenies(src, ell, Rng::derive(seed, static_cast<std::uint64_t>(ell)))) {
                const Curve& cod = iso.codomain;
                if (point_count(cod).trace != t)
                    throw ConsistencyError("Velu codomain " + to_string(cod) + " has the wrong trace");
                auto it = by_j.find(cod.j());
                if (it == by_j.end()) throw ConsistencyError("codomain j = " + std::to_string(cod.j()) + " left the class");
                const Curve& dst = ig.vertices[it->second].curve;
                std::optional<std::int64_t> u;
                for (std::int64_t cand = 1; cand < p && !u; ++cand) {
                    const std::int64_t u2 = fp_mul(cand, cand, p);
                    if (fp_mul(fp_mul(u2, u2, p), cod.a(), p) == dst.a() &&
                        fp_mul(fp_pow(u2, 3, p), cod.b(), p) == dst.b())
                        u = cand;
                }
                if (!u) throw ConsistencyError("no isomorphism from " + to_string(cod) + " to " + to_string(dst));
                ig.edges.push_back(IsogenyEdge{v, it->second, std::move(iso), *u});
            }
        }
    }
    std::stable_sort(ig.edges.begin(), ig.edges.end(), [](const IsogenyEdge& x, const IsogenyEdge& y) {
        return std::tie(x.source, x.isogeny.ell, x.target, x.isogeny.kernel) <
               std::tie(y.source, y.isogeny.ell, y.target, y.isogeny.kernel);
    });

    std::map<std::tuple<std::int64_t, std::size_t, std::size_t>, int> multiplicity;
    for (const auto& e : ig.edges) ++multiplicity[{e.ell(), e.source, e.target}];
    for (const auto& [key, count] : multiplicity) {
        const auto& [ell, s, d] = key;
        auto it = multiplicity.find({ell, d, s});
        if (it == multiplicity.end() || it->second != count)
            throw ConsistencyError("the " + std::to_string(ell) + "-isogeny edges are not symmetric");
    }
    return ig;
}

OrientedIsogenyGraph orient(const IsogenyGraph& ig) {
    const std::size_t n = ig.vertices.size();
    std::map<std::int64_t, std::vector<std::vector<std::size_t>>> out;  // l -> vertex -> edges
    for (std::int64_t ell : ig.primes) out[ell].assign(n, {});
    for (std::size_t e = 0; e < ig.edges.size(); ++e) {
        auto it = out.find(ig.edges[e].ell());
        if (it == out.end()) throw ConsistencyError("edge degree outside the prime set");
        it->second[ig.edges[e].source].push_back(e);
    }

    std::vector<Step> labels;
    std::vector<std::size_t> inverse;
    std::vector<std::vector<std::size_t>> columns;  // per slot: vertex -> edge
    for (const auto& [ell, lists] : out) {
        const std::size_t count = n == 0 ? 0 : lists[0].size();
        for (const auto& l : lists)
            if (l.size() != count)
                throw ConsistencyError("vertices disagree on the number of " + std::to_string(ell) + "-isogenies");
        const std::string name = std::to_string(ell);
        if (count == 0) continue;
        if (count == 1) {
            inverse.push_back(labels.size());
            labels.push_back(Step{name, false});
            std::vector<std::size_t> col(n);
            for (std::size_t v = 0; v < n; ++v) col[v] = lists[v][0];
            columns.push_back(std::move(col));
            continue;
        }
        if (count != 2) throw ConsistencyError(std::to_string(count) + " rational " + name + "-isogenies at a vertex");
        constexpr std::size_t unset = static_cast<std::size_t>(-1);
        std::vector<std::size_t> plus(n, unset), minus(n, unset);
        auto edge_to = [&](std::size_t v, std::size_t target, std::size_t skip) -> std::size_t {
            for (std::size_t e : lists[v])
                if (e != skip && ig.edges[e].target == target) return e;
            throw ConsistencyError("the " + name + "-isogeny graph is not dual-consistent at " + std::to_string(ig.vertices[v].j));
        };
        for (std::size_t v0 = 0; v0 < n; ++v0) {
            if (plus[v0] != unset) continue;
            plus[v0] = lists[v0][0];
            std::size_t prev = v0, cur = ig.edges[plus[v0]].target;
            while (cur != v0) {
                minus[cur] = edge_to(cur, prev, unset);
                plus[cur] = lists[cur][0] == minus[cur] ? lists[cur][1] : lists[cur][0];
                prev = cur;
                cur = ig.edges[plus[cur]].target;
            }
            minus[v0] = edge_to(v0, prev, plus[v0]);
        }
        const std::size_t base = labels.size();
        labels.push_back(Step{name, false});
        labels.push_back(Step{name, true});
        inverse.push_back(base + 1);
        inverse.push_back(base);
        columns.push_back(std::move(plus));
        columns.push_back(std::move(minus));
    }

    const std::size_t k = labels.size();
    OrientedIsogenyGraph og;
    og.slot_edge.resize(n * k);
    std::vector<std::size_t> neighbors(n * k);
    std::vector<std::string> names;
    for (std::size_t v = 0; v < n; ++v) {
        names.push_back(std::to_string(ig.vertices[v].j));
        for (std::size_t s = 0; s < k; ++s) {
            og.slot_edge[v * k + s] = columns[s][v];
            neighbors[v * k + s] = ig.edges[columns[s][v]].target;
        }
    }
    og.graph = RegularGraph(std::move(names), std::move(labels), std::move(inverse), std::move(neighbors));
    return og;
}

namespace {

using ColorMatrices = std::vector<std::vector<std::vector<int>>>;  // color -> v -> w

// Backtracking search for a bijection preserving every color matrix.
std::optional<bool> colored_isomorphic(const ColorMatrices& x, const ColorMatrices& y, std::size_t n) {
    constexpr std::int64_t kBudget = 5'000'000;
    std::int64_t steps = 0;
    auto signature = [&](const ColorMatrices& m, std::size_t v) {
        std::vector<std::vector<int>> sig;
        for (const auto& c : m) {
            std::vector<int> row = c[v];
            std::sort(row.begin(), row.end());
            row.push_back(c[v][v]);
            sig.push_back(std::move(row));
        }
        return sig;
    };
    std::vector<std::vector<std::vector<int>>> sx(n), sy(n);
    for (std::size_t v = 0; v < n; ++v) {
        sx[v] = signature(x, v);
        sy[v] = signature(y, v);
    }
    std::vector<std::size_t> image(n), used_by(n, n);
    std::function<std::optional<bool>(std::size_t)> extend = [&](std::size_t v) -> std::optional<bool> {
        if (v == n) return true;
        for (std::size_t w = 0; w < n; ++w) {
            if (used_by[w] != n || sx[v] != sy[w]) continue;
            if (++steps > kBudget) return std::nullopt;
            bool ok = true;
            for (std::size_t u = 0; u < v && ok; ++u)
                for (std::size_t c = 0; c < x.size() && ok; ++c)
                    ok = x[c][v][u] == y[c][w][image[u]] && x[c][u][v] == y[c][image[u]][w];
            for (std::size_t c = 0; c < x.size() && ok; ++c) ok = x[c][v][v] == y[c][w][w];
            if (!ok) continue;
            image[v] = w;
            used_by[w] = v;
            auto r = extend(v + 1);
            if (!r || *r) return r;
            used_by[w] = n;
        }
        return false;
    };
    return extend(0);
}

}  // namespace

CayleyComparison compare_to_cayley(const IsogenyGraph& ig) {
    CayleyComparison r;
    const ClassGroup cl = class_group(Discriminant(ig.discriminant));
    const Subgroup full = full_subgroup(cl);
    const auto forms = prime_multiset(cl, ig.primes, full);
    const CayleyGraph cay = class_group_cayley(cl, full, forms);
    const std::size_t n = ig.vertices.size();
    const std::size_t h = static_cast<std::size_t>(cl.order());

    r.vertex_count_ok = n == h;
    if (!r.vertex_count_ok) r.failures.push_back("vertex count: " + std::to_string(n) + " curves, h = " + std::to_string(h));

    r.degree_ok = true;
    std::map<std::int64_t, std::size_t> color;
    for (std::int64_t ell : ig.primes) color.emplace(ell, color.size());
    for (std::int64_t ell : ig.primes) {
        const int want = 1 + kronecker(ig.discriminant, ell);
        std::vector<int> count(n, 0);
        for (const auto& e : ig.edges)
            if (e.ell() == ell && e.source < n) ++count[e.source];
        const int cay_count = static_cast<int>(std::count_if(cay.generators().begin(), cay.generators().end(),
                                                             [&](const Generator& g) { return g.step.label == std::to_string(ell); }));
        const bool iso_ok = std::all_of(count.begin(), count.end(), [&](int c) { return c == want; });
        if (!iso_ok || cay_count != want) {
            r.degree_ok = false;
            r.failures.push_back("degree law at l = " + std::to_string(ell) + ": expected " + std::to_string(want));
        }
    }

    ColorMatrices mi(color.size(), std::vector<std::vector<int>>(n, std::vector<int>(n, 0)));
    for (const auto& e : ig.edges) {
        auto it = color.find(e.ell());
        if (it == color.end() || e.source >= n || e.target >= n) {
            r.failures.push_back("edge outside the vertex or prime set");
            continue;
        }
        ++mi[it->second][e.source][e.target];
    }
    ColorMatrices mc(color.size(), std::vector<std::vector<int>>(h, std::vector<int>(h, 0)));
    const auto& cg = cay.graph();
    for (std::size_t v = 0; v < h; ++v)
        for (std::size_t s = 0; s < cg.degree(); ++s)
            ++mc[color.at(std::stoll(cg.label(s).label))][v][cg.neighbor(v, s)];

    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (const auto& m : mi)
        for (std::size_t v = 0; v < n; ++v)
            for (std::size_t w = 0; w < n; ++w) a(static_cast<Eigen::Index>(v), static_cast<Eigen::Index>(w)) += m[v][w];
    r.spectrum_ok = false;
    if (n > 0 && (a - a.transpose()).cwiseAbs().maxCoeff() > 0) {
        r.failures.push_back("spectrum: the isogeny adjacency matrix is not symmetric");
    } else if (n != h) {
        r.failures.push_back("spectrum: sizes differ");
    } else {
        std::vector<double> si;
        if (n > 0) {
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a, Eigen::EigenvaluesOnly);
            for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) si.push_back(solver.eigenvalues()(i));
        }
        std::sort(si.begin(), si.end(), std::greater<>());
        const auto sc = spectrum_numeric(cay);
        for (std::size_t i = 0; i < n; ++i) r.spectrum_gap = std::max(r.spectrum_gap, std::abs(si[i] - sc[i]));
        r.spectrum_ok = r.spectrum_gap <= kSpectrumTolerance;
        if (!r.spectrum_ok) r.failures.push_back("spectrum: eigenvalues differ by " + std::to_string(r.spectrum_gap));
    }

    if (n == h && n <= kIsomorphismSearchLimit) {
        r.isomorphic = colored_isomorphic(mi, mc, n);
        if (r.isomorphic && !*r.isomorphic) r.failures.push_back("isomorphism: no l-colored isomorphism exists");
    }
    r.pass = r.failures.empty();
    return r;
}

std::vector<std::size_t> certificate_edges(const OrientedIsogenyGraph& og, const PathCertificate& c) {
    const auto& g = og.graph;
    std::vector<std::size_t> out;
    std::size_t v = c.start;
    for (const auto& step : c.steps) {
        const auto slot = g.slot_of(step);
        if (!slot) throw InputError("unknown step " + to_string(step));
        out.push_back(og.slot_edge[v * g.degree() + *slot]);
        v = g.neighbor(v, *slot);
    }
    if (v != c.end) throw InputError("certificate does not end at its stated vertex");
    return out;
}

std::optional<std::int64_t> baby_step_giant_step(const Curve& c, const Point& p, const Point& q,
                                                 std::int64_t order) {
    if (order < 1) throw InputError("group order must be positive");
    const auto m = static_cast<std::int64_t>(std::ceil(std::sqrt(static_cast<double>(order))));
    std::map<std::pair<std::int64_t, std::int64_t>, std::int64_t> baby;
    auto key = [](const Point& pt) { return pt.infinity ? std::make_pair<std::int64_t, std::int64_t>(-1, -1) : std::make_pair(pt.x, pt.y); };
    Point cur = Point::at_infinity();
    for (std::int64_t j = 0; j < m; ++j) {
        baby.emplace(key(cur), j);
        cur = c.add(cur, p);
    }
    const Point giant = c.negate(c.multiply(p, m));
    Point gamma = q;
    for (std::int64_t i = 0; i <= m; ++i) {
        auto it = baby.find(key(gamma));
        if (it != baby.end()) return (i * m + it->second) % order;
        gamma = c.add(gamma, giant);
    }
    return std::nullopt;
}

DlpTranscript transfer_dlp(const IsogenyGraph& ig, std::size_t start, const std::vector<std::size_t>& path,
                           const Point& p, const Point& q, std::int64_t order) {
    if (start >= ig.vertices.size()) throw InputError("start vertex is not in the graph");
    const Curve& source = ig.vertices[start].curve;
    if (!source.contains(p) || !source.contains(q)) throw InputError("P and Q must lie on the start curve");
    if (order < 1 || !source.multiply(p, order).infinity) throw InputError("N is not a multiple of the order of P");
    for (std::size_t e : path) {
        if (e >= ig.edges.size()) throw InputError("path names an unknown edge");
        if (std::gcd(ig.edges[e].ell(), order) != 1)
            throw PreconditionError("isogeny degree " + std::to_string(ig.edges[e].ell()) + " divides N = " +
                                    std::to_string(order));
    }

    DlpTranscript out;
    out.order = order;
    out.steps.push_back(DlpStep{start, p, q});
    std::size_t v = start;
    for (std::size_t e : path) {
        const auto& edge = ig.edges[e];
        if (edge.source != v) throw InputError("path is not contiguous");
        const auto& last = out.steps.back();
        out.steps.push_back(DlpStep{edge.target, edge.map(last.p), edge.map(last.q)});
        v = edge.target;
    }
    const auto& end = out.steps.back();
    const auto r = baby_step_giant_step(ig.vertices[v].curve, end.p, end.q, order);
    if (!r) throw ConsistencyError("baby-step giant-step found no logarithm at the end of the path");
    if (source.multiply(p, *r) != q) throw ConsistencyError("recovered r does not satisfy Q = rP on the start curve");
    out.r = *r;
    return out;
}

}  // namespace isowalk
