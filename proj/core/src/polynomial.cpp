#include "isowalk/polynomial.hpp"

#include <algorithm>
#include <string>

#include "isowalk/errors.hpp"
#include "isowalk/rng.hpp"

namespace isowalk {

using boost::multiprecision::cpp_int;

std::int64_t fp_reduce(std::int64_t a, std::int64_t p) {
    std::int64_t r = a % p;
    return r < 0 ? r + p : r;
}

std::int64_t fp_mul(std::int64_t a, std::int64_t b, std::int64_t p) {
    return static_cast<std::int64_t>((static_cast<__int128>(fp_reduce(a, p)) * fp_reduce(b, p)) % p);
}

std::int64_t fp_pow(std::int64_t a, std::uint64_t e, std::int64_t p) {
    std::int64_t result = 1 % p, base = fp_reduce(a, p);
    while (e > 0) {
        if (e & 1) result = fp_mul(result, base, p);
        base = fp_mul(base, base, p);
        e >>= 1;
    }
    return result;
}

std::int64_t fp_inv(std::int64_t a, std::int64_t p) {
    std::int64_t r0 = p, r1 = fp_reduce(a, p), s0 = 0, s1 = 1;
    if (r1 == 0) throw PreconditionError("zero has no inverse mod " + std::to_string(p));
    while (r1 != 0) {
        const std::int64_t q = r0 / r1;
        std::tie(r0, r1) = std::make_pair(r1, r0 - q * r1);
        std::tie(s0, s1) = std::make_pair(s1, s0 - q * s1);
    }
    if (r0 != 1) throw PreconditionError("value is not invertible mod " + std::to_string(p));
    return fp_reduce(s0, p);
}

int poly_degree(const Poly& f) { return static_cast<int>(f.size()) - 1; }

void poly_trim(Poly& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

Poly poly_monic(const Poly& f, std::int64_t p) {
    if (f.empty()) return f;
    return poly_scale(f, fp_inv(f.back(), p), p);
}

Poly poly_add(const Poly& f, const Poly& g, std::int64_t p) {
    Poly out(std::max(f.size(), g.size()), 0);
    for (std::size_t i = 0; i < f.size(); ++i) out[i] = f[i];
    for (std::size_t i = 0; i < g.size(); ++i) out[i] = fp_reduce(out[i] + g[i], p);
    poly_trim(out);
    return out;
}

Poly poly_sub(const Poly& f, const Poly& g, std::int64_t p) {
    Poly out(std::max(f.size(), g.size()), 0);
    for (std::size_t i = 0; i < f.size(); ++i) out[i] = f[i];
    for (std::size_t i = 0; i < g.size(); ++i) out[i] = fp_reduce(out[i] - g[i], p);
    poly_trim(out);
    return out;
}

Poly poly_scale(const Poly& f, std::int64_t c, std::int64_t p) {
    Poly out(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) out[i] = fp_mul(f[i], c, p);
    poly_trim(out);
    return out;
}

Poly poly_mul(const Poly& f, const Poly& g, std::int64_t p) {
    if (f.empty() || g.empty()) return {};
    std::vector<__int128> acc(f.size() + g.size() - 1, 0);
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (f[i] == 0) continue;
        for (std::size_t j = 0; j < g.size(); ++j) acc[i + j] += static_cast<__int128>(f[i]) * g[j];
    }
    Poly out(acc.size());
    for (std::size_t i = 0; i < acc.size(); ++i) out[i] = static_cast<std::int64_t>(acc[i] % p);
    poly_trim(out);
    return out;
}

std::pair<Poly, Poly> poly_divmod(const Poly& f, const Poly& g, std::int64_t p) {
    if (g.empty()) throw PreconditionError("polynomial division by zero");
    Poly r = f;
    poly_trim(r);
    if (r.size() < g.size()) return {{}, r};
    Poly q(r.size() - g.size() + 1, 0);
    const std::int64_t lead_inv = fp_inv(g.back(), p);
    for (std::size_t i = r.size(); i-- >= g.size();) {
        const std::int64_t c = fp_mul(r[i], lead_inv, p);
        const std::size_t shift = i + 1 - g.size();
        q[shift] = c;
        if (c == 0) continue;
        for (std::size_t j = 0; j < g.size(); ++j) r[shift + j] = fp_reduce(r[shift + j] - fp_mul(c, g[j], p), p);
    }
    r.resize(g.size() - 1);
    poly_trim(r);
    poly_trim(q);
    return {q, r};
}

Poly poly_mod(const Poly& f, const Poly& g, std::int64_t p) { return poly_divmod(f, g, p).second; }

Poly poly_gcd(Poly f, Poly g, std::int64_t p) {
    poly_trim(f);
    poly_trim(g);
    while (!g.empty()) {
        Poly r = poly_mod(f, g, p);
        f = std::move(g);
        g = std::move(r);
    }
    return poly_monic(f, p);
}

Poly poly_inv_mod(const Poly& f, const Poly& m, std::int64_t p) {
    Poly r0 = m, r1 = poly_mod(f, m, p), s0{}, s1{1};
    while (!r1.empty()) {
        auto [q, r] = poly_divmod(r0, r1, p);
        Poly s = poly_sub(s0, poly_mul(q, s1, p), p);
        r0 = std::move(r1);
        r1 = std::move(r);
        s0 = std::move(s1);
        s1 = std::move(s);
    }
    if (poly_degree(r0) != 0) throw PreconditionError("polynomial is not invertible modulo the given modulus");
    return poly_mod(poly_scale(s0, fp_inv(r0[0], p), p), m, p);
}

Poly poly_mulmod(const Poly& f, const Poly& g, const Poly& m, std::int64_t p) {
    return poly_mod(poly_mul(f, g, p), m, p);
}

Poly poly_powmod(const Poly& f, const cpp_int& e, const Poly& m, std::int64_t p) {
    if (e < 0) throw InputError("negative polynomial exponent");
    Poly result = poly_mod(Poly{1}, m, p);
    Poly base = poly_mod(f, m, p);
    const std::size_t bits = e == 0 ? 0 : boost::multiprecision::msb(e) + 1;
    for (std::size_t i = bits; i-- > 0;) {
        result = poly_mulmod(result, result, m, p);
        if (boost::multiprecision::bit_test(e, static_cast<unsigned>(i))) result = poly_mulmod(result, base, m, p);
    }
    return result;
}

Poly poly_derivative(const Poly& f, std::int64_t p) {
    if (f.size() <= 1) return {};
    Poly out(f.size() - 1);
    for (std::size_t i = 1; i < f.size(); ++i) out[i - 1] = fp_mul(f[i], static_cast<std::int64_t>(i), p);
    poly_trim(out);
    return out;
}

std::int64_t poly_eval(const Poly& f, std::int64_t x, std::int64_t p) {
    std::int64_t acc = 0;
    for (std::size_t i = f.size(); i-- > 0;) acc = fp_reduce(fp_mul(acc, x, p) + f[i], p);
    return acc;
}

Poly poly_from_roots(const std::vector<std::int64_t>& roots, std::int64_t p) {
    Poly out{1};
    for (std::int64_t r : roots) out = poly_mul(out, Poly{fp_reduce(-r, p), 1}, p);
    return out;
}

namespace {

const Poly kX{0, 1};

Poly pth_root(const Poly& f, std::int64_t p) {
    Poly out;
    for (std::size_t i = 0; i < f.size(); i += static_cast<std::size_t>(p)) out.push_back(f[i]);
    poly_trim(out);
    return out;
}

Poly radical(const Poly& f, std::int64_t p) {
    if (poly_degree(f) <= 0) return Poly{1};
    const Poly d = poly_derivative(f, p);
    if (d.empty()) return radical(pth_root(f, p), p);
    Poly g = poly_gcd(f, d, p);
    const Poly w = poly_monic(poly_divmod(f, g, p).first, p);
    for (Poly c = poly_gcd(g, w, p); poly_degree(c) > 0; c = poly_gcd(g, w, p)) g = poly_divmod(g, c, p).first;
    if (poly_degree(g) <= 0) return w;
    return poly_mul(w, radical(pth_root(g, p), p), p);
}

void equal_degree_split(const Poly& f, int d, std::int64_t p, Rng& rng, std::vector<Poly>& out) {
    const int n = poly_degree(f);
    if (n == d) {
        out.push_back(poly_monic(f, p));
        return;
    }
    const cpp_int exponent = (boost::multiprecision::pow(cpp_int(p), static_cast<unsigned>(d)) - 1) / 2;
    constexpr int kAttempts = 200;
    for (int attempt = 0; attempt < kAttempts; ++attempt) {
        Poly a(static_cast<std::size_t>(n));
        for (auto& c : a) c = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(p)));
        poly_trim(a);
        if (poly_degree(a) <= 0) continue;
        Poly g = poly_gcd(f, a, p);
        if (poly_degree(g) <= 0) g = poly_gcd(f, poly_sub(poly_powmod(a, exponent, f, p), Poly{1}, p), p);
        if (poly_degree(g) <= 0 || poly_degree(g) >= n) continue;
        equal_degree_split(g, d, p, rng, out);
        equal_degree_split(poly_monic(poly_divmod(f, g, p).first, p), d, p, rng, out);
        return;
    }
    auto found = irreducible_factors_exhaustive(f, p, d);
    if (static_cast<int>(found.size()) * d != n)
        throw ConsistencyError("equal-degree factorization failed to split a degree-" + std::to_string(n) +
                               " polynomial");
    out.insert(out.end(), found.begin(), found.end());
}

bool factor_less(const Poly& a, const Poly& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return std::lexicographical_compare(a.rbegin(), a.rend(), b.rbegin(), b.rend());
}

}  // namespace

std::vector<Poly> irreducible_factors(const Poly& f, std::int64_t p, int max_degree, std::uint64_t seed) {
    if (p < 3) throw InputError("polynomial factoring needs an odd prime modulus");
    Poly rest = poly_monic(radical(f, p), p);
    std::vector<Poly> out;
    Rng rng(seed);
    Poly frob = poly_mod(kX, rest, p);
    for (int i = 1; poly_degree(rest) >= i; ++i) {
        if (max_degree > 0 && i > max_degree) break;
        if (2 * i > poly_degree(rest)) {
            // What remains is irreducible.
            if (max_degree == 0 || poly_degree(rest) <= max_degree) out.push_back(rest);
            rest = Poly{1};
            break;
        }
        frob = poly_powmod(frob, cpp_int(p), rest, p);
        const Poly g = poly_gcd(rest, poly_sub(frob, kX, p), p);
        if (poly_degree(g) > 0) {
            equal_degree_split(g, i, p, rng, out);
            rest = poly_monic(poly_divmod(rest, g, p).first, p);
            frob = poly_mod(frob, rest, p);
        }
    }
    std::sort(out.begin(), out.end(), factor_less);
    return out;
}

std::vector<Poly> irreducible_factors_exhaustive(const Poly& f, std::int64_t p, int d) {
    if (d < 1) throw InputError("factor degree must be positive");
    cpp_int count = boost::multiprecision::pow(cpp_int(p), static_cast<unsigned>(d));
    if (count > kExhaustiveFactorLimit) throw PreconditionError("exhaustive factor search space is too large");
    const std::int64_t total = count.convert_to<std::int64_t>();
    std::vector<Poly> out;
    Poly g(static_cast<std::size_t>(d) + 1, 0);
    g[static_cast<std::size_t>(d)] = 1;
    for (std::int64_t code = 0; code < total; ++code) {
        std::int64_t c = code;
        for (int i = 0; i < d; ++i) {
            g[static_cast<std::size_t>(i)] = c % p;
            c /= p;
        }
        if (!poly_mod(f, g, p).empty()) continue;
        if (poly_is_irreducible(g, p)) out.push_back(g);
    }
    std::sort(out.begin(), out.end(), factor_less);
    return out;
}

bool poly_is_irreducible(const Poly& f, std::int64_t p) {
    const int n = poly_degree(f);
    if (n < 1) return false;
    Poly frob = poly_mod(kX, f, p);
    for (int i = 1; 2 * i <= n; ++i) {
        frob = poly_powmod(frob, cpp_int(p), f, p);
        if (poly_degree(poly_gcd(f, poly_sub(frob, kX, p), p)) > 0) return false;
    }
    return true;
}

}  // namespace isowalk
