#include <gtest/gtest.h>

#include <set>

#include "isowalk/errors.hpp"
#include "isowalk/polynomial.hpp"
#include "isowalk/rng.hpp"

using namespace isowalk;

namespace {

Poly random_monic(Rng& rng, int degree, std::int64_t p) {
    Poly f(degree + 1);
    for (int i = 0; i < degree; ++i) f[i] = static_cast<std::int64_t>(rng.below(p));
    f[degree] = 1;
    return f;
}

// Trial division by every monic polynomial of degree 1..deg/2.
bool irreducible_oracle(const Poly& f, std::int64_t p) {
    const int n = poly_degree(f);
    if (n < 1) return false;
    for (int d = 1; 2 * d <= n; ++d) {
        std::int64_t count = 1;
        for (int i = 0; i < d; ++i) count *= p;
        for (std::int64_t code = 0; code < count; ++code) {
            Poly g(d + 1);
            std::int64_t c = code;
            for (int i = 0; i < d; ++i) {
                g[i] = c % p;
                c /= p;
            }
            g[d] = 1;
            if (poly_degree(poly_mod(f, g, p)) < 0) return false;
        }
    }
    return true;
}

}  // namespace

TEST(Field, Basics) {
    EXPECT_EQ(fp_reduce(-1, 7), 6);
    EXPECT_EQ(fp_mul(6, 6, 7), 1);
    EXPECT_EQ(fp_pow(3, 6, 7), 1);
    EXPECT_EQ(fp_mul(fp_inv(3, 7), 3, 7), 1);
    EXPECT_EQ(fp_mul(9999, 9999, 10007), (9999LL * 9999) % 10007);
    EXPECT_THROW(fp_inv(0, 7), Error);
}

TEST(Poly, Arithmetic) {
    const std::int64_t p = 11;
    const Poly f{1, 2, 3}, g{4, 0, 1};
    EXPECT_EQ(poly_mul(f, g, p), (Poly{4, 8, 13 % 11, 2, 3}));
    const auto [q, r] = poly_divmod(poly_add(poly_mul(f, g, p), Poly{5, 1}, p), g, p);
    EXPECT_EQ(q, f);
    EXPECT_EQ(r, (Poly{5, 1}));
    EXPECT_EQ(poly_degree(Poly{}), -1);
    EXPECT_EQ(poly_sub(f, f, p), Poly{});
    EXPECT_EQ(poly_derivative(Poly{1, 2, 3, 4}, p), (Poly{2, 6, 12 % 11}));
    EXPECT_EQ(poly_eval(Poly{1, 2, 3}, 2, p), (1 + 4 + 12) % 11);
    EXPECT_EQ(poly_from_roots({1, 2}, p), (Poly{2, 8, 1}));
    EXPECT_EQ(poly_gcd(poly_from_roots({1, 2, 3}, p), poly_from_roots({2, 3, 5}, p), p), poly_from_roots({2, 3}, p));
}

TEST(Poly, InverseAndPowerModulo) {
    const std::int64_t p = 13;
    Rng rng(3);
    const Poly m = {2, 0, 0, 1};  // x^3 + 2 is irreducible over F_13
    ASSERT_TRUE(irreducible_oracle(m, p));
    for (int i = 0; i < 30; ++i) {
        Poly f = random_monic(rng, 2, p);
        const Poly inv = poly_inv_mod(f, m, p);
        EXPECT_EQ(poly_mulmod(f, inv, m, p), Poly{1});
        // Frobenius fixes the field: f^(p^3) = f mod m.
        EXPECT_EQ(poly_powmod(f, 13 * 13 * 13, m, p), poly_mod(f, m, p));
    }
}

TEST(Factor, IrreducibleCountsOverF5) {
    // Monic irreducibles over F_5: (25 - 5)/2 of degree 2, (125 - 5)/3 of degree 3.
    const std::int64_t p = 5;
    for (const auto& [d, want] : {std::pair{2, 10}, std::pair{3, 40}}) {
        std::int64_t total = 1, found = 0;
        for (int i = 0; i < d; ++i) total *= p;
        for (std::int64_t code = 0; code < total; ++code) {
            Poly f(d + 1);
            std::int64_t c = code;
            for (int i = 0; i < d; ++i) {
                f[i] = c % p;
                c /= p;
            }
            f[d] = 1;
            const bool irr = poly_is_irreducible(f, p);
            EXPECT_EQ(irr, irreducible_oracle(f, p));
            found += irr;
        }
        EXPECT_EQ(found, want);
    }
}

TEST(Factor, ProductsOfRandomFactors) {
    Rng rng(11);
    for (std::int64_t p : {7, 11, 31, 101}) {
        for (int rep = 0; rep < 15; ++rep) {
            std::set<Poly> planted;
            while (planted.size() < 3) {
                const int deg = 1 + static_cast<int>(rng.below(3));
                Poly g = random_monic(rng, deg, p);
                if (irreducible_oracle(g, p)) planted.insert(g);
            }
            Poly f{1};
            for (const auto& g : planted) f = poly_mul(f, g, p);
            // Square one factor so the radical step is exercised.
            f = poly_mul(f, *planted.begin(), p);
            const auto got = irreducible_factors(f, p, 0, rep);
            EXPECT_EQ(std::set<Poly>(got.begin(), got.end()), planted);
            for (const auto& g : got) EXPECT_TRUE(irreducible_oracle(g, p));
        }
    }
}

TEST(Factor, DegreeFilterAndExhaustiveAgree) {
    Rng rng(19);
    const std::int64_t p = 23;
    for (int rep = 0; rep < 20; ++rep) {
        const Poly f = random_monic(rng, 7, p);
        for (int d : {1, 2, 3}) {
            std::vector<Poly> fast;
            for (const auto& g : irreducible_factors(f, p, d, rep))
                if (poly_degree(g) == d) fast.push_back(g);
            const auto slow = irreducible_factors_exhaustive(f, p, d);
            EXPECT_EQ(fast, slow) << rep << " d=" << d;
        }
    }
    EXPECT_THROW(irreducible_factors_exhaustive(Poly{1, 0, 0, 0, 0, 1}, 10007, 3), Error);
}

TEST(Factor, PthPowers) {
    // x^p - a = (x - a)^p over F_p.
    const std::int64_t p = 7;
    Poly f(8, 0);
    f[7] = 1;
    f[0] = fp_reduce(-3, p);
    const auto got = irreducible_factors(f, p);
    ASSERT_EQ(got.size(), 1u);
    EXPECT_EQ(got[0], (Poly{fp_reduce(-3, p), 1}));
}
