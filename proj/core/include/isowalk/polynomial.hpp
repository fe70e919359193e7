#pragma once

// Dense univariate polynomials over F_p for small odd p (p < 2^31), stored
// low degree first with no trailing zeros. The zero polynomial is empty.

#include <cstdint>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace isowalk {

using Poly = std::vector<std::int64_t>;

std::int64_t fp_reduce(std::int64_t a, std::int64_t p);
std::int64_t fp_mul(std::int64_t a, std::int64_t b, std::int64_t p);
std::int64_t fp_pow(std::int64_t a, std::uint64_t e, std::int64_t p);
/// Throws PreconditionError for a = 0 mod p.
std::int64_t fp_inv(std::int64_t a, std::int64_t p);

int poly_degree(const Poly& f);  // -1 for zero
void poly_trim(Poly& f);
Poly poly_monic(const Poly& f, std::int64_t p);
Poly poly_add(const Poly& f, const Poly& g, std::int64_t p);
Poly poly_sub(const Poly& f, const Poly& g, std::int64_t p);
Poly poly_scale(const Poly& f, std::int64_t c, std::int64_t p);
Poly poly_mul(const Poly& f, const Poly& g, std::int64_t p);
/// (quotient, remainder); throws PreconditionError for a zero divisor.
std::pair<Poly, Poly> poly_divmod(const Poly& f, const Poly& g, std::int64_t p);
Poly poly_mod(const Poly& f, const Poly& g, std::int64_t p);
/// Monic gcd.
Poly poly_gcd(Poly f, Poly g, std::int64_t p);
/// Inverse of f modulo m; throws PreconditionError unless gcd(f, m) = 1.
Poly poly_inv_mod(const Poly& f, const Poly& m, std::int64_t p);
Poly poly_mulmod(const Poly& f, const Poly& g, const Poly& m, std::int64_t p);
Poly poly_powmod(const Poly& f, const boost::multiprecision::cpp_int& e, const Poly& m, std::int64_t p);
Poly poly_derivative(const Poly& f, std::int64_t p);
std::int64_t poly_eval(const Poly& f, std::int64_t x, std::int64_t p);
/// Product of (X - r) over the given roots.
Poly poly_from_roots(const std::vector<std::int64_t>& roots, std::int64_t p);

/// Monic irreducible factors of the squarefree part of f, sorted by (degree,
/// coefficients), keeping only factors of degree at most max_degree (0 keeps
/// all). Equal-degree splitting is Cantor-Zassenhaus driven by seed, with an
/// exhaustive fallback over monic divisors when p^d is small.
std::vector<Poly> irreducible_factors(const Poly& f, std::int64_t p, int max_degree = 0, std::uint64_t seed = 0);

/// Exhaustive search for the monic irreducible degree-d divisors of f; needs
/// p^d <= kExhaustiveFactorLimit.
std::vector<Poly> irreducible_factors_exhaustive(const Poly& f, std::int64_t p, int d);

inline constexpr std::int64_t kExhaustiveFactorLimit = 2'000'000;

bool poly_is_irreducible(const Poly& f, std::int64_t p);

}  // namespace isowalk
