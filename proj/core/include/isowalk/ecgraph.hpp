#pragma once

// Ordinary elliptic curves y^2 = x^3 + ax + b over F_p and their
// horizontal l-isogeny graphs, built from division polynomials and Velu's
// formulas, for comparison with Cayley graphs of Cl(t^2 - 4p).

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "isowalk/graph.hpp"
#include "isowalk/pathfind.hpp"
#include "isowalk/polynomial.hpp"
#include "isowalk/rng.hpp"

namespace isowalk {

inline constexpr std::int64_t kMaxFieldPrime = 10'000;

struct Point {
    std::int64_t x = 0;
    std::int64_t y = 0;
    bool infinity = true;

    static Point at_infinity() { return Point{}; }
    static Point affine(std::int64_t x, std::int64_t y) { return Point{x, y, false}; }
    bool operator==(const Point&) const = default;
};

std::string to_string(const Point& p);

class Curve {
public:
    /// Throws InputError unless p is an odd prime up to kMaxFieldPrime and the
    /// curve is nonsingular. Isogeny code further needs p >= 5.
    Curve(std::int64_t p, std::int64_t a, std::int64_t b);

    std::int64_t p() const { return p_; }
    std::int64_t a() const { return a_; }
    std::int64_t b() const { return b_; }
    std::int64_t j() const;

    /// x^3 + ax + b.
    std::int64_t rhs(std::int64_t x) const;
    bool contains(const Point& pt) const;
    Point add(const Point& u, const Point& v) const;
    Point negate(const Point& u) const;
    Point multiply(const Point& u, std::int64_t k) const;
    Point random_point(Rng& rng) const;

    bool operator==(const Curve&) const = default;

private:
    std::int64_t p_, a_, b_;
};

std::string to_string(const Curve& c);
/// Parses "p,a,b"; throws InputError.
Curve parse_curve(const std::string& text);

struct PointCount {
    std::int64_t order = 0;
    std::int64_t trace = 0;
    bool ordinary = false;
};

/// Naive count p + 1 + sum_x legendre(x^3 + ax + b).
PointCount point_count(const Curve& c);
/// Order of pt, given a multiple of it (usually the group order).
std::int64_t point_order(const Curve& c, const Point& pt, std::int64_t multiple);
/// A square root of a mod p, if any.
std::optional<std::int64_t> fp_sqrt(std::int64_t a, std::int64_t p);

/// Division polynomials f_0..f_n with y stripped: psi_m = f_m for odd m and
/// psi_m = y f_m for even m.
std::vector<Poly> division_polynomials(const Curve& c, int n);

/// Normalized Velu isogeny with odd kernel of size l, given by its kernel
/// polynomial (monic, degree (l - 1) / 2).
struct VeluIsogeny {
    std::int64_t ell = 0;
    Curve domain;
    Curve codomain;
    Poly kernel;

    /// Throws InputError if pt is not on the domain.
    Point eval(const Point& pt) const;
};

VeluIsogeny velu_isogeny(const Curve& domain, std::int64_t ell, const Poly& kernel);

/// One isogeny per F_p-rational cyclic subgroup of order l, sorted by kernel.
/// l must be an odd prime different from p.
std::vector<VeluIsogeny> rational_l_isogenies(const Curve& c, std::int64_t ell, std::uint64_t seed = 0);

struct IsogenyVertex {
    std::int64_t j = 0;
    Curve curve;
};

/// One curve of trace t per j-invariant in the class, sorted by j. Throws
/// InputError unless t is nonzero mod p, |t| < 2 sqrt(p) and t^2 - 4p is a
/// fundamental discriminant.
std::vector<IsogenyVertex> enumerate_isogeny_class(std::int64_t p, std::int64_t t);

struct IsogenyEdge {
    std::size_t source = 0;
    std::size_t target = 0;
    VeluIsogeny isogeny;
    /// (x, y) -> (u^2 x, u^3 y) carries the Velu codomain to the target curve.
    std::int64_t iso_u = 1;

    std::int64_t ell() const { return isogeny.ell; }
    Point map(const Point& pt) const;
};

struct IsogenyGraph {
    std::int64_t p = 0;
    std::int64_t t = 0;
    std::int64_t discriminant = 0;
    std::vector<std::int64_t> primes;  // L
    std::vector<IsogenyVertex> vertices;
    std::vector<IsogenyEdge> edges;    // sorted by (source j, l, target j, kernel)
};

/// Throws InputError for l = 2, l = p or non-prime l, and ConsistencyError
/// if a codomain leaves the class or the edge multiset is not symmetric.
IsogenyGraph build_isogeny_graph(std::int64_t p, std::int64_t t, std::vector<std::int64_t> primes,
                                 std::uint64_t seed = 0);

/// The isogeny graph as a labeled regular graph: split l get slots "l" and
/// "l"^-1 with each l-cycle oriented by walking it, ramified l one
/// self-inverse slot. slot_edge[v * degree + slot] is the realizing edge.
struct OrientedIsogenyGraph {
    RegularGraph graph;
    std::vector<std::size_t> slot_edge;
};

OrientedIsogenyGraph orient(const IsogenyGraph& ig);

struct CayleyComparison {
    bool vertex_count_ok = false;
    bool spectrum_ok = false;
    bool degree_ok = false;
    /// Colored isomorphism search, run when h <= kIsomorphismSearchLimit;
    /// nullopt if skipped or undecided.
    std::optional<bool> isomorphic;
    double spectrum_gap = 0.0;
    std::vector<std::string> failures;
    bool pass = false;
};

inline constexpr std::size_t kIsomorphismSearchLimit = 25;
inline constexpr double kSpectrumTolerance = 1e-6;

CayleyComparison compare_to_cayley(const IsogenyGraph& ig);

/// Edge indices realizing a certificate on the oriented graph.
std::vector<std::size_t> certificate_edges(const OrientedIsogenyGraph& og, const PathCertificate& c);

struct DlpStep {
    std::size_t vertex = 0;
    Point p;
    Point q;
};

struct DlpTranscript {
    std::vector<DlpStep> steps;  // the start vertex, then one entry per edge
    std::int64_t order = 0;
    std::int64_t r = 0;
};

/// Pushes P and Q along the path, solves Q' = r P' at the end by baby-step
/// giant-step and checks Q = r P at the start. Throws PreconditionError unless
/// gcd(prod l, N) = 1, ConsistencyError if BSGS fails.
DlpTranscript transfer_dlp(const IsogenyGraph& ig, std::size_t start, const std::vector<std::size_t>& path,
                           const Point& p, const Point& q, std::int64_t order);

/// Discrete log of q to base p in a cyclic group of the given order.
std::optional<std::int64_t> baby_step_giant_step(const Curve& c, const Point& p, const Point& q,
                                                 std::int64_t order);

}  // namespace isowalk
