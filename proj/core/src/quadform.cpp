#include "isowalk/quadform.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <tuple>

#include "isowalk/errors.hpp"

namespace isowalk {

namespace {

using i128 = __int128;

std::int64_t mod_floor(std::int64_t a, std::int64_t m) {
    std::int64_t r = a % m;
    return r < 0 ? r + m : r;
}

std::int64_t isqrt(std::int64_t n) {
    if (n < 0) throw InputError("square root of a negative number");
    auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && static_cast<i128>(r) * r > n) --r;
    while (static_cast<i128>(r + 1) * (r + 1) <= n) ++r;
    return r;
}

std::int64_t narrow(i128 v) {
    if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min())
        throw ConsistencyError("quadratic form coefficient overflows 64 bits");
    return static_cast<std::int64_t>(v);
}

// Returns g = gcd(a, b) >= 0 with u*a + v*b = g.
std::int64_t xgcd(std::int64_t a, std::int64_t b, std::int64_t& u, std::int64_t& v) {
    std::int64_t old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
    while (r != 0) {
        const std::int64_t q = old_r / r;
        std::tie(old_r, r) = std::make_tuple(r, old_r - q * r);
        std::tie(old_s, s) = std::make_tuple(s, old_s - q * s);
        std::tie(old_t, t) = std::make_tuple(t, old_t - q * t);
    }
    if (old_r < 0) {
        old_r = -old_r;
        old_s = -old_s;
        old_t = -old_t;
    }
    u = old_s;
    v = old_t;
    return old_r;
}

void check_discriminant_shape(std::int64_t d) {
    if (d == 0) throw InputError("discriminant must be nonzero");
    if (mod_floor(d, 4) > 1) throw InputError("discriminant " + std::to_string(d) + " is not 0 or 1 mod 4");
    if (d > 0) {
        const std::int64_t s = isqrt(d);
        if (s * s == d) throw InputError("discriminant " + std::to_string(d) + " is a perfect square");
    }
}

QuadForm with_c(std::int64_t a, std::int64_t b, std::int64_t d) {
    const i128 num = static_cast<i128>(b) * b - d;
    const i128 den = static_cast<i128>(4) * a;
    if (num % den != 0) throw ConsistencyError("form coefficients do not match the discriminant");
    return QuadForm{a, b, narrow(num / den)};
}

QuadForm reduce_definite(QuadForm f, std::int64_t d) {
    auto normalize = [&](QuadForm g) {
        const std::int64_t two_a = 2 * g.a;
        std::int64_t r = mod_floor(g.b, two_a);
        if (r > g.a) r -= two_a;
        return with_c(g.a, r, d);
    };
    f = normalize(f);
    while (f.a > f.c) {
        f = normalize(QuadForm{f.c, -f.b, f.a});
    }
    if ((f.a == f.c || f.b == -f.a) && f.b < 0) f.b = -f.b;
    return f;
}

// r = largest value <= s with r = b mod 2|a|, i.e. the representative in
// (sqrt(D) - 2|a|, sqrt(D)); or the one in (-|a|, |a|] when |a| > sqrt(D).
std::int64_t rho_residue(std::int64_t b, std::int64_t a, std::int64_t s) {
    const std::int64_t m = 2 * std::llabs(a);
    if (std::llabs(a) > s) {
        std::int64_t r = mod_floor(b, m);
        if (r > std::llabs(a)) r -= m;
        return r;
    }
    return s - mod_floor(s - b, m);
}

bool is_reduced_indefinite(const QuadForm& f, std::int64_t s) {
    const std::int64_t two_a = 2 * std::llabs(f.a);
    return f.b > 0 && f.b <= s && f.b + two_a >= s + 1 && two_a <= f.b + s;
}

QuadForm rho_step(const QuadForm& f, std::int64_t d, std::int64_t s) {
    return with_c(f.c, rho_residue(-f.b, f.c, s), d);
}

std::vector<QuadForm> cycle_of(const QuadForm& reduced, std::int64_t d, std::int64_t s) {
    std::vector<QuadForm> cycle{reduced};
    for (QuadForm g = rho_step(reduced, d, s); g != reduced; g = rho_step(g, d, s)) {
        cycle.push_back(g);
        if (cycle.size() > static_cast<std::size_t>(4 * d + 16))
            throw ConsistencyError("reduction cycle does not close");
    }
    return cycle;
}

QuadForm reduce_indefinite(QuadForm f, std::int64_t d) {
    const std::int64_t s = isqrt(d);
    std::size_t steps = 0;
    while (!is_reduced_indefinite(f, s)) {
        f = rho_step(f, d, s);
        if (++steps > 100000) throw ConsistencyError("indefinite reduction does not terminate");
    }
    const auto cycle = cycle_of(f, d, s);
    return *std::min_element(cycle.begin(), cycle.end());
}

// Some form properly equivalent to the canonical class representative with a > 0.
QuadForm positive_representative(const QuadForm& f, std::int64_t d) {
    if (f.a > 0) return f;
    if (d < 0) throw ConsistencyError("definite form with a <= 0");
    const std::int64_t s = isqrt(d);
    QuadForm g = f;
    if (!is_reduced_indefinite(g, s)) g = reduce_indefinite(g, d);
    for (std::size_t i = 0; g.a <= 0; ++i) {
        g = rho_step(g, d, s);
        if (i > static_cast<std::size_t>(4 * d + 16)) throw ConsistencyError("no positive form in cycle");
    }
    return g;
}

QuadForm canonical(const QuadForm& f, std::int64_t d) {
    return d < 0 ? reduce_definite(f, d) : reduce_indefinite(f, d);
}

std::int64_t form_gcd(const QuadForm& f) {
    return std::gcd(std::gcd(std::llabs(f.a), std::llabs(f.b)), std::llabs(f.c));
}

}  // namespace

std::int64_t QuadForm::discriminant() const {
    return narrow(static_cast<i128>(b) * b - static_cast<i128>(4) * a * c);
}

std::string to_string(const QuadForm& f) {
    return std::to_string(f.a) + ":" + std::to_string(f.b) + ":" + std::to_string(f.c);
}

QuadForm parse_form(const std::string& text) {
    std::int64_t v[3];
    std::size_t pos = 0;
    for (int i = 0; i < 3; ++i) {
        const std::size_t end = i < 2 ? text.find(':', pos) : text.size();
        if (end == std::string::npos) throw InputError("form '" + text + "' is not of the shape a:b:c");
        const char* first = text.data() + pos;
        const char* last = text.data() + end;
        auto [ptr, ec] = std::from_chars(first, last, v[i]);
        if (ec != std::errc() || ptr != last) throw InputError("form '" + text + "' has a non-integer coefficient");
        pos = end + 1;
    }
    return QuadForm{v[0], v[1], v[2]};
}

Discriminant::Discriminant(std::int64_t value) : value_(value) {
    check_discriminant_shape(value);
    std::int64_t n = std::llabs(value);
    std::int64_t square_root = 1;
    std::int64_t squarefree = 1;
    for (std::int64_t p = 2; p * p <= n; ++p) {
        int e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        for (int i = 0; i < e / 2; ++i) square_root *= p;
        if (e % 2) squarefree *= p;
    }
    squarefree *= n;
    const std::int64_t m = value < 0 ? -squarefree : squarefree;
    if (mod_floor(m, 4) == 1) {
        fundamental_ = m;
        conductor_ = square_root;
    } else {
        fundamental_ = 4 * m;
        conductor_ = square_root / 2;
    }
}

QuadForm reduce(const QuadForm& f) {
    const std::int64_t d = f.discriminant();
    check_discriminant_shape(d);
    if (d < 0 && f.a <= 0) throw InputError("only positive definite forms are supported");
    return canonical(f, d);
}

bool is_reduced(const QuadForm& f) {
    const std::int64_t d = f.discriminant();
    if (d < 0) {
        if (f.a <= 0 || std::llabs(f.b) > f.a || f.a > f.c || f.b == -f.a) return false;
        return !(f.a == f.c && f.b < 0);
    }
    return is_reduced_indefinite(f, isqrt(d));
}

QuadForm rho(const QuadForm& f, std::int64_t discriminant) {
    return rho_step(f, discriminant, isqrt(discriminant));
}

QuadForm principal_form(const Discriminant& d) {
    const std::int64_t b = mod_floor(d.value(), 4);  // 0 or 1
    return canonical(with_c(1, b, d.value()), d.value());
}

QuadForm compose(const QuadForm& x, const QuadForm& y) {
    const std::int64_t d = x.discriminant();
    if (y.discriminant() != d) throw InputError("cannot compose forms of different discriminants");
    QuadForm f1 = positive_representative(x, d);
    QuadForm f2 = positive_representative(y, d);
    if (f1.a > f2.a) std::swap(f1, f2);
    // Classical composition (Shanks/Cohen, without NUCOMP).
    const std::int64_t s = (f1.b + f2.b) / 2;
    const std::int64_t n = f2.b - s;
    std::int64_t y1 = 0, dd = 0;
    if (f2.a % f1.a == 0) {
        y1 = 0;
        dd = f1.a;
    } else {
        std::int64_t u = 0, v = 0;
        dd = xgcd(f2.a, f1.a, u, v);
        y1 = u;
    }
    std::int64_t x2 = 0, y2 = 0, d1 = 0;
    if (s % dd == 0) {
        y2 = -1;
        x2 = 0;
        d1 = dd;
    } else {
        std::int64_t u = 0, v = 0;
        d1 = xgcd(s, dd, u, v);
        x2 = u;
        y2 = -v;
    }
    const std::int64_t v1 = f1.a / d1;
    const std::int64_t v2 = f2.a / d1;
    const i128 r_raw = (static_cast<i128>(y1) * y2 % v1 * n - static_cast<i128>(x2) * f2.c) % v1;
    std::int64_t r = static_cast<std::int64_t>(r_raw);
    if (r < 0) r += v1;
    const std::int64_t b3 = narrow(f2.b + static_cast<i128>(2) * v2 * r);
    const std::int64_t a3 = narrow(static_cast<i128>(v1) * v2);
    return canonical(with_c(a3, b3, d), d);
}

QuadForm inverse(const QuadForm& x) {
    const std::int64_t d = x.discriminant();
    return canonical(QuadForm{x.a, -x.b, x.c}, d);
}

QuadForm power(const QuadForm& x, std::int64_t e) {
    const std::int64_t d = x.discriminant();
    QuadForm base = e < 0 ? inverse(x) : canonical(positive_representative(x, d), d);
    std::int64_t k = e < 0 ? -e : e;
    QuadForm acc = principal_form(Discriminant(d));
    while (k > 0) {
        if (k & 1) acc = compose(acc, base);
        base = compose(base, base);
        k >>= 1;
    }
    return acc;
}

std::size_t ClassGroup::FormHash::operator()(const QuadForm& f) const noexcept {
    std::size_t h = std::hash<std::int64_t>{}(f.a);
    h ^= std::hash<std::int64_t>{}(f.b) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h ^= std::hash<std::int64_t>{}(f.c) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
}

const GroupElement& ClassGroup::element_of(const QuadForm& f) const {
    if (f.discriminant() != disc_.value()) throw InputError("form " + to_string(f) + " has the wrong discriminant");
    auto it = position_.find(canonical(f, disc_.value()));
    if (it == position_.end()) throw InputError("form " + to_string(f) + " is not primitive");
    return elements_[it->second];
}

const QuadForm& ClassGroup::form_of(const GroupElement& g) const {
    return forms_[by_index_[static_cast<std::size_t>(group_.index_of(g))]];
}

namespace {

std::vector<QuadForm> definite_classes(std::int64_t d) {
    std::vector<QuadForm> out;
    const std::int64_t amax = isqrt(-d / 3);
    for (std::int64_t a = 1; a <= amax; ++a) {
        for (std::int64_t b = -a + 1; b <= a; ++b) {
            if (mod_floor(b - d, 2) != 0) continue;
            const i128 num = static_cast<i128>(b) * b - d;
            if (num % (4 * a) != 0) continue;
            const auto c = static_cast<std::int64_t>(num / (4 * a));
            if (c < a) continue;
            if (a == c && b < 0) continue;
            QuadForm f{a, b, c};
            if (form_gcd(f) == 1) out.push_back(f);
        }
    }
    return out;
}

std::vector<QuadForm> indefinite_classes(std::int64_t d) {
    const std::int64_t s = isqrt(d);
    std::vector<QuadForm> reduced;
    for (std::int64_t b = 1; b <= s; ++b) {
        if (mod_floor(d - b, 2) != 0) continue;
        const std::int64_t n = (d - b * b) / 4;  // a*c = -n
        const std::int64_t lo = std::max<std::int64_t>(1, (s + 1 - b + 1) / 2);
        const std::int64_t hi = (b + s) / 2;
        for (std::int64_t a = lo; a <= hi; ++a) {
            if (n % a != 0) continue;
            for (int sign : {1, -1}) {
                QuadForm f{sign * a, b, -sign * (n / a)};
                if (form_gcd(f) == 1 && is_reduced_indefinite(f, s)) reduced.push_back(f);
            }
        }
    }
    std::sort(reduced.begin(), reduced.end());
    std::vector<bool> seen(reduced.size(), false);
    std::vector<QuadForm> classes;
    for (std::size_t i = 0; i < reduced.size(); ++i) {
        if (seen[i]) continue;
        const auto cycle = cycle_of(reduced[i], d, s);
        for (const auto& g : cycle) {
            auto it = std::lower_bound(reduced.begin(), reduced.end(), g);
            if (it == reduced.end() || *it != g) throw ConsistencyError("reduction cycle left the reduced set");
            seen[static_cast<std::size_t>(it - reduced.begin())] = true;
        }
        classes.push_back(*std::min_element(cycle.begin(), cycle.end()));
    }
    return classes;
}

}  // namespace

ClassGroup build_class_group(const Discriminant& disc) {
    const std::int64_t d = disc.value();
    ClassGroup cl(disc);
    cl.forms_ = d < 0 ? definite_classes(d) : indefinite_classes(d);
    std::sort(cl.forms_.begin(), cl.forms_.end());
    const std::size_t h = cl.forms_.size();
    for (std::size_t i = 0; i < h; ++i) cl.position_.emplace(cl.forms_[i], i);

    auto pos_of = [&](const QuadForm& f) {
        auto it = cl.position_.find(f);
        if (it == cl.position_.end()) throw ConsistencyError("composition produced an unknown class " + to_string(f));
        return it->second;
    };

    // Grow the known subgroup one generator at a time, recording the relation
    // n*e_new = (coordinates of g^n in the previous subgroup).
    std::vector<std::optional<Coords>> exps(h);
    std::vector<std::size_t> members;
    std::vector<Coords> relations;
    std::size_t ngens = 0;
    const std::size_t identity = pos_of(principal_form(disc));
    exps[identity] = Coords{};
    members.push_back(identity);

    std::size_t scan = 0;
    while (members.size() < h) {
        while (exps[scan]) ++scan;
        const QuadForm g = cl.forms_[scan];
        QuadForm x = g;
        std::int64_t n = 1;
        while (!exps[pos_of(x)]) {
            x = compose(x, g);
            ++n;
        }
        for (auto idx : members) exps[idx]->push_back(0);
        for (auto& rel : relations) rel.push_back(0);
        Coords rel = *exps[pos_of(x)];
        for (auto& v : rel) v = -v;
        rel.back() = n;
        relations.push_back(std::move(rel));
        ++ngens;

        const std::vector<std::size_t> old = members;
        QuadForm gi = principal_form(disc);
        for (std::int64_t i = 1; i < n; ++i) {
            gi = compose(gi, g);
            for (auto idx : old) {
                const std::size_t p = pos_of(compose(gi, cl.forms_[idx]));
                if (exps[p]) throw ConsistencyError("class group enumeration revisited a class");
                Coords e = *exps[idx];
                e.back() = i;
                exps[p] = std::move(e);
                members.push_back(p);
            }
        }
    }

    const Presentation pres = group_from_relations(ngens, relations);
    cl.group_ = pres.group;
    if (cl.group_.order() != static_cast<std::int64_t>(h))
        throw ConsistencyError("class group presentation has the wrong order");
    cl.elements_.resize(h);
    cl.by_index_.assign(h, 0);
    for (std::size_t i = 0; i < h; ++i) {
        GroupElement el = cl.group_.identity();
        for (std::size_t j = 0; j < ngens; ++j)
            el = cl.group_.mul(el, cl.group_.pow(pres.generator_images[j], (*exps[i])[j]));
        cl.by_index_[static_cast<std::size_t>(cl.group_.index_of(el))] = i;
        cl.elements_[i] = std::move(el);
    }
    return cl;
}

ClassGroup class_group(const Discriminant& d, std::int64_t bound) {
    if (d.value() > 0) return narrow_class_group(d, bound);
    if (-d.value() > bound)
        throw PreconditionError("|D| = " + std::to_string(-d.value()) + " exceeds the bound " + std::to_string(bound));
    return build_class_group(d);
}

ClassGroup narrow_class_group(const Discriminant& d, std::int64_t bound) {
    if (d.value() < 0) throw PreconditionError("narrow class groups need a positive discriminant");
    if (d.value() > bound)
        throw PreconditionError("D = " + std::to_string(d.value()) + " exceeds the bound " + std::to_string(bound));
    return build_class_group(d);
}

int kronecker(std::int64_t a, std::int64_t n) {
    if (n <= 0) throw InputError("kronecker symbol needs n >= 1");
    int result = 1;
    while (n % 2 == 0) {
        n /= 2;
        if (a % 2 == 0) return 0;
        const std::int64_t r = mod_floor(a, 8);
        if (r == 3 || r == 5) result = -result;
    }
    // Jacobi symbol for odd n.
    a = mod_floor(a, n);
    while (a != 0) {
        while (a % 2 == 0) {
            a /= 2;
            const std::int64_t r = n % 8;
            if (r == 3 || r == 5) result = -result;
        }
        std::swap(a, n);
        if (a % 4 == 3 && n % 4 == 3) result = -result;
        a %= n;
    }
    return n == 1 ? result : 0;
}

bool is_prime(std::int64_t n) {
    if (n < 2) return false;
    for (std::int64_t p = 2; p * p <= n; ++p)
        if (n % p == 0) return false;
    return true;
}

std::vector<std::int64_t> primes_below(std::int64_t bound) {
    std::vector<std::int64_t> out;
    if (bound <= 2) return out;
    std::vector<bool> composite(static_cast<std::size_t>(bound), false);
    for (std::int64_t i = 2; i < bound; ++i) {
        if (composite[static_cast<std::size_t>(i)]) continue;
        out.push_back(i);
        for (std::int64_t j = i * i; j < bound; j += i) composite[static_cast<std::size_t>(j)] = true;
    }
    return out;
}

std::optional<PrimeForm> prime_form(const Discriminant& d, std::int64_t prime) {
    if (!is_prime(prime)) throw InputError(std::to_string(prime) + " is not prime");
    if (d.conductor() % prime == 0)
        throw PreconditionError("prime " + std::to_string(prime) + " divides the conductor " +
                                std::to_string(d.conductor()));
    const int symbol = kronecker(d.value(), prime);
    if (symbol == -1) return std::nullopt;
    const std::int64_t modulus = 4 * prime;
    const std::int64_t target = mod_floor(d.value(), modulus);
    for (std::int64_t b = 0; b <= prime; ++b) {
        if (static_cast<std::int64_t>(static_cast<i128>(b) * b % modulus) != target) continue;
        PrimeForm pf;
        pf.prime = prime;
        pf.form = with_c(prime, b, d.value());
        pf.cls = canonical(pf.form, d.value());
        pf.inverse_cls = canonical(QuadForm{prime, -b, pf.form.c}, d.value());
        pf.ramified = symbol == 0;
        return pf;
    }
    throw ConsistencyError("no square root of D modulo 4l for a non-inert prime");
}

std::vector<LabeledForm> prime_multiset(const ClassGroup& cl, std::span<const std::int64_t> primes,
                                        const Subgroup& h, const std::set<std::int64_t>& avoid) {
    std::vector<LabeledForm> out;
    const auto& d = cl.discriminant();
    for (std::int64_t ell : primes) {
        if (avoid.contains(ell) || d.conductor() % ell == 0) continue;
        auto pf = prime_form(d, ell);
        if (!pf) continue;
        if (!h.contains(cl.element_of(pf->cls))) continue;
        out.push_back(LabeledForm{pf->cls, ell, false, pf->ramified});
        if (!pf->ramified) out.push_back(LabeledForm{pf->inverse_cls, ell, true, false});
    }
    return out;
}

std::vector<LabeledForm> generating_multiset(const ClassGroup& cl, std::int64_t bound, const Subgroup& h,
                                             const std::set<std::int64_t>& avoid) {
    const auto primes = primes_below(bound);
    return prime_multiset(cl, primes, h, avoid);
}

Subgroup subgroup_of_forms(const ClassGroup& cl, std::span<const QuadForm> forms) {
    std::vector<GroupElement> gens;
    for (const auto& f : forms) gens.push_back(cl.element_of(f));
    return Subgroup(cl.group(), std::move(gens));
}

Subgroup full_subgroup(const ClassGroup& cl) {
    std::vector<GroupElement> gens;
    for (std::size_t i = 0; i < cl.group().rank(); ++i) {
        Coords c(cl.group().rank(), 0);
        c[i] = 1;
        gens.push_back(GroupElement{std::move(c)});
    }
    return Subgroup(cl.group(), std::move(gens));
}

}  // namespace isowalk
