#pragma once

// Binary quadratic forms (a, b, c) = ax^2 + bxy + cy^2 and the class groups
// of quadratic orders they model. Definite discriminants give Cl(O); positive
// discriminants give the narrow class group Cl+(O) through reduction cycles.

#include <compare>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "isowalk/abelian.hpp"

namespace isowalk {

struct QuadForm {
    std::int64_t a = 0;
    std::int64_t b = 0;
    std::int64_t c = 0;

    /// b^2 - 4ac; throws ConsistencyError on 64-bit overflow.
    std::int64_t discriminant() const;

    auto operator<=>(const QuadForm&) const = default;
    bool operator==(const QuadForm&) const = default;
};

std::string to_string(const QuadForm& f);
/// Parses "a:b:c"; throws InputError.
QuadForm parse_form(const std::string& text);

class Discriminant {
public:
    /// Throws InputError unless D is nonzero, D = 0 or 1 mod 4 and not a square.
    explicit Discriminant(std::int64_t value);

    std::int64_t value() const { return value_; }
    std::int64_t fundamental() const { return fundamental_; }
    std::int64_t conductor() const { return conductor_; }
    bool definite() const { return value_ < 0; }
    bool is_fundamental() const { return conductor_ == 1; }

    bool operator==(const Discriminant& other) const { return value_ == other.value_; }

private:
    std::int64_t value_;
    std::int64_t fundamental_;
    std::int64_t conductor_;
};

inline constexpr std::int64_t kDefaultDiscriminantBound = 10'000'000;

/// Canonical representative of the class of f: the reduced form when D < 0,
/// the lexicographically least form of the reduction cycle when D > 0.
/// Throws InputError for invalid discriminants or non-positive definite forms.
QuadForm reduce(const QuadForm& f);

QuadForm principal_form(const Discriminant& d);
/// Canonical class of the composition of two forms of the same discriminant.
QuadForm compose(const QuadForm& x, const QuadForm& y);
QuadForm inverse(const QuadForm& x);
QuadForm power(const QuadForm& x, std::int64_t e);

/// Indefinite reduction step; exposed for tests.
QuadForm rho(const QuadForm& f, std::int64_t discriminant);
bool is_reduced(const QuadForm& f);

class ClassGroup {
public:
    const Discriminant& discriminant() const { return disc_; }
    const FiniteAbelianGroup& group() const { return group_; }
    std::int64_t order() const { return group_.order(); }

    /// Canonical forms sorted by (a, b, c); parallel to elements().
    const std::vector<QuadForm>& forms() const { return forms_; }
    const std::vector<GroupElement>& elements() const { return elements_; }

    /// Any form of this discriminant; it is canonicalized first.
    const GroupElement& element_of(const QuadForm& f) const;
    const QuadForm& form_of(const GroupElement& g) const;
    bool narrow() const { return disc_.value() > 0; }

private:
    friend ClassGroup build_class_group(const Discriminant&);

    explicit ClassGroup(Discriminant d) : disc_(d) {}

    struct FormHash {
        std::size_t operator()(const QuadForm& f) const noexcept;
    };

    Discriminant disc_;
    FiniteAbelianGroup group_;
    std::vector<QuadForm> forms_;
    std::vector<GroupElement> elements_;
    std::unordered_map<QuadForm, std::size_t, FormHash> position_;
    std::vector<std::size_t> by_index_;
};

/// Cl(O) for D < 0; delegates to narrow_class_group for D > 0.
ClassGroup class_group(const Discriminant& d, std::int64_t bound = kDefaultDiscriminantBound);
/// Cl+(O) for D > 0, classes are reduction cycles under proper equivalence.
ClassGroup narrow_class_group(const Discriminant& d, std::int64_t bound = kDefaultDiscriminantBound);

/// Kronecker symbol (a/n) for n >= 1.
int kronecker(std::int64_t a, std::int64_t n);
bool is_prime(std::int64_t n);
std::vector<std::int64_t> primes_below(std::int64_t bound);

struct PrimeForm {
    std::int64_t prime = 0;
    QuadForm form;           // (l, b, c) with 0 <= b <= l
    QuadForm cls;            // canonical class of form
    QuadForm inverse_cls;    // canonical class of (l, -b, c)
    bool ramified = false;
};

/// Nullopt when l is inert; throws PreconditionError when l divides the conductor.
std::optional<PrimeForm> prime_form(const Discriminant& d, std::int64_t prime);

/// A member of S_B: a prime-form class with its prime label. `conjugate` marks
/// the (l, -b) form of a split prime.
struct LabeledForm {
    QuadForm cls;
    std::int64_t prime = 0;
    bool conjugate = false;
    bool ramified = false;

    bool operator==(const LabeledForm&) const = default;
};

/// Prime forms above primes l < bound (not dividing the conductor, not in
/// avoid) whose class lies in h. Split primes contribute both conjugates.
std::vector<LabeledForm> generating_multiset(const ClassGroup& cl, std::int64_t bound, const Subgroup& h,
                                             const std::set<std::int64_t>& avoid = {});

/// As generating_multiset, for an explicit list of primes.
std::vector<LabeledForm> prime_multiset(const ClassGroup& cl, std::span<const std::int64_t> primes,
                                        const Subgroup& h, const std::set<std::int64_t>& avoid = {});

/// Subgroup of cl.group() generated by the classes of the given forms.
Subgroup subgroup_of_forms(const ClassGroup& cl, std::span<const QuadForm> forms);
Subgroup full_subgroup(const ClassGroup& cl);

}  // namespace isowalk
