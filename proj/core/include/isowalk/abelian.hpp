#pragma once

// Finite abelian groups in invariant-factor form, with characters,
// explicit subgroups and homomorphisms.

#include <complex>
#include <compare>
#include <cstdint>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace isowalk {

using Coords = std::vector<std::int64_t>;

struct GroupElement {
    Coords coords;

    auto operator<=>(const GroupElement&) const = default;
    bool operator==(const GroupElement&) const = default;
};

/// A rational fraction of a full turn, kept reduced with 0 <= num < den.
struct Angle {
    std::int64_t num = 0;
    std::int64_t den = 1;

    static Angle make(std::int64_t num, std::int64_t den);
    std::complex<double> value() const;
    bool is_zero() const { return num == 0; }
    bool operator==(const Angle&) const = default;
};

/// Character in dual coordinates: chi(g) = exp(2 pi i sum_i coords[i] g[i] / d_i).
struct Character {
    Coords coords;

    bool is_trivial() const;
    auto operator<=>(const Character&) const = default;
    bool operator==(const Character&) const = default;
};

class FiniteAbelianGroup {
public:
    /// The trivial group.
    FiniteAbelianGroup() = default;
    /// Throws InputError unless every d_i >= 1 and d_i | d_{i+1}.
    explicit FiniteAbelianGroup(std::vector<std::int64_t> invariants);

    const std::vector<std::int64_t>& invariants() const { return invariants_; }
    std::size_t rank() const { return invariants_.size(); }
    std::int64_t order() const { return order_; }
    /// Largest invariant (1 for the trivial group).
    std::int64_t exponent() const;

    GroupElement identity() const;
    /// Builds an element, reducing each coordinate into [0, d_i).
    GroupElement element(const Coords& coords) const;
    bool contains(const GroupElement& g) const;

    GroupElement mul(const GroupElement& g, const GroupElement& h) const;
    GroupElement inv(const GroupElement& g) const;
    GroupElement pow(const GroupElement& g, std::int64_t e) const;
    std::int64_t order_of(const GroupElement& g) const;

    /// Mixed-radix index; index order coincides with lexicographic order.
    std::int64_t index_of(const GroupElement& g) const;
    GroupElement element_at(std::int64_t index) const;
    std::vector<GroupElement> elements() const;

    Character character(const Coords& coords) const;
    std::vector<Character> characters() const;
    Angle evaluate(const Character& chi, const GroupElement& g) const;

    bool operator==(const FiniteAbelianGroup& other) const { return invariants_ == other.invariants_; }

private:
    void check_member(const GroupElement& g) const;
    void check_character(const Character& chi) const;

    std::vector<std::int64_t> invariants_;
    std::int64_t order_ = 1;
};

/// Result of reducing a relation lattice to invariant-factor form.
struct Presentation {
    FiniteAbelianGroup group;
    /// Image of each original generator in invariant coordinates.
    std::vector<GroupElement> generator_images;
};

/// Z^n modulo the row span of `relations`; throws InputError if infinite.
Presentation group_from_relations(std::size_t num_generators,
                                  const std::vector<Coords>& relations);

/// Basis of the lattice {x in Z^m : sum_j x_j gens[j] = 0 in G}.
std::vector<Coords> relation_lattice(const FiniteAbelianGroup& group,
                                     std::span<const GroupElement> gens);

inline constexpr std::int64_t kMaxSubgroupOrder = 1'000'000;

class Subgroup {
public:
    Subgroup(FiniteAbelianGroup ambient, std::vector<GroupElement> generators);

    const FiniteAbelianGroup& ambient() const { return ambient_; }
    const std::vector<GroupElement>& generators() const { return generators_; }
    /// Sorted ascending.
    const std::vector<GroupElement>& elements() const { return elements_; }
    std::int64_t order() const { return static_cast<std::int64_t>(elements_.size()); }
    std::int64_t index() const { return ambient_.order() / order(); }

    bool contains(const GroupElement& g) const { return position(g).has_value(); }
    std::optional<std::size_t> position(const GroupElement& g) const;

    /// H as an abstract group, and the coordinates of each member in it.
    const FiniteAbelianGroup& structure() const { return structure_; }
    const GroupElement& structure_coords(std::size_t position) const { return structure_coords_[position]; }
    GroupElement to_structure(const GroupElement& g) const;

private:
    FiniteAbelianGroup ambient_;
    std::vector<GroupElement> generators_;
    std::vector<GroupElement> elements_;
    std::vector<std::int64_t> element_indices_;
    FiniteAbelianGroup structure_;
    std::vector<GroupElement> structure_coords_;
};

Subgroup subgroup_generated(const FiniteAbelianGroup& group, std::span<const GroupElement> gens);

/// Characters of H, expressed over H.structure().
std::vector<Character> characters_of(const Subgroup& h);

/// chi evaluated on a member of H (ambient coordinates).
Angle evaluate_on_subgroup(const Subgroup& h, const Character& chi, const GroupElement& g);

/// Lexicographically smallest character of the ambient group restricting to chi on H.
Character extend_character(const Subgroup& h, const Character& chi);

class Homomorphism {
public:
    /// images[i] is the image of the i-th invariant generator of source;
    /// throws InputError unless its order divides d_i.
    Homomorphism(FiniteAbelianGroup source, FiniteAbelianGroup target,
                 std::vector<GroupElement> images);

    const FiniteAbelianGroup& source() const { return source_; }
    const FiniteAbelianGroup& target() const { return target_; }
    const std::vector<GroupElement>& images() const { return images_; }

    GroupElement apply(const GroupElement& g) const;

private:
    FiniteAbelianGroup source_;
    FiniteAbelianGroup target_;
    std::vector<GroupElement> images_;
};

struct KernelAndIndex {
    Subgroup kernel;
    Subgroup image;
    std::int64_t index;
};

KernelAndIndex hom_kernel_and_index(const Homomorphism& f);

/// G/H with the projection G -> G/H.
struct Quotient {
    FiniteAbelianGroup group;
    Homomorphism projection;
};

Quotient quotient(const Subgroup& h);

/// Sum over characters theta of G/H of theta(gH), computed numerically and
/// rounded: [G:H] when g lies in H, 0 otherwise.
std::int64_t filter_sum_check(const Subgroup& h, const GroupElement& g);

/// Contents of the plain-text group description format (docs/group-format.md).
struct GroupSpec {
    FiniteAbelianGroup group;
    std::vector<GroupElement> subgroup_generators;
    std::vector<GroupElement> cayley_generators;
    std::vector<std::string> cayley_labels;
    std::optional<FiniteAbelianGroup> hom_target;
    std::vector<GroupElement> hom_images;
};

/// Throws InputError naming the offending line.
GroupSpec parse_group_spec(std::istream& in);

std::string to_string(const GroupElement& g);

}  // namespace isowalk
