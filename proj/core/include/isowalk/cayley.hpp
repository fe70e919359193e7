#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "isowalk/abelian.hpp"
#include "isowalk/graph.hpp"
#include "isowalk/quadform.hpp"

namespace isowalk {

struct Generator {
    GroupElement element;
    Step step;
};

/// Cay(H, S) as a labeled multigraph; S must be closed under inversion with
/// every (label, inverted) paired to (label, !inverted), or self-inverse.
class CayleyGraph {
public:
    const Subgroup& subgroup() const { return subgroup_; }
    const std::vector<Generator>& generators() const { return generators_; }
    std::size_t degree() const { return generators_.size(); }
    const RegularGraph& graph() const { return graph_; }

    /// Vertex index of a member of H.
    std::size_t vertex_of(const GroupElement& g) const;
    const GroupElement& element_at(std::size_t v) const { return subgroup_.elements()[v]; }

private:
    friend CayleyGraph build_cayley(Subgroup, std::vector<Generator>,
                                    const std::function<std::string(const GroupElement&)>&);

    CayleyGraph(Subgroup h, std::vector<Generator> s) : subgroup_(std::move(h)), generators_(std::move(s)) {}

    Subgroup subgroup_;
    std::vector<Generator> generators_;
    RegularGraph graph_;
};

/// Throws InputError if a generator lies outside H or S is not inversion-closed.
CayleyGraph build_cayley(Subgroup h, std::vector<Generator> s,
                         const std::function<std::string(const GroupElement&)>& namer = {});

/// Each given element together with its inverse; self-inverse elements enter once.
std::vector<Generator> symmetric_generators(const FiniteAbelianGroup& g, std::span<const GroupElement> elements,
                                            std::span<const std::string> labels);

/// Labels "l" (and "l" inverted for the conjugate of a split prime).
std::vector<Generator> generators_from_forms(const ClassGroup& cl, std::span<const LabeledForm> forms);

/// Cayley graph of H <= Cl(D) on the given prime forms, vertices named a:b:c.
CayleyGraph class_group_cayley(const ClassGroup& cl, const Subgroup& h, std::span<const LabeledForm> forms);

struct SpectrumEntry {
    Character character;  // over subgroup().structure()
    double eigenvalue = 0.0;
};

struct Spectrum {
    std::vector<SpectrumEntry> entries;
    double trivial_eigenvalue = 0.0;
    /// max |lambda_chi| over nontrivial characters (0 for the trivial group).
    double second_abs = 0.0;
    /// max lambda_chi over nontrivial characters (signed).
    double second_signed = 0.0;
    /// Characters with chi(s) = 1 for all s; equals the number of components.
    std::size_t trivial_multiplicity = 0;

    std::vector<double> sorted() const;
};

inline constexpr double kImaginaryTolerance = 1e-9;

/// lambda_chi = sum_{s in S} chi(s) for every character of H.
Spectrum spectrum_by_characters(const CayleyGraph& g);
/// Dense symmetric eigensolver on the adjacency matrix, sorted descending.
std::vector<double> spectrum_numeric(const CayleyGraph& g);

struct Expansion {
    double one_sided = 0.0;
    double two_sided = 0.0;
    double c = 0.0;
    double trivial_eigenvalue = 0.0;
};

/// Throws PreconditionError when S is empty.
Expansion expansion(const CayleyGraph& g);
Expansion expansion(const Spectrum& s);

struct EstimateParams {
    int degree = 2;                  // field degree n
    std::int64_t disc_abs = 1;       // |d_K|
    std::int64_t norm_fm = 1;        // N(f m)
    std::int64_t index = 1;          // [G:H]
    double bound = 2.0;              // B
};

struct EigenvaluePrediction {
    double main_term = 0.0;       // li(B)/[G:H] for the trivial character, else 0
    double error_envelope = 0.0;  // n sqrt(B) ln(B d_K N(fm))
};

EigenvaluePrediction eigenvalue_prediction(const EstimateParams& p, bool trivial);

struct ScanRow {
    std::int64_t bound = 2;
    double lambda_triv = 0.0;
    double c = 0.0;
    double delta2 = 0.0;
    double li_over_index = 0.0;
    double error_envelope = 0.0;
};

struct BoundScan {
    std::vector<ScanRow> rows;
    /// Smallest scanned B whose graph is a two-sided delta-expander.
    std::optional<std::int64_t> expander_bound;
};

/// Walks the grid B = 2, then p + 1 for each prime p with p + 1 <= max_bound,
/// updating every lambda_chi as primes enter S_B. Throws PreconditionError
/// unless the prime forms below max_bound generate H.
BoundScan scan_bounds(const ClassGroup& cl, const Subgroup& h, double delta, std::int64_t max_bound,
                      const std::set<std::int64_t>& avoid = {});

/// As scan_bounds; throws PreconditionError when no scanned B reaches delta.
BoundScan find_expander_bound(const ClassGroup& cl, const Subgroup& h, double delta, std::int64_t max_bound,
                              const std::set<std::int64_t>& avoid = {});

}  // namespace isowalk
