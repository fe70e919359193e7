#include "isowalk/cayley.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>

#include "isowalk/errors.hpp"
#include "isowalk/numeric.hpp"

namespace isowalk {

std::size_t CayleyGraph::vertex_of(const GroupElement& g) const {
    auto pos = subgroup_.position(g);
    if (!pos) throw InputError("element " + to_string(g) + " is not a vertex of this Cayley graph");
    return *pos;
}

CayleyGraph build_cayley(Subgroup h, std::vector<Generator> s,
                         const std::function<std::string(const GroupElement&)>& namer) {
    const auto& g = h.ambient();
    const std::size_t k = s.size();
    for (const auto& gen : s)
        if (!h.contains(gen.element))
            throw InputError("generator " + to_string(gen.step) + " = " + to_string(gen.element) +
                             " lies outside the subgroup");

    std::vector<Step> labels;
    std::vector<std::size_t> inverse(k);
    for (const auto& gen : s) labels.push_back(gen.step);
    for (std::size_t j = 0; j < k; ++j) {
        const GroupElement want = g.inv(s[j].element);
        std::optional<std::size_t> partner;
        for (std::size_t i = 0; i < k && !partner; ++i)
            if (labels[i] == labels[j].inverse()) partner = i;
        if (!partner && want == s[j].element) partner = j;
        if (!partner)
            throw InputError("generator " + to_string(labels[j]) + " has no inverse partner in S");
        if (s[*partner].element != want)
            throw InputError("generator " + to_string(labels[*partner]) + " is not the inverse of " +
                             to_string(labels[j]));
        inverse[j] = *partner;
    }

    const std::size_t n = static_cast<std::size_t>(h.order());
    std::vector<std::string> names;
    names.reserve(n);
    for (const auto& e : h.elements()) names.push_back(namer ? namer(e) : to_string(e));
    std::vector<std::size_t> neighbors(n * k);
    for (std::size_t v = 0; v < n; ++v)
        for (std::size_t j = 0; j < k; ++j)
            neighbors[v * k + j] = *h.position(g.mul(s[j].element, h.elements()[v]));

    CayleyGraph out(std::move(h), std::move(s));
    out.graph_ = RegularGraph(std::move(names), std::move(labels), std::move(inverse), std::move(neighbors));
    return out;
}

std::vector<Generator> symmetric_generators(const FiniteAbelianGroup& g, std::span<const GroupElement> elements,
                                            std::span<const std::string> labels) {
    if (elements.size() != labels.size()) throw InputError("one label per generator is required");
    std::vector<Generator> out;
    for (std::size_t i = 0; i < elements.size(); ++i) {
        out.push_back(Generator{elements[i], Step{labels[i], false}});
        const GroupElement inv = g.inv(elements[i]);
        if (inv != elements[i]) out.push_back(Generator{inv, Step{labels[i], true}});
    }
    return out;
}

std::vector<Generator> generators_from_forms(const ClassGroup& cl, std::span<const LabeledForm> forms) {
    std::vector<Generator> out;
    for (const auto& f : forms)
        out.push_back(Generator{cl.element_of(f.cls), Step{std::to_string(f.prime), f.conjugate}});
    return out;
}

CayleyGraph class_group_cayley(const ClassGroup& cl, const Subgroup& h, std::span<const LabeledForm> forms) {
    return build_cayley(h, generators_from_forms(cl, forms),
                        [&cl](const GroupElement& e) { return to_string(cl.form_of(e)); });
}

std::vector<double> Spectrum::sorted() const {
    std::vector<double> out;
    out.reserve(entries.size());
    for (const auto& e : entries) out.push_back(e.eigenvalue);
    std::sort(out.begin(), out.end(), std::greater<>());
    return out;
}

Spectrum spectrum_by_characters(const CayleyGraph& g) {
    const Subgroup& h = g.subgroup();
    const FiniteAbelianGroup& structure = h.structure();
    std::vector<GroupElement> gens;
    for (const auto& s : g.generators()) gens.push_back(h.to_structure(s.element));

    Spectrum out;
    out.trivial_eigenvalue = static_cast<double>(g.degree());
    for (const auto& chi : structure.characters()) {
        std::complex<double> sum = 0;
        bool all_trivial = true;
        for (const auto& s : gens) {
            const Angle a = structure.evaluate(chi, s);
            all_trivial = all_trivial && a.is_zero();
            sum += a.value();
        }
        if (std::abs(sum.imag()) > kImaginaryTolerance)
            throw ConsistencyError("character eigenvalue has imaginary residue " + std::to_string(sum.imag()));
        if (all_trivial) ++out.trivial_multiplicity;
        if (!chi.is_trivial()) out.second_abs = std::max(out.second_abs, std::abs(sum.real()));
        out.entries.push_back(SpectrumEntry{chi, sum.real()});
    }
    bool seeded = false;
    for (const auto& e : out.entries) {
        if (e.character.is_trivial()) continue;
        out.second_signed = seeded ? std::max(out.second_signed, e.eigenvalue) : e.eigenvalue;
        seeded = true;
    }
    if (!seeded) out.second_signed = 0.0;
    return out;
}

std::vector<double> spectrum_numeric(const CayleyGraph& g) { return g.graph().numeric_spectrum(); }

Expansion expansion(const Spectrum& s) {
    if (s.trivial_eigenvalue <= 0) throw PreconditionError("expansion needs a nonempty generator multiset");
    Expansion e;
    e.trivial_eigenvalue = s.trivial_eigenvalue;
    e.c = s.second_abs;
    e.two_sided = 1.0 - s.second_abs / s.trivial_eigenvalue;
    e.one_sided = 1.0 - s.second_signed / s.trivial_eigenvalue;
    return e;
}

Expansion expansion(const CayleyGraph& g) { return expansion(spectrum_by_characters(g)); }

EigenvaluePrediction eigenvalue_prediction(const EstimateParams& p, bool trivial) {
    if (p.bound < 2) throw PreconditionError("eigenvalue prediction needs B >= 2");
    if (p.degree <= 0 || p.disc_abs <= 0 || p.norm_fm <= 0 || p.index <= 0)
        throw InputError("estimate parameters must be positive");
    EigenvaluePrediction out;
    out.main_term = trivial ? li(p.bound) / static_cast<double>(p.index) : 0.0;
    out.error_envelope = p.degree * std::sqrt(p.bound) *
                         std::log(p.bound * static_cast<double>(p.disc_abs) * static_cast<double>(p.norm_fm));
    return out;
}

BoundScan scan_bounds(const ClassGroup& cl, const Subgroup& h, double delta, std::int64_t max_bound,
                      const std::set<std::int64_t>& avoid) {
    if (max_bound < 2) throw PreconditionError("the bound scan needs B_max >= 2");
    if (!(h.ambient() == cl.group())) throw InputError("subgroup does not live in this class group");
    const auto all_forms = generating_multiset(cl, max_bound, h, avoid);
    {
        std::vector<GroupElement> gens;
        for (const auto& f : all_forms) gens.push_back(cl.element_of(f.cls));
        if (Subgroup(cl.group(), gens).order() != h.order())
            throw PreconditionError("prime forms below B_max = " + std::to_string(max_bound) +
                                    " do not generate the subgroup");
    }

    const FiniteAbelianGroup& structure = h.structure();
    const auto chars = structure.characters();
    std::vector<std::complex<double>> lambda(chars.size(), 0.0);
    std::map<std::int64_t, std::vector<GroupElement>> entering;
    for (const auto& f : all_forms) entering[f.prime].push_back(h.to_structure(cl.element_of(f.cls)));

    const auto& d = cl.discriminant();
    EstimateParams params;
    params.degree = 2;
    params.disc_abs = std::llabs(d.fundamental());
    params.norm_fm = d.conductor() * d.conductor();
    params.index = h.index();

    BoundScan scan;
    std::int64_t degree = 0;
    auto emit = [&](std::int64_t bound) {
        ScanRow row;
        row.bound = bound;
        row.lambda_triv = static_cast<double>(degree);
        double c = 0.0;
        for (std::size_t i = 0; i < chars.size(); ++i) {
            if (chars[i].is_trivial()) continue;
            if (std::abs(lambda[i].imag()) > kImaginaryTolerance * std::max<double>(1.0, degree))
                throw ConsistencyError("character eigenvalue has an imaginary residue during the scan");
            c = std::max(c, std::abs(lambda[i].real()));
        }
        row.c = c;
        if (h.order() == 1) row.delta2 = 1.0;  // a single vertex expands vacuously
        else row.delta2 = degree == 0 ? 0.0 : 1.0 - c / static_cast<double>(degree);
        params.bound = static_cast<double>(bound);
        const auto pred = eigenvalue_prediction(params, true);
        row.li_over_index = pred.main_term;
        row.error_envelope = pred.error_envelope;
        if (!scan.expander_bound && row.delta2 >= delta) scan.expander_bound = bound;
        scan.rows.push_back(row);
    };

    emit(2);
    for (std::int64_t p : primes_below(max_bound)) {
        auto it = entering.find(p);
        if (it != entering.end()) {
            for (const auto& s : it->second) {
                for (std::size_t i = 0; i < chars.size(); ++i) lambda[i] += structure.evaluate(chars[i], s).value();
                ++degree;
            }
        }
        emit(p + 1);
    }
    return scan;
}

BoundScan find_expander_bound(const ClassGroup& cl, const Subgroup& h, double delta, std::int64_t max_bound,
                              const std::set<std::int64_t>& avoid) {
    BoundScan scan = scan_bounds(cl, h, delta, max_bound, avoid);
    if (!scan.expander_bound)
        throw PreconditionError("no B <= " + std::to_string(max_bound) + " gives a two-sided " +
                                std::to_string(delta) + "-expander");
    return scan;
}

}  // namespace isowalk
