#include "isowalk/abelian.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <deque>
#include <numbers>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include <boost/multiprecision/cpp_int.hpp>

#include "isowalk/errors.hpp"

namespace isowalk {

namespace {

using Big = boost::multiprecision::cpp_int;
using BigMatrix = std::vector<std::vector<Big>>;

std::int64_t mod_floor(std::int64_t a, std::int64_t m) {
    std::int64_t r = a % m;
    return r < 0 ? r + m : r;
}

std::int64_t mod_floor(const Big& a, std::int64_t m) {
    Big r = a % m;
    if (r < 0) r += m;
    return r.convert_to<std::int64_t>();
}

struct SmithForm {
    std::vector<Big> diagonal;  // length = rank, positive, each dividing the next
    BigMatrix col_transform;    // V with U * M * V = diag
};

// Elementary row/column reduction. Only the column transform is tracked.
SmithForm smith_normal_form(BigMatrix m, std::size_t rows, std::size_t cols) {
    BigMatrix v(cols, std::vector<Big>(cols, 0));
    for (std::size_t i = 0; i < cols; ++i) v[i][i] = 1;

    auto swap_rows = [&](std::size_t a, std::size_t b) { std::swap(m[a], m[b]); };
    auto swap_cols = [&](std::size_t a, std::size_t b) {
        for (auto& row : m) std::swap(row[a], row[b]);
        for (auto& row : v) std::swap(row[a], row[b]);
    };
    auto add_col = [&](std::size_t dst, std::size_t src, const Big& factor) {
        for (auto& row : m) row[dst] += factor * row[src];
        for (auto& row : v) row[dst] += factor * row[src];
    };
    auto add_row = [&](std::size_t dst, std::size_t src, const Big& factor) {
        for (std::size_t j = 0; j < cols; ++j) m[dst][j] += factor * m[src][j];
    };

    SmithForm out;
    const std::size_t limit = std::min(rows, cols);
    for (std::size_t t = 0; t < limit; ++t) {
        std::optional<std::pair<std::size_t, std::size_t>> best;
        for (std::size_t i = t; i < rows; ++i) {
            for (std::size_t j = t; j < cols; ++j) {
                if (m[i][j] == 0) continue;
                if (!best || abs(m[i][j]) < abs(m[best->first][best->second])) best = {i, j};
            }
        }
        if (!best) break;
        swap_rows(t, best->first);
        swap_cols(t, best->second);

        for (;;) {
            bool clean = true;
            for (std::size_t i = t + 1; i < rows; ++i) {
                if (m[i][t] == 0) continue;
                Big q = m[i][t] / m[t][t];
                add_row(i, t, -q);
                if (m[i][t] != 0) clean = false;
            }
            for (std::size_t j = t + 1; j < cols; ++j) {
                if (m[t][j] == 0) continue;
                Big q = m[t][j] / m[t][t];
                add_col(j, t, -q);
                if (m[t][j] != 0) clean = false;
            }
            if (!clean) {
                // Bring the smallest leftover into the pivot and sweep again.
                std::size_t bi = t, bj = t;
                for (std::size_t i = t + 1; i < rows; ++i)
                    if (m[i][t] != 0 && abs(m[i][t]) < abs(m[bi][bj])) { bi = i; bj = t; }
                for (std::size_t j = t + 1; j < cols; ++j)
                    if (m[t][j] != 0 && abs(m[t][j]) < abs(m[bi][bj])) { bi = t; bj = j; }
                if (bi != t) swap_rows(t, bi);
                if (bj != t) swap_cols(t, bj);
                continue;
            }
            std::optional<std::size_t> offending;
            for (std::size_t i = t + 1; i < rows && !offending; ++i)
                for (std::size_t j = t + 1; j < cols; ++j)
                    if (m[i][j] % m[t][t] != 0) { offending = i; break; }
            if (!offending) break;
            add_row(t, *offending, Big(1));
        }
        if (m[t][t] < 0) {
            for (std::size_t j = 0; j < cols; ++j) m[t][j] = -m[t][j];
        }
        out.diagonal.push_back(m[t][t]);
    }
    out.col_transform = std::move(v);
    return out;
}

Presentation presentation_from(std::size_t n, const BigMatrix& relations) {
    if (n == 0) return {FiniteAbelianGroup{}, {}};
    for (const auto& row : relations)
        if (row.size() != n) throw InputError("relation row has wrong number of columns");
    SmithForm snf = smith_normal_form(relations, relations.size(), n);
    if (snf.diagonal.size() < n)
        throw InputError("relation lattice is not of full rank: the quotient is infinite");

    std::vector<std::int64_t> invariants;
    std::vector<std::size_t> kept;
    for (std::size_t i = 0; i < n; ++i) {
        if (snf.diagonal[i] > std::numeric_limits<std::int64_t>::max())
            throw InputError("invariant factor does not fit in 64 bits");
        if (snf.diagonal[i] != 1) {
            invariants.push_back(snf.diagonal[i].convert_to<std::int64_t>());
            kept.push_back(i);
        }
    }
    Presentation p{FiniteAbelianGroup(invariants), {}};
    for (std::size_t j = 0; j < n; ++j) {
        Coords c;
        for (std::size_t idx = 0; idx < kept.size(); ++idx)
            c.push_back(mod_floor(snf.col_transform[j][kept[idx]], invariants[idx]));
        p.generator_images.push_back(GroupElement{std::move(c)});
    }
    return p;
}

BigMatrix relation_lattice_big(const FiniteAbelianGroup& group, std::span<const GroupElement> gens) {
    const std::size_t m = gens.size();
    const std::size_t k = group.rank();
    BigMatrix basis;
    if (m == 0) return basis;
    if (k == 0) {
        for (std::size_t j = 0; j < m; ++j) {
            std::vector<Big> e(m, 0);
            e[j] = 1;
            basis.push_back(std::move(e));
        }
        return basis;
    }
    // Columns: the generators, then d_i e_i. Its integer kernel projected to the
    // first m coordinates is the relation lattice.
    BigMatrix c(k, std::vector<Big>(m + k, 0));
    for (std::size_t j = 0; j < m; ++j)
        for (std::size_t i = 0; i < k; ++i) c[i][j] = gens[j].coords[i];
    for (std::size_t i = 0; i < k; ++i) c[i][m + i] = group.invariants()[i];
    SmithForm snf = smith_normal_form(c, k, m + k);
    const std::size_t rank = snf.diagonal.size();
    for (std::size_t col = rank; col < m + k; ++col) {
        std::vector<Big> x(m);
        for (std::size_t j = 0; j < m; ++j) x[j] = snf.col_transform[j][col];
        basis.push_back(std::move(x));
    }
    return basis;
}

}  // namespace

Angle Angle::make(std::int64_t num, std::int64_t den) {
    if (den <= 0) throw InputError("angle denominator must be positive");
    num = mod_floor(num, den);
    std::int64_t g = std::gcd(num, den);
    if (g == 0) g = den;
    return Angle{num / g, den / g};
}

std::complex<double> Angle::value() const {
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(num) / static_cast<double>(den);
    return {std::cos(theta), std::sin(theta)};
}

bool Character::is_trivial() const {
    return std::all_of(coords.begin(), coords.end(), [](std::int64_t c) { return c == 0; });
}

FiniteAbelianGroup::FiniteAbelianGroup(std::vector<std::int64_t> invariants)
    : invariants_(std::move(invariants)) {
    order_ = 1;
    for (std::size_t i = 0; i < invariants_.size(); ++i) {
        if (invariants_[i] < 1) throw InputError("invariant factors must be positive");
        if (i + 1 < invariants_.size() && invariants_[i + 1] % invariants_[i] != 0)
            throw InputError("invariant factors must each divide the next");
        if (order_ > std::numeric_limits<std::int64_t>::max() / invariants_[i])
            throw InputError("group order overflows 64 bits");
        order_ *= invariants_[i];
    }
}

std::int64_t FiniteAbelianGroup::exponent() const {
    return invariants_.empty() ? 1 : invariants_.back();
}

GroupElement FiniteAbelianGroup::identity() const { return GroupElement{Coords(rank(), 0)}; }

GroupElement FiniteAbelianGroup::element(const Coords& coords) const {
    if (coords.size() != rank())
        throw InputError("element has " + std::to_string(coords.size()) + " coordinates, group rank is " +
                         std::to_string(rank()));
    GroupElement g{coords};
    for (std::size_t i = 0; i < rank(); ++i) g.coords[i] = mod_floor(g.coords[i], invariants_[i]);
    return g;
}

bool FiniteAbelianGroup::contains(const GroupElement& g) const {
    if (g.coords.size() != rank()) return false;
    for (std::size_t i = 0; i < rank(); ++i)
        if (g.coords[i] < 0 || g.coords[i] >= invariants_[i]) return false;
    return true;
}

void FiniteAbelianGroup::check_member(const GroupElement& g) const {
    if (!contains(g)) throw InputError("element " + to_string(g) + " does not belong to this group");
}

void FiniteAbelianGroup::check_character(const Character& chi) const {
    if (!contains(GroupElement{chi.coords}))
        throw InputError("character coordinates do not match this group");
}

GroupElement FiniteAbelianGroup::mul(const GroupElement& g, const GroupElement& h) const {
    check_member(g);
    check_member(h);
    GroupElement r = g;
    for (std::size_t i = 0; i < rank(); ++i) {
        r.coords[i] += h.coords[i];
        if (r.coords[i] >= invariants_[i]) r.coords[i] -= invariants_[i];
    }
    return r;
}

GroupElement FiniteAbelianGroup::inv(const GroupElement& g) const {
    check_member(g);
    GroupElement r = g;
    for (std::size_t i = 0; i < rank(); ++i) r.coords[i] = r.coords[i] == 0 ? 0 : invariants_[i] - r.coords[i];
    return r;
}

GroupElement FiniteAbelianGroup::pow(const GroupElement& g, std::int64_t e) const {
    check_member(g);
    GroupElement r = g;
    for (std::size_t i = 0; i < rank(); ++i) {
        const __int128 prod = static_cast<__int128>(g.coords[i]) * (e % invariants_[i]);
        r.coords[i] = mod_floor(static_cast<std::int64_t>(prod % invariants_[i]), invariants_[i]);
    }
    return r;
}

std::int64_t FiniteAbelianGroup::order_of(const GroupElement& g) const {
    check_member(g);
    std::int64_t ord = 1;
    for (std::size_t i = 0; i < rank(); ++i) {
        const std::int64_t d = invariants_[i];
        const std::int64_t oi = d / std::gcd(d, g.coords[i]);
        ord = std::lcm(ord, oi);
    }
    return ord;
}

std::int64_t FiniteAbelianGroup::index_of(const GroupElement& g) const {
    check_member(g);
    std::int64_t idx = 0;
    for (std::size_t i = 0; i < rank(); ++i) idx = idx * invariants_[i] + g.coords[i];
    return idx;
}

GroupElement FiniteAbelianGroup::element_at(std::int64_t index) const {
    if (index < 0 || index >= order_) throw InputError("element index out of range");
    GroupElement g = identity();
    for (std::size_t i = rank(); i-- > 0;) {
        g.coords[i] = index % invariants_[i];
        index /= invariants_[i];
    }
    return g;
}

std::vector<GroupElement> FiniteAbelianGroup::elements() const {
    std::vector<GroupElement> out;
    out.reserve(static_cast<std::size_t>(order_));
    for (std::int64_t i = 0; i < order_; ++i) out.push_back(element_at(i));
    return out;
}

Character FiniteAbelianGroup::character(const Coords& coords) const {
    return Character{element(coords).coords};
}

std::vector<Character> FiniteAbelianGroup::characters() const {
    std::vector<Character> out;
    out.reserve(static_cast<std::size_t>(order_));
    for (std::int64_t i = 0; i < order_; ++i) out.push_back(Character{element_at(i).coords});
    return out;
}

Angle FiniteAbelianGroup::evaluate(const Character& chi, const GroupElement& g) const {
    check_character(chi);
    check_member(g);
    const std::int64_t e = exponent();
    __int128 acc = 0;
    for (std::size_t i = 0; i < rank(); ++i) {
        const std::int64_t d = invariants_[i];
        const __int128 term = (static_cast<__int128>(chi.coords[i]) * g.coords[i]) % d;
        acc = (acc + term * (e / d)) % e;
    }
    return Angle::make(static_cast<std::int64_t>(acc), e);
}

Presentation group_from_relations(std::size_t num_generators, const std::vector<Coords>& relations) {
    BigMatrix big;
    big.reserve(relations.size());
    for (const auto& row : relations) {
        if (row.size() != num_generators)
            throw InputError("relation row has " + std::to_string(row.size()) + " entries, expected " +
                             std::to_string(num_generators));
        big.emplace_back(row.begin(), row.end());
    }
    return presentation_from(num_generators, big);
}

std::vector<Coords> relation_lattice(const FiniteAbelianGroup& group, std::span<const GroupElement> gens) {
    std::vector<Coords> out;
    for (const auto& row : relation_lattice_big(group, gens)) {
        Coords c;
        for (const auto& x : row) {
            if (x > std::numeric_limits<std::int64_t>::max() || x < std::numeric_limits<std::int64_t>::min())
                throw ConsistencyError("relation lattice entry does not fit in 64 bits");
            c.push_back(x.convert_to<std::int64_t>());
        }
        out.push_back(std::move(c));
    }
    return out;
}

Subgroup::Subgroup(FiniteAbelianGroup ambient, std::vector<GroupElement> generators)
    : ambient_(std::move(ambient)), generators_(std::move(generators)) {
    for (const auto& g : generators_)
        if (!ambient_.contains(g)) throw InputError("subgroup generator " + to_string(g) + " is not in the group");

    std::vector<GroupElement> distinct = generators_;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    std::erase(distinct, ambient_.identity());

    const Presentation pres = presentation_from(distinct.size(), relation_lattice_big(ambient_, distinct));
    structure_ = pres.group;

    // Closure by breadth-first search, carrying structure coordinates along.
    std::unordered_map<std::int64_t, GroupElement> seen;
    std::deque<std::pair<GroupElement, GroupElement>> queue;
    const GroupElement start = ambient_.identity();
    seen.emplace(ambient_.index_of(start), structure_.identity());
    queue.emplace_back(start, structure_.identity());
    while (!queue.empty()) {
        auto [g, s] = std::move(queue.front());
        queue.pop_front();
        for (std::size_t j = 0; j < distinct.size(); ++j) {
            GroupElement next = ambient_.mul(g, distinct[j]);
            const std::int64_t idx = ambient_.index_of(next);
            if (seen.contains(idx)) continue;
            if (static_cast<std::int64_t>(seen.size()) >= kMaxSubgroupOrder)
                throw PreconditionError("subgroup exceeds the explicit-enumeration limit");
            GroupElement ns = structure_.mul(s, pres.generator_images[j]);
            seen.emplace(idx, ns);
            queue.emplace_back(std::move(next), std::move(ns));
        }
    }
    if (static_cast<std::int64_t>(seen.size()) != structure_.order())
        throw ConsistencyError("subgroup closure disagrees with its Smith normal form presentation");

    std::vector<std::pair<std::int64_t, GroupElement>> sorted(seen.begin(), seen.end());
    std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto& [idx, s] : sorted) {
        element_indices_.push_back(idx);
        elements_.push_back(ambient_.element_at(idx));
        structure_coords_.push_back(std::move(s));
    }
}

std::optional<std::size_t> Subgroup::position(const GroupElement& g) const {
    if (!ambient_.contains(g)) return std::nullopt;
    const std::int64_t idx = ambient_.index_of(g);
    auto it = std::lower_bound(element_indices_.begin(), element_indices_.end(), idx);
    if (it == element_indices_.end() || *it != idx) return std::nullopt;
    return static_cast<std::size_t>(it - element_indices_.begin());
}

GroupElement Subgroup::to_structure(const GroupElement& g) const {
    auto pos = position(g);
    if (!pos) throw PreconditionError("element " + to_string(g) + " is not in the subgroup");
    return structure_coords_[*pos];
}

Subgroup subgroup_generated(const FiniteAbelianGroup& group, std::span<const GroupElement> gens) {
    return Subgroup(group, std::vector<GroupElement>(gens.begin(), gens.end()));
}

std::vector<Character> characters_of(const Subgroup& h) { return h.structure().characters(); }

Angle evaluate_on_subgroup(const Subgroup& h, const Character& chi, const GroupElement& g) {
    return h.structure().evaluate(chi, h.to_structure(g));
}

Character extend_character(const Subgroup& h, const Character& chi) {
    const auto& g = h.ambient();
    std::vector<Angle> wanted;
    for (const auto& gen : h.generators()) wanted.push_back(evaluate_on_subgroup(h, chi, gen));
    for (std::int64_t i = 0; i < g.order(); ++i) {
        Character candidate{g.element_at(i).coords};
        bool ok = true;
        for (std::size_t j = 0; j < wanted.size() && ok; ++j)
            ok = g.evaluate(candidate, h.generators()[j]) == wanted[j];
        if (ok) return candidate;
    }
    throw ConsistencyError("no extension of the character exists");
}

Homomorphism::Homomorphism(FiniteAbelianGroup source, FiniteAbelianGroup target, std::vector<GroupElement> images)
    : source_(std::move(source)), target_(std::move(target)), images_(std::move(images)) {
    if (images_.size() != source_.rank())
        throw InputError("homomorphism needs one image per source invariant generator");
    for (std::size_t i = 0; i < images_.size(); ++i) {
        if (!target_.contains(images_[i])) throw InputError("homomorphism image is not in the target group");
        if (source_.invariants()[i] % target_.order_of(images_[i]) != 0)
            throw InputError("homomorphism is not well defined: image " + std::to_string(i) +
                             " has order not dividing " + std::to_string(source_.invariants()[i]));
    }
}

GroupElement Homomorphism::apply(const GroupElement& g) const {
    if (!source_.contains(g)) throw InputError("element is not in the homomorphism source");
    GroupElement r = target_.identity();
    for (std::size_t i = 0; i < images_.size(); ++i) r = target_.mul(r, target_.pow(images_[i], g.coords[i]));
    return r;
}

KernelAndIndex hom_kernel_and_index(const Homomorphism& f) {
    Subgroup image(f.target(), f.images());
    std::vector<GroupElement> kernel_gens;
    for (const auto& row : relation_lattice_big(f.target(), f.images())) {
        Coords c;
        for (std::size_t i = 0; i < row.size(); ++i) c.push_back(mod_floor(row[i], f.source().invariants()[i]));
        kernel_gens.push_back(GroupElement{std::move(c)});
    }
    if (f.source().rank() == 0) kernel_gens.clear();
    Subgroup kernel(f.source(), std::move(kernel_gens));
    const std::int64_t index = f.target().order() / image.order();
    return {std::move(kernel), std::move(image), index};
}

Quotient quotient(const Subgroup& h) {
    const auto& g = h.ambient();
    const std::size_t k = g.rank();
    std::vector<Coords> relations;
    for (std::size_t i = 0; i < k; ++i) {
        Coords row(k, 0);
        row[i] = g.invariants()[i];
        relations.push_back(std::move(row));
    }
    for (const auto& gen : h.generators()) relations.push_back(gen.coords);
    Presentation p = group_from_relations(k, relations);
    return Quotient{p.group, Homomorphism(g, p.group, p.generator_images)};
}

std::int64_t filter_sum_check(const Subgroup& h, const GroupElement& g) {
    const Quotient q = quotient(h);
    const GroupElement image = q.projection.apply(g);
    std::complex<double> sum = 0;
    for (const auto& theta : q.group.characters()) sum += q.group.evaluate(theta, image).value();
    return std::llround(sum.real());
}

std::string to_string(const GroupElement& g) {
    std::string s = "(";
    for (std::size_t i = 0; i < g.coords.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(g.coords[i]);
    }
    return s + ")";
}

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_ws(const std::string& s) {
    std::istringstream in(s);
    std::vector<std::string> out;
    for (std::string tok; in >> tok;) out.push_back(tok);
    return out;
}

std::optional<std::int64_t> parse_int(const std::string& tok) {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size()) return std::nullopt;
    return v;
}

}  // namespace

GroupSpec parse_group_spec(std::istream& in) {
    GroupSpec spec;
    bool have_invariants = false;
    std::size_t lineno = 0;
    auto fail = [&](const std::string& msg) -> InputError {
        return InputError("line " + std::to_string(lineno) + ": " + msg);
    };
    auto parse_ints = [&](const std::vector<std::string>& toks, std::size_t from, std::size_t count) {
        Coords out;
        for (std::size_t i = from; i < from + count; ++i) {
            auto v = parse_int(toks[i]);
            if (!v) throw fail("expected an integer, got '" + toks[i] + "'");
            out.push_back(*v);
        }
        return out;
    };

    for (std::string raw; std::getline(in, raw);) {
        ++lineno;
        if (auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
        const std::string line = trim(raw);
        if (line.empty()) continue;
        const auto colon = line.find(':');
        if (colon == std::string::npos) throw fail("expected 'key: values'");
        const std::string key = trim(std::string_view(line).substr(0, colon));
        const auto toks = split_ws(line.substr(colon + 1));

        if (!have_invariants) {
            if (key != "invariants") throw fail("the first entry must be 'invariants:'");
            try {
                spec.group = FiniteAbelianGroup(parse_ints(toks, 0, toks.size()));
            } catch (const InputError& e) {
                if (std::string(e.what()).rfind("line ", 0) == 0) throw;
                throw fail(e.what());
            }
            have_invariants = true;
            continue;
        }

        const std::size_t k = spec.group.rank();
        if (key == "subgroup" || key == "image") {
            const FiniteAbelianGroup& into = key == "image" ? (spec.hom_target ? *spec.hom_target : spec.group)
                                                            : spec.group;
            if (key == "image" && !spec.hom_target) throw fail("'image:' requires a preceding 'target:'");
            if (toks.size() != into.rank())
                throw fail("expected " + std::to_string(into.rank()) + " coordinates, got " +
                           std::to_string(toks.size()));
            GroupElement g = into.element(parse_ints(toks, 0, toks.size()));
            (key == "image" ? spec.hom_images : spec.subgroup_generators).push_back(std::move(g));
        } else if (key == "generator") {
            if (toks.size() != k && toks.size() != k + 1)
                throw fail("expected " + std::to_string(k) + " coordinates and an optional label");
            spec.cayley_generators.push_back(spec.group.element(parse_ints(toks, 0, k)));
            spec.cayley_labels.push_back(toks.size() == k + 1 ? toks[k]
                                                              : "g" + std::to_string(spec.cayley_labels.size()));
        } else if (key == "target") {
            if (spec.hom_target) throw fail("duplicate 'target:'");
            try {
                spec.hom_target = FiniteAbelianGroup(parse_ints(toks, 0, toks.size()));
            } catch (const InputError& e) {
                if (std::string(e.what()).rfind("line ", 0) == 0) throw;
                throw fail(e.what());
            }
        } else if (key == "invariants") {
            throw fail("duplicate 'invariants:'");
        } else {
            throw fail("unknown key '" + key + "'");
        }
    }
    if (!have_invariants) throw InputError("line " + std::to_string(lineno) + ": missing 'invariants:' line");
    if (spec.hom_target && spec.hom_images.size() != spec.group.rank())
        throw InputError("line " + std::to_string(lineno) + ": expected " + std::to_string(spec.group.rank()) +
                         " 'image:' lines, got " + std::to_string(spec.hom_images.size()));
    return spec;
}

}  // namespace isowalk
