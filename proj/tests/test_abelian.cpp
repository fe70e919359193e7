#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "isowalk/abelian.hpp"
#include "isowalk/errors.hpp"

using namespace isowalk;

namespace {

GroupElement el(const FiniteAbelianGroup& g, Coords c) { return g.element(c); }

// Lattice membership by brute force over small coefficient vectors.
bool in_lattice(const std::vector<Coords>& rows, const Coords& v, int span = 12) {
    if (rows.size() != 2) throw std::logic_error("oracle handles two relations");
    for (int a = -span; a <= span; ++a)
        for (int b = -span; b <= span; ++b) {
            bool ok = true;
            for (std::size_t i = 0; i < v.size() && ok; ++i) ok = a * rows[0][i] + b * rows[1][i] == v[i];
            if (ok) return true;
        }
    return false;
}

std::int64_t brute_order(const std::vector<Coords>& rows, const Coords& v) {
    for (std::int64_t k = 1; k <= 100; ++k) {
        Coords w;
        for (auto x : v) w.push_back(k * x);
        if (in_lattice(rows, w)) return k;
    }
    return -1;
}

std::vector<FiniteAbelianGroup> small_groups() {
    return {FiniteAbelianGroup{}, FiniteAbelianGroup({2}), FiniteAbelianGroup({6}), FiniteAbelianGroup({2, 4}),
            FiniteAbelianGroup({3, 3}), FiniteAbelianGroup({2, 2, 4}), FiniteAbelianGroup({2, 6, 12}),
            FiniteAbelianGroup({5, 25})};
}

}  // namespace

TEST(Group, RejectsBadInvariants) {
    EXPECT_THROW(FiniteAbelianGroup({0}), InputError);
    EXPECT_THROW(FiniteAbelianGroup({4, 6}), InputError);
    EXPECT_EQ(FiniteAbelianGroup{}.order(), 1);
    EXPECT_EQ(FiniteAbelianGroup({2, 4, 8}).order(), 64);
}

TEST(Group, Arithmetic) {
    FiniteAbelianGroup z6({6});
    EXPECT_EQ(z6.mul(el(z6, {4}), el(z6, {5})), el(z6, {3}));
    EXPECT_EQ(z6.inv(z6.identity()), z6.identity());
    FiniteAbelianGroup g({2, 4});
    EXPECT_EQ(g.mul(el(g, {1, 3}), el(g, {1, 2})), el(g, {0, 1}));
    EXPECT_EQ(g.pow(el(g, {1, 1}), -1), el(g, {1, 3}));
    EXPECT_EQ(g.order_of(el(g, {1, 2})), 2);
    EXPECT_EQ(g.order_of(el(g, {0, 1})), 4);
    EXPECT_THROW(g.mul(el(g, {1, 1}), z6.identity()), Error);
}

TEST(Group, IndexOrderIsLexicographic) {
    for (const auto& g : small_groups()) {
        const auto all = g.elements();
        ASSERT_EQ(static_cast<std::int64_t>(all.size()), g.order());
        for (std::size_t i = 0; i < all.size(); ++i) {
            EXPECT_EQ(g.index_of(all[i]), static_cast<std::int64_t>(i));
            if (i > 0) EXPECT_LT(all[i - 1], all[i]);
        }
    }
}

TEST(Relations, Examples) {
    EXPECT_EQ(group_from_relations(1, {{3}}).group.invariants(), (std::vector<std::int64_t>{3}));
    EXPECT_EQ(group_from_relations(2, {{2, 0}, {0, 4}}).group.invariants(), (std::vector<std::int64_t>{2, 4}));
    EXPECT_THROW(group_from_relations(2, {{2, 0}}), InputError);
    EXPECT_THROW(group_from_relations(2, {{1, 2, 3}}), InputError);
}

TEST(Relations, CyclicOfOrderSixMatchesBruteForce) {
    const std::vector<Coords> rows{{2, 1}, {0, 3}};
    const Presentation p = group_from_relations(2, rows);
    EXPECT_EQ(p.group.invariants(), (std::vector<std::int64_t>{6}));
    // Orders of the generator images agree with the quotient Z^2 / L computed directly.
    EXPECT_EQ(p.group.order_of(p.generator_images[0]), brute_order(rows, {1, 0}));
    EXPECT_EQ(p.group.order_of(p.generator_images[1]), brute_order(rows, {0, 1}));
    EXPECT_EQ(brute_order(rows, {1, 0}), 6);
    // The coordinate map is a homomorphism that kills exactly the relations.
    for (int x = -6; x <= 6; ++x)
        for (int y = -6; y <= 6; ++y) {
            const auto img = p.group.mul(p.group.pow(p.generator_images[0], x), p.group.pow(p.generator_images[1], y));
            EXPECT_EQ(img == p.group.identity(), in_lattice(rows, {x, y})) << x << "," << y;
        }
}

TEST(Relations, LatticeKillsGenerators) {
    FiniteAbelianGroup g({2, 12});
    std::vector<GroupElement> gens{el(g, {1, 2}), el(g, {0, 3}), el(g, {1, 5})};
    for (const auto& row : relation_lattice(g, gens)) {
        GroupElement acc = g.identity();
        for (std::size_t j = 0; j < gens.size(); ++j) acc = g.mul(acc, g.pow(gens[j], row[j]));
        EXPECT_EQ(acc, g.identity());
    }
    // The quotient by the lattice is the generated subgroup.
    const auto lattice = relation_lattice(g, gens);
    EXPECT_EQ(group_from_relations(gens.size(), lattice).group.order(), subgroup_generated(g, gens).order());
}

TEST(Subgroup, Examples) {
    FiniteAbelianGroup z6({6});
    std::vector<GroupElement> two{el(z6, {2})};
    const Subgroup h = subgroup_generated(z6, two);
    EXPECT_EQ(h.order(), 3);
    EXPECT_TRUE(h.contains(el(z6, {4})));
    EXPECT_FALSE(h.contains(el(z6, {3})));
    EXPECT_EQ(subgroup_generated(z6, {}).order(), 1);
    FiniteAbelianGroup g({2, 4});
    std::vector<GroupElement> gen{el(g, {1, 2})};
    EXPECT_EQ(subgroup_generated(g, gen).order(), 2);
    std::vector<GroupElement> gen2{el(g, {1, 1})};
    EXPECT_EQ(subgroup_generated(g, gen2).order(), 4);
}

TEST(Subgroup, LagrangeAndClosure) {
    for (const auto& g : small_groups()) {
        const auto all = g.elements();
        for (std::size_t i = 0; i < all.size(); i += 3) {
            std::vector<GroupElement> gens{all[i], all[(i * 7 + 1) % all.size()]};
            const Subgroup h = subgroup_generated(g, gens);
            EXPECT_EQ(g.order() % h.order(), 0);
            for (const auto& x : h.elements()) {
                EXPECT_TRUE(h.contains(g.inv(x)));
                for (const auto& y : gens) EXPECT_TRUE(h.contains(g.mul(x, y)));
            }
            // Structure coordinates form an isomorphism onto structure().
            std::set<GroupElement> seen;
            for (std::size_t k = 0; k < h.elements().size(); ++k) seen.insert(h.structure_coords(k));
            EXPECT_EQ(static_cast<std::int64_t>(seen.size()), h.structure().order());
            for (std::size_t a = 0; a < h.elements().size(); a += 2)
                for (std::size_t b = 0; b < h.elements().size(); b += 3)
                    EXPECT_EQ(h.to_structure(g.mul(h.elements()[a], h.elements()[b])),
                              h.structure().mul(h.structure_coords(a), h.structure_coords(b)));
        }
    }
}

TEST(Characters, Orthogonality) {
    for (const auto& g : small_groups()) {
        const auto chars = g.characters();
        const auto all = g.elements();
        ASSERT_EQ(static_cast<std::int64_t>(chars.size()), g.order());
        for (std::size_t a = 0; a < chars.size(); ++a)
            for (std::size_t b = 0; b < chars.size(); ++b) {
                std::complex<double> sum = 0;
                for (const auto& x : all) sum += g.evaluate(chars[a], x).value() * std::conj(g.evaluate(chars[b], x).value());
                const double want = a == b ? static_cast<double>(g.order()) : 0.0;
                EXPECT_NEAR(sum.real(), want, 1e-9);
                EXPECT_NEAR(sum.imag(), 0.0, 1e-9);
            }
    }
}

TEST(Characters, HomomorphismExact) {
    FiniteAbelianGroup g({2, 6, 12});
    const auto all = g.elements();
    for (const auto& chi : g.characters()) {
        for (std::size_t i = 0; i < all.size(); i += 17)
            for (std::size_t j = 0; j < all.size(); j += 29) {
                const Angle a = g.evaluate(chi, all[i]), b = g.evaluate(chi, all[j]);
                EXPECT_EQ(g.evaluate(chi, g.mul(all[i], all[j])), Angle::make(a.num * b.den + b.num * a.den, a.den * b.den));
            }
    }
}

TEST(Characters, SubgroupCountsAndExtension) {
    FiniteAbelianGroup z6({6});
    std::vector<GroupElement> two{el(z6, {2})};
    const Subgroup h = subgroup_generated(z6, two);
    const auto chars = characters_of(h);
    EXPECT_EQ(chars.size(), 3u);
    EXPECT_EQ(characters_of(subgroup_generated(z6, {})).size(), 1u);
    for (const auto& chi : chars) {
        const Character ext = extend_character(h, chi);
        // Oracle: all characters of Z/6 restricting to chi; exactly two, and ext is the smallest.
        std::vector<Character> matches;
        for (const auto& psi : z6.characters()) {
            bool ok = true;
            for (const auto& x : h.elements()) ok = ok && z6.evaluate(psi, x) == evaluate_on_subgroup(h, chi, x);
            if (ok) matches.push_back(psi);
        }
        ASSERT_EQ(matches.size(), 2u);
        EXPECT_EQ(ext, *std::min_element(matches.begin(), matches.end()));
    }
}

TEST(Characters, ExtensionRestrictsExactly) {
    for (const auto& g : small_groups()) {
        const auto all = g.elements();
        std::vector<GroupElement> gens{all[all.size() / 2]};
        if (all.size() > 3) gens.push_back(all[3]);
        const Subgroup h = subgroup_generated(g, gens);
        for (const auto& chi : characters_of(h)) {
            const Character ext = extend_character(h, chi);
            for (const auto& x : h.elements()) EXPECT_EQ(g.evaluate(ext, x), evaluate_on_subgroup(h, chi, x));
        }
    }
}

TEST(Homomorphism, Examples) {
    FiniteAbelianGroup z4({4}), z2({2}), z6({6});
    {
        const auto r = hom_kernel_and_index(Homomorphism(z4, z4, {el(z4, {1})}));
        EXPECT_EQ(r.kernel.order(), 1);
        EXPECT_EQ(r.index, 1);
    }
    {
        const auto r = hom_kernel_and_index(Homomorphism(z4, z2, {el(z2, {0})}));
        EXPECT_EQ(r.kernel.order(), 4);
        EXPECT_EQ(r.index, 2);
    }
    {
        const auto r = hom_kernel_and_index(Homomorphism(z6, z2, {el(z2, {1})}));
        EXPECT_EQ(r.kernel.order(), 3);
        EXPECT_TRUE(r.kernel.contains(el(z6, {4})));
        EXPECT_EQ(r.index, 1);
    }
    EXPECT_THROW(Homomorphism(z2, z6, {el(z6, {1})}), InputError);
}

TEST(Homomorphism, KernelTimesImageIsSource) {
    FiniteAbelianGroup src({2, 12}), dst({4, 12});
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 12; b += 5) {
            std::vector<GroupElement> images{el(dst, {2 * (a % 2), 6 * (b % 2)}), el(dst, {a, b})};
            const Homomorphism f(src, dst, images);
            const auto r = hom_kernel_and_index(f);
            EXPECT_EQ(r.kernel.order() * r.image.order(), src.order());
            EXPECT_EQ(r.index * r.image.order(), dst.order());
            for (const auto& x : src.elements()) EXPECT_EQ(r.kernel.contains(x), f.apply(x) == dst.identity());
        }
}

TEST(FilterSum, Examples) {
    FiniteAbelianGroup z6({6});
    std::vector<GroupElement> two{el(z6, {2})};
    const Subgroup h = subgroup_generated(z6, two);
    EXPECT_EQ(filter_sum_check(h, z6.identity()), 2);
    EXPECT_EQ(filter_sum_check(h, el(z6, {3})), 0);
    EXPECT_EQ(filter_sum_check(h, el(z6, {4})), 2);
}

TEST(FilterSum, IndicatorOnAllSmallGroups) {
    for (const auto& g : small_groups()) {
        if (g.order() > 512) continue;
        const auto all = g.elements();
        std::vector<GroupElement> gens{all[all.size() - 1]};
        const Subgroup h = subgroup_generated(g, gens);
        for (const auto& x : all) EXPECT_EQ(filter_sum_check(h, x), h.contains(x) ? h.index() : 0);
    }
}

TEST(GroupFile, ParsesAndReportsLines) {
    std::istringstream ok(
        "# a test group\ninvariants: 2 4\nsubgroup: 1 2\ngenerator: 0 1 a\ngenerator: 1 0\ntarget: 2\nimage: 1\nimage: 0\n");
    const GroupSpec spec = parse_group_spec(ok);
    EXPECT_EQ(spec.group.invariants(), (std::vector<std::int64_t>{2, 4}));
    EXPECT_EQ(spec.subgroup_generators.size(), 1u);
    EXPECT_EQ(spec.cayley_labels, (std::vector<std::string>{"a", "g1"}));
    ASSERT_TRUE(spec.hom_target.has_value());
    EXPECT_EQ(spec.hom_images.size(), 2u);

    auto error_of = [](const std::string& text) {
        std::istringstream in(text);
        try {
            parse_group_spec(in);
        } catch (const InputError& e) {
            return std::string(e.what());
        }
        return std::string();
    };
    EXPECT_EQ(error_of("invariants: 2 4\nsubgroup: 1\n").rfind("line 2:", 0), 0u);
    EXPECT_EQ(error_of("subgroup: 1\n").rfind("line 1:", 0), 0u);
    EXPECT_EQ(error_of("invariants: 4 6\n").rfind("line 1:", 0), 0u);
    EXPECT_EQ(error_of("invariants: 2\n\nimage: 1\n").rfind("line 3:", 0), 0u);
    EXPECT_EQ(error_of("invariants: 2\nbogus: 1\n").rfind("line 2:", 0), 0u);
}
