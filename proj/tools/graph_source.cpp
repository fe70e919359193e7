#include "graph_source.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "isowalk/abelian.hpp"
#include "isowalk/cayley.hpp"
#include "isowalk/ecgraph.hpp"
#include "isowalk/errors.hpp"
#include "isowalk/quadform.hpp"

namespace isowalk::cli {

using nlohmann::json;

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::stringstream in(text);
    for (std::string item; std::getline(in, item, sep);)
        if (!item.empty()) out.push_back(item);
    return out;
}

double second_abs(const std::vector<double>& descending) {
    if (descending.size() < 2) return 0.0;
    return std::max(std::abs(descending[1]), std::abs(descending.back()));
}

std::int64_t smallest_generating_bound(const ClassGroup& cl, const Subgroup& h, const std::set<std::int64_t>& avoid) {
    std::vector<QuadForm> forms;
    for (std::int64_t p = 2;; ++p) {
        if (!is_prime(p) || avoid.contains(p)) continue;
        if (cl.discriminant().conductor() % p == 0) continue;
        if (auto pf = prime_form(cl.discriminant(), p); pf && h.contains(cl.element_of(pf->cls))) {
            forms.push_back(pf->cls);
            if (subgroup_of_forms(cl, forms).order() == h.order()) return p + 1;
        }
        if (p > 100000) throw PreconditionError("no prime bound below 10^5 generates the subgroup");
    }
}

BuiltGraph from_discriminant(std::int64_t d, const std::string& subgroup, std::int64_t bound,
                             const std::vector<std::int64_t>& avoid_list) {
    const ClassGroup cl = class_group(Discriminant(d));
    std::vector<QuadForm> hgens;
    for (const auto& item : split(subgroup, ',')) hgens.push_back(parse_form(item));
    const Subgroup h = hgens.empty() ? full_subgroup(cl) : subgroup_of_forms(cl, hgens);
    const std::set<std::int64_t> avoid(avoid_list.begin(), avoid_list.end());
    if (bound == 0) bound = h.order() == 1 ? 2 : smallest_generating_bound(cl, h, avoid);
    if (bound < 2) throw InputError("--bound must be at least 2");

    const auto forms = generating_multiset(cl, bound, h, avoid);
    const CayleyGraph cay = class_group_cayley(cl, h, forms);
    BuiltGraph out;
    json hjson = json::array();
    for (const auto& f : hgens) hjson.push_back(to_string(reduce(f)));
    out.descriptor = {{"kind", "classgroup"}, {"discriminant", d}, {"subgroup", hjson}, {"bound", bound},
                      {"avoid", json(std::vector<std::int64_t>(avoid.begin(), avoid.end()))}};
    out.graph = cay.graph();
    out.c = forms.empty() ? 0.0 : spectrum_by_characters(cay).second_abs;
    out.forms = true;
    return out;
}

BuiltGraph from_group_text(const std::string& text) {
    std::istringstream in(text);
    const GroupSpec spec = parse_group_spec(in);
    const Subgroup h = spec.subgroup_generators.empty() ? subgroup_generated(spec.group, spec.group.elements())
                                                        : subgroup_generated(spec.group, spec.subgroup_generators);
    const auto gens = symmetric_generators(spec.group, spec.cayley_generators, spec.cayley_labels);
    const CayleyGraph cay = build_cayley(h, gens);
    BuiltGraph out;
    out.descriptor = {{"kind", "group"}, {"text", text}};
    out.graph = cay.graph();
    out.c = gens.empty() ? 0.0 : spectrum_by_characters(cay).second_abs;
    return out;
}

BuiltGraph from_isogeny(std::int64_t p, std::int64_t t, const std::vector<std::int64_t>& primes) {
    const IsogenyGraph ig = build_isogeny_graph(p, t, primes);
    BuiltGraph out;
    out.descriptor = {{"kind", "isogeny"}, {"p", p}, {"t", t}, {"primes", ig.primes}};
    out.graph = orient(ig).graph;
    out.c = out.graph.degree() == 0 ? 0.0 : second_abs(out.graph.numeric_spectrum());
    return out;
}

}  // namespace

std::vector<std::int64_t> parse_int_list(const std::string& text) {
    std::vector<std::int64_t> out;
    for (const auto& item : split(text, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stoll(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::logic_error&) {
            throw InputError("'" + item + "' is not an integer");
        }
    }
    return out;
}

BuiltGraph build_graph(const GraphArgs& args) {
    const int sources = (args.discriminant ? 1 : 0) + (args.group_file.empty() ? 0 : 1) + (args.ec_p ? 1 : 0);
    if (sources != 1) throw InputError("give exactly one of -D, --group-file or --ec-p/--ec-t");
    if (args.discriminant) return from_discriminant(*args.discriminant, args.subgroup, args.bound, args.avoid);
    if (!args.group_file.empty()) {
        if (!args.subgroup.empty()) throw InputError("--subgroup applies to -D graphs; group files carry their own");
        std::ifstream in(args.group_file);
        if (!in) throw InputError("cannot read group file " + args.group_file);
        std::stringstream buffer;
        buffer << in.rdbuf();
        return from_group_text(buffer.str());
    }
    if (!args.ec_t) throw InputError("--ec-p needs --ec-t");
    return from_isogeny(*args.ec_p, *args.ec_t, args.primes);
}

BuiltGraph build_graph(const json& d) {
    try {
        const std::string kind = d.at("kind").get<std::string>();
        if (kind == "classgroup") {
            std::string sub;
            for (const auto& f : d.at("subgroup")) sub += (sub.empty() ? "" : ",") + f.get<std::string>();
            return from_discriminant(d.at("discriminant").get<std::int64_t>(), sub, d.at("bound").get<std::int64_t>(),
                                     d.at("avoid").get<std::vector<std::int64_t>>());
        }
        if (kind == "group") return from_group_text(d.at("text").get<std::string>());
        if (kind == "isogeny")
            return from_isogeny(d.at("p").get<std::int64_t>(), d.at("t").get<std::int64_t>(),
                                d.at("primes").get<std::vector<std::int64_t>>());
        throw InputError("unknown graph kind '" + kind + "'");
    } catch (const json::exception& e) {
        throw InputError(std::string("malformed graph descriptor: ") + e.what());
    }
}

std::size_t vertex_by_name(const BuiltGraph& g, const std::string& name) {
    std::string key = name;
    if (g.forms && name.find(':') != std::string::npos) key = to_string(reduce(parse_form(name)));
    auto v = g.graph.vertex_named(key);
    if (!v) throw InputError("no vertex named '" + name + "'");
    return *v;
}

}  // namespace isowalk::cli
