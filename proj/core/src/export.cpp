#include "isowalk/export.hpp"

#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "isowalk/errors.hpp"

namespace isowalk {

namespace {

using nlohmann::json;

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json coords_json(const GroupElement& g) { return json(g.coords); }

json step_json(const Step& s) { return json{{"label", s.label}, {"inverted", s.inverted}}; }

json interval_json(const Interval& i) { return json::array({i.lo, i.hi}); }

json point_json(const Point& p) {
    if (p.infinity) return json(nullptr);
    return json::array({p.x, p.y});
}

}  // namespace

std::string class_group_json(const ClassGroup& cl) {
    json classes = json::array();
    for (std::size_t i = 0; i < cl.forms().size(); ++i)
        classes.push_back({{"form", to_string(cl.forms()[i])}, {"coords", coords_json(cl.elements()[i])}});
    const auto& d = cl.discriminant();
    json j{{"discriminant", d.value()},
           {"fundamental_discriminant", d.fundamental()},
           {"conductor", d.conductor()},
           {"narrow", cl.narrow()},
           {"order", cl.order()},
           {"invariants", cl.group().invariants()},
           {"classes", classes}};
    return dump(j);
}

std::string graph_json(const RegularGraph& g) {
    json slots = json::array();
    for (std::size_t s = 0; s < g.degree(); ++s) {
        json item = step_json(g.label(s));
        item["inverse_slot"] = g.inverse_slot(s);
        slots.push_back(item);
    }
    json adjacency = json::array();
    for (std::size_t v = 0; v < g.vertex_count(); ++v) {
        json row = json::array();
        for (std::size_t s = 0; s < g.degree(); ++s) row.push_back(g.name(g.neighbor(v, s)));
        adjacency.push_back({{"vertex", g.name(v)}, {"neighbors", row}});
    }
    return dump(json{{"vertex_count", g.vertex_count()}, {"degree", g.degree()}, {"slots", slots},
                     {"adjacency", adjacency}});
}

std::string graph_dot(const RegularGraph& g, const std::string& name) {
    std::ostringstream out;
    out << "graph \"" << name << "\" {\n";
    for (std::size_t v = 0; v < g.vertex_count(); ++v) out << "  \"" << g.name(v) << "\";\n";
    for (std::size_t v = 0; v < g.vertex_count(); ++v) {
        for (std::size_t s = 0; s < g.degree(); ++s) {
            const std::size_t w = g.neighbor(v, s);
            const std::size_t t = g.inverse_slot(s);
            if (std::make_pair(v, s) > std::make_pair(w, t)) continue;
            out << "  \"" << g.name(v) << "\" -- \"" << g.name(w) << "\" [label=\"" << to_string(g.label(s))
                << "\"];\n";
        }
    }
    out << "}\n";
    return out.str();
}

std::string scan_csv(const BoundScan& scan) {
    std::ostringstream out;
    out << "B,lambda_triv,c,delta2,li_over_index,error_envelope\n";
    out << std::setprecision(17);
    for (const auto& r : scan.rows)
        out << r.bound << ',' << r.lambda_triv << ',' << r.c << ',' << r.delta2 << ',' << r.li_over_index << ','
            << r.error_envelope << '\n';
    return out.str();
}

std::string scan_json(const BoundScan& scan, double delta) {
    json rows = json::array();
    for (const auto& r : scan.rows)
        rows.push_back({{"B", r.bound},
                        {"lambda_triv", r.lambda_triv},
                        {"c", r.c},
                        {"delta2", r.delta2},
                        {"li_over_index", r.li_over_index},
                        {"error_envelope", r.error_envelope}});
    json j{{"delta", delta}, {"rows", rows}};
    j["expander_bound"] = scan.expander_bound ? json(*scan.expander_bound) : json(nullptr);
    return dump(j);
}

std::string spectrum_json(const CayleyGraph& g, const Spectrum& s, const Expansion& e) {
    json entries = json::array();
    for (const auto& entry : s.entries)
        entries.push_back({{"character", entry.character.coords}, {"eigenvalue", entry.eigenvalue}});
    return dump(json{{"vertex_count", g.subgroup().order()},
                     {"degree", g.degree()},
                     {"structure", g.subgroup().structure().invariants()},
                     {"eigenvalues", entries},
                     {"sorted", s.sorted()},
                     {"trivial_multiplicity", s.trivial_multiplicity},
                     {"c", e.c},
                     {"delta_two_sided", e.two_sided},
                     {"delta_one_sided", e.one_sided}});
}

std::string mixing_report_json(const RegularGraph& g, const MixingReport& r) {
    json targets = json::array();
    for (std::size_t v : r.config.targets) targets.push_back(g.name(v));
    json j{{"config",
            {{"length", r.config.length}, {"trials", r.config.trials}, {"seed", r.config.seed}, {"targets", targets}}},
           {"start", g.name(r.start)},
           {"vertex_count", r.vertex_count},
           {"degree", g.degree()},
           {"c", r.c},
           {"mixing_length", r.mixing_length},
           {"unscaled_mixing_length", r.unscaled_length},
           {"hits", r.hits},
           {"frequency", r.frequency},
           {"interval", interval_json(r.interval)},
           {"band", interval_json(r.band)},
           {"verdict", r.pass ? "PASS" : "FAIL"}};
    j["exact_probability"] = r.exact_probability ? json(*r.exact_probability) : json(nullptr);
    j["total_variation"] = r.total_variation ? json(*r.total_variation) : json(nullptr);
    j["tv_noise"] = r.tv_noise ? json(*r.tv_noise) : json(nullptr);
    j["tv_verdict"] = r.tv_pass ? json(*r.tv_pass ? "PASS" : "FAIL") : json(nullptr);
    return dump(j);
}

std::string certificate_json(const RegularGraph& g, const PathCertificate& c, const SearchStats& stats,
                             const std::string& graph_descriptor) {
    json steps = json::array();
    for (const auto& s : c.steps) steps.push_back(step_json(s));
    json descriptor;
    try {
        descriptor = json::parse(graph_descriptor);
    } catch (const json::exception& e) {
        throw InputError(std::string("graph descriptor is not JSON: ") + e.what());
    }
    return dump(json{{"graph", descriptor},
                     {"start", g.name(c.start)},
                     {"end", g.name(c.end)},
                     {"length", c.length()},
                     {"steps", steps},
                     {"stats",
                      {{"step1_trials", stats.step1_trials},
                       {"step2_trials", stats.step2_trials},
                       {"distinct_neighbors", stats.distinct_neighbors},
                       {"h", stats.h},
                       {"walk_length", stats.walk_length}}}});
}

CertificateDocument parse_certificate(const std::string& text) {
    try {
        const json j = json::parse(text);
        CertificateDocument doc;
        doc.graph_descriptor = j.at("graph").dump();
        doc.start = j.at("start").get<std::string>();
        doc.end = j.at("end").get<std::string>();
        for (const auto& s : j.at("steps"))
            doc.steps.push_back(Step{s.at("label").get<std::string>(), s.at("inverted").get<bool>()});
        if (j.contains("length") && j.at("length").get<std::size_t>() != doc.steps.size())
            throw InputError("certificate length disagrees with its step list");
        return doc;
    } catch (const json::exception& e) {
        throw InputError(std::string("malformed certificate: ") + e.what());
    }
}

std::optional<PathCertificate> resolve_certificate(const RegularGraph& g, const CertificateDocument& doc) {
    const auto start = g.vertex_named(doc.start);
    const auto end = g.vertex_named(doc.end);
    if (!start || !end) return std::nullopt;
    return PathCertificate{*start, *end, doc.steps};
}

std::string isogeny_graph_json(const IsogenyGraph& ig, const CayleyComparison& cmp) {
    json vertices = json::array();
    for (const auto& v : ig.vertices) vertices.push_back({{"j", v.j}, {"curve", to_string(v.curve)}});
    json edges = json::array();
    for (const auto& e : ig.edges)
        edges.push_back({{"ell", e.ell()},
                         {"source_j", ig.vertices[e.source].j},
                         {"target_j", ig.vertices[e.target].j},
                         {"kernel", e.isogeny.kernel},
                         {"codomain", to_string(e.isogeny.codomain)},
                         {"iso_u", e.iso_u}});
    json comparison{{"vertex_count_ok", cmp.vertex_count_ok},
                    {"spectrum_ok", cmp.spectrum_ok},
                    {"degree_ok", cmp.degree_ok},
                    {"spectrum_gap", cmp.spectrum_gap},
                    {"failures", cmp.failures},
                    {"verdict", cmp.pass ? "PASS" : "FAIL"}};
    comparison["isomorphic"] = cmp.isomorphic ? json(*cmp.isomorphic) : json(nullptr);
    return dump(json{{"p", ig.p},
                     {"t", ig.t},
                     {"discriminant", ig.discriminant},
                     {"primes", ig.primes},
                     {"vertices", vertices},
                     {"edges", edges},
                     {"comparison", comparison}});
}

std::string dlp_transcript_json(const IsogenyGraph& ig, const std::vector<std::size_t>& path,
                                const DlpTranscript& t, std::int64_t planted) {
    json steps = json::array();
    for (std::size_t i = 0; i < t.steps.size(); ++i) {
        const auto& s = t.steps[i];
        json item{{"j", ig.vertices[s.vertex].j},
                  {"curve", to_string(ig.vertices[s.vertex].curve)},
                  {"P", point_json(s.p)},
                  {"Q", point_json(s.q)}};
        item["ell"] = i == 0 ? json(nullptr) : json(ig.edges[path[i - 1]].ell());
        steps.push_back(item);
    }
    return dump(json{{"p", ig.p},
                     {"t", ig.t},
                     {"order", t.order},
                     {"planted_r", planted},
                     {"recovered_r", t.r},
                     {"success", t.r == planted % t.order},
                     {"steps", steps}});
}

}  // namespace isowalk
