// isowalk: command-line front end. Every subcommand writes its primary output
// to stdout, or with --out DIR to files plus a manifest.json.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "graph_source.hpp"
#include "isowalk/cayley.hpp"
#include "isowalk/ecgraph.hpp"
#include "isowalk/errors.hpp"
#include "isowalk/export.hpp"
#include "isowalk/pathfind.hpp"
#include "isowalk/quadform.hpp"
#include "isowalk/walks.hpp"
#include "manifest.hpp"

using nlohmann::json;
using namespace isowalk;
using namespace isowalk::cli;

namespace {

struct Common {
    std::uint64_t seed = 0;
    std::string out;
    std::string format = "json";
};

void add_common(CLI::App* app, Common& c, const std::vector<std::string>& formats) {
    app->add_option("--seed", c.seed, "Master seed for all randomness");
    app->add_option("--out", c.out, "Write outputs and manifest.json to this directory");
    app->add_option("--format", c.format, "Output printed to stdout")->check(CLI::IsMember(formats));
}

void add_graph_args(CLI::App* app, GraphArgs& g, std::string& primes, std::string& avoid) {
    app->add_option("-D,--discriminant", g.discriminant, "Discriminant of the class group");
    app->add_option("--group-file", g.group_file, "Group description file");
    app->add_option("--ec-p", g.ec_p, "Isogeny graph: field characteristic");
    app->add_option("--ec-t", g.ec_t, "Isogeny graph: Frobenius trace");
    app->add_option("--primes", primes, "Isogeny graph: comma-separated odd primes");
    app->add_option("--subgroup", g.subgroup, "Subgroup generators as comma-separated forms a:b:c");
    app->add_option("--bound", g.bound, "Prime bound B for S_B (default: smallest generating bound)");
    app->add_option("--avoid", avoid, "Comma-separated primes left out of S_B");
}

json graph_params(const GraphArgs& g) {
    json j;
    if (g.discriminant) j["discriminant"] = *g.discriminant;
    if (!g.group_file.empty()) j["group_file"] = g.group_file;
    if (g.ec_p) j["ec_p"] = *g.ec_p;
    if (g.ec_t) j["ec_t"] = *g.ec_t;
    if (!g.primes.empty()) j["primes"] = g.primes;
    if (!g.subgroup.empty()) j["subgroup"] = g.subgroup;
    j["bound"] = g.bound;
    j["avoid"] = g.avoid;
    return j;
}

std::vector<std::string> split_names(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream in(text);
    for (std::string item; std::getline(in, item, ';');)
        if (!item.empty()) out.push_back(item);
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

const char* stdout_name(const std::string& format, const char* json_name, const char* csv_name, const char* dot_name) {
    if (format == "csv") return csv_name;
    if (format == "dot") return dot_name;
    return json_name;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Class-group Cayley graphs, random walks and isogeny graphs"};
    app.set_version_flag("--version", ISOWALK_VERSION);
    app.require_subcommand(1);

    Common common;
    GraphArgs graph;
    std::string primes_text, avoid_text;

    // classgroup
    std::int64_t cg_disc = 0;
    auto* classgroup = app.add_subcommand("classgroup", "Class group structure of a discriminant");
    classgroup->add_option("-D,--discriminant", cg_disc, "Discriminant")->required();
    add_common(classgroup, common, {"json"});

    // spectrum
    double delta = 0.5;
    auto* spectrum = app.add_subcommand("spectrum", "Character spectrum, expansion and the bound scan");
    add_graph_args(spectrum, graph, primes_text, avoid_text);
    spectrum->add_option("--delta", delta, "Target two-sided expansion");
    add_common(spectrum, common, {"json", "csv", "dot"});

    // mix
    std::string start_name, targets_text;
    std::int64_t random_targets = 0, trials = 100000;
    std::optional<std::int64_t> length;
    auto* mix = app.add_subcommand("mix", "Random-walk hitting experiment");
    add_graph_args(mix, graph, primes_text, avoid_text);
    mix->add_option("--start", start_name, "Start vertex (default: the first vertex)");
    mix->add_option("--targets", targets_text, "Target vertices W, separated by ';'");
    mix->add_option("--random-targets", random_targets, "Draw |W| target vertices from the seed instead");
    mix->add_option("--trials", trials, "Number of walks");
    mix->add_option("--length", length, "Walk length (default: the mixing length)");
    add_common(mix, common, {"json"});

    // path
    std::string from_name, to_name;
    auto* path = app.add_subcommand("path", "Meet-in-the-middle path between two vertices");
    add_graph_args(path, graph, primes_text, avoid_text);
    path->add_option("--from", from_name, "Start vertex")->required();
    path->add_option("--to", to_name, "End vertex")->required();
    add_common(path, common, {"json"});

    // verify
    std::string certificate_file;
    auto* verify = app.add_subcommand("verify", "Replay a path certificate; exit 0 iff it is valid");
    verify->add_option("certificate", certificate_file, "Certificate JSON file")->required();

    // ecgraph
    std::optional<std::int64_t> ec_p, ec_t;
    std::string curve_text;
    auto* ecgraph = app.add_subcommand("ecgraph", "Isogeny graph of an ordinary isogeny class vs its Cayley graph");
    ecgraph->add_option("-p", ec_p, "Field characteristic");
    ecgraph->add_option("-t", ec_t, "Frobenius trace");
    ecgraph->add_option("--curve", curve_text, "A member of the class as p,a,b (instead of -p/-t)");
    ecgraph->add_option("--primes", primes_text, "Comma-separated odd primes L")->required();
    add_common(ecgraph, common, {"json", "dot"});

    // dlpdemo
    std::string dlp_from, dlp_to;
    auto* dlpdemo = app.add_subcommand("dlpdemo", "Transfer a planted discrete logarithm along an isogeny path");
    dlpdemo->add_option("-p", ec_p, "Field characteristic")->required();
    dlpdemo->add_option("-t", ec_t, "Frobenius trace")->required();
    dlpdemo->add_option("--primes", primes_text, "Comma-separated odd primes L")->required();
    dlpdemo->add_option("--from", dlp_from, "Start j-invariant (default: drawn from the seed)");
    dlpdemo->add_option("--to", dlp_to, "End j-invariant (default: drawn from the seed)");
    add_common(dlpdemo, common, {"json"});

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, std::cerr, std::cerr);
        return code == 0 ? 0 : static_cast<int>(ErrorCategory::input);
    }

    try {
        graph.primes = parse_int_list(primes_text);
        graph.avoid = parse_int_list(avoid_text);

        if (classgroup->parsed()) {
            OutputSink sink("classgroup", json{{"discriminant", cg_disc}}, common.seed, common.out);
            sink.add("classgroup.json", class_group_json(class_group(Discriminant(cg_disc))));
            sink.finish("classgroup.json");
            return 0;
        }

        if (spectrum->parsed()) {
            json params = graph_params(graph);
            params["delta"] = delta;
            OutputSink sink("spectrum", params, common.seed, common.out);
            if (graph.ec_p) throw InputError("spectrum works on -D or --group-file graphs");
            BuiltGraph built = build_graph(graph);
            if (graph.discriminant) {
                const ClassGroup cl = class_group(Discriminant(*graph.discriminant));
                std::vector<QuadForm> hgens;
                for (const auto& f : built.descriptor.at("subgroup")) hgens.push_back(parse_form(f.get<std::string>()));
                const Subgroup h = hgens.empty() ? full_subgroup(cl) : subgroup_of_forms(cl, hgens);
                const std::int64_t bound = built.descriptor.at("bound").get<std::int64_t>();
                const std::set<std::int64_t> avoid(graph.avoid.begin(), graph.avoid.end());
                const BoundScan scan = scan_bounds(cl, h, delta, bound, avoid);
                sink.add("scan.csv", scan_csv(scan));
                sink.add("scan.json", scan_json(scan, delta));
                const CayleyGraph cay = class_group_cayley(cl, h, generating_multiset(cl, bound, h, avoid));
                const Spectrum s = spectrum_by_characters(cay);
                if (cay.degree() > 0) sink.add("spectrum.json", spectrum_json(cay, s, expansion(s)));
                sink.add("graph.dot", graph_dot(cay.graph(), "Cay"));
            } else {
                std::istringstream in(built.descriptor.at("text").get<std::string>());
                const GroupSpec spec = parse_group_spec(in);
                const Subgroup h = spec.subgroup_generators.empty()
                                       ? subgroup_generated(spec.group, spec.group.elements())
                                       : subgroup_generated(spec.group, spec.subgroup_generators);
                const CayleyGraph cay =
                    build_cayley(h, symmetric_generators(spec.group, spec.cayley_generators, spec.cayley_labels));
                const Spectrum s = spectrum_by_characters(cay);
                sink.add("spectrum.json", spectrum_json(cay, s, expansion(s)));
                sink.add("graph.dot", graph_dot(cay.graph(), "Cay"));
            }
            sink.finish(stdout_name(common.format, "spectrum.json", "scan.csv", "graph.dot"));
            return 0;
        }

        if (mix->parsed()) {
            json params = graph_params(graph);
            params["start"] = start_name;
            params["targets"] = targets_text;
            params["random_targets"] = random_targets;
            params["trials"] = trials;
            params["length"] = length ? json(*length) : json(nullptr);
            OutputSink sink("mix", params, common.seed, common.out);
            const BuiltGraph built = build_graph(graph);
            const auto& g = built.graph;
            const std::size_t start = start_name.empty() ? 0 : vertex_by_name(built, start_name);
            WalkConfig cfg;
            cfg.trials = trials;
            cfg.seed = common.seed;
            if (random_targets > 0) {
                if (!targets_text.empty()) throw InputError("give --targets or --random-targets, not both");
                if (random_targets > static_cast<std::int64_t>(g.vertex_count()))
                    throw InputError("--random-targets exceeds the vertex count");
                std::vector<std::size_t> all(g.vertex_count());
                for (std::size_t v = 0; v < all.size(); ++v) all[v] = v;
                Rng rng(Rng::derive(common.seed, 3));
                for (std::size_t i = all.size(); i > 1; --i) std::swap(all[i - 1], all[rng.below(i)]);
                cfg.targets.assign(all.begin(), all.begin() + random_targets);
                std::sort(cfg.targets.begin(), cfg.targets.end());
            } else {
                for (const auto& name : split_names(targets_text)) cfg.targets.push_back(vertex_by_name(built, name));
            }
            if (cfg.targets.empty()) throw InputError("the target set W is empty; use --targets or --random-targets");
            cfg.length = length ? *length
                                : mixing_length(g.vertex_count(), g.degree(), built.c, cfg.targets.size());
            sink.add("mix.json", mixing_report_json(g, mixing_experiment(g, built.c, start, cfg)));
            sink.finish("mix.json");
            return 0;
        }

        if (path->parsed()) {
            json params = graph_params(graph);
            params["from"] = from_name;
            params["to"] = to_name;
            OutputSink sink("path", params, common.seed, common.out);
            const BuiltGraph built = build_graph(graph);
            const PathResult r =
                find_path(built.graph, vertex_by_name(built, from_name), vertex_by_name(built, to_name), common.seed);
            sink.add("certificate.json", certificate_json(built.graph, r.certificate, r.stats, built.descriptor.dump()));
            sink.finish("certificate.json");
            return 0;
        }

        if (verify->parsed()) {
            const CertificateDocument doc = parse_certificate(read_file(certificate_file));
            const BuiltGraph built = build_graph(json::parse(doc.graph_descriptor));
            const auto cert = resolve_certificate(built.graph, doc);
            if (!cert) {
                std::cerr << "invalid: unknown start or end vertex\n";
                return 1;
            }
            if (!verify_certificate(built.graph, *cert)) {
                std::cerr << "invalid: replaying " << cert->length() << " steps from " << doc.start
                          << " does not reach " << doc.end << "\n";
                return 1;
            }
            std::cerr << "valid: " << cert->length() << " steps from " << doc.start << " to " << doc.end << "\n";
            return 0;
        }

        if (ecgraph->parsed()) {
            if (!curve_text.empty()) {
                if (ec_p || ec_t) throw InputError("give --curve or -p/-t, not both");
                const Curve c = parse_curve(curve_text);
                ec_p = c.p();
                ec_t = point_count(c).trace;
            }
            if (!ec_p || !ec_t) throw InputError("ecgraph needs -p and -t, or --curve");
            json params{{"p", *ec_p}, {"t", *ec_t}, {"primes", graph.primes}};
            if (!curve_text.empty()) params["curve"] = curve_text;
            OutputSink sink("ecgraph", params, common.seed, common.out);
            const IsogenyGraph ig = build_isogeny_graph(*ec_p, *ec_t, graph.primes, common.seed);
            const CayleyComparison cmp = compare_to_cayley(ig);
            sink.add("isogeny.json", isogeny_graph_json(ig, cmp));
            sink.add("isogeny.dot", graph_dot(orient(ig).graph, "isogeny"));
            sink.finish(common.format == "dot" ? "isogeny.dot" : "isogeny.json");
            for (const auto& f : cmp.failures) std::cerr << "FAIL " << f << "\n";
            return cmp.pass ? 0 : 1;
        }

        if (dlpdemo->parsed()) {
            json params{{"p", *ec_p}, {"t", *ec_t}, {"primes", graph.primes}, {"from", dlp_from}, {"to", dlp_to}};
            OutputSink sink("dlpdemo", params, common.seed, common.out);
            const IsogenyGraph ig = build_isogeny_graph(*ec_p, *ec_t, graph.primes, common.seed);
            const OrientedIsogenyGraph og = orient(ig);
            const auto& g = og.graph;
            Rng rng(Rng::derive(common.seed, 7));
            auto pick = [&](const std::string& name) -> std::size_t {
                if (name.empty()) return rng.below(g.vertex_count());
                auto v = g.vertex_named(name);
                if (!v) throw InputError("no curve with j = " + name + " in the class");
                return *v;
            };
            const std::size_t a = pick(dlp_from);
            const std::size_t b = pick(dlp_to);

            PathCertificate cert;
            std::string search = "meet-in-the-middle";
            if (static_cast<std::int64_t>(g.vertex_count()) >= kMinSearchOrder) {
                cert = find_path(g, a, b, common.seed).certificate;
            } else {
                auto found = bfs_path(g, a, b);
                if (!found) throw PreconditionError("the two curves are not connected by the chosen primes");
                cert = *found;
                search = "breadth-first";
            }
            const auto edges = certificate_edges(og, cert);

            const Curve& curve = ig.vertices[a].curve;
            const std::int64_t group_order = point_count(curve).order;
            std::int64_t cofactor = 1, rest = group_order;
            for (std::int64_t ell : ig.primes)
                while (rest % ell == 0) {
                    rest /= ell;
                    cofactor *= ell;
                }
            Point p;
            std::int64_t order = 1;
            for (int attempt = 0; attempt < 1000 && order == 1; ++attempt) {
                p = curve.multiply(curve.random_point(rng), cofactor);
                order = point_order(curve, p, rest);
            }
            if (order == 1) throw PreconditionError("no point of order coprime to the isogeny degrees");
            const std::int64_t r = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(order)));
            const Point q = curve.multiply(p, r);
            const DlpTranscript transcript = transfer_dlp(ig, a, edges, p, q, order);

            json out = json::parse(dlp_transcript_json(ig, edges, transcript, r));
            out["search"] = search;
            json steps = json::array();
            for (const auto& s : cert.steps) steps.push_back({{"label", s.label}, {"inverted", s.inverted}});
            out["path"] = steps;
            sink.add("dlp.json", out.dump(2) + "\n");
            sink.finish("dlp.json");
            return transcript.r == r ? 0 : 1;
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return static_cast<int>(e.category());
    } catch (const json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return static_cast<int>(ErrorCategory::input);
    }
    return 0;
}
