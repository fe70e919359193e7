#include <gtest/gtest.h>

#include <json.hpp>
#include <regex>
#include <sstream>

#include "isowalk/errors.hpp"
#include "isowalk/export.hpp"

using namespace isowalk;
using nlohmann::json;

namespace {

CayleyGraph cyclic_cayley(std::int64_t n, std::vector<std::int64_t> steps) {
    FiniteAbelianGroup g({n});
    std::vector<GroupElement> els;
    std::vector<std::string> labels;
    for (auto s : steps) {
        els.push_back(g.element({s}));
        labels.push_back("s" + std::to_string(s));
    }
    return build_cayley(Subgroup(g, {g.element({1})}), symmetric_generators(g, els, labels));
}

}  // namespace

TEST(Json, ClassGroup) {
    const auto doc = json::parse(class_group_json(class_group(Discriminant(-23))));
    EXPECT_EQ(doc["invariants"], json::array({3}));
    EXPECT_EQ(doc["discriminant"], -23);
    const std::string text = class_group_json(class_group(Discriminant(-23)));
    EXPECT_EQ(text.back(), '\n');
    EXPECT_EQ(text, class_group_json(class_group(Discriminant(-23))));
}

TEST(Json, GraphAndDot) {
    const auto g = cyclic_cayley(10, {1, 5});
    const auto doc = json::parse(graph_json(g.graph()));
    EXPECT_FALSE(doc.empty());
    const std::string dot = graph_dot(g.graph());
    // Five undirected edges for the 5-involution plus ten for the 10-cycle.
    std::size_t edges = 0;
    for (std::size_t pos = 0; (pos = dot.find(" -- ", pos)) != std::string::npos; ++pos) ++edges;
    EXPECT_EQ(edges, 15u);
    EXPECT_EQ(dot.rfind("graph \"G\" {", 0), 0u);
}

TEST(Json, ScanCsv) {
    const ClassGroup cl = class_group(Discriminant(-47));
    const auto scan = scan_bounds(cl, full_subgroup(cl), 0.3, 30);
    const std::string csv = scan_csv(scan);
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "B,lambda_triv,c,delta2,li_over_index,error_envelope");
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        ++rows;
        EXPECT_EQ(std::count(line.begin(), line.end(), ','), 5);
    }
    EXPECT_EQ(rows, scan.rows.size());
    const auto doc = json::parse(scan_json(scan, 0.3));
    EXPECT_TRUE(doc.is_object());
}

TEST(Json, MixingReport) {
    const auto g = cyclic_cayley(3, {1});
    WalkConfig cfg;
    cfg.length = 3;
    cfg.trials = 500;
    cfg.seed = 4;
    cfg.targets = {0};
    const auto r = mixing_experiment(g.graph(), 1.0, 0, cfg);
    const auto doc = json::parse(mixing_report_json(g.graph(), r));
    EXPECT_EQ(doc.dump().find("NaN"), std::string::npos);
    EXPECT_TRUE(doc.is_object());
}

TEST(Certificate, RoundTrip) {
    const auto g = cyclic_cayley(25, {1, 3});
    const auto r = find_path(g.graph(), 2, 19, 8);
    const std::string descriptor = R"({"kind":"test"})";
    const std::string text = certificate_json(g.graph(), r.certificate, r.stats, descriptor);
    const auto doc = parse_certificate(text);
    EXPECT_EQ(json::parse(doc.graph_descriptor), json::parse(descriptor));
    EXPECT_EQ(doc.start, g.graph().name(2));
    EXPECT_EQ(doc.end, g.graph().name(19));
    EXPECT_EQ(doc.steps, r.certificate.steps);
    const auto resolved = resolve_certificate(g.graph(), doc);
    ASSERT_TRUE(resolved);
    EXPECT_TRUE(verify_certificate(g.graph(), *resolved));

    auto bad = doc;
    bad.start = "nowhere";
    EXPECT_FALSE(resolve_certificate(g.graph(), bad));
    EXPECT_THROW(parse_certificate("{"), InputError);
    EXPECT_THROW(parse_certificate("{\"steps\": 3}"), InputError);
}

TEST(Json, IsogenyAndDlp) {
    const auto ig = build_isogeny_graph(31, 3, {7});
    const auto doc = json::parse(isogeny_graph_json(ig, compare_to_cayley(ig)));
    EXPECT_TRUE(doc.is_object());
    const Curve& e0 = ig.vertices[0].curve;
    Rng rng(2);
    Point p = e0.random_point(rng);
    while (p.infinity) p = e0.random_point(rng);
    std::size_t first = 0;
    while (ig.edges[first].source != 0) ++first;
    const auto t = transfer_dlp(ig, 0, {first}, p, e0.multiply(p, 11), 29);
    const auto d = json::parse(dlp_transcript_json(ig, {first}, t, 11));
    EXPECT_TRUE(d.is_object());
}
