#pragma once

// Serialization of results. JSON objects are emitted with sorted keys and a
// fixed layout so identical inputs give byte-identical text.

#include <optional>
#include <string>
#include <vector>

#include "isowalk/cayley.hpp"
#include "isowalk/ecgraph.hpp"
#include "isowalk/pathfind.hpp"
#include "isowalk/quadform.hpp"
#include "isowalk/walks.hpp"

namespace isowalk {

std::string class_group_json(const ClassGroup& cl);

/// Adjacency list keyed by vertex name, one entry per edge slot.
std::string graph_json(const RegularGraph& g);
/// Each undirected edge once; self-inverse slots give one loop per vertex.
std::string graph_dot(const RegularGraph& g, const std::string& name = "G");

/// Header B,lambda_triv,c,delta2,li_over_index,error_envelope.
std::string scan_csv(const BoundScan& scan);
std::string scan_json(const BoundScan& scan, double delta);

std::string spectrum_json(const CayleyGraph& g, const Spectrum& s, const Expansion& e);

std::string mixing_report_json(const RegularGraph& g, const MixingReport& r);

/// A certificate names its graph through graph_descriptor, a JSON object that
/// the verifier uses to rebuild the graph.
struct CertificateDocument {
    std::string graph_descriptor;
    std::string start;
    std::string end;
    std::vector<Step> steps;
};

std::string certificate_json(const RegularGraph& g, const PathCertificate& c, const SearchStats& stats,
                             const std::string& graph_descriptor);
/// Throws InputError on malformed text.
CertificateDocument parse_certificate(const std::string& text);
/// Resolves names against g; nullopt if a vertex name is unknown.
std::optional<PathCertificate> resolve_certificate(const RegularGraph& g, const CertificateDocument& doc);

std::string isogeny_graph_json(const IsogenyGraph& ig, const CayleyComparison& cmp);
std::string dlp_transcript_json(const IsogenyGraph& ig, const std::vector<std::size_t>& path,
                                const DlpTranscript& t, std::int64_t planted);

}  // namespace isowalk
