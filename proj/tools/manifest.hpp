#pragma once

#include <cstdint>
#include <map>
#include <string>

#include <json.hpp>

namespace isowalk::cli {

std::string sha256_hex(const std::string& data);

/// Collects primary outputs. With an output directory each goes to its own
/// file and manifest.json records its digest; otherwise the selected one is
/// printed.
class OutputSink {
public:
    OutputSink(std::string subcommand, nlohmann::json parameters, std::uint64_t seed, std::string out_dir);

    void add(const std::string& filename, const std::string& content);
    /// Writes files and the manifest, or prints the chosen output to stdout.
    void finish(const std::string& stdout_file) const;

private:
    std::string subcommand_;
    nlohmann::json parameters_;
    std::uint64_t seed_;
    std::string out_dir_;
    std::map<std::string, std::string> files_;
};

}  // namespace isowalk::cli
