#include "manifest.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <openssl/evp.h>

#include "isowalk/errors.hpp"

namespace isowalk::cli {

std::string sha256_hex(const std::string& data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
        throw ConsistencyError("SHA-256 digest failed");
    std::ostringstream out;
    for (unsigned int i = 0; i < len; ++i) out << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
    return out.str();
}

OutputSink::OutputSink(std::string subcommand, nlohmann::json parameters, std::uint64_t seed, std::string out_dir)
    : subcommand_(std::move(subcommand)), parameters_(std::move(parameters)), seed_(seed), out_dir_(std::move(out_dir)) {}

void OutputSink::add(const std::string& filename, const std::string& content) { files_[filename] = content; }

void OutputSink::finish(const std::string& stdout_file) const {
    if (out_dir_.empty()) {
        auto it = files_.find(stdout_file);
        if (it == files_.end()) throw InputError("this subcommand has no " + stdout_file + " output");
        std::cout << it->second;
        return;
    }
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir_, ec);
    if (ec) throw InputError("cannot create output directory " + out_dir_ + ": " + ec.message());
    nlohmann::json outputs = nlohmann::json::object();
    for (const auto& [name, content] : files_) {
        std::ofstream out(fs::path(out_dir_) / name, std::ios::binary);
        if (!out) throw InputError("cannot write " + name);
        out << content;
        outputs[name] = {{"sha256", sha256_hex(content)}, {"bytes", content.size()}};
    }
    const nlohmann::json manifest{{"subcommand", subcommand_},
                                  {"parameters", parameters_},
                                  {"seed", seed_},
                                  {"version", ISOWALK_VERSION},
                                  {"outputs", outputs}};
    std::ofstream out(fs::path(out_dir_) / "manifest.json", std::ios::binary);
    out << manifest.dump(2) << "\n";
}

}  // namespace isowalk::cli
