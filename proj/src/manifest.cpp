#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

#include <json.hpp>
#include <openssl/evp.h>

#include "gmmrec/errors.hpp"
#include "gmmrec/io.hpp"

namespace gmmrec {
namespace {

std::string sha1_hex(const std::string& bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha1(), nullptr) != 1)
        throw IoError("sha1 digest failed");
    std::string hex;
    char buf[3];
    for (unsigned int i = 0; i < len; ++i) {
        std::snprintf(buf, sizeof buf, "%02x", digest[i]);
        hex += buf;
    }
    return hex;
}

}  // namespace

std::string git_blob_sha1(const std::string& bytes) {
    std::string framed = "blob " + std::to_string(bytes.size());
    framed.push_back('\0');
    framed += bytes;
    return sha1_hex(framed);
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

RunManifest make_manifest(const std::string& spec, std::uint64_t seed, const std::string& started,
                          const std::filesystem::path& dir, const std::vector<std::string>& outputs) {
    RunManifest m;
    m.tool_version = kToolVersion;
    m.spec = spec;
    m.master_seed = seed;
    m.started = started;
    m.finished = utc_timestamp();
    std::string listing;
    for (const auto& name : outputs) {
        std::ifstream in(dir / name, std::ios::binary);
        if (!in) throw IoError("manifest: cannot read output " + (dir / name).string());
        std::stringstream buffer;
        buffer << in.rdbuf();
        ManifestOutput out{name, git_blob_sha1(buffer.str())};
        listing += out.name + " " + out.blob_sha1 + "\n";
        m.outputs.push_back(std::move(out));
    }
    m.content_hash = sha1_hex(listing);
    return m;
}

std::string manifest_json(const RunManifest& manifest) {
    nlohmann::json outputs = nlohmann::json::array();
    for (const auto& o : manifest.outputs) outputs.push_back({{"name", o.name}, {"blob_sha1", o.blob_sha1}});
    const nlohmann::json j{{"tool_version", manifest.tool_version},
                           {"spec", manifest.spec},
                           {"master_seed", manifest.master_seed},
                           {"started", manifest.started},
                           {"finished", manifest.finished},
                           {"outputs", outputs},
                           {"content_hash", manifest.content_hash}};
    return j.dump(2) + "\n";
}

void write_manifest(const RunManifest& manifest, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << manifest_json(manifest);
    if (!out) throw IoError("write to " + path.string() + " failed");
}

}  // namespace gmmrec
