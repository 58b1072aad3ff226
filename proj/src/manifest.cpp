#include "arnca/manifest.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace arnca {

uint64_t fnv1a64(const std::string& bytes) {
    uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string file_digest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path + " for hashing");
    std::string bytes((std::istreambuf_iterator<char>(in)),
                      std::istreambuf_iterator<char>());
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(bytes)));
    return buf;
}

std::string timestamp_now() {
    auto now = std::chrono::system_clock::now();
    std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string manifest_to_json(const RunManifest& manifest) {
    nlohmann::json j;
    j["command"] = manifest.command;
    j["flags"] = manifest.flags;
    j["input_digests"] = manifest.input_digests;
    j["code_version"] = manifest.code_version;
    j["seed"] = manifest.seed;
    j["started_at"] = manifest.started_at;
    j["finished_at"] = manifest.finished_at;
    return j.dump(2);
}

void write_manifest(const RunManifest& manifest, const std::string& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << manifest_to_json(manifest) << "\n";
}

} // namespace arnca
