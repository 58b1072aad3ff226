#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace arnca {

inline constexpr const char* kCodeVersion = "arnca 0.1.0";

/// FNV-1a 64-bit content hash, reported as 16 hex digits.
uint64_t fnv1a64(const std::string& bytes);
std::string file_digest(const std::string& path);

/// Record of one CLI run: command, flags, input digests, seed, timestamps.
/// Re-running the recorded command on digest-matched inputs reproduces the
/// outputs bit-exactly.
struct RunManifest {
    std::string command;
    std::map<std::string, std::string> flags;
    std::map<std::string, std::string> input_digests; // path -> fnv1a64 hex
    std::string code_version = kCodeVersion;
    uint64_t seed = 0;
    std::string started_at;
    std::string finished_at;
};

std::string timestamp_now();
std::string manifest_to_json(const RunManifest& manifest);
void write_manifest(const RunManifest& manifest, const std::string& path);

} // namespace arnca
