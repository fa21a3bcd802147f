#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace cbpmde {

// FNV-1a over a byte string; stable fingerprint for output files.
std::uint64_t fnv1a64(const std::string& bytes);

// Per-invocation record of what a CLI command emitted: config echo, seed,
// artifact version, one checksum per output file.
class RunManifest {
public:
    RunManifest(std::string command, std::string config_echo_json, std::uint64_t seed);

    // Registers an emitted file; reads it back to checksum the actual bytes.
    // Throws std::runtime_error when the file cannot be read.
    void add_output(const std::string& path);

    std::string to_json() const;
    void write(const std::string& path) const;

private:
    struct Output {
        std::string path;
        std::size_t bytes;
        std::uint64_t checksum;
    };
    std::string command_;
    std::string config_echo_;
    std::uint64_t seed_;
    std::vector<Output> outputs_;
};

extern const char* const kArtifactVersion;

}  // namespace cbpmde
