#include "cbpmde/manifest.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace cbpmde {

const char* const kArtifactVersion = "1.0.0";

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

RunManifest::RunManifest(std::string command, std::string config_echo_json,
                         std::uint64_t seed)
    : command_(std::move(command)), config_echo_(std::move(config_echo_json)), seed_(seed) {}

void RunManifest::add_output(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read emitted file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string bytes = buf.str();
    outputs_.push_back({path, bytes.size(), fnv1a64(bytes)});
}

std::string RunManifest::to_json() const {
    nlohmann::ordered_json j;
    j["command"] = command_;
    j["version"] = kArtifactVersion;
    j["seed"] = seed_;
    j["config"] = nlohmann::ordered_json::parse(config_echo_);
    j["outputs"] = nlohmann::ordered_json::array();
    for (const Output& o : outputs_) {
        char hex[17];
        std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(o.checksum));
        j["outputs"].push_back({{"path", o.path}, {"bytes", o.bytes}, {"fnv1a64", hex}});
    }
    return j.dump(2) + "\n";
}

void RunManifest::write(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write manifest " + path);
    out << to_json();
}

}  // namespace cbpmde
