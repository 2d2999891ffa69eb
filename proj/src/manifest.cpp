#include "ecpnn/manifest.hpp"

#include <chrono>
#include <cstdint>
#include <fstream>
#include <sstream>

#include "ecpnn/errors.hpp"

namespace ecpnn {

std::string file_digest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("cannot hash missing file: " + path);
    }
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    char buf[4096];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
        for (std::streamsize i = 0; i < in.gcount(); ++i) {
            hash ^= static_cast<unsigned char>(buf[i]);
            hash *= 0x100000001b3ULL;
        }
    }
    std::ostringstream oss;
    oss << "fnv1a64:" << std::hex << hash;
    return oss.str();
}

namespace {

std::string now_iso8601() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%FT%TZ", std::gmtime(&t));
    return buf;
}

}  // namespace

RunManifest::RunManifest(std::string command_line, std::string out_path)
    : out_path_(std::move(out_path)) {
    doc_["command_line"] = std::move(command_line);
    doc_["tool_version"] = kToolVersion;
    doc_["inputs"] = nlohmann::json::object();
    doc_["outputs"] = nlohmann::json::array();
}

void RunManifest::set_config(nlohmann::json config) {
    doc_["config"] = std::move(config);
}

void RunManifest::add_input(const std::string& path) {
    doc_["inputs"][path] = file_digest(path);
}

void RunManifest::add_output(const std::string& path) {
    doc_["outputs"].push_back(path);
}

void RunManifest::write_started() {
    doc_["started_at"] = now_iso8601();
    write("running");
}

void RunManifest::write_finished(bool ok) {
    doc_["finished_at"] = now_iso8601();
    write(ok ? "ok" : "failed");
}

void RunManifest::write(const std::string& status) const {
    nlohmann::json doc = doc_;
    doc["status"] = status;
    std::ofstream out(out_path_);
    if (!out) {
        throw ConfigError("cannot write manifest: " + out_path_);
    }
    out << doc.dump(2) << "\n";
}

}  // namespace ecpnn
