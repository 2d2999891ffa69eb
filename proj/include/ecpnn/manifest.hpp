#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace ecpnn {

inline constexpr const char* kToolVersion = "0.1.0";

/// FNV-1a 64-bit content hash, hex encoded.
std::string file_digest(const std::string& path);

/// Reproducibility record written next to every command's outputs:
/// the command line as issued, the config snapshot, a digest per input
/// file, and output paths. Written once before the run starts and
/// finalized after it ends.
class RunManifest {
  public:
    RunManifest(std::string command_line, std::string out_path);

    void set_config(nlohmann::json config);
    void add_input(const std::string& path);
    void add_output(const std::string& path);

    void write_started();
    void write_finished(bool ok);

  private:
    void write(const std::string& status) const;

    std::string out_path_;
    nlohmann::json doc_;
};

}  // namespace ecpnn
