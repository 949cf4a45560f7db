#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace blochlab {

std::string read_file(const std::filesystem::path& p);
void write_file(const std::filesystem::path& p, const std::string& content);
std::vector<std::uint8_t> read_binary(const std::filesystem::path& p);
void write_binary(const std::filesystem::path& p, const std::vector<std::uint8_t>& bytes);

// Run manifest: config echo, version, seed, wall time.  The wall-time field is
// the one intentionally non-reproducible output; determinism checks compare
// everything except manifests.
struct Manifest {
    std::string command;
    std::map<std::string, std::string> parameters;
    std::uint64_t seed = 0;
    double wall_seconds = 0.0;
    std::vector<std::string> outputs;
};

std::string manifest_json(const Manifest& m);
void write_manifest(const std::filesystem::path& dir, const Manifest& m);

std::filesystem::path default_output_root();  // $BLOCHLAB_DATA_DIR or ./blochlab_out

constexpr const char* kVersion = "blochlab 1.0.0";

}  // namespace blochlab
