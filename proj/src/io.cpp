#include "blochlab/io.hpp"

#include <cstdlib>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace blochlab {

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + p.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::filesystem::path& p, const std::string& content) {
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    out << content;
}

std::vector<std::uint8_t> read_binary(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + p.string());
    std::vector<std::uint8_t> bytes{std::istreambuf_iterator<char>(in),
                                    std::istreambuf_iterator<char>()};
    return bytes;
}

void write_binary(const std::filesystem::path& p, const std::vector<std::uint8_t>& bytes) {
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
}

std::string manifest_json(const Manifest& m) {
    nlohmann::json j;
    j["format"] = "blochlab-manifest-1";
    j["version"] = kVersion;
    j["command"] = m.command;
    j["parameters"] = m.parameters;
    j["seed"] = m.seed;
    j["wall_seconds"] = m.wall_seconds;
    j["outputs"] = m.outputs;
    return j.dump(2);
}

void write_manifest(const std::filesystem::path& dir, const Manifest& m) {
    write_file(dir / "manifest.json", manifest_json(m));
}

std::filesystem::path default_output_root() {
    if (const char* env = std::getenv("BLOCHLAB_DATA_DIR"); env && *env) return env;
    return "blochlab_out";
}

}  // namespace blochlab
