#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"

#include "imcf/geometry.hpp"

// Serialization: profile CSV files, deterministic JSON, small file helpers.
namespace imcf::io {

// Order-preserving JSON so reports serialize byte-identically across runs.
using Json = nlohmann::ordered_json;

// Shortest decimal form that round-trips to the same double (std::to_chars).
std::string format_double(double x);

// Profile CSV: `# imcf-profile v1, n=<k>, topology=<closed|anchored>` header
// followed by one `x,f` row per stored sample. Round-trips bit-exactly.
std::string profile_csv(const ProfileSurface& s);
ProfileSurface parse_profile_csv(const std::string& text);

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

void write_profile_csv(const std::filesystem::path& path,
                       const ProfileSurface& s);
ProfileSurface read_profile_csv(const std::filesystem::path& path);

}  // namespace imcf::io
