#include "imcf/io.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <system_error>

#include "imcf/errors.hpp"

namespace imcf::io {

std::string format_double(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

std::string profile_csv(const ProfileSurface& s) {
  std::string out = "# imcf-profile v1, n=" + std::to_string(s.n) +
                    ", topology=" +
                    (s.closed() ? std::string("closed") : "anchored") + "\n";
  std::size_t m = s.sample_count();
  for (std::size_t i = 0; i < m; ++i) {
    out += format_double(s.pts[i].x);
    out += ',';
    out += format_double(s.pts[i].y);
    out += '\n';
  }
  return out;
}

ProfileSurface parse_profile_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line.rfind("# imcf-profile v1", 0) != 0)
    throw IoError("profile CSV: missing `# imcf-profile v1` header");
  ProfileSurface s;
  auto npos = line.find("n=");
  auto tpos = line.find("topology=");
  if (npos == std::string::npos || tpos == std::string::npos)
    throw IoError("profile CSV: header lacks n= or topology=");
  s.n = std::atoi(line.c_str() + npos + 2);
  std::string topo = line.substr(tpos + 9);
  while (!topo.empty() && (topo.back() == '\r' || topo.back() == ' '))
    topo.pop_back();
  if (topo == "closed")
    s.topology = Topology::ClosedLoop;
  else if (topo == "anchored")
    s.topology = Topology::AxisAnchored;
  else
    throw IoError("profile CSV: unknown topology `" + topo + "`");

  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto comma = line.find(',');
    if (comma == std::string::npos)
      throw IoError("profile CSV: malformed row `" + line + "`");
    char* end = nullptr;
    const char* xs = line.c_str();
    const char* ys = line.c_str() + comma + 1;
    double x = std::strtod(xs, &end);
    if (end == xs) throw IoError("profile CSV: malformed row `" + line + "`");
    double y = std::strtod(ys, &end);
    if (end == ys) throw IoError("profile CSV: malformed row `" + line + "`");
    s.pts.push_back({x, y});
  }
  if (s.pts.size() < 3) throw IoError("profile CSV: fewer than 3 samples");
  if (s.closed()) s.pts.push_back(s.pts.front());
  std::size_t segs = s.segment_count();
  s.h = segs ? total_length(s) / double(segs) : 0.0;
  return s;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out << text;
  if (!out) throw IoError("short write: " + path.string());
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_profile_csv(const std::filesystem::path& path,
                       const ProfileSurface& s) {
  write_text(path, profile_csv(s));
}

ProfileSurface read_profile_csv(const std::filesystem::path& path) {
  return parse_profile_csv(read_text(path));
}

}  // namespace imcf::io
