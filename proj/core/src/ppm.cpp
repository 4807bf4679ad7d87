#include "ssamc/ppm.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace ssamc {

namespace {

// Reads one whitespace-delimited token, skipping '#' comment lines.
std::string next_token(std::istream& in) {
  std::string tok;
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {
      }
      continue;
    }
    if (std::isspace(c)) {
      if (!tok.empty()) break;
      continue;
    }
    tok.push_back(char(c));
  }
  return tok;
}

}  // namespace

Frame load_ppm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());

  if (next_token(in) != "P6")
    throw std::runtime_error(path.string() + ": not a P6 PPM");
  const int w = std::stoi(next_token(in));
  const int h = std::stoi(next_token(in));
  const int maxval = std::stoi(next_token(in));
  if (w <= 0 || h <= 0)
    throw std::runtime_error(path.string() + ": bad dimensions");
  if (maxval != 255)
    throw std::runtime_error(path.string() + ": only 8-bit PPM supported");

  std::vector<unsigned char> raw(size_t(w) * h * 3);
  in.read(reinterpret_cast<char*>(raw.data()), std::streamsize(raw.size()));
  if (size_t(in.gcount()) != raw.size())
    throw std::runtime_error(path.string() + ": truncated pixel data");

  Frame f;
  f.width = w;
  f.height = h;
  f.data.resize(raw.size());
  for (size_t i = 0; i < raw.size(); ++i) f.data[i] = raw[i] / 255.0;
  return f;
}

void save_ppm(const Frame& f, const std::filesystem::path& path,
              const std::string& comment) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "P6\n";
  if (!comment.empty()) out << "# " << comment << "\n";
  out << f.width << " " << f.height << "\n255\n";
  std::vector<unsigned char> raw(f.data.size());
  for (size_t i = 0; i < f.data.size(); ++i) {
    const double v = std::clamp(f.data[i], 0.0, 1.0);
    raw[i] = static_cast<unsigned char>(std::lround(v * 255.0));
  }
  out.write(reinterpret_cast<const char*>(raw.data()),
            std::streamsize(raw.size()));
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::vector<std::filesystem::path> list_frame_files(
    const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> files;
  if (!std::filesystem::is_directory(dir))
    throw std::runtime_error("not a directory: " + dir.string());
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".ppm")
      files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

}  // namespace ssamc
