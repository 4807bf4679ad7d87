#ifndef SSAMC_PPM_HPP
#define SSAMC_PPM_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "ssamc/image.hpp"

namespace ssamc {

/// Binary 8-bit PPM (P6, maxval 255). Channel k maps to k/255; writing uses
/// round-to-nearest, so an 8-bit round trip is byte-exact.
Frame load_ppm(const std::filesystem::path& path);
/// An optional comment (e.g. the generating seed) is embedded in the header.
void save_ppm(const Frame& f, const std::filesystem::path& path,
              const std::string& comment = {});

/// All *.ppm files in a directory, sorted by filename.
std::vector<std::filesystem::path> list_frame_files(
    const std::filesystem::path& dir);

}  // namespace ssamc

#endif
